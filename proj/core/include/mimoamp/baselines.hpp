#ifndef MIMOAMP_BASELINES_HPP
#define MIMOAMP_BASELINES_HPP

#include <Eigen/Dense>

namespace mimoamp {

/// (H^H H + (N0/Es) I)^{-1} H^H y via a direct Hermitian solve.
Eigen::VectorXcd lmmse_detect(const Eigen::VectorXcd& y, const Eigen::MatrixXcd& h, double n0,
                              double es);

/// Pseudo-inverse solve; throws DetectorError on rank deficiency.
Eigen::VectorXcd zf_detect(const Eigen::VectorXcd& y, const Eigen::MatrixXcd& h);

Eigen::VectorXcd mf_detect(const Eigen::VectorXcd& y, const Eigen::MatrixXcd& h);

struct BoxSolverConfig {
    int max_iters = 20000;
    /// Stop when the projected-gradient norm ||x - P(x - grad/L)|| * L drops
    /// below this.
    double tol = 1e-8;
    int power_iters = 60;
};

struct BoxResult {
    Eigen::VectorXcd estimate;
    int iterations = 0;
    double pg_norm = 0.0;
    bool converged = false;
};

/// Projected gradient descent for min 0.5 ||y - H s||^2 subject to
/// |Re s_l| <= alpha and |Im s_l| <= alpha, step 1/L with L the largest
/// squared singular value of H (power iteration). Throws DetectorError with
/// the iterate attached to the message when max_iters is exhausted.
BoxResult box_detect(const Eigen::VectorXcd& y, const Eigen::MatrixXcd& h, double alpha,
                     const BoxSolverConfig& cfg = {});

/// Scalar objective whose minimizer is the decoupled noise std of the box
/// detector for real M-PAM at system ratio beta and noise variance n0.
double box_objective(double sigma, int m, double beta, double n0);
double box_objective_deriv(double sigma, int m, double beta, double n0);

/// Minimizer of box_objective over sigma in [1e-6, 1e2]: golden-section
/// bracketing followed by a bisection polish on the analytic derivative.
/// Requires beta < (1 - 1/M)^{-1}.
double box_equilibrium_sigma(int m, double beta, double n0);

}  // namespace mimoamp

#endif
