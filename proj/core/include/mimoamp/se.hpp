#ifndef MIMOAMP_SE_HPP
#define MIMOAMP_SE_HPP

#include <optional>
#include <ostream>
#include <vector>

#include "mimoamp/denoiser.hpp"

namespace mimoamp {

/// How the denoiser variance parameter tau is chosen each iteration.
struct TuningPolicy {
    enum class Kind { Optimal, Fixed, MatchSigma, LimitZero, LimitInfinity };
    Kind kind = Kind::Optimal;
    double fixed_value = 0.0;

    static TuningPolicy optimal() { return {Kind::Optimal, 0.0}; }
    static TuningPolicy fixed(double tau) { return {Kind::Fixed, tau}; }
    static TuningPolicy match_sigma() { return {Kind::MatchSigma, 0.0}; }
    static TuningPolicy limit_zero() { return {Kind::LimitZero, 0.0}; }
    static TuningPolicy limit_infinity() { return {Kind::LimitInfinity, 0.0}; }
};

/// Mean-square error E|F(S0 + sigma Z, tau) - S0|^2 under the true discrete
/// prior. Complex (separable) alphabets reduce to twice the real-dimension
/// MSE at half the variances; real alphabets integrate at full variance.
double mismatched_mse(double sigma2, double tau, const Denoiser& den);

/// Real-dimension MSE at per-dimension noise variance v and parameter t.
double mismatched_mse_real(double v, double t, const Denoiser& den);

/// Closed-form clip-family MSE for M-PAM in a real system (integer grid).
double clip_mse_pam(double sigma2, int m);

/// Closed-form clip-family MSE for M^2-QAM: 2 * clip_mse_pam(sigma2/2, m).
double clip_mse_qam(double sigma2, int m);

/// argmin over tau of mismatched_mse(sigma2, tau): 32-point log grid scan on
/// [1e-4 sigma2, 1e2 (sigma2 + Es)] followed by golden-section refinement
/// (relative tolerance 1e-6). Gaussian families return sigma2 directly; clip
/// ignores tau and returns 0.
double optimal_tau(double sigma2, const Denoiser& den);

/// tau for one iteration under the given policy at decoupled variance sigma2.
double resolve_tau(const TuningPolicy& policy, double sigma2, const Denoiser& den);

struct SeTrajectory {
    std::vector<double> sigma2;    // sigma_t^2 for t = 1 .. t_max+1
    std::vector<double> tau;       // tau used at iterations 1 .. t_max
    bool converged = false;
    double fixed_point = 0.0;      // last sigma2 when converged
};

struct SeConfig {
    Denoiser denoiser;
    TuningPolicy tuning = TuningPolicy::optimal();
};

/// Runs sigma_{t+1}^2 = N0 + beta * Psi(sigma_t^2, tau_t) from
/// sigma_1^2 = N0 + beta Var[S0]. Convergence: |delta| < 1e-12 (1 + sigma2).
SeTrajectory se_trajectory(double n0, double beta, const SeConfig& cfg, int t_max);

/// Iterates the recursion to its (largest) fixed point; throws AnalysisError
/// after 10^4 iterations without convergence.
double se_fixed_point(double n0, double beta, const SeConfig& cfg);

/// Minimum recovery threshold: reciprocal of the supremum of d Psi*/d sigma2
/// over a log grid [1e-8, 1e3], slopes by centered differences (h = 1e-4
/// sigma2) with tau re-resolved at every evaluation point.
double recovery_threshold(const Denoiser& den,
                          const TuningPolicy& policy = TuningPolicy::optimal());

/// Symbol error rate of slicing a decoupled AWGN observation at variance
/// sigma_star2: per-dimension 2(1-1/M) Q(d/sigma_dim) with both dimensions
/// combined for complex alphabets.
double predict_ser(double sigma_star2, const Constellation& c);

/// CSV rows "t,sigma2,tau,ser_pred" for a trajectory.
void write_trajectory_csv(const SeTrajectory& traj, const Constellation& c, std::ostream& os);

}  // namespace mimoamp

#endif
