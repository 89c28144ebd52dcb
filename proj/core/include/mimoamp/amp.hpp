#ifndef MIMOAMP_AMP_HPP
#define MIMOAMP_AMP_HPP

#include <Eigen/Dense>
#include <functional>
#include <vector>

#include "mimoamp/denoiser.hpp"
#include "mimoamp/se.hpp"

namespace mimoamp {

struct DetectorConfig {
    Denoiser denoiser;
    TuningPolicy tuning = TuningPolicy::optimal();
    int t_max = 10;
    bool record_trajectory = true;
    /// Optional stop when the residual-variance estimate settles
    /// (|delta sigma2| < early_stop_tol); off by default so runs take exactly
    /// t_max iterations.
    bool early_stop = false;
    double early_stop_tol = 1e-6;
    /// Any |Re s| or |Im s| beyond divergence_factor * alpha aborts the run.
    double divergence_factor = 1e3;
    /// Overrides the per-iteration Optimal tuning computation when set
    /// (e.g. a precomputed tau table); receives the sigma2 estimate.
    std::function<double(double)> tau_oracle;
};

struct DetectionResult {
    Eigen::VectorXcd soft;
    Eigen::VectorXcd hard;
    std::vector<int> hard_index;
    std::vector<double> sigma2;  // residual-variance estimates, t = 1 .. t_max
    std::vector<double> tau;
    int iterations = 0;
};

/// Iterative detection: estimate the decoupled noise variance from the
/// residual, tune tau, denoise s + H^H r elementwise, and update the residual
/// with the beta <F'> correction term. Runs exactly t_max iterations unless
/// early_stop is set. Throws DetectorError on divergence.
DetectionResult detect(const Eigen::VectorXcd& y, const Eigen::MatrixXcd& h, double n0,
                       const DetectorConfig& cfg);

}  // namespace mimoamp

#endif
