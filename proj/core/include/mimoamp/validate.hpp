#ifndef MIMOAMP_VALIDATE_HPP
#define MIMOAMP_VALIDATE_HPP

#include <string>
#include <vector>

namespace mimoamp {

struct CheckResult {
    std::string name;
    bool passed = false;
    std::string detail;
};

/// Standalone invariant suite: finite-difference derivative checks for every
/// denoiser family, the hypercube-to-clip limit, the complex-to-real MSE
/// reduction against an independent 2-D quadrature, the single sign change of
/// the Gaussian-family MSE in tau, per-iteration tau optimality against a
/// dense grid, and monotonicity of sigma2 - beta Psi*(sigma2) below the
/// recovery threshold.
std::vector<CheckResult> run_validation_suite();

}  // namespace mimoamp

#endif
