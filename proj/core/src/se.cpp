#include "mimoamp/se.hpp"

#include <cmath>
#include <limits>

#include "mimoamp/errors.hpp"
#include "mimoamp/math.hpp"

namespace mimoamp {

double mismatched_mse_real(double v, double t, const Denoiser& den) {
    const auto& lv = den.constellation().levels();
    const std::vector<double> splits = den.split_points();
    double acc = 0.0;
    std::vector<double> shifted(splits.size());
    for (double a : lv) {
        for (std::size_t i = 0; i < splits.size(); ++i) shifted[i] = splits[i] - a;
        acc += expect_gaussian(
            v,
            [&](double x) {
                const double e = den.eval_real(a + x, t).mean - a;
                return e * e;
            },
            shifted);
    }
    return acc / static_cast<double>(lv.size());
}

double mismatched_mse(double sigma2, double tau, const Denoiser& den) {
    if (sigma2 < 0.0) throw AnalysisError("mismatched_mse: negative sigma2");
    if (den.constellation().complex_valued())
        return 2.0 * mismatched_mse_real(0.5 * sigma2, 0.5 * tau, den);
    return mismatched_mse_real(sigma2, tau, den);
}

double clip_mse_pam(double sigma2, int m) {
    if (sigma2 <= 0.0) return 0.0;
    const double alpha = static_cast<double>(m - 1);
    const double s = std::sqrt(sigma2);
    static const double inv_sqrt_2pi = 0.39894228040143267794;
    double acc = sigma2;
    for (int k = 1; k <= m / 2; ++k) {
        const double ab = alpha - (2.0 * k - 1.0);
        const double ak = alpha + (2.0 * k - 1.0);
        acc += (2.0 / m) * ((ab * ab - sigma2) * qfunc(ab / s) + (ak * ak - sigma2) * qfunc(ak / s) -
                            s * inv_sqrt_2pi *
                                (ab * std::exp(-ab * ab / (2.0 * sigma2)) +
                                 ak * std::exp(-ak * ak / (2.0 * sigma2))));
    }
    return acc;
}

double clip_mse_qam(double sigma2, int m) { return 2.0 * clip_mse_pam(0.5 * sigma2, m); }

double optimal_tau(double sigma2, const Denoiser& den) {
    if (den.family() == DenoiserFamily::Gaussian) return sigma2;
    if (!den.tau_dependent()) return 0.0;

    const double es = den.constellation().energy();
    const double lo = std::max(1e-4 * sigma2, 1e-12 * (es + 1.0));
    const double hi = 1e2 * (sigma2 + es);
    auto mse = [&](double tau) { return mismatched_mse(sigma2, tau, den); };

    constexpr int kGrid = 32;
    const double log_lo = std::log(lo), log_hi = std::log(hi);
    int best = 0;
    double best_val = std::numeric_limits<double>::infinity();
    double taus[kGrid];
    for (int i = 0; i < kGrid; ++i) {
        taus[i] = std::exp(log_lo + (log_hi - log_lo) * i / (kGrid - 1));
        const double val = mse(taus[i]);
        if (!std::isfinite(val)) throw DetectorError("optimal_tau: non-finite MSE during scan");
        if (val < best_val) {
            best_val = val;
            best = i;
        }
    }
    const double a = taus[std::max(best - 1, 0)];
    const double b = taus[std::min(best + 1, kGrid - 1)];
    return golden_section_min(mse, a, b, 1e-6);
}

double resolve_tau(const TuningPolicy& policy, double sigma2, const Denoiser& den) {
    switch (policy.kind) {
        case TuningPolicy::Kind::Optimal: return optimal_tau(sigma2, den);
        case TuningPolicy::Kind::Fixed: return policy.fixed_value;
        case TuningPolicy::Kind::MatchSigma: return sigma2;
        case TuningPolicy::Kind::LimitZero: return 0.0;
        case TuningPolicy::Kind::LimitInfinity: return std::numeric_limits<double>::infinity();
    }
    return sigma2;
}

namespace {

bool se_converged(double prev, double next) { return std::abs(next - prev) < 1e-12 * (1.0 + prev); }

}  // namespace

SeTrajectory se_trajectory(double n0, double beta, const SeConfig& cfg, int t_max) {
    if (n0 < 0.0 || beta <= 0.0 || t_max < 1) throw ConfigError("se_trajectory: invalid arguments");
    SeTrajectory traj;
    traj.sigma2.reserve(t_max + 1);
    traj.tau.reserve(t_max);
    double s2 = n0 + beta * cfg.denoiser.constellation().var();
    traj.sigma2.push_back(s2);
    for (int t = 1; t <= t_max; ++t) {
        const double tau = resolve_tau(cfg.tuning, s2, cfg.denoiser);
        const double next = n0 + beta * mismatched_mse(s2, tau, cfg.denoiser);
        traj.tau.push_back(tau);
        traj.sigma2.push_back(next);
        if (se_converged(s2, next)) traj.converged = true;
        s2 = next;
    }
    traj.fixed_point = s2;
    return traj;
}

double se_fixed_point(double n0, double beta, const SeConfig& cfg) {
    double s2 = n0 + beta * cfg.denoiser.constellation().var();
    for (int t = 0; t < 10000; ++t) {
        const double tau = resolve_tau(cfg.tuning, s2, cfg.denoiser);
        const double next = n0 + beta * mismatched_mse(s2, tau, cfg.denoiser);
        if (se_converged(s2, next)) return next;
        s2 = next;
    }
    throw AnalysisError("se_fixed_point: no convergence within 10^4 iterations");
}

double recovery_threshold(const Denoiser& den, const TuningPolicy& policy) {
    const double lo = 1e-8, hi = 1e3;
    const int points = 133;  // ~12 per decade
    auto mse_star = [&](double s2) {
        return mismatched_mse(s2, resolve_tau(policy, s2, den), den);
    };
    double max_slope = 0.0;
    for (int i = 0; i < points; ++i) {
        const double s2 = lo * std::pow(hi / lo, static_cast<double>(i) / (points - 1));
        const double h = 1e-4 * s2;
        const double slope = (mse_star(s2 + h) - mse_star(s2 - h)) / (2.0 * h);
        max_slope = std::max(max_slope, slope);
    }
    if (max_slope <= 0.0) throw AnalysisError("recovery_threshold: non-positive MSE slope");
    return 1.0 / max_slope;
}

double predict_ser(double sigma_star2, const Constellation& c) {
    if (sigma_star2 <= 0.0) return 0.0;
    const int m = c.order_per_dim();
    const double dim_var = c.complex_valued() ? 0.5 * sigma_star2 : sigma_star2;
    const double p_dim = 2.0 * (1.0 - 1.0 / m) * qfunc(c.half_distance() / std::sqrt(dim_var));
    if (!c.complex_valued()) return p_dim;
    return 1.0 - (1.0 - p_dim) * (1.0 - p_dim);
}

void write_trajectory_csv(const SeTrajectory& traj, const Constellation& c, std::ostream& os) {
    os << "t,sigma2,tau,ser_pred\n";
    char buf[128];
    for (std::size_t i = 0; i < traj.sigma2.size(); ++i) {
        const double ser = predict_ser(traj.sigma2[i], c);
        if (i < traj.tau.size())
            std::snprintf(buf, sizeof buf, "%zu,%.17g,%.17g,%.17g\n", i + 1, traj.sigma2[i],
                          traj.tau[i], ser);
        else
            std::snprintf(buf, sizeof buf, "%zu,%.17g,,%.17g\n", i + 1, traj.sigma2[i], ser);
        os << buf;
    }
}

}  // namespace mimoamp
