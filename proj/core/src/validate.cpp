#include "mimoamp/validate.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <complex>
#include <limits>
#include <sstream>
#include <vector>

#include "mimoamp/math.hpp"
#include "mimoamp/se.hpp"

namespace mimoamp {

namespace {

struct GlRule {
    std::vector<double> x, w;
};

// 61-point Gauss-Legendre rule on [-1,1] built from the Newton-refined
// Chebyshev initial guesses; used only by the independent 2-D oracle below.
GlRule gl_rule(int n) {
    GlRule r;
    r.x.resize(n);
    r.w.resize(n);
    for (int i = 0; i < n; ++i) {
        double x = std::cos(M_PI * (i + 0.75) / (n + 0.5));
        double pp = 0.0;
        for (int it = 0; it < 100; ++it) {
            double p0 = 1.0, p1 = x;
            for (int k = 2; k <= n; ++k) {
                const double p2 = ((2.0 * k - 1.0) * x * p1 - (k - 1.0) * p0) / k;
                p0 = p1;
                p1 = p2;
            }
            pp = n * (x * p1 - p0) / (x * x - 1.0);
            const double dx = p1 / pp;
            x -= dx;
            if (std::abs(dx) < 1e-15) break;
        }
        r.x[i] = x;
        r.w[i] = 2.0 / ((1.0 - x * x) * pp * pp);
    }
    return r;
}

std::vector<double> segment_edges(double lo, double hi, const std::vector<double>& splits) {
    std::vector<double> edges{lo, hi};
    for (double s : splits)
        if (s > lo && s < hi) edges.push_back(s);
    std::sort(edges.begin(), edges.end());
    return edges;
}

// Independent route for Lemma-4 checks: full 2-D integration over the complex
// noise, treating the denoiser's complex eval as a black box.
double mse_2d_oracle(double sigma2, double tau, const Denoiser& den) {
    const Constellation& c = den.constellation();
    const double v = 0.5 * sigma2;  // per-dimension noise variance
    const double sd = std::sqrt(v);
    const double lim = 12.0 * sd;
    static const GlRule rule = gl_rule(61);
    const std::vector<double> splits = den.split_points();

    double total = 0.0;
    for (std::size_t si = 0; si < c.points().size(); ++si) {
        const std::complex<double> s = c.points()[si];
        std::vector<double> sr_splits, si_splits;
        for (double k : splits) {
            sr_splits.push_back(k - s.real());
            si_splits.push_back(k - s.imag());
        }
        const auto er = segment_edges(-lim, lim, sr_splits);
        const auto ei = segment_edges(-lim, lim, si_splits);

        double acc = 0.0;
        for (std::size_t a = 0; a + 1 < er.size(); ++a)
            for (std::size_t b = 0; b + 1 < ei.size(); ++b) {
                const double cr = 0.5 * (er[a] + er[a + 1]), hr = 0.5 * (er[a + 1] - er[a]);
                const double ci = 0.5 * (ei[b] + ei[b + 1]), hi = 0.5 * (ei[b + 1] - ei[b]);
                double cell = 0.0;
                for (int i = 0; i < 61; ++i)
                    for (int j = 0; j < 61; ++j) {
                        const double zr = cr + hr * rule.x[i];
                        const double zi = ci + hi * rule.x[j];
                        const std::complex<double> f =
                            den.eval(s + std::complex<double>(zr, zi), tau).mean;
                        const double e = std::norm(f - s);
                        const double gauss =
                            std::exp(-0.5 * (zr * zr + zi * zi) / v) / (2.0 * M_PI * v);
                        cell += rule.w[i] * rule.w[j] * e * gauss;
                    }
                acc += hr * hi * cell;
            }
        total += c.prior()[si] * acc;
    }
    return total;
}

std::string fmt(double v) {
    std::ostringstream os;
    os.precision(3);
    os << std::scientific << v;
    return os.str();
}

CheckResult check_finite_difference() {
    CheckResult r{"denoiser-derivative-fd", true, ""};
    const Constellation qpsk = Constellation::make(ConstellationKind::Qpsk, 2);
    const Constellation qam16 = Constellation::make(ConstellationKind::Qam, 4);
    const std::array<std::pair<DenoiserFamily, const Constellation*>, 6> cases{{
        {DenoiserFamily::Exact, &qpsk},
        {DenoiserFamily::Gaussian, &qpsk},
        {DenoiserFamily::Hypercube, &qpsk},
        {DenoiserFamily::Clip, &qpsk},
        {DenoiserFamily::GrayExact, &qam16},
        {DenoiserFamily::GrayMaxLog, &qam16},
    }};
    const double h = 1e-4;
    const double skip = 0.1;  // FD is meaningless across kinks / boundary layers
    double worst = 0.0;
    for (const auto& [family, c] : cases) {
        const Denoiser den(family, *c);
        const auto splits = den.split_points();
        auto near_split = [&](double x) {
            for (double s : splits)
                if (std::abs(x - s) < skip) return true;
            return false;
        };
        for (double tau : {0.05, 0.5, 5.0}) {
            for (int ix = -6; ix <= 6; ++ix)
                for (int iy = -6; iy <= 6; ++iy) {
                    const double x = ix, y = iy;
                    if (near_split(x) || near_split(y)) continue;
                    const std::complex<double> z{x, y};
                    const double analytic = den.eval(z, tau).deriv;
                    const double dre = (den.eval(z + std::complex<double>(h, 0), tau).mean.real() -
                                        den.eval(z - std::complex<double>(h, 0), tau).mean.real()) /
                                       (2 * h);
                    const double dim = (den.eval(z + std::complex<double>(0, h), tau).mean.imag() -
                                        den.eval(z - std::complex<double>(0, h), tau).mean.imag()) /
                                       (2 * h);
                    worst = std::max(worst, std::abs(analytic - 0.5 * (dre + dim)));
                }
        }
    }
    r.passed = worst <= 1e-5;
    r.detail = "max |analytic - fd| = " + fmt(worst) + " (tol 1e-5)";
    return r;
}

CheckResult check_hypercube_clip_limit() {
    CheckResult r{"hypercube-clip-limit", true, ""};
    const Constellation qpsk = Constellation::make(ConstellationKind::Qpsk, 2);
    const Denoiser hyper(DenoiserFamily::Hypercube, qpsk);
    const Denoiser clip(DenoiserFamily::Clip, qpsk);
    double sup = 0.0;
    for (double x = -6.0; x <= 6.0 + 1e-12; x += 0.1)
        for (double y = -6.0; y <= 6.0 + 1e-12; y += 0.1) {
            const std::complex<double> z{x, y};
            sup = std::max(sup, std::abs(hyper.eval(z, 1e-6).mean - clip.eval(z, 1e-6).mean));
        }
    r.passed = sup <= 1e-3;
    r.detail = "sup |hypercube(tau=1e-6) - clip| = " + fmt(sup) + " (tol 1e-3)";
    return r;
}

CheckResult check_separability() {
    CheckResult r{"complex-real-mse-reduction", true, ""};
    const Constellation qpsk = Constellation::make(ConstellationKind::Qpsk, 2);
    const Constellation qam16 = Constellation::make(ConstellationKind::Qam, 4);
    double worst = 0.0;
    const std::array<std::pair<double, double>, 2> pts{{{0.8, 0.5}, {0.3, 1.2}}};
    for (const Constellation* c : {&qpsk, &qam16}) {
        for (DenoiserFamily f :
             {DenoiserFamily::Exact, DenoiserFamily::Gaussian, DenoiserFamily::Hypercube,
              DenoiserFamily::Clip, DenoiserFamily::GrayExact, DenoiserFamily::GrayMaxLog}) {
            const Denoiser den(f, *c);
            for (const auto& [s2, tau] : pts)
                worst = std::max(worst,
                                 std::abs(mse_2d_oracle(s2, tau, den) - mismatched_mse(s2, tau, den)));
        }
    }
    r.passed = worst <= 1e-9;
    r.detail = "max |2-D oracle - per-dimension route| = " + fmt(worst) + " (tol 1e-9)";
    return r;
}

CheckResult check_sign_change() {
    CheckResult r{"gaussian-mse-tau-sign-change", true, ""};
    const Constellation qpsk = Constellation::make(ConstellationKind::Qpsk, 2);
    const Denoiser den(DenoiserFamily::Gaussian, qpsk);
    std::ostringstream detail;
    for (double s2 : {0.2, 1.0, 3.0}) {
        const double lo = 1e-4 * s2, hi = 1e2 * (s2 + qpsk.energy());
        const int n = 1000;
        int changes = 0;
        double change_at = 0.0;
        double prev_val = mismatched_mse(s2, lo, den);
        double prev_tau = lo;
        int prev_sign = 0;
        for (int i = 1; i < n; ++i) {
            const double tau = lo * std::pow(hi / lo, static_cast<double>(i) / (n - 1));
            const double val = mismatched_mse(s2, tau, den);
            const int sign = val > prev_val ? 1 : (val < prev_val ? -1 : 0);
            if (prev_sign < 0 && sign > 0) {
                ++changes;
                change_at = 0.5 * (prev_tau + tau);
            } else if (prev_sign > 0 && sign < 0) {
                changes += 100;  // any decrease after the minimum fails the scan
            }
            if (sign != 0) prev_sign = sign;
            prev_val = val;
            prev_tau = tau;
        }
        const bool located = std::abs(change_at - s2) < 0.05 * s2;
        if (changes != 1 || !located) r.passed = false;
        detail << " s2=" << s2 << ": minimum near tau=" << change_at << ";";
    }
    r.detail = "one descent-to-ascent transition per scan at tau=sigma2:" + detail.str();
    return r;
}

CheckResult check_tau_optimality() {
    CheckResult r{"per-iteration-tau-optimality", true, ""};
    const Constellation qpsk = Constellation::make(ConstellationKind::Qpsk, 2);
    const Constellation qam16 = Constellation::make(ConstellationKind::Qam, 4);
    const std::array<Denoiser, 3> dens{{{DenoiserFamily::Exact, qpsk},
                                        {DenoiserFamily::Hypercube, qpsk},
                                        {DenoiserFamily::GrayExact, qam16}}};
    double worst_excess = 0.0;
    for (const Denoiser& den : dens) {
        for (double s2 : {0.1, 0.5, 2.0}) {
            const double tau_star = optimal_tau(s2, den);
            const double best = mismatched_mse(s2, tau_star, den);
            const double lo = std::max(1e-4 * s2, 1e-12), hi = 1e2 * (s2 + den.constellation().energy());
            for (int i = 0; i < 1000; ++i) {
                const double tau = lo * std::pow(hi / lo, i / 999.0);
                const double val = mismatched_mse(s2, tau, den);
                worst_excess = std::max(worst_excess, best - val);
            }
        }
    }
    r.passed = worst_excess <= 1e-9;
    r.detail = "max Psi(tau*) excess over a 1000-point tau grid = " + fmt(worst_excess) +
               " (tol 1e-9)";
    return r;
}

CheckResult check_g_monotonicity() {
    CheckResult r{"fixed-point-map-monotonicity", true, ""};
    const Constellation qpsk = Constellation::make(ConstellationKind::Qpsk, 2);
    const Constellation qam16 = Constellation::make(ConstellationKind::Qam, 4);
    struct Case {
        Denoiser den;
        double beta;
    };
    const std::array<Case, 3> cases{{{Denoiser(DenoiserFamily::Clip, qpsk), 1.9},
                                     {Denoiser(DenoiserFamily::Clip, qam16), 1.3},
                                     {Denoiser(DenoiserFamily::Gaussian, qpsk), 0.95}}};
    for (const Case& cs : cases) {
        double prev_g = -std::numeric_limits<double>::infinity();
        for (int i = 0; i < 60; ++i) {
            const double s2 = 1e-6 * std::pow(1e8, i / 59.0);
            const double g = s2 - cs.beta * mismatched_mse(s2, optimal_tau(s2, cs.den), cs.den);
            if (g <= prev_g) {
                r.passed = false;
                r.detail = "g not increasing at sigma2=" + fmt(s2);
            }
            prev_g = g;
        }
    }
    if (r.passed) r.detail = "sigma2 - beta Psi*(sigma2) strictly increasing for beta < threshold";
    return r;
}

}  // namespace

std::vector<CheckResult> run_validation_suite() {
    return {check_finite_difference(), check_hypercube_clip_limit(), check_separability(),
            check_sign_change(),       check_tau_optimality(),       check_g_monotonicity()};
}

}  // namespace mimoamp
