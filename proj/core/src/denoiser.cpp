#include "mimoamp/denoiser.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "mimoamp/errors.hpp"
#include "mimoamp/math.hpp"

namespace mimoamp {

namespace {

constexpr double kSqrt2 = 1.4142135623730950488;
constexpr double kSqrt2OverPi = 0.79788456080286535588;

double logcosh_ratio(double u, double v) {
    // log(cosh u / cosh v), stable for large arguments.
    return std::abs(u) - std::abs(v) + std::log1p(std::exp(-2.0 * std::abs(u))) -
           std::log1p(std::exp(-2.0 * std::abs(v)));
}

}  // namespace

Denoiser::Denoiser(DenoiserFamily family, Constellation constellation)
    : family_(family), c_(std::move(constellation)) {
    if ((family == DenoiserFamily::GrayExact || family == DenoiserFamily::GrayMaxLog) &&
        c_.order_per_dim() != 2 && c_.order_per_dim() != 4)
        throw ConfigError("gray denoiser supports per-dimension orders 2 and 4 only");
}

Denoiser Denoiser::from_key(std::string_view key, const Constellation& c) {
    if (key == "exact") return {DenoiserFamily::Exact, c};
    if (key == "gaussian") return {DenoiserFamily::Gaussian, c};
    if (key == "hypercube") return {DenoiserFamily::Hypercube, c};
    if (key == "clip") return {DenoiserFamily::Clip, c};
    if (key == "gray") return {DenoiserFamily::GrayExact, c};
    if (key == "gray-maxlog") return {DenoiserFamily::GrayMaxLog, c};
    throw ConfigError("unknown denoiser family: " + std::string(key));
}

const char* Denoiser::family_key(DenoiserFamily f) {
    switch (f) {
        case DenoiserFamily::Exact: return "exact";
        case DenoiserFamily::Gaussian: return "gaussian";
        case DenoiserFamily::Hypercube: return "hypercube";
        case DenoiserFamily::Clip: return "clip";
        case DenoiserFamily::GrayExact: return "gray";
        case DenoiserFamily::GrayMaxLog: return "gray-maxlog";
    }
    return "?";
}

RealBranch Denoiser::exact_real(double x, double t) const {
    if (!(t > 0.0)) throw std::domain_error("exact denoiser requires tau > 0");
    const auto& lv = c_.levels();
    double m = -std::numeric_limits<double>::infinity();
    for (double a : lv) {
        const double d = x - a;
        m = std::max(m, -d * d / (2.0 * t));
    }
    double wsum = 0.0, e1 = 0.0, e2 = 0.0;
    for (double a : lv) {
        const double d = x - a;
        const double w = std::exp(-d * d / (2.0 * t) - m);
        wsum += w;
        e1 += w * a;
        e2 += w * a * a;
    }
    const double mean = e1 / wsum;
    return {mean, (e2 / wsum - mean * mean) / t};
}

RealBranch Denoiser::gaussian_real(double x, double t) const {
    if (t < 0.0) throw std::domain_error("gaussian denoiser requires tau >= 0");
    const double es = c_.level_energy();
    const double c = es / (es + t);  // t = +inf gives c = 0
    return {c * x, c};
}

RealBranch Denoiser::hypercube_real(double x, double t) const {
    if (!(t > 0.0)) throw std::domain_error("hypercube denoiser requires tau > 0");
    const double alpha = c_.alpha();
    const double sign = x < 0.0 ? -1.0 : 1.0;
    x = std::abs(x);

    const double rt = std::sqrt(t);
    const double a = (x - alpha) / rt;
    const double b = (x + alpha) / rt;

    if (b - a < 1e-6) {
        // Noise variance far above the box width: posterior ~ prior plus a
        // first-order tilt.
        const double lin = alpha * alpha / (3.0 * t);
        return {sign * x * lin, lin};
    }

    double nu_m, nu_p;
    if (a <= 8.0) {
        const double cdf_diff = 0.5 * (std::erfc(a / kSqrt2) - std::erfc(b / kSqrt2));
        if (!(cdf_diff > 0.0)) {
            // CDF difference underflow: asymptotic clipping form.
            return {sign * std::min(x, alpha), x < alpha ? 1.0 : 0.0};
        }
        nu_m = (normal_pdf(b) - normal_pdf(a)) / (rt * cdf_diff);
        nu_p = (normal_pdf(b) + normal_pdf(a)) / (rt * cdf_diff);
    } else {
        // Both CDF arguments in the far right tail; use scaled complementary
        // error functions so the ratio stays representable.
        const double e = std::exp(-2.0 * alpha * x / t);
        const double den = erfcx_pos(a / kSqrt2) - e * erfcx_pos(b / kSqrt2);
        if (!(den > 0.0)) return {sign * std::min(x, alpha), x < alpha ? 1.0 : 0.0};
        nu_m = kSqrt2OverPi * (e - 1.0) / (rt * den);
        nu_p = kSqrt2OverPi * (e + 1.0) / (rt * den);
    }
    const double mean = x + t * nu_m;
    const double deriv = 1.0 - x * nu_m - alpha * nu_p - t * nu_m * nu_m;
    return {sign * mean, deriv};
}

RealBranch Denoiser::clip_real(double x) const {
    const double alpha = c_.alpha();
    return {std::clamp(x, -alpha, alpha), std::abs(x) < alpha ? 1.0 : 0.0};
}

RealBranch Denoiser::gray_real(double x, double t, bool maxlog) const {
    if (!(t > 0.0)) throw std::domain_error("gray denoiser requires tau > 0");
    if (c_.order_per_dim() == 2) return exact_real(x, t);

    // Evaluate on the integer {+-1,+-3} grid; rescale in/out for normalized
    // alphabets.
    const double s = c_.scale();
    x /= s;
    t /= s * s;
    const double rho = 1.0 / (2.0 * t);

    double l0, l1, l0_slope, l1_slope;  // half-LLR slopes d(Lambda_b/2)/dx
    if (maxlog) {
        l0 = 4.0 * rho * (2.0 - std::abs(x));
        l1 = 2.0 * rho * (4.0 * x + std::abs(x - 2.0) - std::abs(x + 2.0));
        l0_slope = x == 0.0 ? 0.0 : (x > 0.0 ? -2.0 * rho : 2.0 * rho);
        l1_slope = std::abs(x) <= 2.0 ? 2.0 * rho : 4.0 * rho;
    } else {
        l0 = 8.0 * rho + logcosh_ratio(2.0 * rho * x, 6.0 * rho * x);
        l1 = 8.0 * rho * x + logcosh_ratio(2.0 * rho * (x - 2.0), 2.0 * rho * (x + 2.0));
        l0_slope = rho * (std::tanh(2.0 * rho * x) - 3.0 * std::tanh(6.0 * rho * x));
        l1_slope = 4.0 * rho + rho * (std::tanh(2.0 * rho * (x - 2.0)) - std::tanh(2.0 * rho * (x + 2.0)));
    }

    const double p0 = 0.5 * (1.0 + std::tanh(0.5 * l0));
    const double p1 = 0.5 * (1.0 + std::tanh(0.5 * l1));
    const double mean = (2.0 * p0 - 3.0) * (1.0 - 2.0 * p1);
    const double deriv = 4.0 * (3.0 - 2.0 * p0) * p1 * (1.0 - p1) * l1_slope +
                         4.0 * (1.0 - p0) * (1.0 - 2.0 * p1) * p0 * l0_slope;
    return {s * mean, deriv};
}

RealBranch Denoiser::eval_real(double x, double t) const {
    switch (family_) {
        case DenoiserFamily::Exact: return exact_real(x, t);
        case DenoiserFamily::Gaussian: return gaussian_real(x, t);
        case DenoiserFamily::Hypercube: return hypercube_real(x, t);
        case DenoiserFamily::Clip: return clip_real(x);
        case DenoiserFamily::GrayExact: return gray_real(x, t, false);
        case DenoiserFamily::GrayMaxLog: return gray_real(x, t, true);
    }
    return {0.0, 0.0};
}

Denoiser::Out Denoiser::eval(std::complex<double> r, double tau) const {
    if (c_.complex_valued()) {
        const RealBranch re = eval_real(r.real(), 0.5 * tau);
        const RealBranch im = eval_real(r.imag(), 0.5 * tau);
        return {{re.mean, im.mean}, 0.5 * (re.deriv + im.deriv)};
    }
    const RealBranch re = eval_real(r.real(), tau);
    return {{re.mean, 0.0}, re.deriv};
}

std::vector<double> Denoiser::split_points() const {
    const double s = c_.scale();
    switch (family_) {
        case DenoiserFamily::Gaussian: return {};
        case DenoiserFamily::Hypercube:
        case DenoiserFamily::Clip: return {-c_.alpha(), c_.alpha()};
        case DenoiserFamily::GrayExact:
        case DenoiserFamily::GrayMaxLog:
            if (c_.order_per_dim() == 2) return {0.0};
            return {-2.0 * s, 0.0, 2.0 * s};
        case DenoiserFamily::Exact: {
            // Midpoints between adjacent levels: posterior boundary layers sit
            // there when tau is small.
            const auto& lv = c_.levels();
            std::vector<double> mids;
            for (std::size_t i = 0; i + 1 < lv.size(); ++i) mids.push_back(0.5 * (lv[i] + lv[i + 1]));
            return mids;
        }
    }
    return {};
}

}  // namespace mimoamp
