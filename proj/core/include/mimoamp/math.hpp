#ifndef MIMOAMP_MATH_HPP
#define MIMOAMP_MATH_HPP

#include <algorithm>
#include <array>
#include <cmath>
#include <cstddef>
#include <functional>
#include <span>
#include <vector>

#include "mimoamp/errors.hpp"

namespace mimoamp {

inline double normal_pdf(double x) {
    static const double inv_sqrt_2pi = 0.39894228040143267794;
    return inv_sqrt_2pi * std::exp(-0.5 * x * x);
}

/// Standard normal CDF.
inline double normal_cdf(double x) { return 0.5 * std::erfc(-x * 0.7071067811865475244); }

/// Gaussian tail probability Q(x) = 1 - Phi(x).
inline double qfunc(double x) { return 0.5 * std::erfc(x * 0.7071067811865475244); }

/// Scaled complementary error function exp(x^2) erfc(x) for x >= 0.
/// Direct product below x=25 (no overflow there), asymptotic series above.
double erfcx_pos(double x);

namespace detail {

struct GlNode {
    double x, w;
};

// 15-point Gauss-Legendre rule on [-1, 1].
inline constexpr std::array<GlNode, 15> kGl15{{
    {-9.87992518020485377e-01, 3.07532419961181538e-02},
    {-9.37273392400705951e-01, 7.03660474881071529e-02},
    {-8.48206583410427206e-01, 1.07159220467171759e-01},
    {-7.24417731360170070e-01, 1.39570677926154324e-01},
    {-5.70972172608538830e-01, 1.66269205816994114e-01},
    {-3.94151347077563385e-01, 1.86161000015562239e-01},
    {-2.01194093997434542e-01, 1.98431485327111634e-01},
    {+0.00000000000000000e+00, 2.02578241925561370e-01},
    {+2.01194093997434542e-01, 1.98431485327111634e-01},
    {+3.94151347077563385e-01, 1.86161000015562239e-01},
    {+5.70972172608538830e-01, 1.66269205816994114e-01},
    {+7.24417731360170070e-01, 1.39570677926154324e-01},
    {+8.48206583410427206e-01, 1.07159220467171759e-01},
    {+9.37273392400705951e-01, 7.03660474881071529e-02},
    {+9.87992518020485377e-01, 3.07532419961181538e-02},
}};

template <class F>
double gl15(F&& f, double lo, double hi) {
    const double c = 0.5 * (lo + hi);
    const double h = 0.5 * (hi - lo);
    double acc = 0.0;
    for (const auto& n : kGl15) acc += n.w * f(c + h * n.x);
    return h * acc;
}

// Bisection-adaptive panel: accept when whole-panel GL15 agrees with the two
// half-panel sums, otherwise recurse. Boundary layers (sharp denoisers at tiny
// tau) force deep but localized recursion.
template <class F>
double adaptive_panel(F&& f, double lo, double hi, double whole, double rel_tol, int depth) {
    const double mid = 0.5 * (lo + hi);
    const double left = gl15(f, lo, mid);
    const double right = gl15(f, mid, hi);
    const double two = left + right;
    if (depth <= 0 || std::abs(two - whole) <= rel_tol * std::abs(two) + 1e-18) return two;
    return adaptive_panel(f, lo, mid, left, rel_tol, depth - 1) +
           adaptive_panel(f, mid, hi, right, rel_tol, depth - 1);
}

}  // namespace detail

/// E[g(X)] for X ~ N(0, var). `splits` lists abscissas (in X) where g or its
/// derivatives may jump; panels never straddle them. Tails truncated at 12 sigma.
template <class F>
double expect_gaussian(double var, F&& g, std::span<const double> splits = {}) {
    if (var < 0.0) throw AnalysisError("expect_gaussian: negative variance");
    if (var == 0.0) return g(0.0);
    const double sd = std::sqrt(var);
    const double tail = 12.0 * sd;
    std::vector<double> edges;
    edges.reserve(splits.size() + 2);
    edges.push_back(-tail);
    for (double s : splits)
        if (s > -tail && s < tail) edges.push_back(s);
    edges.push_back(tail);
    std::sort(edges.begin(), edges.end());

    const double inv_norm = 1.0 / (sd * 2.5066282746310005024);
    auto integrand = [&](double x) { return g(x) * inv_norm * std::exp(-0.5 * x * x / var); };

    double total = 0.0;
    for (std::size_t i = 0; i + 1 < edges.size(); ++i) {
        const double lo = edges[i], hi = edges[i + 1];
        if (hi <= lo) continue;
        const double whole = detail::gl15(integrand, lo, hi);
        total += detail::adaptive_panel(integrand, lo, hi, whole, 1e-12, 28);
    }
    if (!std::isfinite(total)) throw AnalysisError("expect_gaussian: non-finite integral");
    return total;
}

/// Golden-section minimizer of a unimodal f on [lo, hi]; returns the argmin.
/// Converges to an endpoint when the minimum sits on the boundary.
double golden_section_min(const std::function<double(double)>& f, double lo, double hi,
                          double rel_tol, int max_iter = 200);

}  // namespace mimoamp

#endif
