#include "mimoamp/math.hpp"

#include <cmath>

namespace mimoamp {

double erfcx_pos(double x) {
    if (x < 25.0) return std::exp(x * x) * std::erfc(x);
    // Asymptotic series: erfcx(x) ~ (1 - 1/(2x^2) + 3/(4x^4) - 15/(8x^6)) / (x sqrt(pi)).
    const double inv2 = 1.0 / (x * x);
    const double series = 1.0 + inv2 * (-0.5 + inv2 * (0.75 - 1.875 * inv2));
    return series / (x * 1.7724538509055160273);
}

double golden_section_min(const std::function<double(double)>& f, double lo, double hi,
                          double rel_tol, int max_iter) {
    static const double gr = 0.6180339887498948482;  // 1/phi
    double a = lo, b = hi;
    double c = b - gr * (b - a);
    double d = a + gr * (b - a);
    double fc = f(c), fd = f(d);
    for (int i = 0; i < max_iter && (b - a) > rel_tol * (std::abs(a) + std::abs(b)) + 1e-300; ++i) {
        if (fc < fd) {
            b = d;
            d = c;
            fd = fc;
            c = b - gr * (b - a);
            fc = f(c);
        } else {
            a = c;
            c = d;
            fc = fd;
            d = a + gr * (b - a);
            fd = f(d);
        }
    }
    return 0.5 * (a + b);
}

}  // namespace mimoamp
