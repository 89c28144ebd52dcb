#include "mimoamp/baselines.hpp"

#include <cmath>
#include <sstream>

#include "mimoamp/errors.hpp"
#include "mimoamp/math.hpp"

namespace mimoamp {

Eigen::VectorXcd lmmse_detect(const Eigen::VectorXcd& y, const Eigen::MatrixXcd& h, double n0,
                              double es) {
    if (n0 <= 0.0 || es <= 0.0) throw ConfigError("lmmse_detect: N0 and Es must be positive");
    const Eigen::Index mt = h.cols();
    Eigen::MatrixXcd gram = h.adjoint() * h;
    gram.diagonal().array() += n0 / es;
    Eigen::LDLT<Eigen::MatrixXcd> solver(gram);
    if (solver.info() != Eigen::Success)
        throw DetectorError("lmmse_detect: regularized Gram matrix not factorizable");
    (void)mt;
    return solver.solve(h.adjoint() * y);
}

Eigen::VectorXcd zf_detect(const Eigen::VectorXcd& y, const Eigen::MatrixXcd& h) {
    Eigen::ColPivHouseholderQR<Eigen::MatrixXcd> qr(h);
    if (qr.rank() < h.cols()) throw DetectorError("zf_detect: rank-deficient channel");
    return qr.solve(y);
}

Eigen::VectorXcd mf_detect(const Eigen::VectorXcd& y, const Eigen::MatrixXcd& h) {
    return h.adjoint() * y;
}

namespace {

double largest_sq_singular_value(const Eigen::MatrixXcd& h, int iters) {
    Eigen::VectorXcd v = Eigen::VectorXcd::Ones(h.cols());
    v.normalize();
    double lambda = 0.0;
    for (int i = 0; i < iters; ++i) {
        Eigen::VectorXcd w = h.adjoint() * (h * v);
        const double nw = w.norm();
        if (nw == 0.0) return 0.0;
        const double next = nw;
        v = w / nw;
        if (std::abs(next - lambda) < 1e-12 * next) {
            lambda = next;
            break;
        }
        lambda = next;
    }
    return lambda;
}

Eigen::VectorXcd clamp_box(const Eigen::VectorXcd& x, double alpha) {
    Eigen::VectorXcd out(x.size());
    for (Eigen::Index i = 0; i < x.size(); ++i)
        out(i) = {std::clamp(x(i).real(), -alpha, alpha), std::clamp(x(i).imag(), -alpha, alpha)};
    return out;
}

}  // namespace

BoxResult box_detect(const Eigen::VectorXcd& y, const Eigen::MatrixXcd& h, double alpha,
                     const BoxSolverConfig& cfg) {
    if (alpha <= 0.0) throw ConfigError("box_detect: alpha must be positive");
    const double lip = largest_sq_singular_value(h, cfg.power_iters);
    if (lip <= 0.0) throw DetectorError("box_detect: zero channel");
    const double step = 1.0 / lip;

    BoxResult res;
    Eigen::VectorXcd x = Eigen::VectorXcd::Zero(h.cols());
    for (int it = 1; it <= cfg.max_iters; ++it) {
        Eigen::VectorXcd grad = h.adjoint() * (h * x - y);
        Eigen::VectorXcd next = clamp_box(x - step * grad, alpha);
        res.pg_norm = (x - next).norm() * lip;
        x = std::move(next);
        res.iterations = it;
        if (res.pg_norm < cfg.tol) {
            res.converged = true;
            break;
        }
    }
    res.estimate = std::move(x);
    if (!res.converged) {
        std::ostringstream msg;
        msg << "box_detect: no convergence after " << cfg.max_iters
            << " iterations (pg_norm=" << res.pg_norm << "); first entries:";
        for (Eigen::Index i = 0; i < std::min<Eigen::Index>(4, res.estimate.size()); ++i)
            msg << " " << res.estimate(i);
        throw DetectorError(msg.str(), res.iterations);
    }
    return res;
}

double box_objective(double sigma, int m, double beta, double n0) {
    static const double inv_sqrt_2pi = 0.39894228040143267794;
    double val = 0.5 * sigma * (1.0 / beta - (m - 1.0) / m) + n0 / (2.0 * beta * sigma);
    for (int k = 2; k <= 2 * (m - 1); k += 2)
        val += ((sigma + k * k / sigma) * qfunc(k / sigma) -
                k * inv_sqrt_2pi * std::exp(-0.5 * k * k / (sigma * sigma))) /
               m;
    return val;
}

double box_objective_deriv(double sigma, int m, double beta, double n0) {
    static const double inv_sqrt_2pi = 0.39894228040143267794;
    double val = 0.5 * (1.0 / beta - (m - 1.0) / m) - n0 / (2.0 * beta * sigma * sigma);
    for (int k = 2; k <= 2 * (m - 1); k += 2)
        val += ((1.0 - k * k / (sigma * sigma)) * qfunc(k / sigma) +
                (k / sigma) * inv_sqrt_2pi * std::exp(-0.5 * k * k / (sigma * sigma))) /
               m;
    return val;
}

double box_equilibrium_sigma(int m, double beta, double n0) {
    const double beta_max = 1.0 / (1.0 - 1.0 / m);
    if (beta >= beta_max) throw AnalysisError("box_equilibrium_sigma: beta above recovery threshold");

    auto f = [&](double s) { return box_objective(s, m, beta, n0); };
    double sigma = golden_section_min(f, 1e-6, 1e2, 1e-10, 400);

    // Golden section hits the sqrt(eps) function-noise floor; bisection on the
    // analytic derivative pins the minimizer to machine precision.
    double lo = std::max(1e-9, sigma * 0.9), hi = std::min(1e2, sigma * 1.1);
    for (int guard = 0; box_objective_deriv(lo, m, beta, n0) > 0.0 && guard < 60; ++guard)
        lo *= 0.8;
    for (int guard = 0; box_objective_deriv(hi, m, beta, n0) < 0.0 && guard < 60; ++guard)
        hi *= 1.25;
    for (int i = 0; i < 200 && hi - lo > 1e-16 * hi; ++i) {
        const double mid = 0.5 * (lo + hi);
        (box_objective_deriv(mid, m, beta, n0) < 0.0 ? lo : hi) = mid;
    }
    return 0.5 * (lo + hi);
}

}  // namespace mimoamp
