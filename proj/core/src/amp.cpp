#include "mimoamp/amp.hpp"

#include <cmath>

#include "mimoamp/errors.hpp"

namespace mimoamp {

DetectionResult detect(const Eigen::VectorXcd& y, const Eigen::MatrixXcd& h, double n0,
                       const DetectorConfig& cfg) {
    const Eigen::Index mr = h.rows();
    const Eigen::Index mt = h.cols();
    if (y.size() != mr) throw ConfigError("detect: y/H dimension mismatch");
    if (cfg.t_max < 1) throw ConfigError("detect: t_max must be >= 1");
    if (n0 < 0.0) throw ConfigError("detect: negative noise variance");
    const double beta = static_cast<double>(mt) / static_cast<double>(mr);
    const Constellation& c = cfg.denoiser.constellation();
    const double bound = cfg.divergence_factor * c.alpha();

    DetectionResult res;
    Eigen::VectorXcd s = Eigen::VectorXcd::Constant(mt, c.mean());
    Eigen::VectorXcd r = y - h * s;
    Eigen::VectorXcd z(mt);

    double prev_sig2 = -1.0;
    for (int t = 1; t <= cfg.t_max; ++t) {
        const double sig2 = r.squaredNorm() / static_cast<double>(mr);
        if (!std::isfinite(sig2))
            throw DetectorError("detect: diverged (non-finite residual)", t);

        double tau;
        if (cfg.tuning.kind == TuningPolicy::Kind::Optimal && cfg.tau_oracle)
            tau = cfg.tau_oracle(sig2);
        else
            tau = resolve_tau(cfg.tuning, sig2, cfg.denoiser);

        z.noalias() = s + h.adjoint() * r;
        double deriv_sum = 0.0;
        for (Eigen::Index l = 0; l < mt; ++l) {
            const Denoiser::Out out = cfg.denoiser.eval(z(l), tau);
            s(l) = out.mean;
            deriv_sum += out.deriv;
        }
        for (Eigen::Index l = 0; l < mt; ++l) {
            if (!std::isfinite(s(l).real()) || !std::isfinite(s(l).imag()) ||
                std::abs(s(l).real()) > bound || std::abs(s(l).imag()) > bound)
                throw DetectorError("detect: diverged (estimate out of range)", t);
        }
        const double onsager = beta * deriv_sum / static_cast<double>(mt);
        r = y - h * s + onsager * r;

        if (cfg.record_trajectory) {
            res.sigma2.push_back(sig2);
            res.tau.push_back(tau);
        }
        res.iterations = t;
        if (cfg.early_stop && prev_sig2 >= 0.0 && std::abs(sig2 - prev_sig2) < cfg.early_stop_tol)
            break;
        prev_sig2 = sig2;
    }

    res.soft = std::move(s);
    res.hard.resize(mt);
    res.hard_index.resize(mt);
    for (Eigen::Index l = 0; l < mt; ++l) {
        res.hard_index[l] = c.slice_index(res.soft(l));
        res.hard(l) = c.points()[res.hard_index[l]];
    }
    return res;
}

}  // namespace mimoamp
