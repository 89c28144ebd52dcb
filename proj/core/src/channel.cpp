#include "mimoamp/channel.hpp"

#include <cmath>

#include "mimoamp/errors.hpp"

namespace mimoamp {

Eigen::MatrixXcd draw_channel(int mr, int mt, bool complex_valued, Rng& rng) {
    if (mr < 1 || mt < 1) throw ConfigError("draw_channel: dimensions must be positive");
    Eigen::MatrixXcd h(mr, mt);
    const double var = 1.0 / static_cast<double>(mr);
    for (int j = 0; j < mt; ++j)
        for (int i = 0; i < mr; ++i)
            h(i, j) = complex_valued ? rng.cgauss(var) : std::complex<double>(rng.rgauss(var), 0.0);
    return h;
}

double snr_to_n0(double snr_db, double beta, double es) {
    return beta * es / std::pow(10.0, snr_db / 10.0);
}

void transmit(const Eigen::MatrixXcd& h, const Eigen::VectorXcd& s0, double n0,
              bool complex_valued, Rng& rng, Eigen::VectorXcd& y, Eigen::VectorXcd& n) {
    const auto mr = h.rows();
    n.resize(mr);
    for (Eigen::Index i = 0; i < mr; ++i)
        n(i) = complex_valued ? rng.cgauss(n0) : std::complex<double>(rng.rgauss(n0), 0.0);
    y = h * s0 + n;
}

MimoInstance draw_instance(int mr, int mt, const Constellation& c, double n0, Rng& rng) {
    MimoInstance inst;
    inst.n0 = n0;
    inst.beta = static_cast<double>(mt) / static_cast<double>(mr);
    inst.h = draw_channel(mr, mt, c.complex_valued(), rng);
    inst.s0.resize(mt);
    inst.s0_index.resize(mt);
    for (int l = 0; l < mt; ++l) {
        const int idx = rng.uniform_int(c.size());
        inst.s0_index[l] = idx;
        inst.s0(l) = c.points()[idx];
    }
    transmit(inst.h, inst.s0, n0, c.complex_valued(), rng, inst.y, inst.n);
    return inst;
}

}  // namespace mimoamp
