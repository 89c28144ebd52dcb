#include "mimoamp/constellation.hpp"

#include <cmath>
#include <limits>

#include "mimoamp/errors.hpp"

namespace mimoamp {

namespace {

std::uint32_t gray_code(std::uint32_t i) { return i ^ (i >> 1); }

int bit_width(int m) {
    int b = 0;
    while ((1 << b) < m) ++b;
    return b;
}

}  // namespace

Constellation Constellation::make(ConstellationKind kind, int m, Normalization norm) {
    if (kind == ConstellationKind::Bpsk) m = 2;
    if (kind == ConstellationKind::Qpsk) m = 2;
    if (m < 2 || m > 16 || (m & 1))
        throw ConfigError("constellation: per-dimension order must be even and in [2,16]");

    Constellation c;
    c.kind_ = kind;
    c.m_ = m;
    c.complex_ = (kind == ConstellationKind::Qpsk || kind == ConstellationKind::Qam);

    c.levels_.resize(m);
    double level_es = 0.0;
    for (int k = 0; k < m; ++k) {
        c.levels_[k] = static_cast<double>(2 * k - (m - 1));
        level_es += c.levels_[k] * c.levels_[k];
    }
    level_es /= m;  // (M^2 - 1)/3

    c.es_ = c.complex_ ? 2.0 * level_es : level_es;
    c.scale_ = (norm == Normalization::UnitEnergy) ? 1.0 / std::sqrt(c.es_) : 1.0;
    if (norm == Normalization::UnitEnergy) {
        for (auto& l : c.levels_) l *= c.scale_;
        c.es_ = 1.0;
        level_es = c.complex_ ? 0.5 : 1.0;
    }
    c.level_es_ = level_es;
    c.alpha_ = static_cast<double>(m - 1) * c.scale_;
    c.half_distance_ = c.scale_;

    const int bits_per_dim = bit_width(m);
    if (c.complex_) {
        c.bits_ = 2 * bits_per_dim;
        c.points_.reserve(static_cast<std::size_t>(m) * m);
        for (int ki = 0; ki < m; ++ki)
            for (int kr = 0; kr < m; ++kr) {
                c.points_.emplace_back(c.levels_[kr], c.levels_[ki]);
                c.gray_.push_back(gray_code(static_cast<std::uint32_t>(kr)) |
                                  (gray_code(static_cast<std::uint32_t>(ki)) << bits_per_dim));
            }
    } else {
        c.bits_ = bits_per_dim;
        for (int k = 0; k < m; ++k) {
            c.points_.emplace_back(c.levels_[k], 0.0);
            c.gray_.push_back(gray_code(static_cast<std::uint32_t>(k)));
        }
    }
    c.prior_.assign(c.points_.size(), 1.0 / static_cast<double>(c.points_.size()));

    switch (kind) {
        case ConstellationKind::Bpsk: c.key_ = "bpsk"; break;
        case ConstellationKind::Qpsk: c.key_ = "qpsk"; break;
        case ConstellationKind::Pam: c.key_ = std::to_string(m) + "pam"; break;
        case ConstellationKind::Qam: c.key_ = std::to_string(m * m) + "qam"; break;
    }
    return c;
}

Constellation Constellation::from_key(std::string_view key, Normalization norm) {
    if (key == "bpsk") return make(ConstellationKind::Bpsk, 2, norm);
    if (key == "qpsk") return make(ConstellationKind::Qpsk, 2, norm);
    if (key == "4qam") return make(ConstellationKind::Qpsk, 2, norm);
    if (key == "16qam") return make(ConstellationKind::Qam, 4, norm);
    if (key == "64qam") return make(ConstellationKind::Qam, 8, norm);
    if (key == "256qam") return make(ConstellationKind::Qam, 16, norm);
    if (key == "2pam") return make(ConstellationKind::Bpsk, 2, norm);
    if (key == "4pam") return make(ConstellationKind::Pam, 4, norm);
    if (key == "8pam") return make(ConstellationKind::Pam, 8, norm);
    if (key == "16pam") return make(ConstellationKind::Pam, 16, norm);
    throw ConfigError("unknown constellation key: " + std::string(key));
}

int Constellation::slice_index(std::complex<double> z) const {
    int best = 0;
    double best_d = std::numeric_limits<double>::infinity();
    for (int i = 0; i < size(); ++i) {
        const std::complex<double> d = z - points_[i];
        const double dist = d.real() * d.real() + d.imag() * d.imag();
        if (dist < best_d) {
            best_d = dist;
            best = i;
        } else if (dist == best_d) {
            const auto& p = points_[i];
            const auto& q = points_[best];
            if (p.real() < q.real() || (p.real() == q.real() && p.imag() < q.imag())) best = i;
        }
    }
    return best;
}

}  // namespace mimoamp
