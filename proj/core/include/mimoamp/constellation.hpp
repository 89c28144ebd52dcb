#ifndef MIMOAMP_CONSTELLATION_HPP
#define MIMOAMP_CONSTELLATION_HPP

#include <complex>
#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

namespace mimoamp {

enum class ConstellationKind { Bpsk, Qpsk, Pam, Qam };

enum class Normalization { RawGrid, UnitEnergy };

/// Discrete transmit alphabet with uniform priors, Gray bit labels, and
/// hard slicing. BPSK and M-PAM are real-valued alphabets (used in
/// real-valued system models); QPSK and M^2-QAM are complex and separable.
class Constellation {
public:
    static Constellation make(ConstellationKind kind, int m,
                              Normalization norm = Normalization::RawGrid);
    /// Keys: "bpsk", "qpsk", "16qam", "64qam", "4pam", ...
    static Constellation from_key(std::string_view key,
                                  Normalization norm = Normalization::RawGrid);

    ConstellationKind kind() const { return kind_; }
    bool complex_valued() const { return complex_; }
    int order_per_dim() const { return m_; }
    int size() const { return static_cast<int>(points_.size()); }
    double energy() const { return es_; }
    /// Var[S0]; equals the energy for these zero-mean alphabets.
    double var() const { return es_; }
    std::complex<double> mean() const { return {0.0, 0.0}; }
    /// Box half-width covering the alphabet ((M-1) * scale per dimension).
    double alpha() const { return alpha_; }
    /// Half the spacing between adjacent per-dimension levels (decision half-distance).
    double half_distance() const { return half_distance_; }
    double scale() const { return scale_; }

    const std::vector<std::complex<double>>& points() const { return points_; }
    const std::vector<double>& prior() const { return prior_; }
    /// Gray bit label of points()[i]; per-dimension labels are interleaved
    /// (real bits in the low half).
    const std::vector<std::uint32_t>& gray_labels() const { return gray_; }
    int bits_per_symbol() const { return bits_; }

    /// Per-dimension amplitude levels, ascending ({-(M-1)...M-1} * scale).
    const std::vector<double>& levels() const { return levels_; }
    /// Mean squared level = per-dimension energy (es/2 for complex kinds).
    double level_energy() const { return level_es_; }

    /// p(s) = p(Re s) p(Im s) with identical marginals (QPSK/QAM here).
    bool separable() const { return complex_; }

    /// Nearest point in Euclidean distance; ties break toward the smaller
    /// real part, then the smaller imaginary part.
    int slice_index(std::complex<double> z) const;
    std::complex<double> slice(std::complex<double> z) const { return points_[slice_index(z)]; }

    const std::string& key() const { return key_; }

private:
    Constellation() = default;

    ConstellationKind kind_{};
    bool complex_ = false;
    int m_ = 0;
    int bits_ = 0;
    double es_ = 0.0;
    double alpha_ = 0.0;
    double scale_ = 1.0;
    double half_distance_ = 1.0;
    double level_es_ = 0.0;
    std::vector<std::complex<double>> points_;
    std::vector<double> prior_;
    std::vector<std::uint32_t> gray_;
    std::vector<double> levels_;
    std::string key_;
};

}  // namespace mimoamp

#endif
