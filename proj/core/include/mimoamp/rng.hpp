#ifndef MIMOAMP_RNG_HPP
#define MIMOAMP_RNG_HPP

#include <complex>
#include <cstdint>
#include <random>

namespace mimoamp {

/// Deterministic per-stream generator. Streams derive from (master_seed,
/// stream_index) through splitmix64 mixing, so Monte-Carlo trials get
/// independent, reproducible streams regardless of worker scheduling.
///
/// Gaussian variates use the Marsaglia polar method over uniforms built as
/// (u64 >> 11) * 2^-53; both are fully specified here, so identical streams
/// give identical output across platforms (std::normal_distribution is not
/// pinned by the standard).
class Rng {
public:
    explicit Rng(std::uint64_t seed) : eng_(mix(seed)) {}

    static Rng for_trial(std::uint64_t master_seed, std::uint64_t trial_index) {
        return Rng(mix(master_seed) ^ mix(0x9e3779b97f4a7c15ULL + trial_index));
    }

    std::uint64_t next_u64() { return eng_(); }

    /// Uniform on [0, 1).
    double uniform() { return static_cast<double>(eng_() >> 11) * 0x1.0p-53; }

    /// Uniform integer in [0, n); rejection sampling, no modulo bias.
    int uniform_int(int n) {
        const std::uint64_t span = static_cast<std::uint64_t>(n);
        const std::uint64_t limit = UINT64_MAX - UINT64_MAX % span;
        std::uint64_t v;
        do {
            v = eng_();
        } while (v >= limit);
        return static_cast<int>(v % span);
    }

    /// Standard normal.
    double gauss() {
        if (have_spare_) {
            have_spare_ = false;
            return spare_;
        }
        double u, v, s;
        do {
            u = 2.0 * uniform() - 1.0;
            v = 2.0 * uniform() - 1.0;
            s = u * u + v * v;
        } while (s >= 1.0 || s == 0.0);
        const double m = std::sqrt(-2.0 * std::log(s) / s);
        spare_ = v * m;
        have_spare_ = true;
        return u * m;
    }

    /// Real N(0, var).
    double rgauss(double var) { return std::sqrt(var) * gauss(); }

    /// Circularly symmetric complex N(0, var): Re and Im i.i.d. N(0, var/2).
    std::complex<double> cgauss(double var) {
        const double sd = std::sqrt(0.5 * var);
        const double re = sd * gauss();
        const double im = sd * gauss();
        return {re, im};
    }

private:
    static std::uint64_t mix(std::uint64_t z) {
        z += 0x9e3779b97f4a7c15ULL;
        z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
        z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
        return z ^ (z >> 31);
    }

    std::mt19937_64 eng_;
    bool have_spare_ = false;
    double spare_ = 0.0;
};

}  // namespace mimoamp

#endif
