#ifndef MIMOAMP_DENOISER_HPP
#define MIMOAMP_DENOISER_HPP

#include <complex>
#include <string_view>
#include <vector>

#include "mimoamp/constellation.hpp"

namespace mimoamp {

/// Posterior-mean families usable inside the AMP iteration. Exact uses the
/// true discrete prior; the others are deliberately mismatched surrogates
/// (Gaussian, uniform box, its tau->0 clipping limit, and the Gray-coded
/// bitwise approximations with exact or max-log bit LLRs).
enum class DenoiserFamily { Exact, Gaussian, Hypercube, Clip, GrayExact, GrayMaxLog };

struct RealBranch {
    double mean;
    double deriv;
};

/// Scalar posterior-mean denoiser F(r, tau) with derivative. Complex
/// (separable) alphabets evaluate per dimension at variance tau/2 and report
/// the average of the two partial derivatives; real alphabets act on the real
/// part at full variance.
class Denoiser {
public:
    Denoiser(DenoiserFamily family, Constellation constellation);
    static Denoiser from_key(std::string_view key, const Constellation& c);
    static const char* family_key(DenoiserFamily f);

    DenoiserFamily family() const { return family_; }
    const Constellation& constellation() const { return c_; }

    /// Per-dimension evaluation at real-channel variance t.
    RealBranch eval_real(double x, double t) const;

    struct Out {
        std::complex<double> mean;
        double deriv;
    };
    /// Complex-channel evaluation at total variance tau.
    Out eval(std::complex<double> r, double tau) const;

    /// False for families whose output ignores tau (clip).
    bool tau_dependent() const { return family_ != DenoiserFamily::Clip; }

    /// Per-dimension abscissas where the family is non-smooth or develops
    /// boundary layers at small tau; used to seed quadrature segmentation.
    std::vector<double> split_points() const;

private:
    RealBranch exact_real(double x, double t) const;
    RealBranch gaussian_real(double x, double t) const;
    RealBranch hypercube_real(double x, double t) const;
    RealBranch clip_real(double x) const;
    RealBranch gray_real(double x, double t, bool maxlog) const;

    DenoiserFamily family_;
    Constellation c_;
};

}  // namespace mimoamp

#endif
