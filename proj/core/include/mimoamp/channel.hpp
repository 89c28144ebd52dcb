#ifndef MIMOAMP_CHANNEL_HPP
#define MIMOAMP_CHANNEL_HPP

#include <Eigen/Dense>
#include <vector>

#include "mimoamp/constellation.hpp"
#include "mimoamp/rng.hpp"

namespace mimoamp {

/// One realization of y = H s0 + n. Real-valued alphabets use a real-valued
/// system model (H and n real Gaussian), stored with zero imaginary parts.
struct MimoInstance {
    Eigen::MatrixXcd h;
    Eigen::VectorXcd s0;
    std::vector<int> s0_index;  // constellation point index per stream
    Eigen::VectorXcd y;
    Eigen::VectorXcd n;
    double n0 = 0.0;
    double beta = 0.0;
};

/// mr x mt i.i.d. channel, entry variance 1/mr. Complex systems draw CSCG
/// entries; real systems draw real Gaussians. Column-major draw order.
Eigen::MatrixXcd draw_channel(int mr, int mt, bool complex_valued, Rng& rng);

/// N0 = beta * Es / 10^(snr_db/10).
double snr_to_n0(double snr_db, double beta, double es);

/// Adds noise of variance n0 per receive dimension: y = h s0 + n.
void transmit(const Eigen::MatrixXcd& h, const Eigen::VectorXcd& s0, double n0,
              bool complex_valued, Rng& rng, Eigen::VectorXcd& y, Eigen::VectorXcd& n);

/// Draws symbols, channel, and noise for one Monte-Carlo trial.
MimoInstance draw_instance(int mr, int mt, const Constellation& c, double n0, Rng& rng);

}  // namespace mimoamp

#endif
