#ifndef MIMOAMP_ERRORS_HPP
#define MIMOAMP_ERRORS_HPP

#include <stdexcept>
#include <string>

namespace mimoamp {

/// Invalid user-facing configuration (unsupported constellation, bad sweep setup, ...).
class ConfigError : public std::runtime_error {
public:
    explicit ConfigError(const std::string& what) : std::runtime_error(what) {}
};

/// A detector failed at runtime (divergence, singular system, non-convergence).
class DetectorError : public std::runtime_error {
public:
    explicit DetectorError(const std::string& what, int iteration = -1)
        : std::runtime_error(what), iteration_(iteration) {}
    int iteration() const noexcept { return iteration_; }

private:
    int iteration_;
};

/// An analysis computation failed (quadrature blow-up, fixed-point exhaustion).
class AnalysisError : public std::runtime_error {
public:
    explicit AnalysisError(const std::string& what) : std::runtime_error(what) {}
};

class IoError : public std::runtime_error {
public:
    explicit IoError(const std::string& what) : std::runtime_error(what) {}
};

}  // namespace mimoamp

#endif
