#ifndef MIMOAMP_HARNESS_HPP
#define MIMOAMP_HARNESS_HPP

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "mimoamp/baselines.hpp"
#include "mimoamp/denoiser.hpp"
#include "mimoamp/se.hpp"

namespace mimoamp {

/// One detector to run in a sweep. AMP detectors carry a denoiser family and
/// tuning policy; the rest are the reference detectors.
struct DetectorSpec {
    enum class Kind { Amp, Lmmse, Zf, Mf, Box };
    Kind kind = Kind::Amp;
    DenoiserFamily family = DenoiserFamily::Exact;
    TuningPolicy tuning = TuningPolicy::optimal();
    std::string label;

    /// Tokens: "amp:<family>[:<tuning>]" with family in {exact, gaussian,
    /// hypercube, clip, gray, gray-maxlog} and tuning in {optimal,
    /// match-sigma, zero, inf, fixed=<v>}; or "lmmse" | "zf" | "mf" | "box".
    static DetectorSpec parse(const std::string& token);
};

struct SweepConfig {
    int mr = 128;
    int mt = 64;
    std::string constellation = "qpsk";
    bool normalize = false;
    std::vector<DetectorSpec> detectors;
    std::vector<double> snr_db;
    int t_max = 10;
    long min_symbol_errors = 200;
    long max_trials = 100000;
    long min_trials = 0;
    std::uint64_t master_seed = 1;
    int workers = 0;  // 0: hardware concurrency
    /// Trials run in fixed-size batches; the stop decision happens on batch
    /// boundaries so results do not depend on the worker count.
    int trial_batch = 256;
    std::string out_dir = ".";
    std::string format = "csv";
    BoxSolverConfig box;
    /// Precompute an optimal-tau interpolation table per AMP detector instead
    /// of running the golden-section search inside every iteration.
    bool tau_table = true;
};

struct SweepRecord {
    std::string detector;
    double snr_db = 0.0;
    long trials = 0;
    long errors = 0;
    double ser = 0.0;
    double ci_lo = 0.0;
    double ci_hi = 0.0;
    double ser_se_pred = 0.0;
    long diverged = 0;
    double wall_s = 0.0;
};

struct SweepResult {
    SweepConfig config;
    std::vector<SweepRecord> records;
};

/// Wilson 95% score interval for e errors out of n symbols.
struct Interval {
    double lo, hi;
};
Interval wilson_interval(long errors, long n);

/// Runs every (detector, snr) point: draws independent instances with
/// per-trial RNG streams derived from (master_seed, trial_index) — identical
/// across detectors and SNR points, so curve comparisons are paired — and
/// accumulates symbol errors until min_symbol_errors or max_trials.
/// Detector failures count into the diverged column. Deterministic for a
/// given (config, master_seed) regardless of worker count.
SweepResult run_sweep(const SweepConfig& cfg);

void emit_csv(const SweepResult& result, std::ostream& os);
void emit_json(const SweepResult& result, std::ostream& os);

/// Writes <out_dir>/sweep_<constellation>.<ext>; returns the paths written.
std::vector<std::string> emit_files(const SweepResult& result);

/// Flat key = value file; '#' starts a comment. Unknown keys are errors.
SweepConfig parse_config_file(const std::string& path);
void apply_config_line(SweepConfig& cfg, const std::string& key, const std::string& value);

/// "a:step:b" ranges or comma lists.
std::vector<double> parse_grid(const std::string& text);

}  // namespace mimoamp

#endif
