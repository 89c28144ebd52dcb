// Batch front end: `sweep` runs a config-driven Monte-Carlo sweep, `se`
// evaluates the large-system analysis on its own, and `validate` runs the
// invariant suite. Exit codes: 0 ok, 1 configuration error, 2 I/O error.

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>

#include <CLI11.hpp>

#include "mimoamp/channel.hpp"
#include "mimoamp/errors.hpp"
#include "mimoamp/harness.hpp"
#include "mimoamp/se.hpp"
#include "mimoamp/validate.hpp"

namespace {

using namespace mimoamp;

struct Overrides {
    std::optional<std::string> constellation, detectors, snr_db, out, format;
    std::optional<int> mr, mt, t_max, workers, trial_batch;
    std::optional<long> min_symbol_errors, max_trials, min_trials;
    std::optional<std::uint64_t> seed;
    std::optional<bool> normalize, tau_table;
};

void apply(SweepConfig& cfg, const Overrides& ov) {
    auto set = [&cfg](const char* key, const auto& opt) {
        if (opt) {
            std::ostringstream os;
            os << *opt;
            apply_config_line(cfg, key, os.str());
        }
    };
    set("constellation", ov.constellation);
    set("detectors", ov.detectors);
    set("snr_db", ov.snr_db);
    set("out", ov.out);
    set("format", ov.format);
    set("mr", ov.mr);
    set("mt", ov.mt);
    set("t_max", ov.t_max);
    set("workers", ov.workers);
    set("trial_batch", ov.trial_batch);
    set("min_symbol_errors", ov.min_symbol_errors);
    set("max_trials", ov.max_trials);
    set("min_trials", ov.min_trials);
    set("seed", ov.seed);
    if (ov.normalize) cfg.normalize = *ov.normalize;
    if (ov.tau_table) cfg.tau_table = *ov.tau_table;
}

int run_sweep_cmd(const std::string& config_path, const Overrides& ov) {
    SweepConfig cfg = config_path.empty() ? SweepConfig{} : parse_config_file(config_path);
    apply(cfg, ov);
    const SweepResult result = run_sweep(cfg);
    for (const std::string& path : emit_files(result)) std::cout << "wrote " << path << "\n";
    std::printf("%-24s %8s %9s %8s %12s %12s %9s\n", "detector", "snr_db", "trials", "errors",
                "ser", "se_pred", "diverged");
    for (const SweepRecord& r : result.records)
        std::printf("%-24s %8.2f %9ld %8ld %12.4e %12.4e %9ld\n", r.detector.c_str(), r.snr_db,
                    r.trials, r.errors, r.ser, r.ser_se_pred, r.diverged);
    return 0;
}

int run_se_cmd(const std::string& constellation, const std::string& family,
               const std::string& tuning, double beta, double n0, double snr_db, int t_max,
               const std::string& out, bool mrt_table) {
    const Constellation c = Constellation::from_key(constellation);
    const DetectorSpec spec = DetectorSpec::parse("amp:" + family +
                                                  (tuning.empty() ? "" : ":" + tuning));
    const Denoiser den(spec.family, c);
    if (std::isnan(n0)) n0 = snr_to_n0(snr_db, beta, c.energy());

    const SeConfig se{den, spec.tuning};
    const SeTrajectory traj = se_trajectory(n0, beta, se, t_max);
    std::printf("constellation=%s family=%s beta=%g n0=%g\n", c.key().c_str(), family.c_str(),
                beta, n0);
    std::printf("%4s %16s %16s %12s\n", "t", "sigma2", "tau", "ser_pred");
    for (std::size_t i = 0; i < traj.sigma2.size(); ++i) {
        if (i < traj.tau.size())
            std::printf("%4zu %16.9e %16.9e %12.4e\n", i + 1, traj.sigma2[i], traj.tau[i],
                        predict_ser(traj.sigma2[i], c));
        else
            std::printf("%4zu %16.9e %16s %12.4e\n", i + 1, traj.sigma2[i], "-",
                        predict_ser(traj.sigma2[i], c));
    }
    const double fp = se_fixed_point(n0, beta, se);
    std::printf("fixed_point sigma2=%.12e ser=%.6e converged=%d\n", fp, predict_ser(fp, c),
                traj.converged);

    if (mrt_table) {
        std::printf("\n%-12s %-8s %12s\n", "family", "const", "beta_min");
        for (const char* fam : {"exact", "gaussian", "hypercube", "clip"}) {
            const Denoiser d = Denoiser::from_key(fam, c);
            std::printf("%-12s %-8s %12.6f\n", fam, c.key().c_str(), recovery_threshold(d));
        }
    }

    if (!out.empty()) {
        std::ofstream os(out);
        if (!os) throw IoError("cannot write " + out);
        write_trajectory_csv(traj, c, os);
        std::cout << "wrote " << out << "\n";
    }
    return 0;
}

int run_validate_cmd() {
    bool all = true;
    for (const CheckResult& r : run_validation_suite()) {
        std::printf("[%s] %-32s %s\n", r.passed ? "PASS" : "FAIL", r.name.c_str(),
                    r.detail.c_str());
        all = all && r.passed;
    }
    return all ? 0 : 1;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"AMP-based massive MU-MIMO data detection and state-evolution analysis"};
    app.require_subcommand(1);

    Overrides ov;
    std::string config_path;

    CLI::App* sweep = app.add_subcommand("sweep", "run a Monte-Carlo SNR sweep");
    sweep->add_option("--config", config_path, "flat key=value config file");
    sweep->add_option("--seed", ov.seed, "master seed");
    sweep->add_option("--out", ov.out, "output directory");
    sweep->add_option("--workers", ov.workers, "worker threads (0 = hardware)");
    sweep->add_option("--format", ov.format, "csv or json");
    sweep->add_option("--constellation", ov.constellation, "bpsk|qpsk|16qam|4pam|64qam");
    sweep->add_option("--detectors", ov.detectors, "comma list, e.g. amp:exact,lmmse,box");
    sweep->add_option("--snr-db", ov.snr_db, "grid: comma list or a:step:b");
    sweep->add_option("--mr", ov.mr, "receive antennas");
    sweep->add_option("--mt", ov.mt, "transmit streams");
    sweep->add_option("--t-max", ov.t_max, "detector iterations");
    sweep->add_option("--min-symbol-errors", ov.min_symbol_errors, "stop after this many errors");
    sweep->add_option("--max-trials", ov.max_trials, "trial cap per point");
    sweep->add_option("--min-trials", ov.min_trials, "trial floor per point");
    sweep->add_option("--trial-batch", ov.trial_batch, "trials per stop-check batch");
    sweep->add_flag("--normalize", [&ov](std::int64_t) { ov.normalize = true; },
                    "unit-energy constellation scaling");
    sweep->add_option("--tau-table", ov.tau_table, "use precomputed tuning tables (default on)");

    std::string se_const = "qpsk", se_family = "exact", se_tuning, se_out;
    double se_beta = 0.5, se_n0 = std::nan(""), se_snr = 10.0;
    int se_tmax = 10;
    bool se_mrt = false;
    CLI::App* se = app.add_subcommand("se", "state-evolution trajectories and fixed points");
    se->add_option("--constellation", se_const);
    se->add_option("--family", se_family, "denoiser family");
    se->add_option("--tuning", se_tuning, "optimal|match-sigma|zero|inf|fixed=<v>");
    se->add_option("--beta", se_beta, "system ratio MT/MR");
    se->add_option("--n0", se_n0, "noise variance (overrides --snr-db)");
    se->add_option("--snr-db", se_snr);
    se->add_option("--t-max", se_tmax);
    se->add_option("--out", se_out, "trajectory CSV path");
    se->add_flag("--mrt", se_mrt, "print recovery-threshold table");

    CLI::App* validate = app.add_subcommand("validate", "run the invariant suite");
    (void)validate;

    try {
        app.parse(argc, argv);
        if (sweep->parsed()) return run_sweep_cmd(config_path, ov);
        if (se->parsed())
            return run_se_cmd(se_const, se_family, se_tuning, se_beta, se_n0, se_snr, se_tmax,
                              se_out, se_mrt);
        return run_validate_cmd();
    } catch (const CLI::ParseError& e) {
        return app.exit(e);
    } catch (const IoError& e) {
        std::cerr << "i/o error: " << e.what() << "\n";
        return 2;
    } catch (const ConfigError& e) {
        std::cerr << "configuration error: " << e.what() << "\n";
        return 1;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
}
