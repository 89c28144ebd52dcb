#include "mimoamp/harness.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <limits>
#include <memory>
#include <sstream>
#include <thread>

#include <nlohmann/json.hpp>

#include "mimoamp/amp.hpp"
#include "mimoamp/channel.hpp"
#include "mimoamp/errors.hpp"

namespace mimoamp {

namespace {

TuningPolicy parse_tuning(const std::string& text) {
    if (text == "optimal") return TuningPolicy::optimal();
    if (text == "match-sigma") return TuningPolicy::match_sigma();
    if (text == "zero") return TuningPolicy::limit_zero();
    if (text == "inf") return TuningPolicy::limit_infinity();
    if (text.rfind("fixed=", 0) == 0) return TuningPolicy::fixed(std::stod(text.substr(6)));
    throw ConfigError("unknown tuning policy: " + text);
}

TuningPolicy default_tuning(DenoiserFamily family) {
    switch (family) {
        case DenoiserFamily::Clip: return TuningPolicy::limit_zero();
        case DenoiserFamily::GrayExact:
        case DenoiserFamily::GrayMaxLog: return TuningPolicy::match_sigma();
        default: return TuningPolicy::optimal();
    }
}

DenoiserFamily parse_family(const std::string& text) {
    if (text == "exact") return DenoiserFamily::Exact;
    if (text == "gaussian") return DenoiserFamily::Gaussian;
    if (text == "hypercube") return DenoiserFamily::Hypercube;
    if (text == "clip") return DenoiserFamily::Clip;
    if (text == "gray") return DenoiserFamily::GrayExact;
    if (text == "gray-maxlog") return DenoiserFamily::GrayMaxLog;
    throw ConfigError("unknown denoiser family: " + text);
}

}  // namespace

DetectorSpec DetectorSpec::parse(const std::string& token) {
    DetectorSpec spec;
    spec.label = token;
    if (token == "lmmse") {
        spec.kind = Kind::Lmmse;
        return spec;
    }
    if (token == "zf") {
        spec.kind = Kind::Zf;
        return spec;
    }
    if (token == "mf") {
        spec.kind = Kind::Mf;
        return spec;
    }
    if (token == "box") {
        spec.kind = Kind::Box;
        return spec;
    }
    if (token.rfind("amp:", 0) != 0) throw ConfigError("unknown detector token: " + token);
    const std::string rest = token.substr(4);
    const auto colon = rest.find(':');
    const std::string fam = rest.substr(0, colon);
    spec.kind = Kind::Amp;
    spec.family = parse_family(fam);
    spec.tuning = colon == std::string::npos ? default_tuning(spec.family)
                                             : parse_tuning(rest.substr(colon + 1));
    return spec;
}

Interval wilson_interval(long errors, long n) {
    if (n <= 0) return {0.0, 1.0};
    const double z = 1.959963984540054;  // 97.5% quantile
    const double z2 = z * z;
    const double p = static_cast<double>(errors) / static_cast<double>(n);
    const double denom = 1.0 + z2 / n;
    const double center = (p + z2 / (2.0 * n)) / denom;
    const double half = z * std::sqrt(p * (1.0 - p) / n + z2 / (4.0 * n * n)) / denom;
    return {std::max(0.0, center - half), std::min(1.0, center + half)};
}

namespace {

struct TrialOutcome {
    long errors = 0;
    bool diverged = false;
};

// Monotone piecewise-linear interpolation of tau*(sigma2) in log-log space.
class TauTable {
public:
    TauTable(const Denoiser& den, double lo, double hi, int points) {
        log_lo_ = std::log(lo);
        log_step_ = (std::log(hi) - log_lo_) / (points - 1);
        log_tau_.resize(points);
        for (int i = 0; i < points; ++i) {
            const double s2 = std::exp(log_lo_ + i * log_step_);
            log_tau_[i] = std::log(std::max(optimal_tau(s2, den), 1e-300));
        }
    }

    double operator()(double sigma2) const {
        const double u = (std::log(std::max(sigma2, 1e-300)) - log_lo_) / log_step_;
        if (u <= 0.0) return std::exp(log_tau_.front());
        if (u >= static_cast<double>(log_tau_.size() - 1)) return std::exp(log_tau_.back());
        const auto i = static_cast<std::size_t>(u);
        const double f = u - static_cast<double>(i);
        return std::exp((1.0 - f) * log_tau_[i] + f * log_tau_[i + 1]);
    }

private:
    double log_lo_ = 0.0, log_step_ = 1.0;
    std::vector<double> log_tau_;
};

class PointRunner {
public:
    PointRunner(const SweepConfig& cfg, const DetectorSpec& spec, const Constellation& c,
                double n0)
        : cfg_(cfg), spec_(spec), c_(c), n0_(n0) {
        if (spec.kind == DetectorSpec::Kind::Amp) {
            det_cfg_ = DetectorConfig{Denoiser(spec.family, c), spec.tuning, cfg.t_max};
            det_cfg_->record_trajectory = false;
            if (cfg.tau_table && spec.tuning.kind == TuningPolicy::Kind::Optimal &&
                det_cfg_->denoiser.tau_dependent() && spec.family != DenoiserFamily::Gaussian) {
                tau_table_ = std::make_shared<TauTable>(det_cfg_->denoiser, 1e-6 * c.energy(),
                                                        1e3 * c.energy(), 241);
                auto table = tau_table_;
                det_cfg_->tau_oracle = [table](double s2) { return (*table)(s2); };
            }
        }
    }

    TrialOutcome run_trial(std::uint64_t trial_index) const {
        Rng rng = Rng::for_trial(cfg_.master_seed, trial_index);
        const MimoInstance inst = draw_instance(cfg_.mr, cfg_.mt, c_, n0_, rng);
        TrialOutcome out;
        try {
            const std::vector<int> hard = detect_indices(inst);
            for (int l = 0; l < cfg_.mt; ++l)
                if (hard[l] != inst.s0_index[l]) ++out.errors;
        } catch (const DetectorError&) {
            out.diverged = true;
        }
        return out;
    }

private:
    std::vector<int> detect_indices(const MimoInstance& inst) const {
        Eigen::VectorXcd soft;
        switch (spec_.kind) {
            case DetectorSpec::Kind::Amp:
                return detect(inst.y, inst.h, inst.n0, *det_cfg_).hard_index;
            case DetectorSpec::Kind::Lmmse:
                soft = lmmse_detect(inst.y, inst.h, inst.n0, c_.energy());
                break;
            case DetectorSpec::Kind::Zf: soft = zf_detect(inst.y, inst.h); break;
            case DetectorSpec::Kind::Mf: soft = mf_detect(inst.y, inst.h); break;
            case DetectorSpec::Kind::Box:
                soft = box_detect(inst.y, inst.h, c_.alpha(), cfg_.box).estimate;
                break;
        }
        std::vector<int> idx(cfg_.mt);
        for (int l = 0; l < cfg_.mt; ++l) idx[l] = c_.slice_index(soft(l));
        return idx;
    }

    const SweepConfig& cfg_;
    const DetectorSpec& spec_;
    const Constellation& c_;
    double n0_;
    std::optional<DetectorConfig> det_cfg_;
    std::shared_ptr<TauTable> tau_table_;
};

double se_prediction(const SweepConfig& cfg, const DetectorSpec& spec, const Constellation& c,
                     double n0, double beta) {
    try {
        switch (spec.kind) {
            case DetectorSpec::Kind::Amp: {
                SeConfig se{Denoiser(spec.family, c), spec.tuning};
                return predict_ser(se_trajectory(n0, beta, se, cfg.t_max).sigma2.back(), c);
            }
            case DetectorSpec::Kind::Lmmse: {
                SeConfig se{Denoiser(DenoiserFamily::Gaussian, c), TuningPolicy::optimal()};
                return predict_ser(se_fixed_point(n0, beta, se), c);
            }
            case DetectorSpec::Kind::Zf: {
                if (beta >= 1.0) return std::numeric_limits<double>::quiet_NaN();
                return predict_ser(n0 / (1.0 - beta), c);
            }
            case DetectorSpec::Kind::Mf: return predict_ser(n0 + beta * c.var(), c);
            case DetectorSpec::Kind::Box: {
                SeConfig se{Denoiser(DenoiserFamily::Clip, c), TuningPolicy::limit_zero()};
                return predict_ser(se_fixed_point(n0, beta, se), c);
            }
        }
    } catch (const AnalysisError&) {
        return std::numeric_limits<double>::quiet_NaN();
    }
    return std::numeric_limits<double>::quiet_NaN();
}

}  // namespace

SweepResult run_sweep(const SweepConfig& cfg) {
    if (cfg.snr_db.empty()) throw ConfigError("run_sweep: empty SNR grid");
    if (cfg.detectors.empty()) throw ConfigError("run_sweep: no detectors configured");
    if (cfg.min_symbol_errors < 1) throw ConfigError("run_sweep: min_symbol_errors must be >= 1");
    if (cfg.max_trials < 1) throw ConfigError("run_sweep: max_trials must be >= 1");
    if (cfg.mr < 1 || cfg.mt < 1) throw ConfigError("run_sweep: bad dimensions");

    const Constellation c = Constellation::from_key(
        cfg.constellation, cfg.normalize ? Normalization::UnitEnergy : Normalization::RawGrid);
    const double beta = static_cast<double>(cfg.mt) / static_cast<double>(cfg.mr);
    const int workers = cfg.workers > 0
                            ? cfg.workers
                            : std::max(1u, std::thread::hardware_concurrency());

    SweepResult result;
    result.config = cfg;

    for (const DetectorSpec& spec : cfg.detectors) {
        for (double snr : cfg.snr_db) {
            const double n0 = snr_to_n0(snr, beta, c.energy());
            const auto t0 = std::chrono::steady_clock::now();
            PointRunner runner(cfg, spec, c, n0);

            long trials = 0, errors = 0, diverged = 0;
            while (trials < cfg.max_trials &&
                   (errors < cfg.min_symbol_errors || trials < cfg.min_trials)) {
                const long batch =
                    std::min<long>(cfg.trial_batch, cfg.max_trials - trials);
                std::vector<TrialOutcome> outcomes(batch);
                std::atomic<long> cursor{0};
                auto work = [&]() {
                    for (long i = cursor.fetch_add(1); i < batch; i = cursor.fetch_add(1))
                        outcomes[i] = runner.run_trial(static_cast<std::uint64_t>(trials + i));
                };
                if (workers == 1 || batch == 1) {
                    work();
                } else {
                    std::vector<std::thread> pool;
                    pool.reserve(workers);
                    for (int w = 0; w < workers; ++w) pool.emplace_back(work);
                    for (auto& th : pool) th.join();
                }
                for (const TrialOutcome& o : outcomes) {
                    errors += o.errors;
                    diverged += o.diverged ? 1 : 0;
                }
                trials += batch;
            }

            SweepRecord rec;
            rec.detector = spec.label;
            rec.snr_db = snr;
            rec.trials = trials;
            rec.errors = errors;
            const long n = trials * cfg.mt;
            rec.ser = n > 0 ? static_cast<double>(errors) / static_cast<double>(n) : 0.0;
            const Interval ci = wilson_interval(errors, n);
            rec.ci_lo = ci.lo;
            rec.ci_hi = ci.hi;
            rec.ser_se_pred = se_prediction(cfg, spec, c, n0, beta);
            rec.diverged = diverged;
            rec.wall_s = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
            result.records.push_back(std::move(rec));
        }
    }
    return result;
}

namespace {

std::string fmt17(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

}  // namespace

void emit_csv(const SweepResult& result, std::ostream& os) {
    os << "detector,snr_db,trials,errors,ser,ci_lo,ci_hi,ser_se_pred,diverged\n";
    for (const SweepRecord& r : result.records)
        os << r.detector << ',' << fmt17(r.snr_db) << ',' << r.trials << ',' << r.errors << ','
           << fmt17(r.ser) << ',' << fmt17(r.ci_lo) << ',' << fmt17(r.ci_hi) << ','
           << fmt17(r.ser_se_pred) << ',' << r.diverged << '\n';
}

void emit_json(const SweepResult& result, std::ostream& os) {
    nlohmann::json j;
    const SweepConfig& c = result.config;
    std::vector<std::string> det;
    for (const auto& d : c.detectors) det.push_back(d.label);
    j["config"] = {{"mr", c.mr},
                   {"mt", c.mt},
                   {"constellation", c.constellation},
                   {"normalize", c.normalize},
                   {"detectors", det},
                   {"snr_db", c.snr_db},
                   {"t_max", c.t_max},
                   {"min_symbol_errors", c.min_symbol_errors},
                   {"max_trials", c.max_trials},
                   {"min_trials", c.min_trials},
                   {"master_seed", c.master_seed},
                   {"trial_batch", c.trial_batch}};
    j["records"] = nlohmann::json::array();
    for (const SweepRecord& r : result.records)
        j["records"].push_back({{"detector", r.detector},
                                {"snr_db", r.snr_db},
                                {"trials", r.trials},
                                {"errors", r.errors},
                                {"ser", r.ser},
                                {"ci_lo", r.ci_lo},
                                {"ci_hi", r.ci_hi},
                                {"ser_se_pred", r.ser_se_pred},
                                {"diverged", r.diverged},
                                {"wall_s", r.wall_s}});
    os << j.dump(2) << '\n';
}

std::vector<std::string> emit_files(const SweepResult& result) {
    namespace fs = std::filesystem;
    std::error_code ec;
    fs::create_directories(result.config.out_dir, ec);
    std::vector<std::string> written;
    const std::string stem =
        (fs::path(result.config.out_dir) / ("sweep_" + result.config.constellation)).string();
    const std::string ext = result.config.format == "json" ? ".json" : ".csv";
    const std::string path = stem + ext;
    std::ofstream os(path);
    if (!os) throw IoError("cannot write " + path);
    if (result.config.format == "json")
        emit_json(result, os);
    else
        emit_csv(result, os);
    if (!os) throw IoError("write failed: " + path);
    written.push_back(path);
    return written;
}

std::vector<double> parse_grid(const std::string& text) {
    std::vector<double> out;
    if (text.find(':') != std::string::npos) {
        double a, step, b;
        char c1, c2;
        std::istringstream is(text);
        if (!(is >> a >> c1 >> step >> c2 >> b) || c1 != ':' || c2 != ':' || step <= 0.0)
            throw ConfigError("bad grid spec: " + text);
        for (double v = a; v <= b + 1e-9 * std::abs(step); v += step) out.push_back(v);
        return out;
    }
    std::istringstream is(text);
    std::string tok;
    while (std::getline(is, tok, ','))
        if (!tok.empty()) out.push_back(std::stod(tok));
    return out;
}

void apply_config_line(SweepConfig& cfg, const std::string& key, const std::string& value) {
    if (key == "mr") cfg.mr = std::stoi(value);
    else if (key == "mt") cfg.mt = std::stoi(value);
    else if (key == "constellation") cfg.constellation = value;
    else if (key == "normalize") cfg.normalize = (value == "true" || value == "1");
    else if (key == "detectors") {
        cfg.detectors.clear();
        std::istringstream is(value);
        std::string tok;
        while (std::getline(is, tok, ','))
            if (!tok.empty()) cfg.detectors.push_back(DetectorSpec::parse(tok));
    } else if (key == "snr_db") cfg.snr_db = parse_grid(value);
    else if (key == "t_max") cfg.t_max = std::stoi(value);
    else if (key == "min_symbol_errors") cfg.min_symbol_errors = std::stol(value);
    else if (key == "max_trials") cfg.max_trials = std::stol(value);
    else if (key == "min_trials") cfg.min_trials = std::stol(value);
    else if (key == "seed" || key == "master_seed") cfg.master_seed = std::stoull(value);
    else if (key == "workers") cfg.workers = std::stoi(value);
    else if (key == "trial_batch") cfg.trial_batch = std::stoi(value);
    else if (key == "out") cfg.out_dir = value;
    else if (key == "format") {
        if (value != "csv" && value != "json") throw ConfigError("format must be csv or json");
        cfg.format = value;
    } else if (key == "tau_table") cfg.tau_table = (value == "true" || value == "1");
    else throw ConfigError("unknown config key: " + key);
}

SweepConfig parse_config_file(const std::string& path) {
    std::ifstream is(path);
    if (!is) throw IoError("cannot open config file: " + path);
    SweepConfig cfg;
    std::string line;
    int lineno = 0;
    while (std::getline(is, line)) {
        ++lineno;
        const auto hash = line.find('#');
        if (hash != std::string::npos) line.erase(hash);
        const auto strip = [](std::string s) {
            const auto b = s.find_first_not_of(" \t\r");
            if (b == std::string::npos) return std::string{};
            const auto e = s.find_last_not_of(" \t\r");
            return s.substr(b, e - b + 1);
        };
        line = strip(line);
        if (line.empty()) continue;
        const auto eq = line.find('=');
        if (eq == std::string::npos)
            throw ConfigError("config line " + std::to_string(lineno) + ": expected key = value");
        const std::string key = strip(line.substr(0, eq));
        const std::string value = strip(line.substr(eq + 1));
        try {
            apply_config_line(cfg, key, value);
        } catch (const std::invalid_argument&) {
            throw ConfigError("config line " + std::to_string(lineno) + ": bad value for " + key);
        }
    }
    return cfg;
}

}  // namespace mimoamp
