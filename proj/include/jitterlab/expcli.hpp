#pragma once

// Configuration-driven Monte Carlo sweeps over pilot power and SNR, with a
// fixed CSV row schema and JSON aggregates.

#include <jitterlab/pipeline.hpp>
#include <jitterlab/serialize.hpp>

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

namespace jitterlab {

enum class JitterKind { var, tiadc };

struct JitterConfig {
    JitterKind kind = JitterKind::var;
    // var: Xi_0 = (jitter_rel T_s)^2 ((1 - corr) I + corr 1 1^t), a-values
    double jitter_rel = 0.01;
    double correlation = 0.95;
    std::vector<double> a;  // one per channel
    std::uint64_t model_seed = 7;
    // tiadc: Sigma_eps = (sigma_rel T_s)^2 I with T_s the sub-converter period
    double phi = 0.9;
    double sigma_rel = 0.005;
};

struct ExperimentConfig {
    std::string scenario;
    std::size_t channels = 4;
    std::size_t samples = 4096;
    std::size_t n_fft = 0;  // 0: same as samples
    std::vector<double> fs;          // per channel
    std::size_t active_lo = 0;
    std::size_t active_hi = 0;
    JitterConfig jitter;
    std::vector<double> pilot_freq;  // per channel
    bool snap_pilot_to_bin = true;
    double w_bp = 2e6;
    std::vector<double> rho;
    std::vector<double> snr_db;
    std::size_t trials = 20;
    std::uint64_t seed = 1;
    SamplingMode sampling = SamplingMode::exact;
    std::vector<TrackerMode> modes{TrackerMode::mimo};
    NoisePolicy noise_policy = NoisePolicy::in_band_psd;

    // Semantic checks (ConfigError).
    void validate() const;
    // Number of (rho, snr, mode, trial) cells.
    std::size_t cells() const { return rho.size() * snr_db.size() * modes.size() * trials; }
};

// Parses and validates; SchemaError on wrong types or unknown keys,
// ConfigError on inconsistent values.
ExperimentConfig parse_config(const json& j);
ExperimentConfig load_config(const std::filesystem::path& path);
json config_to_json(const ExperimentConfig& cfg);

// FNV-1a 64 of the canonical JSON dump of the resolved config, hex.
std::string config_hash(const ExperimentConfig& cfg);

// Pilot frequencies actually used (snapped to the carrier grid if requested).
std::vector<double> resolved_pilots(const ExperimentConfig& cfg);
VarModel resolved_model(const ExperimentConfig& cfg);

struct CellResult {
    std::size_t cell = 0;
    std::string scenario;
    std::size_t trial = 0;
    std::uint64_t seed = 0;
    double jitter_rel = 0.0;
    double rho = 0.0;
    double snr_db = 0.0;
    std::string mode;
    double sjdr_pre = 0.0;
    double sjdr_post = 0.0;
    double sinadr_pre = 0.0;
    double sinadr_post = 0.0;
    double avg_rmsd = 0.0;
};

struct RunOutput {
    std::vector<CellResult> rows;  // sorted by cell index
    std::vector<std::string> warnings;
};

// Cell index = ((i_rho * |snr| + i_snr) * |modes| + i_mode) * trials + trial.
// Each (rho, snr, trial) trace is synthesized once with seed base + trial and
// shared by all modes. threads = 0 uses the hardware concurrency.
RunOutput run_experiment(const ExperimentConfig& cfg, unsigned threads = 0);

// Resolved plan for --dry-run.
json plan_json(const ExperimentConfig& cfg);

inline constexpr const char* kCsvMagic = "# jitterlab-csv v1";
inline constexpr const char* kCsvHeader =
    "cell,scenario,trial,seed,jitter_rel,rho,snr_db,mode,sjdr_pre,sjdr_post,sinadr_pre,sinadr_post,avg_rmsd";

// Magic line, config hash line, optional timestamp line, header, rows.
void write_csv(std::ostream& out, const std::vector<CellResult>& rows, const std::string& hash,
               const std::optional<std::string>& timestamp);
// SchemaError on a missing magic line, a different header or a malformed row.
// The config hash line, when present, is stored in *hash.
std::vector<CellResult> read_csv(std::istream& in, std::string* hash = nullptr);

struct Stat {
    double mean = 0.0;
    double std = 0.0;  // sample standard deviation, 0 for a single value
    std::size_t count = 0;
};

// Order-independent: values are sorted before accumulation.
Stat summarize(std::vector<double> values);

struct AggregatePoint {
    std::string scenario;
    double jitter_rel = 0.0;
    double rho = 0.0;
    double snr_db = 0.0;
    std::string mode;
    Stat sjdr_pre, sjdr_post, sinadr_pre, sinadr_post, avg_rmsd;
};

// Groups rows by (scenario, jitter_rel, snr_db, mode, rho), in that order.
std::vector<AggregatePoint> aggregate(const std::vector<CellResult>& rows);
json aggregate_json(const std::vector<AggregatePoint>& points, const std::string& hash);

// fig_sjdr.csv, fig_sinadr.csv, fig_rmsd.csv: metric against pilot fraction.
void write_plot_data(const std::filesystem::path& dir, const std::vector<AggregatePoint>& points);

}  // namespace jitterlab
