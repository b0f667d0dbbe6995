#include <jitterlab/expcli.hpp>

#include <jitterlab/errors.hpp>

#include <algorithm>
#include <atomic>
#include <cctype>
#include <charconv>
#include <cmath>
#include <exception>
#include <fstream>
#include <limits>
#include <istream>
#include <map>
#include <mutex>
#include <ostream>
#include <set>
#include <sstream>
#include <thread>
#include <tuple>

namespace jitterlab {

namespace {

const std::set<std::string> kTopKeys{"scenario", "channels", "samples",   "n_fft",  "fs",
                                     "active_carriers", "jitter", "pilot_freq", "snap_pilot_to_bin",
                                     "w_bp",     "rho",      "snr_db",    "trials", "seed",
                                     "sampling", "modes",    "noise_policy"};
const std::set<std::string> kVarKeys{"model", "jitter_rel", "correlation", "a", "model_seed"};
const std::set<std::string> kTiAdcKeys{"model", "phi", "sigma_rel"};

void reject_unknown(const json& j, const std::set<std::string>& allowed, const std::string& where) {
    for (const auto& [k, v] : j.items())
        if (!allowed.contains(k)) throw SchemaError(where + ": unknown key '" + k + "'");
}

double get_number(const json& j, const std::string& key) {
    if (!j.is_number()) throw SchemaError("config." + key + ": expected a number");
    return j.get<double>();
}

std::size_t get_count(const json& j, const std::string& key) {
    if (!j.is_number_integer() || (!j.is_number_unsigned() && j.get<std::int64_t>() < 0))
        throw SchemaError("config." + key + ": expected a non-negative integer");
    return j.get<std::size_t>();
}

// A scalar is broadcast to `n` entries; an array must have n entries.
std::vector<double> get_list(const json& j, const std::string& key, std::size_t n) {
    if (j.is_number()) return std::vector<double>(n, j.get<double>());
    if (!j.is_array()) throw SchemaError("config." + key + ": expected a number or an array of numbers");
    std::vector<double> out;
    for (const auto& v : j) out.push_back(get_number(v, key));
    if (n && out.size() != n)
        throw ConfigError("config." + key + ": expected " + std::to_string(n) + " entries, got " +
                          std::to_string(out.size()));
    return out;
}

std::vector<double> get_sweep(const json& j, const std::string& key) {
    if (!j.is_array()) throw SchemaError("config." + key + ": expected an array of numbers");
    return get_list(j, key, 0);
}

std::string get_string(const json& j, const std::string& key) {
    if (!j.is_string()) throw SchemaError("config." + key + ": expected a string");
    return j.get<std::string>();
}

double parse_num(std::string_view s) {
    if (s == "inf") return std::numeric_limits<double>::infinity();
    if (s == "-inf") return -std::numeric_limits<double>::infinity();
    if (s == "nan") return std::numeric_limits<double>::quiet_NaN();
    double v = 0.0;
    auto [p, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
    if (ec != std::errc() || p != s.data() + s.size()) throw SchemaError("csv: bad number '" + std::string(s) + "'");
    return v;
}

std::uint64_t parse_uint(std::string_view s) {
    std::uint64_t v = 0;
    auto [p, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
    if (ec != std::errc() || p != s.data() + s.size()) throw SchemaError("csv: bad integer '" + std::string(s) + "'");
    return v;
}

std::vector<std::string_view> split(std::string_view line) {
    std::vector<std::string_view> out;
    std::size_t start = 0;
    for (;;) {
        const auto pos = line.find(',', start);
        out.push_back(line.substr(start, pos - start));
        if (pos == std::string_view::npos) break;
        start = pos + 1;
    }
    return out;
}

json stat_json(const Stat& s) {
    auto num = [](double v) { return std::isfinite(v) ? json(v) : json(format_double(v)); };
    return {{"mean", num(s.mean)}, {"std", num(s.std)}, {"count", s.count}};
}

struct Unit {
    std::size_t i_rho, i_snr, trial;
};

}  // namespace

void ExperimentConfig::validate() const {
    if (scenario.empty() || !std::all_of(scenario.begin(), scenario.end(), [](unsigned char ch) {
            return std::isalnum(ch) || ch == '_' || ch == '-' || ch == '.';
        }))
        throw ConfigError("config.scenario must be a non-empty [A-Za-z0-9_.-] name");
    if (channels == 0) throw ConfigError("config.channels must be positive");
    if (samples < 2) throw ConfigError("config.samples must be at least 2");
    if (fs.size() != channels || pilot_freq.size() != channels)
        throw ConfigError("config: fs and pilot_freq need one entry per channel");
    for (double f : fs)
        if (!(f > 0.0)) throw ConfigError("config.fs must be positive");
    if (rho.empty() || snr_db.empty() || modes.empty() || trials == 0)
        throw ConfigError("config: rho, snr_db, modes and trials must be non-empty");
    for (double r : rho)
        if (!(r > 0.0 && r < 1.0)) throw ConfigError("config.rho entries must lie in (0, 1)");
    for (double s : snr_db)
        if (!std::isfinite(s)) throw ConfigError("config.snr_db entries must be finite");
    if (!(w_bp > 0.0)) throw ConfigError("config.w_bp must be positive");
    const std::size_t nf = n_fft ? n_fft : samples;
    if (active_lo == 0 || active_lo > active_hi || active_hi >= nf)
        throw ConfigError("config.active_carriers must satisfy 0 < lo <= hi < n_fft");
    if (jitter.kind == JitterKind::var) {
        if (!(jitter.jitter_rel > 0.0)) throw ConfigError("config.jitter.jitter_rel must be positive");
        if (!(jitter.correlation > -1.0 / static_cast<double>(channels) && jitter.correlation < 1.0))
            throw ConfigError("config.jitter.correlation must keep Xi_0 positive definite");
        if (jitter.a.size() != channels) throw ConfigError("config.jitter.a needs one entry per channel");
        for (double a : jitter.a)
            if (!(std::abs(a) < 1.0)) throw ConfigError("config.jitter.a entries must satisfy |a| < 1");
    } else {
        if (!(jitter.phi > 0.0 && jitter.phi < 1.0)) throw ConfigError("config.jitter.phi must lie in (0, 1)");
        if (!(jitter.sigma_rel > 0.0)) throw ConfigError("config.jitter.sigma_rel must be positive");
        if (std::any_of(fs.begin(), fs.end(), [&](double f) { return f != fs[0]; }))
            throw ConfigError("config: a time-interleaved array needs one common sub-converter rate");
        if (std::any_of(pilot_freq.begin(), pilot_freq.end(), [&](double f) { return f != pilot_freq[0]; }))
            throw ConfigError("config: a time-interleaved array samples one waveform with one pilot");
    }
    const auto pilots = resolved_pilots(*this);
    for (std::size_t m = 0; m < channels; ++m) {
        const double wp = static_cast<double>((active_hi + 1) / 2) * fs[m] / static_cast<double>(nf);
        if (!(pilots[m] - w_bp > wp))
            throw ConfigError("config: channel " + std::to_string(m) + " pilot band [" +
                              format_double(pilots[m] - w_bp) + ", " + format_double(pilots[m] + w_bp) +
                              "] Hz reaches the payload band (W_p = " + format_double(wp) + " Hz)");
        if (!(pilots[m] + w_bp < 0.5 * fs[m]))
            throw ConfigError("config: channel " + std::to_string(m) + " pilot band exceeds fs/2");
    }
}

ExperimentConfig parse_config(const json& j) {
    if (!j.is_object()) throw SchemaError("config: expected a JSON object");
    reject_unknown(j, kTopKeys, "config");
    for (const char* key : {"scenario", "fs", "active_carriers", "jitter", "pilot_freq", "rho", "snr_db"})
        if (!j.contains(key)) throw SchemaError(std::string("config: missing key '") + key + "'");

    ExperimentConfig c;
    c.scenario = get_string(j["scenario"], "scenario");
    if (j.contains("channels")) c.channels = get_count(j["channels"], "channels");
    if (j.contains("samples")) c.samples = get_count(j["samples"], "samples");
    if (j.contains("n_fft")) c.n_fft = get_count(j["n_fft"], "n_fft");
    c.fs = get_list(j["fs"], "fs", c.channels);
    const auto& ac = j["active_carriers"];
    if (!ac.is_array() || ac.size() != 2) throw SchemaError("config.active_carriers: expected [lo, hi]");
    c.active_lo = get_count(ac[0], "active_carriers");
    c.active_hi = get_count(ac[1], "active_carriers");
    c.pilot_freq = get_list(j["pilot_freq"], "pilot_freq", c.channels);
    if (j.contains("snap_pilot_to_bin")) {
        if (!j["snap_pilot_to_bin"].is_boolean()) throw SchemaError("config.snap_pilot_to_bin: expected a boolean");
        c.snap_pilot_to_bin = j["snap_pilot_to_bin"].get<bool>();
    }
    if (j.contains("w_bp")) c.w_bp = get_number(j["w_bp"], "w_bp");
    c.rho = get_sweep(j["rho"], "rho");
    c.snr_db = get_sweep(j["snr_db"], "snr_db");
    if (j.contains("trials")) c.trials = get_count(j["trials"], "trials");
    if (j.contains("seed")) c.seed = get_count(j["seed"], "seed");
    if (j.contains("sampling")) c.sampling = parse_sampling_mode(get_string(j["sampling"], "sampling"));
    if (j.contains("modes")) {
        if (!j["modes"].is_array()) throw SchemaError("config.modes: expected an array of strings");
        c.modes.clear();
        for (const auto& m : j["modes"]) c.modes.push_back(parse_tracker_mode(get_string(m, "modes")));
    }
    if (j.contains("noise_policy")) c.noise_policy = parse_noise_policy(get_string(j["noise_policy"], "noise_policy"));

    const auto& jb = j["jitter"];
    if (!jb.is_object()) throw SchemaError("config.jitter: expected an object");
    const std::string kind = jb.contains("model") ? get_string(jb["model"], "jitter.model") : "var";
    if (kind == "var") {
        reject_unknown(jb, kVarKeys, "config.jitter");
        c.jitter.kind = JitterKind::var;
        if (jb.contains("jitter_rel")) c.jitter.jitter_rel = get_number(jb["jitter_rel"], "jitter.jitter_rel");
        if (jb.contains("correlation")) c.jitter.correlation = get_number(jb["correlation"], "jitter.correlation");
        c.jitter.a = jb.contains("a") ? get_list(jb["a"], "jitter.a", c.channels) : std::vector<double>(c.channels, 0.99);
        if (jb.contains("model_seed")) c.jitter.model_seed = get_count(jb["model_seed"], "jitter.model_seed");
    } else if (kind == "tiadc") {
        reject_unknown(jb, kTiAdcKeys, "config.jitter");
        c.jitter.kind = JitterKind::tiadc;
        if (jb.contains("phi")) c.jitter.phi = get_number(jb["phi"], "jitter.phi");
        if (jb.contains("sigma_rel")) c.jitter.sigma_rel = get_number(jb["sigma_rel"], "jitter.sigma_rel");
    } else {
        throw ConfigError("config.jitter.model: unknown model '" + kind + "' (expected var|tiadc)");
    }
    c.validate();
    return c;
}

ExperimentConfig load_config(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot open config file " + path.string());
    json j;
    try {
        j = json::parse(in);
    } catch (const json::parse_error& e) {
        throw SchemaError(path.string() + ": " + e.what());
    }
    return parse_config(j);
}

json config_to_json(const ExperimentConfig& c) {
    json modes = json::array();
    for (auto m : c.modes) modes.push_back(to_string(m));
    json jit;
    if (c.jitter.kind == JitterKind::var)
        jit = {{"model", "var"},
               {"jitter_rel", c.jitter.jitter_rel},
               {"correlation", c.jitter.correlation},
               {"a", c.jitter.a},
               {"model_seed", c.jitter.model_seed}};
    else
        jit = {{"model", "tiadc"}, {"phi", c.jitter.phi}, {"sigma_rel", c.jitter.sigma_rel}};
    return {{"scenario", c.scenario},
            {"channels", c.channels},
            {"samples", c.samples},
            {"n_fft", c.n_fft ? c.n_fft : c.samples},
            {"fs", c.fs},
            {"active_carriers", {c.active_lo, c.active_hi}},
            {"jitter", jit},
            {"pilot_freq", c.pilot_freq},
            {"snap_pilot_to_bin", c.snap_pilot_to_bin},
            {"w_bp", c.w_bp},
            {"rho", c.rho},
            {"snr_db", c.snr_db},
            {"trials", c.trials},
            {"seed", c.seed},
            {"sampling", to_string(c.sampling)},
            {"modes", modes},
            {"noise_policy", to_string(c.noise_policy)}};
}

std::string config_hash(const ExperimentConfig& cfg) {
    std::uint64_t h = 0xcbf29ce484222325ULL;
    for (unsigned char ch : config_to_json(cfg).dump()) {
        h ^= ch;
        h *= 0x100000001b3ULL;
    }
    std::ostringstream os;
    os << std::hex;
    os.width(16);
    os.fill('0');
    os << h;
    return os.str();
}

std::vector<double> resolved_pilots(const ExperimentConfig& cfg) {
    std::vector<double> out = cfg.pilot_freq;
    if (!cfg.snap_pilot_to_bin) return out;
    for (std::size_t m = 0; m < out.size() && m < cfg.fs.size(); ++m) {
        const double df = cfg.fs[m] / static_cast<double>(cfg.samples);
        out[m] = std::round(out[m] / df) * df;
    }
    return out;
}

VarModel resolved_model(const ExperimentConfig& cfg) {
    if (cfg.jitter.kind == JitterKind::tiadc) {
        const double ts = 1.0 / cfg.fs[0];
        const MatR sigma = MatR::identity(cfg.channels) * std::pow(cfg.jitter.sigma_rel * ts, 2);
        return build_tiadc(cfg.channels, cfg.jitter.phi, sigma).var_model();
    }
    // Prescribed per-channel std jitter_rel * T_s^(m), common correlation.
    MatR xi0 = equicorrelated_cov(cfg.channels, 1.0, cfg.jitter.correlation);
    for (std::size_t i = 0; i < cfg.channels; ++i)
        for (std::size_t k = 0; k < cfg.channels; ++k)
            xi0(i, k) *= cfg.jitter.jitter_rel * cfg.jitter.jitter_rel / (cfg.fs[i] * cfg.fs[k]);
    return build_correlated_model(xi0, cfg.jitter.a, cfg.jitter.model_seed);
}

json plan_json(const ExperimentConfig& cfg) {
    const std::size_t units = cfg.rho.size() * cfg.snr_db.size() * cfg.trials;
    const double n = static_cast<double>(cfg.samples), m = static_cast<double>(cfg.channels);
    // Per in-flight trace: six complex records plus jitter, and the tracker's
    // four covariance sequences.
    const double per_unit = n * m * (6 * 16 + 8 + 3 * 16) + 4 * n * m * m * 8;
    return {{"scenario", cfg.scenario},
            {"config_hash", config_hash(cfg)},
            {"cells", cfg.cells()},
            {"traces", units},
            {"csv_rows", cfg.cells()},
            {"pilot_freq_resolved", resolved_pilots(cfg)},
            {"estimated_bytes_per_worker", static_cast<std::uint64_t>(per_unit)},
            {"config", config_to_json(cfg)}};
}

RunOutput run_experiment(const ExperimentConfig& cfg, unsigned threads) {
    cfg.validate();
    const VarModel model = resolved_model(cfg);
    const auto pilots = resolved_pilots(cfg);
    const std::size_t nf = cfg.n_fft ? cfg.n_fft : cfg.samples;
    const std::size_t n_snr = cfg.snr_db.size(), n_modes = cfg.modes.size();

    std::vector<BandPassSpec> bp;
    for (std::size_t m = 0; m < cfg.channels; ++m) bp.push_back({pilots[m], cfg.w_bp, cfg.fs[m]});

    std::vector<Unit> units;
    for (std::size_t r = 0; r < cfg.rho.size(); ++r)
        for (std::size_t s = 0; s < n_snr; ++s)
            for (std::size_t t = 0; t < cfg.trials; ++t) units.push_back({r, s, t});

    // Reported jitter level: the configured one, or the realized mean
    // per-channel std over T_s for a Ti-ADC chain.
    double jrel = cfg.jitter.jitter_rel;
    if (cfg.jitter.kind == JitterKind::tiadc) {
        const MatR xi0 = steady_state_cov(model);
        jrel = 0.0;
        for (std::size_t m = 0; m < cfg.channels; ++m) jrel += std::sqrt(xi0(m, m)) * cfg.fs[m];
        jrel /= static_cast<double>(cfg.channels);
    }

    RunOutput out;
    out.rows.resize(cfg.cells());
    std::mutex warn_mutex;
    std::set<std::string> warnings;

    auto work = [&](const Unit& u) {
        const std::uint64_t seed = cfg.seed + u.trial;
        const double rho = cfg.rho[u.i_rho];
        std::vector<ChannelSpec> specs;
        if (cfg.jitter.kind == JitterKind::tiadc) {
            auto ref = make_ofdm_specs({1, nf, cfg.active_lo, cfg.active_hi, cfg.fs[0], pilots[0], rho}, seed);
            specs = make_interleaved_specs(ref[0], cfg.channels);
        } else {
            for (std::size_t m = 0; m < cfg.channels; ++m) {
                // Channel m draws from stream 100 + m of the trial seed even
                // when rates differ.
                auto one = make_ofdm_specs({m + 1, nf, cfg.active_lo, cfg.active_hi, cfg.fs[m], pilots[m], rho}, seed);
                specs.push_back(std::move(one[m]));
            }
        }
        const MatR sw = MatR::identity(cfg.channels) * std::pow(10.0, -cfg.snr_db[u.i_snr] / 10.0);
        const SampleTrace tr = sample_jittered(specs, model, sw, cfg.samples, seed, cfg.sampling);
        if (!tr.warnings.empty()) {
            std::lock_guard lock(warn_mutex);
            warnings.insert(tr.warnings.begin(), tr.warnings.end());
        }
        for (std::size_t k = 0; k < n_modes; ++k) {
            const auto res = compensate(tr, model, sw, bp, {cfg.modes[k], cfg.noise_policy});
            const std::size_t cell = ((u.i_rho * n_snr + u.i_snr) * n_modes + k) * cfg.trials + u.trial;
            out.rows[cell] = {cell,
                              cfg.scenario,
                              u.trial,
                              seed,
                              jrel,
                              rho,
                              cfg.snr_db[u.i_snr],
                              to_string(cfg.modes[k]),
                              res.metrics.sjdr_pre,
                              res.metrics.sjdr_post,
                              res.metrics.sinadr_pre,
                              res.metrics.sinadr_post,
                              res.metrics.avg_rmsd};
        }
    };

    if (threads == 0) threads = std::max(1u, std::thread::hardware_concurrency());
    threads = static_cast<unsigned>(std::min<std::size_t>(threads, units.size()));
    std::atomic<std::size_t> next{0};
    std::exception_ptr failure;
    std::mutex fail_mutex;
    auto worker = [&] {
        for (std::size_t i; (i = next.fetch_add(1)) < units.size();) {
            try {
                work(units[i]);
            } catch (...) {
                std::lock_guard lock(fail_mutex);
                if (!failure) failure = std::current_exception();
                next = units.size();
            }
        }
    };
    if (threads <= 1) {
        worker();
    } else {
        std::vector<std::thread> pool;
        for (unsigned t = 0; t < threads; ++t) pool.emplace_back(worker);
        for (auto& th : pool) th.join();
    }
    if (failure) std::rethrow_exception(failure);
    out.warnings.assign(warnings.begin(), warnings.end());
    return out;
}

void write_csv(std::ostream& out, const std::vector<CellResult>& rows, const std::string& hash,
               const std::optional<std::string>& timestamp) {
    out << kCsvMagic << '\n' << "# config_hash=" << hash << '\n';
    if (timestamp) out << "# generated=" << *timestamp << '\n';
    out << kCsvHeader << '\n';
    for (const auto& r : rows)
        out << r.cell << ',' << r.scenario << ',' << r.trial << ',' << r.seed << ',' << format_double(r.jitter_rel)
            << ',' << format_double(r.rho) << ',' << format_double(r.snr_db) << ',' << r.mode << ','
            << format_double(r.sjdr_pre) << ',' << format_double(r.sjdr_post) << ',' << format_double(r.sinadr_pre)
            << ',' << format_double(r.sinadr_post) << ',' << format_double(r.avg_rmsd) << '\n';
}

std::vector<CellResult> read_csv(std::istream& in, std::string* hash) {
    std::string line;
    if (!std::getline(in, line) || line != kCsvMagic) throw SchemaError("csv: missing '" + std::string(kCsvMagic) + "' line");
    while (std::getline(in, line) && line.starts_with('#'))
        if (hash && line.starts_with("# config_hash=")) *hash = line.substr(14);
    if (line != kCsvHeader) throw SchemaError("csv: unexpected header '" + line + "'");
    std::vector<CellResult> rows;
    std::size_t lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        if (line.empty()) continue;
        const auto f = split(line);
        if (f.size() != 13) throw SchemaError("csv: row " + std::to_string(lineno) + " has " + std::to_string(f.size()) + " fields");
        CellResult r;
        r.cell = parse_uint(f[0]);
        r.scenario = std::string(f[1]);
        r.trial = parse_uint(f[2]);
        r.seed = parse_uint(f[3]);
        r.jitter_rel = parse_num(f[4]);
        r.rho = parse_num(f[5]);
        r.snr_db = parse_num(f[6]);
        r.mode = std::string(f[7]);
        r.sjdr_pre = parse_num(f[8]);
        r.sjdr_post = parse_num(f[9]);
        r.sinadr_pre = parse_num(f[10]);
        r.sinadr_post = parse_num(f[11]);
        r.avg_rmsd = parse_num(f[12]);
        rows.push_back(std::move(r));
    }
    return rows;
}

Stat summarize(std::vector<double> values) {
    Stat s;
    s.count = values.size();
    if (values.empty()) return s;
    std::sort(values.begin(), values.end());
    double sum = 0.0;
    for (double v : values) sum += v;
    s.mean = sum / static_cast<double>(values.size());
    if (values.size() > 1) {
        double ss = 0.0;
        for (double v : values) ss += (v - s.mean) * (v - s.mean);
        s.std = std::sqrt(ss / static_cast<double>(values.size() - 1));
    }
    if (!std::isfinite(s.mean)) s.std = 0.0;
    return s;
}

std::vector<AggregatePoint> aggregate(const std::vector<CellResult>& rows) {
    using Key = std::tuple<std::string, double, double, std::string, double>;
    std::map<Key, std::vector<const CellResult*>> groups;
    for (const auto& r : rows) groups[{r.scenario, r.jitter_rel, r.snr_db, r.mode, r.rho}].push_back(&r);
    std::vector<AggregatePoint> out;
    for (const auto& [key, members] : groups) {
        AggregatePoint p;
        std::tie(p.scenario, p.jitter_rel, p.snr_db, p.mode, p.rho) = key;
        auto col = [&](double CellResult::*f) {
            std::vector<double> v;
            for (const auto* r : members) v.push_back(r->*f);
            return summarize(std::move(v));
        };
        p.sjdr_pre = col(&CellResult::sjdr_pre);
        p.sjdr_post = col(&CellResult::sjdr_post);
        p.sinadr_pre = col(&CellResult::sinadr_pre);
        p.sinadr_post = col(&CellResult::sinadr_post);
        p.avg_rmsd = col(&CellResult::avg_rmsd);
        out.push_back(std::move(p));
    }
    return out;
}

json aggregate_json(const std::vector<AggregatePoint>& points, const std::string& hash) {
    json arr = json::array();
    for (const auto& p : points)
        arr.push_back({{"scenario", p.scenario},
                       {"jitter_rel", p.jitter_rel},
                       {"rho", p.rho},
                       {"snr_db", p.snr_db},
                       {"mode", p.mode},
                       {"sjdr_pre", stat_json(p.sjdr_pre)},
                       {"sjdr_post", stat_json(p.sjdr_post)},
                       {"sinadr_pre", stat_json(p.sinadr_pre)},
                       {"sinadr_post", stat_json(p.sinadr_post)},
                       {"avg_rmsd", stat_json(p.avg_rmsd)}});
    return {{"schema", "jitterlab-aggregate v1"}, {"config_hash", hash}, {"points", std::move(arr)}};
}

void write_plot_data(const std::filesystem::path& dir, const std::vector<AggregatePoint>& points) {
    std::ofstream sj(dir / "fig_sjdr.csv"), si(dir / "fig_sinadr.csv"), rm(dir / "fig_rmsd.csv");
    if (!sj || !si || !rm) throw Error("cannot write plot data under " + dir.string());
    const char* head = "scenario,jitter_rel,snr_db,mode,rho,count,pre_mean,pre_std,post_mean,post_std\n";
    sj << head;
    si << head;
    rm << "scenario,jitter_rel,snr_db,mode,rho,count,mean,std\n";
    auto lead = [](std::ostream& o, const AggregatePoint& p) -> std::ostream& {
        return o << p.scenario << ',' << format_double(p.jitter_rel) << ',' << format_double(p.snr_db) << ',' << p.mode
                 << ',' << format_double(p.rho) << ',' << p.sjdr_pre.count << ',';
    };
    for (const auto& p : points) {
        lead(sj, p) << format_double(p.sjdr_pre.mean) << ',' << format_double(p.sjdr_pre.std) << ','
                    << format_double(p.sjdr_post.mean) << ',' << format_double(p.sjdr_post.std) << '\n';
        lead(si, p) << format_double(p.sinadr_pre.mean) << ',' << format_double(p.sinadr_pre.std) << ','
                    << format_double(p.sinadr_post.mean) << ',' << format_double(p.sinadr_post.std) << '\n';
        lead(rm, p) << format_double(p.avg_rmsd.mean) << ',' << format_double(p.avg_rmsd.std) << '\n';
    }
}

}  // namespace jitterlab
