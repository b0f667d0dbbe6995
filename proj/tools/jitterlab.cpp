#include <jitterlab/errors.hpp>
#include <jitterlab/expcli.hpp>

#include <CLI11.hpp>

#include <chrono>
#include <ctime>
#include <filesystem>
#include <fstream>
#include <iostream>

namespace fs = std::filesystem;
using namespace jitterlab;

namespace {

int fail(const char* kind, const std::string& message, int code) {
    json err = {{"error", {{"kind", kind}, {"message", message}}}};
    std::cerr << err.dump() << '\n';
    return code;
}

std::string utc_now() {
    const std::time_t t = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
    std::tm tm{};
    gmtime_r(&t, &tm);
    char buf[32];
    std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
    return buf;
}

void write_text(const fs::path& path, const std::string& text) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw Error("cannot write " + path.string());
    out << text;
}

void write_summary(const fs::path& dir, const std::vector<CellResult>& rows, const std::string& hash) {
    const auto points = aggregate(rows);
    write_text(dir / "aggregate.json", aggregate_json(points, hash).dump(2) + "\n");
    write_plot_data(dir, points);
}

int cmd_run(const std::string& config_path, std::string out_dir, unsigned threads, bool dry_run, bool no_timestamp) {
    const ExperimentConfig cfg = load_config(config_path);
    if (dry_run) {
        json plan = plan_json(cfg);
        plan["threads"] = threads;
        std::cout << plan.dump(2) << '\n';
        return 0;
    }
    if (out_dir.empty()) out_dir = "results/" + cfg.scenario;
    fs::create_directories(out_dir);
    const auto t0 = std::chrono::steady_clock::now();
    const RunOutput res = run_experiment(cfg, threads);
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    const std::string hash = config_hash(cfg);
    {
        std::ofstream csv(fs::path(out_dir) / "results.csv", std::ios::binary);
        if (!csv) throw Error("cannot write results.csv under " + out_dir);
        write_csv(csv, res.rows, hash, no_timestamp ? std::nullopt : std::optional(utc_now()));
    }
    write_summary(out_dir, res.rows, hash);
    write_text(fs::path(out_dir) / "config.resolved.json", config_to_json(cfg).dump(2) + "\n");
    write_text(fs::path(out_dir) / "model.json", to_json(resolved_model(cfg)).dump(2) + "\n");
    for (const auto& w : res.warnings) std::cerr << "warning: " << w << '\n';
    std::cout << cfg.scenario << ": " << res.rows.size() << " rows in " << secs << " s -> " << out_dir << '\n';
    return 0;
}

int cmd_report(const std::vector<std::string>& inputs, const std::string& out_dir) {
    std::vector<CellResult> rows;
    std::string hash;
    for (const auto& path : inputs) {
        std::ifstream in(path);
        if (!in) throw ConfigError("cannot open " + path);
        std::string h;
        auto part = read_csv(in, &h);
        if (hash.empty())
            hash = h;
        else if (h != hash)
            hash = "mixed";
        rows.insert(rows.end(), part.begin(), part.end());
    }
    fs::create_directories(out_dir);
    write_summary(out_dir, rows, hash);
    std::cout << rows.size() << " rows from " << inputs.size() << " file(s) -> " << out_dir << '\n';
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"VAR(1) clock-jitter simulation, tracking and compensation sweeps"};
    app.require_subcommand(1);

    std::string config_path, out_dir;
    unsigned threads = 0;
    bool dry_run = false, no_timestamp = false;
    auto* run = app.add_subcommand("run", "run a Monte Carlo sweep from a JSON config");
    run->add_option("--config", config_path, "experiment config (JSON)")->required()->check(CLI::ExistingFile);
    run->add_option("--out", out_dir, "output directory (default results/<scenario>)");
    run->add_option("--threads", threads, "worker threads, 0 = all cores");
    run->add_flag("--dry-run", dry_run, "print the resolved plan and exit");
    run->add_flag("--no-timestamp", no_timestamp, "omit the timestamp line from the CSV");

    std::vector<std::string> inputs;
    std::string report_out;
    auto* report = app.add_subcommand("report", "aggregate result CSVs into summary and plot data");
    report->add_option("csv", inputs, "result CSV files")->required()->check(CLI::ExistingFile);
    report->add_option("--out", report_out, "output directory")->required();

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        return app.exit(e);
    }

    try {
        if (*run) return cmd_run(config_path, out_dir, threads, dry_run, no_timestamp);
        return cmd_report(inputs, report_out);
    } catch (const ConfigError& e) {
        return fail(e.kind(), e.what(), 2);
    } catch (const SchemaError& e) {
        return fail(e.kind(), e.what(), 2);
    } catch (const Error& e) {
        return fail(e.kind(), e.what(), 1);
    } catch (const std::exception& e) {
        return fail("Exception", e.what(), 1);
    }
}
