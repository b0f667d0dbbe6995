#include "support.hpp"

#include <jitterlab/expcli.hpp>

#include <doctest.h>

#include <algorithm>
#include <fstream>
#include <random>
#include <sstream>

using namespace jitterlab;

namespace {

json tiny_json() {
    return json::parse(R"({
      "scenario": "tiny",
      "channels": 2,
      "samples": 1024,
      "fs": 100e6,
      "active_carriers": [100, 120],
      "jitter": {"jitter_rel": 0.01, "correlation": 0.9, "a": 0.95},
      "pilot_freq": 30e6,
      "rho": [0.05, 0.5],
      "snr_db": [40],
      "trials": 3,
      "seed": 11,
      "modes": ["mimo", "siso"]
    })");
}

CellResult row(const std::string& mode, double rho, double v) {
    CellResult r;
    r.scenario = "s";
    r.mode = mode;
    r.rho = rho;
    r.jitter_rel = 0.01;
    r.snr_db = 40;
    r.sjdr_pre = v;
    r.sjdr_post = v + 1;
    r.sinadr_pre = v;
    r.sinadr_post = v;
    r.avg_rmsd = 1e-12 * v;
    return r;
}

}  // namespace

TEST_CASE("config parsing and defaults") {
    const ExperimentConfig c = parse_config(tiny_json());
    CHECK(c.fs == std::vector<double>{100e6, 100e6});
    CHECK(c.jitter.a == std::vector<double>{0.95, 0.95});
    CHECK(c.jitter.model_seed == 7);
    CHECK(c.w_bp == 2e6);
    CHECK(c.noise_policy == NoisePolicy::in_band_psd);
    CHECK(c.sampling == SamplingMode::exact);
    CHECK(c.cells() == 2 * 1 * 2 * 3);

    const auto pilots = resolved_pilots(c);
    const double df = 100e6 / 1024;
    CHECK(pilots[0] == doctest::Approx(std::round(30e6 / df) * df));
    CHECK(std::abs(std::fmod(pilots[1] / df, 1.0)) <= 1e-9);

    const VarModel m = resolved_model(c);
    const MatR xi0 = steady_state_cov(m);
    CHECK(std::sqrt(xi0(0, 0)) * 100e6 == doctest::Approx(0.01).epsilon(1e-8));
    CHECK(xi0(0, 1) / xi0(0, 0) == doctest::Approx(0.9).epsilon(1e-8));

    CHECK(parse_config(config_to_json(c)).cells() == c.cells());
    CHECK(config_hash(parse_config(config_to_json(c))) == config_hash(c));
    CHECK(config_hash(c).size() == 16);
    ExperimentConfig d = c;
    d.seed = 12;
    CHECK(config_hash(d) != config_hash(c));
}

TEST_CASE("config errors") {
    auto with = [](const char* key, json v) {
        json j = tiny_json();
        j[key] = std::move(v);
        return j;
    };
    CHECK_THROWS_AS(parse_config(with("colour", 1)), SchemaError);
    CHECK_THROWS_AS(parse_config(with("trials", "many")), SchemaError);
    CHECK_THROWS_AS(parse_config(with("trials", -1)), SchemaError);
    CHECK_THROWS_AS(parse_config(with("fs", json::array({1e8, 1e8, 1e8}))), ConfigError);
    json missing = tiny_json();
    missing.erase("rho");
    CHECK_THROWS_AS(parse_config(missing), SchemaError);
    CHECK_THROWS_AS(parse_config(json::array()), SchemaError);

    CHECK_THROWS_AS(parse_config(with("rho", json::array({0.5, 1.0}))), ConfigError);
    CHECK_THROWS_AS(parse_config(with("scenario", "a b")), ConfigError);
    CHECK_THROWS_AS(parse_config(with("pilot_freq", 2.5e6)), ConfigError);
    CHECK_THROWS_AS(parse_config(with("pilot_freq", 49e6)), ConfigError);
    CHECK_THROWS_AS(parse_config(with("active_carriers", json::array({0, 10}))), ConfigError);
    CHECK_THROWS_AS(parse_config(with("modes", json::array({"joint"}))), ConfigError);

    json ti = tiny_json();
    ti["jitter"] = {{"model", "tiadc"}, {"phi", 0.9}};
    CHECK_NOTHROW(parse_config(ti));
    ti["fs"] = json::array({100e6, 90e6});
    CHECK_THROWS_AS(parse_config(ti), ConfigError);
    ti["fs"] = 100e6;
    ti["jitter"]["phi"] = 1.0;
    CHECK_THROWS_AS(parse_config(ti), ConfigError);
    ti["jitter"] = {{"model", "spline"}};
    CHECK_THROWS_AS(parse_config(ti), ConfigError);
    ti["jitter"] = {{"model", "tiadc"}, {"a", 0.5}};
    CHECK_THROWS_AS(parse_config(ti), SchemaError);

    CHECK_THROWS_AS(load_config("/nonexistent/config.json"), ConfigError);
}

TEST_CASE("shipped configs parse") {
    const std::filesystem::path dir = JITTERLAB_SOURCE_DIR "/configs";
    std::size_t seen = 0;
    for (const auto& e : std::filesystem::directory_iterator(dir)) {
        if (e.path().extension() != ".json") continue;
        CHECK_NOTHROW(load_config(e.path()));
        ++seen;
    }
    CHECK(seen >= 6);
    const ExperimentConfig b = load_config(dir / "baseline.json");
    CHECK(b.cells() == 20 * b.rho.size() * b.snr_db.size());
    CHECK(plan_json(b)["csv_rows"] == b.cells());
}

TEST_CASE("experiment run layout") {
    const ExperimentConfig c = parse_config(tiny_json());
    const json plan = plan_json(c);
    CHECK(plan["cells"] == 12);
    CHECK(plan["traces"] == 6);
    CHECK(plan["config_hash"] == config_hash(c));

    const RunOutput one = run_experiment(c, 1);
    const RunOutput many = run_experiment(c, 3);
    REQUIRE(one.rows.size() == 12);
    for (std::size_t i = 0; i < 12; ++i) {
        const CellResult& r = one.rows[i];
        CHECK(r.cell == i);
        CHECK(r.seed == c.seed + r.trial);
        CHECK(r.mode == (i / 3 % 2 == 0 ? "mimo" : "siso"));
        CHECK(r.scenario == "tiny");
        CHECK(r.sjdr_post == many.rows[i].sjdr_post);
        CHECK(r.avg_rmsd == many.rows[i].avg_rmsd);
    }
    // common random numbers: both modes score the same trace
    CHECK(one.rows[0].sjdr_pre == one.rows[3].sjdr_pre);
    CHECK(one.rows[0].sjdr_post != one.rows[3].sjdr_post);
    CHECK(one.rows[0].sjdr_pre != one.rows[1].sjdr_pre);
}

TEST_CASE("ti-adc experiment reports the realized jitter") {
    json j = tiny_json();
    j["jitter"] = {{"model", "tiadc"}, {"phi", 0.9}, {"sigma_rel", 0.004}};
    j["rho"] = json::array({0.1});
    j["trials"] = 1;
    const ExperimentConfig c = parse_config(j);
    const RunOutput out = run_experiment(c, 1);
    REQUIRE(out.rows.size() == 2);
    const MatR xi0 = steady_state_cov(resolved_model(c));
    const double expect = (std::sqrt(xi0(0, 0)) + std::sqrt(xi0(1, 1))) / 2 * 100e6;
    CHECK(out.rows[0].jitter_rel == doctest::Approx(expect).epsilon(1e-12));
}

TEST_CASE("results CSV") {
    std::vector<CellResult> rows{row("mimo", 0.1, 3.5), row("siso", 0.2, -1.25)};
    rows[1].cell = 1;
    rows[1].trial = 4;
    rows[1].seed = 99;
    rows[1].sjdr_post = std::numeric_limits<double>::infinity();
    std::stringstream ss;
    write_csv(ss, rows, "00ff", std::nullopt);
    const std::string text = ss.str();
    CHECK(text.rfind(std::string(kCsvMagic) + "\n# config_hash=00ff\n" + kCsvHeader + "\n", 0) == 0);

    std::string hash;
    const auto back = read_csv(ss, &hash);
    CHECK(hash == "00ff");
    REQUIRE(back.size() == 2);
    CHECK(back[1].seed == 99);
    CHECK(back[1].trial == 4);
    CHECK(back[1].mode == "siso");
    CHECK(back[1].sinadr_pre == -1.25);
    CHECK(back[1].sjdr_post == std::numeric_limits<double>::infinity());
    CHECK(back[0].avg_rmsd == rows[0].avg_rmsd);

    std::stringstream stamped;
    write_csv(stamped, rows, "00ff", std::string("2026-01-01T00:00:00Z"));
    CHECK(read_csv(stamped).size() == 2);

    auto fails = [](const std::string& s) {
        std::istringstream in(s);
        CHECK_THROWS_AS(read_csv(in), SchemaError);
    };
    const std::string head = std::string(kCsvMagic) + "\n# config_hash=0\n" + kCsvHeader + "\n";
    fails("# other-csv v3\n");
    fails(std::string(kCsvMagic) + "\n# config_hash=0\ncell,scenario\n");
    fails(head + "0,s,0,1,0.01,0.1,40,mimo,1,2,3\n");
    fails(head + "0,s,0,1,0.01,0.1,40,mimo,1,2,3,x,5\n");
    fails(head + "0,s,zero,1,0.01,0.1,40,mimo,1,2,3,4,5\n");
}

TEST_CASE("aggregation statistics") {
    const Stat one = summarize({4.0});
    CHECK(one.mean == 4.0);
    CHECK(one.std == 0.0);
    CHECK(one.count == 1);
    const Stat s = summarize({1.0, 2.0, 3.0, 4.0});
    CHECK(s.mean == 2.5);
    CHECK(s.std == doctest::Approx(std::sqrt(5.0 / 3.0)));

    std::vector<double> v;
    std::mt19937_64 g(5);
    std::normal_distribution<double> nd(0.0, 1e3);
    for (int i = 0; i < 1000; ++i) v.push_back(nd(g));
    const Stat a = summarize(v);
    std::shuffle(v.begin(), v.end(), g);
    const Stat b = summarize(v);
    CHECK(a.mean == b.mean);
    CHECK(a.std == b.std);

    std::vector<CellResult> trials;
    for (std::size_t t = 0; t < 100; ++t) {
        trials.push_back(row("mimo", 0.1, nd(g)));
        trials.back().trial = t;
    }
    const auto before = aggregate(trials);
    std::shuffle(trials.begin(), trials.end(), g);
    const auto after = aggregate(trials);
    REQUIRE(after.size() == 1);
    CHECK(after[0].sjdr_pre.count == 100);
    CHECK(after[0].sjdr_pre.mean == before[0].sjdr_pre.mean);
    CHECK(after[0].sjdr_pre.std == before[0].sjdr_pre.std);
    CHECK(after[0].avg_rmsd.mean == before[0].avg_rmsd.mean);

    std::vector<CellResult> part1{row("mimo", 0.1, 1), row("mimo", 0.1, 2), row("siso", 0.1, 5)};
    std::vector<CellResult> part2{row("mimo", 0.1, 3), row("mimo", 0.2, 7)};
    std::vector<CellResult> all = part1;
    all.insert(all.end(), part2.begin(), part2.end());
    const auto pts = aggregate(all);
    REQUIRE(pts.size() == 3);
    std::size_t total = 0;
    for (const auto& p : pts) total += p.sjdr_pre.count;
    CHECK(total == aggregate(part1)[0].sjdr_pre.count + aggregate(part1)[1].sjdr_pre.count +
                       aggregate(part2)[0].sjdr_pre.count + aggregate(part2)[1].sjdr_pre.count);
    const auto it = std::find_if(pts.begin(), pts.end(), [](const AggregatePoint& p) {
        return p.mode == "mimo" && p.rho == 0.1;
    });
    REQUIRE(it != pts.end());
    CHECK(it->sjdr_pre.count == 3);
    CHECK(it->sjdr_pre.mean == 2.0);
    CHECK(it->sjdr_post.mean == 3.0);

    std::reverse(all.begin(), all.end());
    const auto rev = aggregate(all);
    REQUIRE(rev.size() == pts.size());
    for (std::size_t i = 0; i < pts.size(); ++i) {
        CHECK(rev[i].mode == pts[i].mode);
        CHECK(rev[i].sjdr_pre.mean == pts[i].sjdr_pre.mean);
        CHECK(rev[i].avg_rmsd.std == pts[i].avg_rmsd.std);
    }

    const json aj = aggregate_json(pts, "abc");
    CHECK(aj["schema"] == "jitterlab-aggregate v1");
    CHECK(aj["config_hash"] == "abc");
    CHECK(aj["points"].size() == 3);

    const auto dir = std::filesystem::temp_directory_path() / "jitterlab_plot_test";
    std::filesystem::remove_all(dir);
    std::filesystem::create_directories(dir);
    write_plot_data(dir, pts);
    for (const char* f : {"fig_sjdr.csv", "fig_sinadr.csv", "fig_rmsd.csv"}) {
        std::ifstream in(dir / f);
        REQUIRE(in);
        std::string header;
        std::getline(in, header);
        CHECK(header.rfind("scenario,jitter_rel,snr_db,mode,rho,count", 0) == 0);
        int lines = 0;
        for (std::string l; std::getline(in, l);) ++lines;
        CHECK(lines == 3);
    }
    std::filesystem::remove_all(dir);
}
