#include <doctest.h>

#include <cmath>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "sdlc/errors.hpp"
#include "sdlc/harness.hpp"

using namespace sdlc;

TEST_SUITE("harness_cli") {

TEST_CASE("fit_scaling on exact data") {
    std::vector<std::pair<double, double>> ln_data, lnln_data, flat;
    for (double n : {1e3, 1e4, 1e5, 1e6}) {
        ln_data.emplace_back(n, 5 * std::log(n));
        lnln_data.emplace_back(n, 7 * std::log(std::log(n)));
        flat.emplace_back(n, 42.0);
    }
    const ScalingFit a = fit_scaling(ln_data);
    CHECK(a.ln.r2 == doctest::Approx(1.0));
    CHECK(a.ln.b == doctest::Approx(5.0));
    CHECK(a.ln.a == doctest::Approx(0.0).epsilon(1e-9));
    CHECK(a.lnln.r2 < 1.0);

    const ScalingFit b = fit_scaling(lnln_data);
    CHECK(b.lnln.r2 == doctest::Approx(1.0));
    CHECK(b.lnln.b == doctest::Approx(7.0));

    const ScalingFit c = fit_scaling(flat);
    CHECK(c.ln.b == doctest::Approx(0.0));
    CHECK(c.lnln.b == doctest::Approx(0.0));
    CHECK(c.ln.r2 == 1.0);
    CHECK(c.lnln.r2 == 1.0);

    CHECK_THROWS_AS(fit_scaling({{100, 1}, {100, 2}, {100, 3}}), InvalidArgument);
    CHECK_THROWS_AS(fit_scaling({{100, 1}, {1000, 2}}), InvalidArgument);
}

TEST_CASE("config validation") {
    ExperimentConfig c;
    CHECK_NOTHROW(c.validate());
    c.seeds = {1, 1};
    CHECK_THROWS_AS(c.validate(), InvalidArgument);
    c = {};
    c.n_values.clear();
    CHECK_THROWS_AS(c.validate(), InvalidArgument);
    c = {};
    c.delta = 1.0;
    CHECK_THROWS_AS(c.validate(), InvalidArgument);
    c = {};
    c.eps = 0.0;
    CHECK_THROWS_AS(c.validate(), InvalidArgument);
}

TEST_CASE("config JSON round trip and unknown keys") {
    ExperimentConfig c;
    c.mode = Mode::arbitrary;
    c.d_values = {3, 5};
    c.n_values = {100, 200, 400};
    c.seeds = {4, 8};
    c.family = Family::grid;
    c.family_params.gamma = 0.2;
    c.alpha_hat = 0.9;
    const ExperimentConfig back = config_from_json(config_to_json(c));
    CHECK(config_to_json(back) == config_to_json(c));
    CHECK(config_from_json(nlohmann::json{{"d", 7}}).d_values == std::vector<std::size_t>{7});
    CHECK_THROWS_AS(config_from_json(nlohmann::json{{"dimension", 7}}), InvalidArgument);
    CHECK_THROWS_AS(config_from_json(nlohmann::json{{"mode", "fast"}}), InvalidArgument);
    CHECK_THROWS_AS(config_from_json(nlohmann::json{{"family_params", {{"width", 1}}}}), InvalidArgument);
}

TEST_CASE("single cell, single seed gives one summary row") {
    ExperimentConfig c;
    c.d_values = {3};
    c.n_values = {500};
    c.seeds = {11};
    const Report r = run_experiment(c);
    REQUIRE(r.cells.size() == 1);
    CHECK(r.runs.size() == 1);
    CHECK(r.cells[0].runs == 1);
    CHECK(r.fits.empty());
    CHECK(r.cells[0].mean_mistakes == static_cast<double>(r.runs[0].mistakes));
}

TEST_CASE("every configured cell appears once; fits need three n values") {
    ExperimentConfig c;
    c.mode = Mode::baseline;
    c.d_values = {2, 4};
    c.n_values = {100, 300, 900};
    c.seeds = {1, 2, 3};
    c.threads = 3;
    const Report r = run_experiment(c);
    CHECK(r.cells.size() == 6);
    CHECK(r.runs.size() == 18);
    CHECK(r.fits.size() == 2);
    for (const CellSummary& s : r.cells) CHECK(s.runs == 3);
}

TEST_CASE("same config twice gives the same report without runtime fields") {
    for (Mode m : {Mode::sphere, Mode::baseline, Mode::arbitrary}) {
        ExperimentConfig c;
        c.mode = m;
        c.d_values = {4};
        c.n_values = {300, 600, 1200};
        c.seeds = {5, 6};
        c.threads = 2;
        const auto a = report_to_json(run_experiment(c), false).dump();
        c.threads = 1;
        const auto b = report_to_json(run_experiment(c), false).dump();
        CHECK(a == b);
    }
}

TEST_CASE("sphere and baseline cells see the same data for the same seed") {
    ExperimentConfig c;
    c.d_values = {5};
    c.n_values = {400};
    c.seeds = {3};
    c.mode = Mode::baseline;
    c.baseline_init = false;
    const RunRecord base = run_cell(c, 5, 400, 3);
    // Same dataset regardless of mode: the run succeeded and covered every point.
    CHECK_FALSE(base.error);
    CHECK(base.coverage == 1.0);
}

TEST_CASE("arbitrary cells report coverage") {
    ExperimentConfig c;
    c.mode = Mode::arbitrary;
    c.d_values = {3};
    c.n_values = {800};
    c.seeds = {1};
    const Report r = run_experiment(c);
    CHECK(r.runs[0].coverage >= 0.99);
}

TEST_CASE("report and CSV files") {
    ExperimentConfig c;
    c.d_values = {3};
    c.n_values = {100};
    c.seeds = {1, 2};
    const Report r = run_experiment(c);
    const auto dir = std::filesystem::temp_directory_path() / "sdlc_harness_test";
    std::filesystem::create_directories(dir);
    write_report(r, dir / "report.json");
    write_runs_csv(r, dir / "runs.csv");
    std::ifstream csv(dir / "runs.csv");
    std::string header;
    std::getline(csv, header);
    CHECK(header == "mode,d,n,seed,mistakes,coverage,runtime_ms");
    int rows = 0;
    for (std::string line; std::getline(csv, line);) ++rows;
    CHECK(rows == 2);
    std::ifstream js(dir / "report.json");
    const auto j = nlohmann::json::parse(js);
    CHECK(j.at("cells").size() == 1);
    std::filesystem::remove_all(dir);
    CHECK_THROWS_AS(write_report(r, "/nonexistent_dir/x/report.json"), IoError);
}

TEST_CASE("verify mode at reduced scale produces the oracle table") {
    ExperimentConfig c;
    c.mode = Mode::verify;
    c.verify_scale = 0.05;
    const Report r = run_experiment(c);
    CHECK(r.cells.empty());
    CHECK(r.oracles.size() >= 20);
}

}
