// sdlc: command-line front end for data generation, experiment grids and the oracle suite.
#include <cstdio>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>

#include <CLI11.hpp>
#include <json.hpp>

#include "sdlc/arbitrary_learner.hpp"
#include "sdlc/baselines.hpp"
#include "sdlc/dataset.hpp"
#include "sdlc/errors.hpp"
#include "sdlc/harness.hpp"
#include "sdlc/sphere_learner.hpp"

using namespace sdlc;
using nlohmann::json;

namespace {

struct CommonOpts {
    std::string config;
    std::optional<std::uint64_t> seed;
    std::string out;
    std::vector<std::size_t> d, n;
    std::optional<double> delta, eps;
    std::optional<std::string> family;
    std::optional<std::size_t> threads;
    std::string data;
};

void add_common(CLI::App* cmd, CommonOpts& o, bool grid) {
    cmd->add_option("--config", o.config, "JSON config file")->check(CLI::ExistingFile);
    cmd->add_option("--seed", o.seed, "seed (replaces the config's seed list)");
    cmd->add_option("--out", o.out, "output path");
    if (!grid) return;
    cmd->add_option("--d", o.d, "dimension grid")->delimiter(',');
    cmd->add_option("--n", o.n, "sample-size grid")->delimiter(',');
    cmd->add_option("--delta", o.delta, "failure probability");
    cmd->add_option("--eps", o.eps, "uncovered fraction (arbitrary mode)");
    cmd->add_option("--family", o.family, "clustered|low_margin|subspace_degenerate|grid");
    cmd->add_option("--threads", o.threads, "worker threads (0: all cores)");
    cmd->add_option("--data", o.data, "run once on a JSONL dataset and emit its transcript")->check(CLI::ExistingFile);
}

ExperimentConfig load_config(const CommonOpts& o, Mode mode) {
    ExperimentConfig c;
    if (!o.config.empty()) {
        std::ifstream in(o.config);
        if (!in) throw IoError("cannot open " + o.config);
        json j;
        try {
            j = json::parse(in);
        } catch (const json::exception& e) {
            throw InvalidArgument(std::string("config: ") + e.what());
        }
        c = config_from_json(j);
    }
    c.mode = mode;
    if (o.seed) c.seeds = {*o.seed};
    if (!o.d.empty()) c.d_values = o.d;
    if (!o.n.empty()) c.n_values = o.n;
    if (o.delta) c.delta = *o.delta;
    if (o.eps) c.eps = *o.eps;
    if (o.family) c.family = family_from_string(*o.family);
    if (o.threads) c.threads = *o.threads;
    if (!o.out.empty()) c.out = o.out;
    c.validate();
    return c;
}

json transcript_json(const Transcript& t) {
    json recs = json::array();
    for (const PredictionRecord& r : t.records())
        recs.push_back({{"index", r.index},
                        {"prediction", r.prediction},
                        {"truth", r.truth},
                        {"margin", r.margin},
                        {"phase", to_string(r.phase)}});
    return {{"mistakes", t.mistakes()}, {"predictions", t.size()}, {"records", recs}};
}

void emit(const json& j, const std::string& path) {
    if (path.empty() || path == "-") {
        std::cout << j.dump(2) << '\n';
        return;
    }
    std::ofstream out(path);
    if (!out) throw IoError("cannot open " + path);
    out << j.dump(2) << '\n';
}

int single_run(const ExperimentConfig& c, const CommonOpts& o) {
    const LabeledDataset ds = load(o.data);
    RngStream rng(c.seeds.front());
    json j;
    switch (c.mode) {
    case Mode::sphere: {
        SphereConfig sc;
        sc.delta = c.delta;
        sc.c_prime = c.c_prime;
        sc.c_init = c.c_init;
        RngStream r = rng.child(2);
        const SphereRunResult res = run_sphere(ds, sc, r);
        j = transcript_json(res.transcript);
        j["fallback"] = res.fallback;
        j["schedule"] = {{"T", res.schedule.T}, {"k", res.schedule.k}, {"N", res.schedule.N}};
        break;
    }
    case Mode::baseline: {
        BaselineConfig bc;
        bc.init_phase = c.baseline_init;
        bc.delta = c.delta;
        bc.c_init = c.c_init;
        RngStream r = rng.child(3);
        j = transcript_json(random_order_run(ds, r, bc));
        break;
    }
    case Mode::arbitrary: {
        StrongConfig sc;
        sc.eps = c.eps;
        sc.delta = c.delta;
        sc.c_hat = c.c_hat;
        sc.alpha_hat = c.alpha_hat;
        RngStream r = rng.child(4);
        const StrongRunResult res = strong_run(ds, r, sc);
        j = transcript_json(res.transcript);
        j["covered"] = res.covered;
        j["partial"] = res.partial;
        j["forster_failed"] = res.forster_failed;
        j["attempts"] = res.attempts;
        break;
    }
    case Mode::verify:
        break;
    }
    emit(j, o.out);
    return 0;
}

int grid_run(const ExperimentConfig& c) {
    const Report rep = run_experiment(c);
    if (c.out) {
        std::filesystem::create_directories(*c.out);
        write_report(rep, *c.out / "report.json");
        if (!rep.runs.empty()) write_runs_csv(rep, *c.out / "runs.csv");
    }
    for (const CellSummary& s : rep.cells)
        std::printf("%-9s d=%-3zu n=%-8zu runs=%-3zu fail=%zu mean=%.2f median=%.1f se=%.2f coverage=%.4f\n",
                    to_string(s.mode).c_str(), s.d, s.n, s.runs, s.failures, s.mean_mistakes, s.median_mistakes,
                    s.stderr_mistakes, s.mean_coverage);
    for (const auto& [d, f] : rep.fits)
        std::printf("fit d=%zu  ln n: b=%.3f R2=%.4f   ln ln n: b=%.3f R2=%.4f\n", d, f.ln.b, f.ln.r2, f.lnln.b,
                    f.lnln.r2);
    for (const OracleEntry& e : rep.oracles)
        std::printf("%s %-60s empirical=%.6g bound=%.6g %s\n", e.pass ? "PASS" : "FAIL", e.name.c_str(), e.empirical,
                    e.bound, e.detail.c_str());
    return rep.all_pass() ? 0 : 2;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"Self-directed learning of halfspaces: experiments and checks"};
    app.require_subcommand(1);

    CommonOpts gen_o;
    std::string gen_family = "sphere";
    std::size_t gen_d = 10, gen_n = 1000;
    std::string gen_csv;
    auto* gen = app.add_subcommand("generate", "write a labeled dataset as JSONL");
    add_common(gen, gen_o, false);
    gen->add_option("--family", gen_family, "sphere|clustered|low_margin|subspace_degenerate|grid");
    gen->add_option("--d", gen_d, "dimension");
    gen->add_option("--n", gen_n, "number of points");
    gen->add_option("--csv", gen_csv, "also write flat CSV here");

    CommonOpts sph_o, arb_o, base_o, ver_o;
    auto* sph = app.add_subcommand("run-sphere", "self-directed learner on uniform sphere data");
    add_common(sph, sph_o, true);
    auto* arb = app.add_subcommand("run-arbitrary", "boosted learner on structured families");
    add_common(arb, arb_o, true);
    auto* base = app.add_subcommand("baseline", "random-order margin perceptron on sphere data");
    add_common(base, base_o, true);
    auto* ver = app.add_subcommand("verify", "Monte-Carlo oracle suite");
    add_common(ver, ver_o, false);
    double ver_scale = 1.0;
    ver->add_option("--scale", ver_scale, "trial-count multiplier");

    std::string rep_in, rep_csv;
    auto* rep = app.add_subcommand("report", "summarize a report.json");
    rep->add_option("--config", rep_in, "report.json produced by a grid run")->required()->check(CLI::ExistingFile);
    rep->add_option("--seed", ver_o.seed, "ignored; accepted for interface symmetry");
    rep->add_option("--out", rep_csv, "write the per-run CSV here");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        return app.exit(e) == 0 ? 0 : 1;
    }

    try {
        if (gen->parsed()) {
            const RngStream rng(gen_o.seed.value_or(1));
            const LabeledDataset ds = gen_family == "sphere"
                                          ? gen_uniform_sphere(gen_n, gen_d, rng)
                                          : gen_arbitrary(family_from_string(gen_family), gen_n, gen_d, {}, rng);
            if (gen_o.out.empty() || gen_o.out == "-")
                write_jsonl(ds, std::cout);
            else
                save(ds, gen_o.out);
            if (!gen_csv.empty()) save_csv(ds, gen_csv);
            return 0;
        }
        const std::pair<CLI::App*, std::pair<CommonOpts*, Mode>> runs[] = {
            {sph, {&sph_o, Mode::sphere}}, {arb, {&arb_o, Mode::arbitrary}}, {base, {&base_o, Mode::baseline}}};
        for (const auto& [cmd, om] : runs)
            if (cmd->parsed()) {
                const ExperimentConfig c = load_config(*om.first, om.second);
                return om.first->data.empty() ? grid_run(c) : single_run(c, *om.first);
            }
        if (ver->parsed()) {
            ExperimentConfig c = load_config(ver_o, Mode::verify);
            if (ver->count("--scale")) c.verify_scale = ver_scale;
            c.validate();
            return grid_run(c);
        }
        if (rep->parsed()) {
            std::ifstream in(rep_in);
            const json j = json::parse(in);
            for (const json& c : j.at("cells"))
                std::printf("%-9s d=%-3zu n=%-8zu mean=%.2f median=%.1f se=%.2f coverage=%.4f\n",
                            c.at("mode").get<std::string>().c_str(), c.at("d").get<std::size_t>(),
                            c.at("n").get<std::size_t>(), c.at("mean_mistakes").get<double>(),
                            c.at("median_mistakes").get<double>(), c.at("stderr_mistakes").get<double>(),
                            c.at("mean_coverage").get<double>());
            for (const json& f : j.at("fits"))
                std::printf("fit d=%zu  ln n R2=%.4f  ln ln n R2=%.4f\n", f.at("d").get<std::size_t>(),
                            f.at("ln").at("r2").get<double>(), f.at("lnln").at("r2").get<double>());
            if (!rep_csv.empty()) {
                std::ofstream out(rep_csv);
                if (!out) throw IoError("cannot open " + rep_csv);
                out << "mode,d,n,seed,mistakes,coverage,runtime_ms\n";
                for (const json& r : j.at("runs"))
                    out << r.at("mode").get<std::string>() << ',' << r.at("d") << ',' << r.at("n") << ','
                        << r.at("seed") << ',' << r.at("mistakes") << ',' << format_double(r.at("coverage").get<double>())
                        << ',' << (r.contains("runtime_ms") ? format_double(r.at("runtime_ms").get<double>()) : "")
                        << '\n';
            }
            return j.value("all_pass", false) ? 0 : 2;
        }
    } catch (const std::exception& e) {
        std::fprintf(stderr, "sdlc: %s\n", e.what());
        return 1;
    }
    return 1;
}
