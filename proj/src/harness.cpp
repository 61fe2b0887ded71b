#include "sdlc/harness.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cmath>
#include <fstream>
#include <map>
#include <set>
#include <thread>

#include "sdlc/arbitrary_learner.hpp"
#include "sdlc/baselines.hpp"
#include "sdlc/errors.hpp"
#include "sdlc/sphere_learner.hpp"

namespace sdlc {

using nlohmann::json;

Mode mode_from_string(const std::string& name) {
    if (name == "sphere") return Mode::sphere;
    if (name == "arbitrary") return Mode::arbitrary;
    if (name == "baseline") return Mode::baseline;
    if (name == "verify") return Mode::verify;
    throw InvalidArgument("unknown mode: " + name);
}

std::string to_string(Mode mode) {
    switch (mode) {
    case Mode::sphere: return "sphere";
    case Mode::arbitrary: return "arbitrary";
    case Mode::baseline: return "baseline";
    case Mode::verify: return "verify";
    }
    return "?";
}

void ExperimentConfig::validate() const {
    if (d_values.empty() || n_values.empty()) throw InvalidArgument("config: empty d or n grid");
    if (seeds.empty()) throw InvalidArgument("config: no seeds");
    if (std::set<std::uint64_t>(seeds.begin(), seeds.end()).size() != seeds.size())
        throw InvalidArgument("config: seeds must be distinct");
    for (std::size_t d : d_values)
        if (d < 1) throw InvalidArgument("config: d must be >= 1");
    for (std::size_t n : n_values)
        if (n < 4) throw InvalidArgument("config: n must be >= 4");
    auto prob = [](double p, const char* name) {
        if (!(p > 0.0 && p < 1.0)) throw InvalidArgument(std::string("config: ") + name + " must lie in (0,1)");
    };
    prob(delta, "delta");
    prob(eps, "eps");
    prob(c_hat, "c_hat");
    if (alpha_hat) prob(*alpha_hat, "alpha_hat");
    if (!(c_prime > 0.0) || !(c_init >= 0.0)) throw InvalidArgument("config: schedule constants must be positive");
    if (!(verify_scale > 0.0)) throw InvalidArgument("config: verify_scale must be positive");
}

namespace {

template <class T>
std::vector<T> scalar_or_list(const json& v) {
    if (v.is_array()) return v.get<std::vector<T>>();
    return {v.get<T>()};
}

} // namespace

ExperimentConfig config_from_json(const json& j) {
    if (!j.is_object()) throw InvalidArgument("config: expected a JSON object");
    static const std::set<std::string> known{"mode",   "d",     "n",        "seeds",         "delta",
                                             "eps",    "c_prime", "c_init", "c_hat",         "alpha_hat",
                                             "family", "family_params", "baseline_init", "verify_scale",
                                             "threads", "out"};
    for (const auto& [key, _] : j.items())
        if (!known.count(key)) throw InvalidArgument("config: unknown key '" + key + "'");

    ExperimentConfig c;
    try {
        if (j.contains("mode")) c.mode = mode_from_string(j.at("mode").get<std::string>());
        if (j.contains("d")) c.d_values = scalar_or_list<std::size_t>(j.at("d"));
        if (j.contains("n")) c.n_values = scalar_or_list<std::size_t>(j.at("n"));
        if (j.contains("seeds")) c.seeds = scalar_or_list<std::uint64_t>(j.at("seeds"));
        if (j.contains("delta")) c.delta = j.at("delta").get<double>();
        if (j.contains("eps")) c.eps = j.at("eps").get<double>();
        if (j.contains("c_prime")) c.c_prime = j.at("c_prime").get<double>();
        if (j.contains("c_init")) c.c_init = j.at("c_init").get<double>();
        if (j.contains("c_hat")) c.c_hat = j.at("c_hat").get<double>();
        if (j.contains("alpha_hat") && !j.at("alpha_hat").is_null()) c.alpha_hat = j.at("alpha_hat").get<double>();
        if (j.contains("family")) c.family = family_from_string(j.at("family").get<std::string>());
        if (j.contains("family_params")) {
            const json& p = j.at("family_params");
            static const std::set<std::string> pk{"gamma", "rho", "sub_dim", "clusters", "offset", "spread"};
            for (const auto& [key, _] : p.items())
                if (!pk.count(key)) throw InvalidArgument("config: unknown family_params key '" + key + "'");
            if (p.contains("gamma")) c.family_params.gamma = p.at("gamma").get<double>();
            if (p.contains("rho")) c.family_params.rho = p.at("rho").get<double>();
            if (p.contains("sub_dim")) c.family_params.sub_dim = p.at("sub_dim").get<std::size_t>();
            if (p.contains("clusters")) c.family_params.clusters = p.at("clusters").get<std::size_t>();
            if (p.contains("offset")) c.family_params.offset = p.at("offset").get<double>();
            if (p.contains("spread")) c.family_params.spread = p.at("spread").get<double>();
        }
        if (j.contains("baseline_init")) c.baseline_init = j.at("baseline_init").get<bool>();
        if (j.contains("verify_scale")) c.verify_scale = j.at("verify_scale").get<double>();
        if (j.contains("threads")) c.threads = j.at("threads").get<std::size_t>();
        if (j.contains("out") && !j.at("out").is_null()) c.out = j.at("out").get<std::string>();
    } catch (const json::exception& e) {
        throw InvalidArgument(std::string("config: ") + e.what());
    }
    return c;
}

json config_to_json(const ExperimentConfig& c) {
    json j{{"mode", to_string(c.mode)},
           {"d", c.d_values},
           {"n", c.n_values},
           {"seeds", c.seeds},
           {"delta", c.delta},
           {"eps", c.eps},
           {"c_prime", c.c_prime},
           {"c_init", c.c_init},
           {"c_hat", c.c_hat},
           {"alpha_hat", c.alpha_hat ? json(*c.alpha_hat) : json(nullptr)},
           {"family", to_string(c.family)},
           {"family_params",
            {{"gamma", c.family_params.gamma},
             {"rho", c.family_params.rho},
             {"sub_dim", c.family_params.sub_dim},
             {"clusters", c.family_params.clusters},
             {"offset", c.family_params.offset},
             {"spread", c.family_params.spread}}},
           {"baseline_init", c.baseline_init},
           {"verify_scale", c.verify_scale},
           {"threads", c.threads}};
    j["out"] = c.out ? json(c.out->string()) : json(nullptr);
    return j;
}

namespace {

LinearFit least_squares(const std::vector<double>& x, const std::vector<double>& y) {
    const double n = static_cast<double>(x.size());
    double mx = 0, my = 0;
    for (std::size_t i = 0; i < x.size(); ++i) {
        mx += x[i];
        my += y[i];
    }
    mx /= n;
    my /= n;
    double sxx = 0, sxy = 0, syy = 0;
    for (std::size_t i = 0; i < x.size(); ++i) {
        sxx += (x[i] - mx) * (x[i] - mx);
        sxy += (x[i] - mx) * (y[i] - my);
        syy += (y[i] - my) * (y[i] - my);
    }
    LinearFit f;
    f.b = sxy / sxx;
    f.a = my - f.b * mx;
    if (syy <= 1e-24 * std::max(1.0, my * my)) {
        f.r2 = 1.0;
        return f;
    }
    double sse = 0;
    for (std::size_t i = 0; i < x.size(); ++i) {
        const double r = y[i] - (f.a + f.b * x[i]);
        sse += r * r;
    }
    f.r2 = 1.0 - sse / syy;
    return f;
}

} // namespace

ScalingFit fit_scaling(const std::vector<std::pair<double, double>>& points) {
    std::set<double> distinct;
    for (const auto& [n, m] : points) {
        if (!(n > 1.0) || !std::isfinite(m)) throw InvalidArgument("fit_scaling: need n > 1 and finite mistakes");
        distinct.insert(n);
    }
    if (distinct.size() < 3) throw InvalidArgument("fit_scaling: need at least 3 distinct n");
    // ln ln n needs n > e for a finite, increasing regressor; smaller n still fit but sit below 0.
    std::vector<double> ln, lnln, y;
    for (const auto& [n, m] : points) {
        ln.push_back(std::log(n));
        lnln.push_back(std::log(std::log(n)));
        y.push_back(m);
    }
    return {least_squares(ln, y), least_squares(lnln, y)};
}

RunRecord run_cell(const ExperimentConfig& cfg, std::size_t d, std::size_t n, std::uint64_t seed) {
    RunRecord rec{cfg.mode, d, n, seed, 0, 0.0, 0.0, std::nullopt};
    const auto start = std::chrono::steady_clock::now();
    try {
        const RngStream root(seed);
        const RngStream data_rng = root.child(1).child(d).child(n);
        switch (cfg.mode) {
        case Mode::sphere: {
            const LabeledDataset ds = gen_uniform_sphere(n, d, data_rng);
            RngStream rng = root.child(2);
            SphereConfig sc;
            sc.delta = cfg.delta;
            sc.c_prime = cfg.c_prime;
            sc.c_init = cfg.c_init;
            const SphereRunResult r = run_sphere(ds, sc, rng);
            rec.mistakes = r.transcript.mistakes();
            rec.coverage = static_cast<double>(r.transcript.size()) / static_cast<double>(n);
            break;
        }
        case Mode::baseline: {
            const LabeledDataset ds = gen_uniform_sphere(n, d, data_rng);
            RngStream rng = root.child(3);
            BaselineConfig bc;
            bc.init_phase = cfg.baseline_init;
            bc.delta = cfg.delta;
            bc.c_init = cfg.c_init;
            const Transcript t = random_order_run(ds, rng, bc);
            rec.mistakes = t.mistakes();
            rec.coverage = static_cast<double>(t.size()) / static_cast<double>(n);
            break;
        }
        case Mode::arbitrary: {
            const LabeledDataset ds = gen_arbitrary(cfg.family, n, d, cfg.family_params, data_rng);
            RngStream rng = root.child(4);
            StrongConfig sc;
            sc.eps = cfg.eps;
            sc.delta = cfg.delta;
            sc.c_hat = cfg.c_hat;
            sc.alpha_hat = cfg.alpha_hat;
            const StrongRunResult r = strong_run(ds, rng, sc);
            rec.mistakes = r.transcript.mistakes();
            rec.coverage = static_cast<double>(r.covered) / static_cast<double>(n);
            if (r.forster_failed) rec.error = "forster transform did not converge";
            break;
        }
        case Mode::verify:
            throw InvalidArgument("run_cell: verify has no cells");
        }
    } catch (const Error& e) {
        rec.error = e.what();
    }
    rec.runtime_ms = std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - start).count();
    return rec;
}

std::vector<OracleEntry> run_oracle_suite(std::uint64_t seed, double scale) {
    const auto scaled = [scale](double base, double floor) {
        return static_cast<std::size_t>(std::max(floor, std::round(base * scale)));
    };
    const RngStream root(seed);
    std::vector<OracleEntry> out;
    auto append = [&out](std::vector<OracleEntry> v) { out.insert(out.end(), v.begin(), v.end()); };
    RngStream r1 = root.child(11), r2 = root.child(12), r3 = root.child(13), r4 = root.child(14), r5 = root.child(15);
    append(decay_law_entries(scaled(1e4, 10), r1));
    append(disagreement_mass_entries(3, 10000, scaled(1e3, 100), r2));
    append(anti_concentration_entries(scale, r3));
    append(superlinear_entries(scaled(1e4, 100), r4));
    append(update_count_entries(scaled(1e3, 10), r5));
    return out;
}

bool Report::all_pass() const {
    for (const RunRecord& r : runs)
        if (r.error) return false;
    for (const OracleEntry& o : oracles)
        if (!o.pass) return false;
    return true;
}

Report run_experiment(const ExperimentConfig& cfg) {
    cfg.validate();
    Report rep;
    rep.mode = cfg.mode;
    if (cfg.mode == Mode::verify) {
        rep.oracles = run_oracle_suite(cfg.seeds.front(), cfg.verify_scale);
        return rep;
    }

    struct Job {
        std::size_t d, n;
        std::uint64_t seed;
    };
    std::vector<Job> jobs;
    for (std::size_t d : cfg.d_values)
        for (std::size_t n : cfg.n_values)
            for (std::uint64_t s : cfg.seeds) jobs.push_back({d, n, s});

    std::vector<RunRecord> results(jobs.size());
    std::atomic<std::size_t> next{0};
    auto worker = [&] {
        for (std::size_t i; (i = next.fetch_add(1)) < jobs.size();)
            results[i] = run_cell(cfg, jobs[i].d, jobs[i].n, jobs[i].seed);
    };
    std::size_t threads = cfg.threads ? cfg.threads : std::max(1u, std::thread::hardware_concurrency());
    threads = std::min(threads, jobs.size());
    {
        std::vector<std::jthread> pool;
        for (std::size_t t = 1; t < threads; ++t) pool.emplace_back(worker);
        worker();
    }
    rep.runs = std::move(results);

    std::map<std::size_t, std::vector<std::pair<double, double>>> per_d;
    std::size_t idx = 0;
    for (std::size_t d : cfg.d_values)
        for (std::size_t n : cfg.n_values) {
            CellSummary c{cfg.mode, d, n};
            std::vector<double> m;
            for (std::size_t s = 0; s < cfg.seeds.size(); ++s, ++idx) {
                const RunRecord& r = rep.runs[idx];
                ++c.runs;
                c.mean_runtime_ms += r.runtime_ms;
                if (r.error) ++c.failures;
                m.push_back(static_cast<double>(r.mistakes));
                c.mean_coverage += r.coverage;
            }
            const double k = static_cast<double>(m.size());
            for (double x : m) c.mean_mistakes += x;
            c.mean_mistakes /= k;
            c.mean_coverage /= k;
            c.mean_runtime_ms /= k;
            double var = 0;
            for (double x : m) var += (x - c.mean_mistakes) * (x - c.mean_mistakes);
            c.stderr_mistakes = m.size() > 1 ? std::sqrt(var / (k - 1) / k) : 0.0;
            std::sort(m.begin(), m.end());
            c.median_mistakes = m.size() % 2 ? m[m.size() / 2] : 0.5 * (m[m.size() / 2 - 1] + m[m.size() / 2]);
            rep.cells.push_back(c);
            per_d[d].emplace_back(static_cast<double>(n), c.mean_mistakes);
        }
    if (cfg.n_values.size() >= 3)
        for (std::size_t d : cfg.d_values) rep.fits.emplace_back(d, fit_scaling(per_d[d]));
    return rep;
}

namespace {

json fit_json(const LinearFit& f) { return {{"a", f.a}, {"b", f.b}, {"r2", f.r2}}; }

} // namespace

json report_to_json(const Report& r, bool include_runtime) {
    json cells = json::array();
    for (const CellSummary& c : r.cells) {
        json j{{"mode", to_string(c.mode)},           {"d", c.d},
               {"n", c.n},                            {"runs", c.runs},
               {"failures", c.failures},              {"mean_mistakes", c.mean_mistakes},
               {"median_mistakes", c.median_mistakes}, {"stderr_mistakes", c.stderr_mistakes},
               {"mean_coverage", c.mean_coverage}};
        if (include_runtime) j["mean_runtime_ms"] = c.mean_runtime_ms;
        cells.push_back(std::move(j));
    }
    json runs = json::array();
    for (const RunRecord& x : r.runs) {
        json j{{"mode", to_string(x.mode)}, {"d", x.d},          {"n", x.n},
               {"seed", x.seed},           {"mistakes", x.mistakes}, {"coverage", x.coverage}};
        if (include_runtime) j["runtime_ms"] = x.runtime_ms;
        j["error"] = x.error ? json(*x.error) : json(nullptr);
        runs.push_back(std::move(j));
    }
    json fits = json::array();
    for (const auto& [d, f] : r.fits) fits.push_back({{"d", d}, {"ln", fit_json(f.ln)}, {"lnln", fit_json(f.lnln)}});
    json oracles = json::array();
    for (const OracleEntry& o : r.oracles)
        oracles.push_back({{"name", o.name},
                           {"pass", o.pass},
                           {"empirical", o.empirical},
                           {"bound", o.bound},
                           {"detail", o.detail}});
    return {{"mode", to_string(r.mode)}, {"cells", cells},     {"runs", runs},
            {"fits", fits},              {"oracles", oracles}, {"all_pass", r.all_pass()}};
}

void write_report(const Report& r, const std::filesystem::path& path) {
    std::ofstream out(path);
    if (!out) throw IoError("cannot open " + path.string());
    out << report_to_json(r).dump(2) << '\n';
    if (!out) throw IoError("write failed: " + path.string());
}

void write_runs_csv(const Report& r, const std::filesystem::path& path) {
    std::ofstream out(path);
    if (!out) throw IoError("cannot open " + path.string());
    out << "mode,d,n,seed,mistakes,coverage,runtime_ms\n";
    for (const RunRecord& x : r.runs)
        out << to_string(x.mode) << ',' << x.d << ',' << x.n << ',' << x.seed << ',' << x.mistakes << ','
            << format_double(x.coverage) << ',' << format_double(x.runtime_ms) << '\n';
    if (!out) throw IoError("write failed: " + path.string());
}

} // namespace sdlc
