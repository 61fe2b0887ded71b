#include "sdlc/arbitrary_learner.hpp"

#include <algorithm>
#include <cmath>

#include "sdlc/margin_perceptron.hpp"

namespace sdlc {

std::string to_string(Termination t) {
    switch (t) {
    case Termination::coverage: return "coverage";
    case Termination::budget: return "budget";
    case Termination::aborted: return "aborted";
    }
    return "unknown";
}

std::size_t weak_sweep_budget(std::size_t k) {
    const double kk = static_cast<double>(k);
    return std::max<std::size_t>(1, static_cast<std::size_t>(std::ceil(5.0 * kk * std::log(kk))));
}

std::size_t weak_mistake_bound(std::size_t k) {
    const double kk = static_cast<double>(k);
    return static_cast<std::size_t>(std::floor(5.0 * kk * std::log(kk))) + 1;
}

WeakRunResult weak_run(const std::vector<Vector>& points, std::span<const std::size_t> X, LabelOracle& oracle,
                       RngStream& rng, const WeakConfig& cfg) {
    if (X.empty()) throw InvalidArgument("weak_run: empty point set");
    const std::size_t d = points[X.front()].dim();

    std::vector<Vector> raw;
    raw.reserve(X.size());
    for (std::size_t i : X) raw.push_back(points[i]);
    const double fdelta = cfg.forster_delta.value_or(1.0 / (2.0 * static_cast<double>(d)));
    const ForsterOutput f = forster_transform(raw, fdelta);

    WeakRunResult out;
    out.k = f.dim();
    const std::size_t k = out.k;
    const auto& U = f.transformed_points;
    out.U_size = U.size();
    std::vector<std::size_t> ids;
    ids.reserve(U.size());
    for (std::size_t j : f.retained_indices) ids.push_back(X[j]);

    RngStream init_rng = rng.child(1);
    Hypothesis w(sample_sphere(k, init_rng));
    if (cfg.ground_truth) {
        // Pulled-back normal in the working frame: B^{-T} Q^T w*.
        Vector qw(k);
        for (std::size_t c = 0; c < k; ++c) qw[c] = dot(f.subspace_basis[c], *cfg.ground_truth);
        const Matrix binv_t = inverse(f.frame_map).transposed();
        const Vector v = binv_t * qw;
        const double nv = norm(v);
        out.initial_correlation_ok = nv > 0.0 && dot(w.w(), v) / nv >= 1.0 / (2.0 * std::sqrt(static_cast<double>(k)));
    }

    const double soft = 1.0 / (2.0 * std::sqrt(static_cast<double>(k)));
    const std::size_t need = (U.size() + 4 * k - 1) / (4 * k); // ceil(|U| / 4k)
    out.sweep_budget = weak_sweep_budget(k);

    std::vector<std::size_t> local(U.size());
    for (std::size_t j = 0; j < U.size(); ++j) local[j] = j;

    for (std::size_t t = 0; t < out.sweep_budget; ++t) {
        ++out.sweeps;
        std::vector<std::pair<std::size_t, int>> C;
        bool mistake = false;
        double mistake_margin = 0.0;
        for (std::size_t j : order_by_margin(U, local, w.w())) {
            const double m = dot(w.w(), U[j]);
            const int z = sign_of(m);
            const std::size_t id = ids[j];
            int truth;
            if (oracle.predicted(id)) {
                truth = oracle.revealed(id);
            } else {
                truth = oracle.predict(id, z, std::abs(m), Phase::weak);
                out.revealed.push_back(id);
                if (truth != z) ++out.mistakes;
            }
            C.emplace_back(id, truth);
            if (truth != z) {
                mistake = true;
                mistake_margin = std::abs(m) / w.norm();
                w = corrective_update(w, U[j]);
                break;
            }
        }
        const bool covered = C.size() >= need;
        if (mistake && !covered && mistake_margin < soft) ++out.soft_margin_violations;
        out.labeled_set = std::move(C);
        if (covered) {
            out.terminated_by = Termination::coverage;
            return out;
        }
        if (cfg.mistake_cap && out.mistakes > *cfg.mistake_cap) {
            out.terminated_by = Termination::aborted;
            return out;
        }
    }
    out.terminated_by = Termination::budget;
    return out;
}

BoostBudget compute_boost_budget(std::size_t d, double eps, double delta, double c_hat, double alpha_hat) {
    if (d == 0) throw InvalidArgument("compute_boost_budget: d must be >= 1");
    if (!(eps > 0.0 && eps < 1.0)) throw InvalidArgument("compute_boost_budget: eps must lie in (0, 1)");
    if (!(delta > 0.0 && delta < 1.0)) throw InvalidArgument("compute_boost_budget: delta must lie in (0, 1)");
    if (!(c_hat > 0.0 && c_hat <= 1.0)) throw InvalidArgument("compute_boost_budget: c_hat must lie in (0, 1]");
    if (!(alpha_hat > 0.0 && alpha_hat < 1.0)) throw InvalidArgument("compute_boost_budget: alpha_hat must lie in (0, 1)");
    BoostBudget b;
    b.eps = eps;
    b.delta = delta;
    b.alpha = alpha_hat;
    b.c = c_hat;
    // Guard against ln(1/eps)/ln(1/alpha) landing a few ulps above an integer.
    const double rounds = std::log(1.0 / eps) / std::log(1.0 / alpha_hat);
    b.runs_outer = std::max<std::size_t>(1, static_cast<std::size_t>(std::ceil(rounds - 1e-9)));
    const double retries = std::log(static_cast<double>(b.runs_outer) / delta) / c_hat;
    b.retries_per_round = std::max<std::size_t>(1, static_cast<std::size_t>(std::ceil(retries - 1e-9)));
    b.per_run_mistakes = weak_mistake_bound(d);
    b.mistake_cap = b.retries_per_round * b.runs_outer * b.per_run_mistakes;
    return b;
}

StrongRunResult strong_run(const LabeledDataset& ds, RngStream& rng, const StrongConfig& cfg) {
    const std::size_t n = ds.size();
    const std::size_t d = ds.dim();
    LabelOracle oracle(ds.labels());
    StrongRunResult out;

    if (cfg.eps >= 1.0) {
        out.transcript = oracle.release();
        return out;
    }
    const double alpha = cfg.alpha_hat.value_or(1.0 - 1.0 / (4.0 * static_cast<double>(d)));
    out.budget = compute_boost_budget(d, cfg.eps, cfg.delta, cfg.c_hat, alpha);
    const std::size_t max_attempts = out.budget.runs_outer * out.budget.retries_per_round;

    std::vector<std::size_t> remaining(n);
    for (std::size_t i = 0; i < n; ++i) remaining[i] = i;
    const double target = cfg.eps * static_cast<double>(n);
    std::size_t mistakes = 0;

    while (static_cast<double>(remaining.size()) > target && !remaining.empty()) {
        if (out.attempts >= max_attempts || mistakes >= out.budget.mistake_cap) break;
        RngStream attempt_rng = rng.child(out.attempts);
        WeakConfig wc;
        wc.mistake_cap = out.budget.per_run_mistakes;
        wc.ground_truth = cfg.ground_truth;
        WeakRunResult r;
        try {
            r = weak_run(ds.points(), remaining, oracle, attempt_rng, wc);
        } catch (const NoConvergence&) {
            out.forster_failed = true;
            break;
        }
        ++out.attempts;
        mistakes += r.mistakes;
        if (r.terminated_by == Termination::coverage) ++out.rounds;
        out.log.push_back({out.attempts - 1, remaining.size(), r.revealed.size(), r.mistakes, r.k, r.terminated_by});
        std::erase_if(remaining, [&](std::size_t i) { return oracle.predicted(i); });
    }

    out.covered = n - remaining.size();
    out.partial = static_cast<double>(remaining.size()) > target;
    out.transcript = oracle.release();
    return out;
}

} // namespace sdlc
