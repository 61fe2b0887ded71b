#include "sdlc/forster.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <cstdio>

namespace sdlc {

RipReport rip_check(const std::vector<Vector>& X, double delta) {
    if (X.empty()) throw InvalidArgument("rip_check: empty point set");
    RipReport r;
    r.delta_target = delta;
    for (const Vector& x : X) r.max_norm_dev = std::max(r.max_norm_dev, std::abs(norm(x) - 1.0));
    const SymmetricEigen eig = jacobi_eigen(second_moment(X));
    r.min_dir_second_moment = eig.values.back();
    const double d = static_cast<double>(X.front().dim());
    r.pass = r.min_dir_second_moment >= 1.0 / d - delta && r.max_norm_dev <= 1e-9;
    return r;
}

Vector normalized_map(const Matrix& A, const Vector& x) {
    Vector y = A * x;
    const double n = norm(y);
    if (!(n > 1e-300) || !std::isfinite(n)) throw SingularMap("normalized_map: Ax vanished");
    y *= 1.0 / n;
    return y;
}

namespace {

// Coordinates of x in the orthonormal frame `basis` (vectors of the ambient space).
Vector project(const std::vector<Vector>& basis, const Vector& x) {
    Vector out(basis.size());
    for (std::size_t j = 0; j < basis.size(); ++j) out[j] = dot(basis[j], x);
    return out;
}

std::vector<Vector> top_vectors(const SymmetricEigen& eig, std::size_t j) {
    return {eig.vectors.begin(), eig.vectors.begin() + static_cast<std::ptrdiff_t>(j)};
}

// Squared norm of the part of x outside span(basis), formed explicitly
// (|x|^2 - sum c_j^2 cancels catastrophically near zero).
double residual_sq(const std::vector<Vector>& basis, const Vector& x) {
    Vector r = x;
    for (const Vector& b : basis) r -= dot(b, x) * b;
    return norm_sq(r);
}

struct Restriction {
    std::vector<Vector> basis;           // in the current coordinates
    std::vector<std::size_t> members;    // positions into the current point list
};

// Points of `z` lying (within tol) in the top-j eigenspace of their own second moment.
Restriction span_members(const std::vector<Vector>& z, const std::vector<std::size_t>& candidates, std::size_t j,
                         double tol) {
    std::vector<Vector> sub;
    sub.reserve(candidates.size());
    for (std::size_t i : candidates) sub.push_back(z[i]);
    Restriction r;
    r.basis = top_vectors(jacobi_eigen(second_moment(sub)), j);
    for (std::size_t i = 0; i < z.size(); ++i)
        if (std::sqrt(residual_sq(r.basis, z[i])) <= tol) r.members.push_back(i);
    return r;
}

// Smallest j whose heavy subspace holds at least j/k of the points.
std::optional<Restriction> heavy_subspace(const std::vector<Vector>& z, const std::vector<Vector>& y,
                                          const SymmetricEigen& eig, double tol) {
    const std::size_t k = eig.values.size();
    const std::size_t m = z.size();
    for (std::size_t j = 1; j < k; ++j) {
        const auto top = top_vectors(eig, j);
        std::vector<std::size_t> loose;
        for (std::size_t i = 0; i < m; ++i)
            if (residual_sq(top, y[i]) < 0.25) loose.push_back(i);
        if (loose.size() * k < j * m || loose.empty()) continue;
        Restriction r = span_members(z, loose, j, tol);
        if (r.members.size() * k >= j * m) return r;
    }
    return std::nullopt;
}

// sqrt(lambda_max / lambda_min) of B^T B.
double condition(const Matrix& B) {
    const SymmetricEigen e = jacobi_eigen(B.transposed() * B);
    if (!(e.values.back() > 0.0)) return std::numeric_limits<double>::infinity();
    return std::sqrt(e.values.front() / e.values.back());
}

Matrix inverse_sqrt(const SymmetricEigen& eig) {
    return spectral_apply(eig, [](double l) { return 1.0 / std::sqrt(l); });
}

} // namespace

ForsterOutput forster_transform(const std::vector<Vector>& X, double delta, const ForsterOptions& opts) {
    if (X.empty()) throw InvalidArgument("forster_transform: empty point set");
    const std::size_t d = X.front().dim();
    if (!(delta > 0.0 && delta < 1.0 / static_cast<double>(d)))
        throw InvalidArgument("forster_transform: delta must lie in (0, 1/d)");
    const int max_iters = opts.max_iters.value_or(
        std::max(1, static_cast<int>(std::ceil(10.0 * static_cast<double>(d) * std::log(1.0 / delta)))));
    if (max_iters < 1) throw InvalidArgument("forster_transform: max_iters must be >= 1");

    // Current state: frame Q (columns in R^d), points z in Q-coordinates, map B on them.
    std::vector<Vector> Q;
    for (std::size_t i = 0; i < d; ++i) Q.push_back(Vector::basis(d, i));
    std::vector<std::size_t> kept(X.size());
    std::vector<Vector> z;
    z.reserve(X.size());
    for (std::size_t i = 0; i < X.size(); ++i) {
        kept[i] = i;
        z.push_back(normalized(X[i]));
    }

    ForsterOutput out;
    RipReport last;
    std::size_t k = d;
    Matrix B = Matrix::identity(k);
    int collapsed_for = 0;
    std::vector<double> history;

    auto restrict_to = [&](const Restriction& r) {
        std::vector<Vector> newQ;
        for (const Vector& b : r.basis) {
            Vector col(d);
            for (std::size_t c = 0; c < k; ++c) col += b[c] * Q[c];
            newQ.push_back(normalized(col));
        }
        std::vector<Vector> newz;
        std::vector<std::size_t> newkept;
        for (std::size_t i : r.members) {
            newz.push_back(normalized(project(r.basis, z[i])));
            newkept.push_back(kept[i]);
        }
        Q = std::move(newQ);
        z = std::move(newz);
        kept = std::move(newkept);
        k = Q.size();
        B = Matrix::identity(k);
        collapsed_for = 0;
        history.clear();
    };

    for (int it = 0; it < max_iters; ++it) {
        ++out.iterations;
        std::vector<Vector> y;
        y.reserve(z.size());
        for (const Vector& p : z) y.push_back(normalized_map(B, p));

        const SymmetricEigen eig = jacobi_eigen(second_moment(y));
        const double lmin = eig.values.back();
        const double lmax = eig.values.front();
        last.delta_target = delta;
        last.min_dir_second_moment = lmin;
        last.max_norm_dev = 0.0;
        for (const Vector& p : y) last.max_norm_dev = std::max(last.max_norm_dev, std::abs(norm(p) - 1.0));
        last.pass = lmin >= 1.0 / static_cast<double>(k) - delta && last.max_norm_dev <= 1e-9;

        // Past this conditioning the map mostly amplifies rounding noise of
        // points lying in a proper subspace, so a pass would not be genuine.
        const bool ill = condition(B) > opts.max_condition;
        if (last.pass && !ill) {
            Matrix Qm = Matrix::from_columns(Q);
            Matrix A = Qm * B * Qm.transposed();
            for (std::size_t i = 0; i < d; ++i) A(i, i) += 1.0;
            Matrix QQ = Qm * Qm.transposed();
            for (std::size_t i = 0; i < d; ++i)
                for (std::size_t j = 0; j < d; ++j) A(i, j) -= QQ(i, j);
            out.A = std::move(A);
            out.frame_map = B;
            out.subspace_basis = Q;
            out.retained_indices = kept;
            out.transformed_points = std::move(y);
            out.fraction = static_cast<double>(kept.size()) / static_cast<double>(X.size());
            out.rip = last;
            return out;
        }

        if (lmin <= 1e-12 * lmax) {
            // The points span a proper subspace: restrict to it.
            std::size_t rank = 0;
            const SymmetricEigen span = jacobi_eigen(second_moment(z));
            for (double l : span.values)
                if (l > 1e-12 * span.values.front()) ++rank;
            std::vector<std::size_t> all(z.size());
            for (std::size_t i = 0; i < z.size(); ++i) all[i] = i;
            Restriction r = span_members(z, all, std::max<std::size_t>(rank, 1), opts.membership_tol);
            if (!r.members.empty() && r.basis.size() < k) {
                restrict_to(r);
                continue;
            }
        }

        collapsed_for = lmin < delta / (4.0 * static_cast<double>(k)) ? collapsed_for + 1 : 0;
        history.push_back(lmin);
        const int w = opts.stall_window;
        const bool stalled = static_cast<int>(history.size()) > w &&
                             history.back() - history[history.size() - 1 - static_cast<std::size_t>(w)] < opts.stall_gain;
        if (collapsed_for >= opts.collapse_patience || stalled || ill) {
            if (auto r = heavy_subspace(z, y, eig, opts.membership_tol)) {
                restrict_to(*r);
                continue;
            }
            if (ill) {
                char buf[160];
                std::snprintf(buf, sizeof buf, "forster_transform: map ill-conditioned with no heavy subspace (lambda_min %.3g)",
                              last.min_dir_second_moment);
                throw NoConvergence(buf, last);
            }
            collapsed_for = 0;
            history.clear();
        }

        B = inverse_sqrt(eig) * B;
        const double scale = B.max_abs();
        if (!(scale > 0.0) || !std::isfinite(scale)) throw SingularMap("forster_transform: map degenerated");
        B *= 1.0 / scale;
    }
    char buf[160];
    std::snprintf(buf, sizeof buf, "forster_transform: no RIP after %d iterations (lambda_min %.3g, target %.3g)",
                  max_iters, last.min_dir_second_moment, 1.0 / static_cast<double>(k) - delta);
    throw NoConvergence(buf, last);
}

double soft_margin_audit(const std::vector<Vector>& X, const Vector& u) {
    if (X.empty()) throw InvalidArgument("soft_margin_audit: empty point set");
    const double d = static_cast<double>(X.front().dim());
    const RipReport rep = rip_check(X, 1.0 / (2.0 * d));
    if (!rep.pass) {
        char buf[200];
        std::snprintf(buf, sizeof buf,
                      "soft_margin_audit: input not in RIP(1/(2d)): lambda_min %.6g < %.6g or norm deviation %.3g",
                      rep.min_dir_second_moment, 1.0 / d - rep.delta_target, rep.max_norm_dev);
        throw InvalidArgument(buf);
    }
    if (u.dim() != X.front().dim()) throw InvalidArgument("soft_margin_audit: dimension mismatch");
    const Vector unit = normalized(u);
    const double threshold = 1.0 / (2.0 * std::sqrt(d));
    std::size_t hits = 0;
    for (const Vector& x : X)
        if (std::abs(dot(unit, x)) >= threshold) ++hits;
    return static_cast<double>(hits) / static_cast<double>(X.size());
}

} // namespace sdlc
