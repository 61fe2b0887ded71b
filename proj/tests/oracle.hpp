#pragma once

// Reference computations used only by the tests. Nothing here calls into the
// learner modules; where a library routine is re-derived, it is done by a
// different formula.

#include <cmath>
#include <cstddef>
#include <vector>

#include "sdlc/geometry.hpp"

namespace oracle {

using sdlc::Vector;

inline double dotp(const Vector& a, const Vector& b) {
    long double s = 0;
    for (std::size_t i = 0; i < a.dim(); ++i) s += static_cast<long double>(a[i]) * b[i];
    return static_cast<double>(s);
}

// tan of the angle between w and w*, from the split of w into its part along
// w* and its orthogonal remainder.
inline double tan_by_projection(const Vector& w, const Vector& w_star) {
    const double ns = std::sqrt(dotp(w_star, w_star));
    const double along = dotp(w, w_star) / ns;
    long double perp2 = 0;
    for (std::size_t i = 0; i < w.dim(); ++i) {
        const long double c = w[i] - along * w_star[i] / ns;
        perp2 += c * c;
    }
    return std::sqrt(static_cast<double>(perp2)) / along;
}

// Classical perceptron run to convergence; true iff it separates within max_epochs.
inline bool perceptron_separates(const std::vector<Vector>& X, const std::vector<int>& y, std::size_t max_epochs) {
    Vector w(X.front().dim());
    for (std::size_t e = 0; e < max_epochs; ++e) {
        bool clean = true;
        for (std::size_t i = 0; i < X.size(); ++i)
            if (y[i] * dotp(w, X[i]) <= 0) {
                for (std::size_t j = 0; j < w.dim(); ++j) w[j] += y[i] * X[i][j];
                clean = false;
            }
        if (clean) return true;
    }
    return false;
}

// Mean squared projection of X onto u.
inline double mean_sq_projection(const std::vector<Vector>& X, const Vector& u) {
    double s = 0;
    for (const Vector& x : X) {
        const double p = dotp(u, x);
        s += p * p;
    }
    return s / static_cast<double>(X.size());
}

// (2 / beta^2) ln(1/alpha), rounded up.
inline std::size_t update_cap(double alpha, double beta) {
    return static_cast<std::size_t>(std::ceil(2.0 / (beta * beta) * std::log(1.0 / alpha)));
}

} // namespace oracle
