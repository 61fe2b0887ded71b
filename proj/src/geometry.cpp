#include "sdlc/geometry.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "sdlc/errors.hpp"

namespace sdlc {

Vector Vector::basis(std::size_t dim, std::size_t i) {
    if (i >= dim) throw InvalidArgument("basis index out of range");
    Vector e(dim);
    e[i] = 1.0;
    return e;
}

Vector& Vector::operator+=(const Vector& other) {
    for (std::size_t i = 0; i < coords_.size(); ++i) coords_[i] += other.coords_[i];
    return *this;
}

Vector& Vector::operator-=(const Vector& other) {
    for (std::size_t i = 0; i < coords_.size(); ++i) coords_[i] -= other.coords_[i];
    return *this;
}

Vector& Vector::operator*=(double s) {
    for (double& c : coords_) c *= s;
    return *this;
}

Vector operator+(Vector a, const Vector& b) { return a += b; }
Vector operator-(Vector a, const Vector& b) { return a -= b; }
Vector operator*(double s, Vector v) { return v *= s; }
Vector operator-(Vector v) { return v *= -1.0; }

double dot(std::span<const double> a, std::span<const double> b) noexcept {
    double acc = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) acc += a[i] * b[i];
    return acc;
}

double norm_sq(const Vector& v) noexcept { return dot(v, v); }
double norm(const Vector& v) noexcept { return std::sqrt(norm_sq(v)); }

bool is_finite(const Vector& v) noexcept {
    return std::all_of(v.coords().begin(), v.coords().end(),
                       [](double c) { return std::isfinite(c); });
}

bool is_unit(const Vector& v) noexcept { return std::abs(norm(v) - 1.0) <= 1e-9; }

Vector normalized(const Vector& v) {
    const double n = norm(v);
    if (!(n > 0.0) || !std::isfinite(n)) throw InvalidArgument("cannot normalize a zero or non-finite vector");
    Vector out = v;
    out *= 1.0 / n;
    return out;
}

Vector sample_sphere(std::size_t dim, RngStream& rng) {
    if (dim == 0) throw InvalidArgument("sample_sphere: dimension must be >= 1");
    // S_1 is {-1, +1}; return it exactly rather than g/|g|.
    if (dim == 1) return Vector{rng.uniform() < 0.5 ? -1.0 : 1.0};
    Vector g(dim);
    for (;;) {
        for (std::size_t i = 0; i < dim; ++i) g[i] = rng.normal();
        const double n = norm(g);
        if (n > 1e-150) {
            g *= 1.0 / n;
            return g;
        }
    }
}

Vector sample_orthogonal(const Vector& u, RngStream& rng) {
    if (u.dim() < 2) throw InvalidArgument("sample_orthogonal: needs dimension >= 2");
    for (;;) {
        Vector g = sample_sphere(u.dim(), rng);
        g -= dot(g, u) * u;
        const double n = norm(g);
        if (n > 1e-8) {
            g *= 1.0 / n;
            return g;
        }
    }
}

namespace {
void require_nonzero(const Vector& v, const char* who) {
    if (v.dim() == 0 || norm_sq(v) == 0.0) throw InvalidArgument(std::string(who) + ": zero vector");
}
} // namespace

double angle(const Vector& u, const Vector& v) {
    require_nonzero(u, "angle");
    require_nonzero(v, "angle");
    const double c = dot(u, v) / (norm(u) * norm(v));
    return std::acos(std::clamp(c, -1.0, 1.0));
}

double tan_theta(const Vector& u, const Vector& v) {
    require_nonzero(u, "tan_theta");
    require_nonzero(v, "tan_theta");
    const double uv = dot(u, v);
    if (uv == 0.0) return std::numeric_limits<double>::infinity();
    const double ratio = norm_sq(u) * norm_sq(v) / (uv * uv) - 1.0;
    return std::sqrt(std::max(ratio, 0.0));
}

bool in_disagreement(const Vector& x, const Vector& u, const Vector& v) {
    // Sign test rather than the product, which can underflow to zero.
    const double ux = dot(u, x);
    const double vx = dot(v, x);
    return (ux <= 0.0 && vx >= 0.0) || (ux >= 0.0 && vx <= 0.0);
}

} // namespace sdlc
