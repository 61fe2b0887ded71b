#pragma once

#include <cstddef>
#include <initializer_list>
#include <span>
#include <vector>

#include "sdlc/rng.hpp"

namespace sdlc {

/// Dense d-dimensional point or weight vector (d >= 1, finite coordinates).
class Vector {
public:
    Vector() = default;
    explicit Vector(std::size_t dim, double fill = 0.0) : coords_(dim, fill) {}
    Vector(std::initializer_list<double> values) : coords_(values) {}
    explicit Vector(std::vector<double> values) : coords_(std::move(values)) {}

    std::size_t dim() const noexcept { return coords_.size(); }
    double& operator[](std::size_t i) { return coords_[i]; }
    double operator[](std::size_t i) const { return coords_[i]; }

    std::span<double> coords() noexcept { return coords_; }
    std::span<const double> coords() const noexcept { return coords_; }
    const std::vector<double>& values() const noexcept { return coords_; }

    /// e_i in R^dim.
    static Vector basis(std::size_t dim, std::size_t i);

    Vector& operator+=(const Vector& other);
    Vector& operator-=(const Vector& other);
    Vector& operator*=(double s);

    friend bool operator==(const Vector&, const Vector&) = default;

private:
    std::vector<double> coords_;
};

Vector operator+(Vector a, const Vector& b);
Vector operator-(Vector a, const Vector& b);
Vector operator*(double s, Vector v);
Vector operator-(Vector v);

double dot(std::span<const double> a, std::span<const double> b) noexcept;
inline double dot(const Vector& a, const Vector& b) noexcept { return dot(a.coords(), b.coords()); }
double norm_sq(const Vector& v) noexcept;
double norm(const Vector& v) noexcept;
bool is_finite(const Vector& v) noexcept;
/// | ||v|| - 1 | <= 1e-9
bool is_unit(const Vector& v) noexcept;

/// v / ||v||; throws InvalidArgument on a zero or non-finite vector.
Vector normalized(const Vector& v);

/// Prediction convention shared by every learner: sign(0) = +1.
inline int sign_of(double value) noexcept { return value >= 0.0 ? 1 : -1; }

/// Uniform draw from S_d as a normalized isotropic Gaussian.
Vector sample_sphere(std::size_t dim, RngStream& rng);

/// Unit vector uniformly distributed among those orthogonal to the unit vector `u`.
Vector sample_orthogonal(const Vector& u, RngStream& rng);

/// Angle in [0, pi]; the cosine is clamped to [-1, 1] before arccos.
double angle(const Vector& u, const Vector& v);

/// tan(angle(u, v)) computed as sqrt(|u|^2 |v|^2 / (u.v)^2 - 1).
/// Returns +infinity when u.v == 0. For obtuse pairs this is |tan|.
double tan_theta(const Vector& u, const Vector& v);

/// (u.x)(v.x) <= 0: the two homogeneous halfspaces disagree on x (boundary counts).
bool in_disagreement(const Vector& x, const Vector& u, const Vector& v);

} // namespace sdlc
