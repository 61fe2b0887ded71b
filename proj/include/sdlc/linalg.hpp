#pragma once

#include <cstddef>
#include <vector>

#include "sdlc/geometry.hpp"

namespace sdlc {

/// Small dense row-major matrix. Sized for d x d work at desk scale.
class Matrix {
public:
    Matrix() = default;
    Matrix(std::size_t rows, std::size_t cols, double fill = 0.0)
        : rows_(rows), cols_(cols), data_(rows * cols, fill) {}

    static Matrix identity(std::size_t n);
    /// Matrix whose columns are the given vectors (all of equal dimension).
    static Matrix from_columns(const std::vector<Vector>& columns);

    std::size_t rows() const noexcept { return rows_; }
    std::size_t cols() const noexcept { return cols_; }

    double& operator()(std::size_t r, std::size_t c) { return data_[r * cols_ + c]; }
    double operator()(std::size_t r, std::size_t c) const { return data_[r * cols_ + c]; }

    Vector column(std::size_t c) const;
    Matrix transposed() const;
    double max_abs() const noexcept;
    Matrix& operator*=(double s);

    const std::vector<double>& data() const noexcept { return data_; }

private:
    std::size_t rows_ = 0;
    std::size_t cols_ = 0;
    std::vector<double> data_;
};

Matrix operator*(const Matrix& a, const Matrix& b);
Vector operator*(const Matrix& a, const Vector& x);

/// Gauss-Jordan inverse with partial pivoting; throws SingularMap on a (numerically) singular matrix.
Matrix inverse(const Matrix& m);

/// Eigen-decomposition of a symmetric matrix: values sorted in decreasing
/// order, vectors[i] the unit eigenvector paired with values[i].
struct SymmetricEigen {
    std::vector<double> values;
    std::vector<Vector> vectors;
    int sweeps = 0;
};

/// Cyclic Jacobi rotations until the off-diagonal Frobenius mass falls below
/// `tol` times the total Frobenius mass (or `max_sweeps` is reached).
SymmetricEigen jacobi_eigen(const Matrix& symmetric, double tol = 1e-12, int max_sweeps = 100);

/// (1/|X|) sum x x^T
Matrix second_moment(const std::vector<Vector>& points);

/// f(M) = V diag(f(lambda)) V^T for a decomposed symmetric M.
template <class F>
Matrix spectral_apply(const SymmetricEigen& eig, F&& f) {
    const std::size_t n = eig.values.size();
    Matrix out(n, n);
    for (std::size_t k = 0; k < n; ++k) {
        const double s = f(eig.values[k]);
        const Vector& v = eig.vectors[k];
        for (std::size_t i = 0; i < n; ++i)
            for (std::size_t j = 0; j < n; ++j) out(i, j) += s * v[i] * v[j];
    }
    return out;
}

} // namespace sdlc
