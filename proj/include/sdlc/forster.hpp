#pragma once

#include <cstddef>
#include <optional>
#include <vector>

#include "sdlc/errors.hpp"
#include "sdlc/geometry.hpp"
#include "sdlc/linalg.hpp"

namespace sdlc {

struct RipReport {
    double min_dir_second_moment = 0.0; // lambda_min of (1/|X|) sum x x^T
    double max_norm_dev = 0.0;          // max | |x| - 1 |
    double delta_target = 0.0;
    bool pass = false;
};

/// Minimum over unit u of (1/|X|) sum (u.x)^2, which is exactly lambda_min of
/// the second-moment matrix. pass iff lambda_min >= 1/d - delta and every
/// point is unit within 1e-9.
RipReport rip_check(const std::vector<Vector>& X, double delta);

/// S_A(x) = Ax / |Ax|. Throws SingularMap when Ax vanishes.
Vector normalized_map(const Matrix& A, const Vector& x);

struct ForsterOutput {
    Matrix A;                                // d x d, invertible
    Matrix frame_map;                        // k x k: A restricted to V, in subspace_basis coordinates
    std::vector<Vector> subspace_basis;      // k orthonormal vectors of R^d spanning V
    std::vector<std::size_t> retained_indices;
    std::vector<Vector> transformed_points;  // S_A(x) in the k-dim frame of subspace_basis
    double fraction = 0.0;                   // |X cap V| / |X|
    RipReport rip;                           // of transformed_points
    int iterations = 0;                      // rip checks performed, summed over restrictions
    std::size_t dim() const noexcept { return subspace_basis.size(); }
};

class NoConvergence : public Error {
public:
    NoConvergence(const std::string& what, RipReport last) : Error(what), last_(last) {}
    const RipReport& last_report() const noexcept { return last_; }

private:
    RipReport last_;
};

struct ForsterOptions {
    std::optional<int> max_iters;   // default 10 d ln(1/delta)
    int collapse_patience = 10;     // iterations with lambda_min < delta/(4k) before extraction
    int stall_window = 20;          // iterations without lambda_min progress before extraction
    double stall_gain = 1e-6;
    double membership_tol = 1e-9;   // residual outside V counted as inside
    double max_condition = 1e10;    // cond(B) beyond which the iteration is treated as collapsed
};

/// Whitening fixed point A <- M^{-1/2} A with renormalization, restricted to a
/// heavy subspace whenever the iteration collapses or stalls.
ForsterOutput forster_transform(const std::vector<Vector>& X, double delta, const ForsterOptions& opts = {});

/// Pr_{x in X}[ |u.x| >= 1/(2 sqrt d) ]. Requires rip_check(X, 1/(2d)).pass.
double soft_margin_audit(const std::vector<Vector>& X, const Vector& u);

} // namespace sdlc
