#pragma once

#include <cstddef>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "sdlc/geometry.hpp"
#include "sdlc/rng.hpp"

namespace sdlc {

/// Point set X with +-1 labels and, for synthetic data, the hidden normal w*.
///
/// Invariants (checked at construction): |points| = |labels| = n >= 1, all
/// points share dimension d >= 1 and are finite, labels are +-1, and when a
/// ground truth is present labels[i] == sign_of(w* . x_i).
class LabeledDataset {
public:
    LabeledDataset(std::vector<Vector> points, std::vector<int> labels,
                   std::optional<Vector> ground_truth = std::nullopt);

    /// Labels derived from `ground_truth` with sign(0) := +1.
    static LabeledDataset labeled_by(std::vector<Vector> points, Vector ground_truth);

    std::size_t size() const noexcept { return points_.size(); }
    std::size_t dim() const noexcept { return points_.front().dim(); }
    const std::vector<Vector>& points() const noexcept { return points_; }
    const std::vector<int>& labels() const noexcept { return labels_; }
    const std::optional<Vector>& ground_truth() const noexcept { return ground_truth_; }

    friend bool operator==(const LabeledDataset&, const LabeledDataset&) = default;

private:
    std::vector<Vector> points_;
    std::vector<int> labels_;
    std::optional<Vector> ground_truth_;
};

/// n i.i.d. uniform points on S_d labeled by a uniformly drawn w*.
LabeledDataset gen_uniform_sphere(std::size_t n, std::size_t d, const RngStream& rng);

enum class Family { clustered, low_margin, subspace_degenerate, grid };

Family family_from_string(const std::string& name);
std::string to_string(Family family);

struct FamilyParams {
    // low_margin: every point sits at |w*.x| = gamma.
    double gamma = 0.1;
    // subspace_degenerate: fraction rho of the points lies in a random subspace of dimension sub_dim.
    double rho = 0.5;
    std::size_t sub_dim = 1;
    // clustered: `clusters` centers at signed distance `offset` from the boundary, Gaussian spread.
    std::size_t clusters = 6;
    double offset = 0.05;
    double spread = 0.08;
};

/// Structured, always-realizable families on the unit sphere.
LabeledDataset gen_arbitrary(Family family, std::size_t n, std::size_t d, const FamilyParams& params,
                             const RngStream& rng);

/// JSON-lines: header {"d","n","ground_truth"} then {"x":[...],"y":+-1} per point.
/// Doubles are written with 17 significant digits, so a round trip is bit-exact.
void write_jsonl(const LabeledDataset& ds, std::ostream& out);
LabeledDataset read_jsonl(std::istream& in);
void save(const LabeledDataset& ds, const std::filesystem::path& path);
LabeledDataset load(const std::filesystem::path& path);
/// Flat columns x1..xd,y for plotting.
void save_csv(const LabeledDataset& ds, const std::filesystem::path& path);

/// Partition of 0..n-1 into equally sized (+-1) ordered lists.
struct Bucketing {
    std::vector<std::vector<std::size_t>> buckets;
};

/// Uniformly random partition of n indices into `num_buckets` (even, >= 2) buckets.
Bucketing split_buckets(std::size_t n, std::size_t num_buckets, RngStream& rng);

/// "%.17g"
std::string format_double(double value);

} // namespace sdlc
