#include "sdlc/dataset.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <limits>
#include <numeric>
#include <sstream>

#include <json.hpp>

#include "sdlc/errors.hpp"

namespace sdlc {

using nlohmann::json;

LabeledDataset::LabeledDataset(std::vector<Vector> points, std::vector<int> labels,
                               std::optional<Vector> ground_truth)
    : points_(std::move(points)), labels_(std::move(labels)), ground_truth_(std::move(ground_truth)) {
    if (points_.empty()) throw InvalidArgument("dataset: n must be >= 1");
    if (points_.size() != labels_.size()) throw InvalidArgument("dataset: |points| != |labels|");
    const std::size_t d = points_.front().dim();
    if (d == 0) throw InvalidArgument("dataset: d must be >= 1");
    for (const Vector& x : points_) {
        if (x.dim() != d) throw InvalidArgument("dataset: mixed dimensions");
        if (!is_finite(x)) throw InvalidArgument("dataset: non-finite coordinate");
    }
    for (int y : labels_)
        if (y != 1 && y != -1) throw InvalidArgument("dataset: labels must be +1 or -1");
    if (ground_truth_) {
        if (ground_truth_->dim() != d) throw InvalidArgument("dataset: ground truth dimension mismatch");
        for (std::size_t i = 0; i < points_.size(); ++i)
            if (labels_[i] != sign_of(dot(*ground_truth_, points_[i])))
                throw InvalidArgument("dataset: label " + std::to_string(i) + " inconsistent with ground truth");
    }
}

LabeledDataset LabeledDataset::labeled_by(std::vector<Vector> points, Vector ground_truth) {
    std::vector<int> labels;
    labels.reserve(points.size());
    for (const Vector& x : points) labels.push_back(sign_of(dot(ground_truth, x)));
    return LabeledDataset(std::move(points), std::move(labels), std::move(ground_truth));
}

LabeledDataset gen_uniform_sphere(std::size_t n, std::size_t d, const RngStream& rng) {
    if (n == 0) throw InvalidArgument("gen_uniform_sphere: n must be >= 1");
    if (d == 0) throw InvalidArgument("gen_uniform_sphere: d must be >= 1");
    RngStream truth_rng = rng.child(1);
    RngStream point_rng = rng.child(2);
    Vector w_star = sample_sphere(d, truth_rng);
    std::vector<Vector> points;
    points.reserve(n);
    for (std::size_t i = 0; i < n; ++i) points.push_back(sample_sphere(d, point_rng));
    return LabeledDataset::labeled_by(std::move(points), std::move(w_star));
}

Family family_from_string(const std::string& name) {
    if (name == "clustered") return Family::clustered;
    if (name == "low_margin") return Family::low_margin;
    if (name == "subspace_degenerate") return Family::subspace_degenerate;
    if (name == "grid") return Family::grid;
    throw InvalidArgument("unknown dataset family '" + name + "'");
}

std::string to_string(Family family) {
    switch (family) {
    case Family::clustered: return "clustered";
    case Family::low_margin: return "low_margin";
    case Family::subspace_degenerate: return "subspace_degenerate";
    case Family::grid: return "grid";
    }
    return "unknown";
}

namespace {

/// k orthonormal vectors in R^d (Gram-Schmidt on Gaussian draws).
std::vector<Vector> random_orthonormal(std::size_t d, std::size_t k, RngStream& rng) {
    std::vector<Vector> basis;
    while (basis.size() < k) {
        Vector g = sample_sphere(d, rng);
        for (const Vector& b : basis) g -= dot(g, b) * b;
        const double n = norm(g);
        if (n > 1e-6) basis.push_back((1.0 / n) * g);
    }
    return basis;
}

std::vector<Vector> gen_clustered(std::size_t n, std::size_t d, const FamilyParams& p,
                                  const Vector& w_star, RngStream& rng) {
    if (p.clusters == 0) throw InvalidArgument("clustered: clusters must be >= 1");
    if (!(p.offset >= 0.0 && p.offset <= 1.0)) throw InvalidArgument("clustered: offset must lie in [0, 1]");
    if (!(p.spread >= 0.0)) throw InvalidArgument("clustered: spread must be >= 0");

    std::vector<Vector> centers;
    for (std::size_t j = 0; j < p.clusters; ++j) {
        const double side = rng.bernoulli(0.5) ? 1.0 : -1.0;
        if (d == 1) {
            centers.push_back(Vector{side});
            continue;
        }
        const Vector along = sample_orthogonal(w_star, rng);
        centers.push_back(std::sqrt(1.0 - p.offset * p.offset) * along + side * p.offset * w_star);
    }

    std::vector<Vector> points;
    points.reserve(n);
    const double scale = p.spread / std::sqrt(static_cast<double>(d));
    while (points.size() < n) {
        const Vector& c = centers[rng.uniform_index(centers.size())];
        Vector x = c;
        for (std::size_t i = 0; i < d; ++i) x[i] += scale * rng.normal();
        const double len = norm(x);
        if (len > 1e-12) points.push_back((1.0 / len) * x);
    }
    return points;
}

std::vector<Vector> gen_low_margin(std::size_t n, std::size_t d, const FamilyParams& p,
                                   const Vector& w_star, RngStream& rng) {
    if (!(p.gamma >= 0.0 && p.gamma <= 1.0)) throw InvalidArgument("low_margin: gamma must lie in [0, 1]");
    std::vector<Vector> points;
    points.reserve(n);
    for (std::size_t i = 0; i < n; ++i) {
        const double side = rng.bernoulli(0.5) ? 1.0 : -1.0;
        if (d == 1) {
            points.push_back(side * w_star);
            continue;
        }
        const Vector along = sample_orthogonal(w_star, rng);
        Vector x = side * p.gamma * w_star + std::sqrt(1.0 - p.gamma * p.gamma) * along;
        points.push_back(normalized(x));
    }
    return points;
}

std::vector<Vector> gen_subspace(std::size_t n, std::size_t d, const FamilyParams& p, RngStream& rng) {
    if (!(p.rho >= 0.0 && p.rho <= 1.0)) throw InvalidArgument("subspace_degenerate: rho must lie in [0, 1]");
    if (p.sub_dim < 1 || p.sub_dim > d)
        throw InvalidArgument("subspace_degenerate: sub_dim must lie in [1, d]");
    const auto basis = random_orthonormal(d, p.sub_dim, rng);
    const auto inside = static_cast<std::size_t>(std::llround(p.rho * static_cast<double>(n)));

    std::vector<Vector> points;
    points.reserve(n);
    for (std::size_t i = 0; i < n; ++i) {
        if (i < inside) {
            Vector x(d);
            for (const Vector& b : basis) x += rng.normal() * b;
            if (norm(x) < 1e-12) x = basis.front();
            points.push_back(normalized(x));
        } else {
            points.push_back(sample_sphere(d, rng));
        }
    }
    rng.shuffle(std::span<Vector>(points));
    return points;
}

std::vector<Vector> gen_grid(std::size_t n, std::size_t d) {
    // Smallest cube {-m..m}^d holding n nonzero lattice points; take an even stride through it.
    std::uint64_t side = 3;
    long double total = std::pow(static_cast<long double>(side), static_cast<long double>(d));
    while (total - 1 < static_cast<long double>(n)) {
        side += 2;
        total = std::pow(static_cast<long double>(side), static_cast<long double>(d));
    }
    if (total > static_cast<long double>(std::numeric_limits<std::uint64_t>::max() / 4))
        throw InvalidArgument("grid: lattice too large for this dimension");
    const auto cube = static_cast<std::uint64_t>(total);
    const std::uint64_t origin = (cube - 1) / 2;
    const std::uint64_t usable = cube - 1;
    const auto half = static_cast<std::int64_t>(side / 2);

    std::vector<Vector> points;
    points.reserve(n);
    for (std::size_t i = 0; i < n; ++i) {
        auto t = static_cast<std::uint64_t>(static_cast<unsigned __int128>(i) * usable / n);
        if (t >= origin) ++t;
        Vector x(d);
        for (std::size_t j = 0; j < d; ++j) {
            x[j] = static_cast<double>(static_cast<std::int64_t>(t % side) - half);
            t /= side;
        }
        points.push_back(normalized(x));
    }
    return points;
}

} // namespace

LabeledDataset gen_arbitrary(Family family, std::size_t n, std::size_t d, const FamilyParams& params,
                             const RngStream& rng) {
    if (n == 0) throw InvalidArgument("gen_arbitrary: n must be >= 1");
    if (d == 0) throw InvalidArgument("gen_arbitrary: d must be >= 1");
    RngStream truth_rng = rng.child(1);
    RngStream point_rng = rng.child(2);
    Vector w_star = sample_sphere(d, truth_rng);

    std::vector<Vector> points;
    switch (family) {
    case Family::clustered: points = gen_clustered(n, d, params, w_star, point_rng); break;
    case Family::low_margin: points = gen_low_margin(n, d, params, w_star, point_rng); break;
    case Family::subspace_degenerate: points = gen_subspace(n, d, params, point_rng); break;
    case Family::grid: points = gen_grid(n, d); break;
    }
    return LabeledDataset::labeled_by(std::move(points), std::move(w_star));
}

std::string format_double(double value) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", value);
    return buf;
}

namespace {

void write_array(std::ostream& out, const Vector& v) {
    out << '[';
    for (std::size_t i = 0; i < v.dim(); ++i) {
        if (i) out << ',';
        out << format_double(v[i]);
    }
    out << ']';
}

Vector parse_vector(const json& node, std::size_t d, std::size_t line, const char* field) {
    if (!node.is_array()) throw ParseError(std::string("'") + field + "' must be an array", line);
    if (node.size() != d)
        throw ParseError(std::string("'") + field + "' has " + std::to_string(node.size()) +
                             " entries, expected " + std::to_string(d),
                         line);
    Vector v(d);
    for (std::size_t i = 0; i < d; ++i) {
        if (!node[i].is_number()) throw ParseError(std::string("'") + field + "' entries must be numbers", line);
        v[i] = node[i].get<double>();
    }
    return v;
}

} // namespace

void write_jsonl(const LabeledDataset& ds, std::ostream& out) {
    out << "{\"d\":" << ds.dim() << ",\"n\":" << ds.size() << ",\"ground_truth\":";
    if (ds.ground_truth())
        write_array(out, *ds.ground_truth());
    else
        out << "null";
    out << "}\n";
    for (std::size_t i = 0; i < ds.size(); ++i) {
        out << "{\"x\":";
        write_array(out, ds.points()[i]);
        out << ",\"y\":" << ds.labels()[i] << "}\n";
    }
}

LabeledDataset read_jsonl(std::istream& in) {
    std::string text;
    std::size_t line_no = 0;
    std::optional<std::size_t> d, n;
    std::optional<Vector> truth;
    std::vector<Vector> points;
    std::vector<int> labels;

    while (std::getline(in, text)) {
        ++line_no;
        if (text.find_first_not_of(" \t\r") == std::string::npos) continue;
        json node;
        try {
            node = json::parse(text);
        } catch (const json::parse_error& e) {
            throw ParseError(std::string("invalid JSON: ") + e.what(), line_no);
        }
        if (!node.is_object()) throw ParseError("record must be a JSON object", line_no);

        if (!d) {
            if (!node.contains("d") || !node["d"].is_number_unsigned() || node["d"].get<std::size_t>() == 0)
                throw ParseError("header needs a positive integer 'd'", line_no);
            if (!node.contains("n") || !node["n"].is_number_unsigned())
                throw ParseError("header needs a non-negative integer 'n'", line_no);
            d = node["d"].get<std::size_t>();
            n = node["n"].get<std::size_t>();
            if (node.contains("ground_truth") && !node["ground_truth"].is_null())
                truth = parse_vector(node["ground_truth"], *d, line_no, "ground_truth");
            continue;
        }

        if (!node.contains("x")) throw ParseError("record is missing 'x'", line_no);
        if (!node.contains("y") || !node["y"].is_number_integer())
            throw ParseError("record needs an integer label 'y'", line_no);
        const auto y = node["y"].get<long long>();
        if (y != 1 && y != -1) throw ParseError("label must be 1 or -1, got " + std::to_string(y), line_no);
        points.push_back(parse_vector(node["x"], *d, line_no, "x"));
        labels.push_back(static_cast<int>(y));
    }

    if (!d) throw ParseError("missing header line", line_no);
    if (points.size() != *n)
        throw ParseError("header declares n=" + std::to_string(*n) + " but file holds " +
                             std::to_string(points.size()) + " records",
                         line_no);
    try {
        return LabeledDataset(std::move(points), std::move(labels), std::move(truth));
    } catch (const InvalidArgument& e) {
        throw ParseError(e.what(), 0);
    }
}

void save(const LabeledDataset& ds, const std::filesystem::path& path) {
    std::ofstream out(path);
    if (!out) throw IoError("cannot open '" + path.string() + "' for writing");
    write_jsonl(ds, out);
    if (!out) throw IoError("write to '" + path.string() + "' failed");
}

LabeledDataset load(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw IoError("cannot open '" + path.string() + "' for reading");
    return read_jsonl(in);
}

void save_csv(const LabeledDataset& ds, const std::filesystem::path& path) {
    std::ofstream out(path);
    if (!out) throw IoError("cannot open '" + path.string() + "' for writing");
    for (std::size_t j = 0; j < ds.dim(); ++j) out << 'x' << (j + 1) << ',';
    out << "y\n";
    for (std::size_t i = 0; i < ds.size(); ++i) {
        for (std::size_t j = 0; j < ds.dim(); ++j) out << format_double(ds.points()[i][j]) << ',';
        out << ds.labels()[i] << '\n';
    }
    if (!out) throw IoError("write to '" + path.string() + "' failed");
}

Bucketing split_buckets(std::size_t n, std::size_t num_buckets, RngStream& rng) {
    if (num_buckets < 2 || num_buckets % 2 != 0)
        throw InvalidArgument("split_buckets: bucket count must be even and >= 2");
    if (n < num_buckets) throw InvalidArgument("split_buckets: fewer indices than buckets");
    std::vector<std::size_t> perm(n);
    std::iota(perm.begin(), perm.end(), 0);
    rng.shuffle(std::span<std::size_t>(perm));

    Bucketing out;
    out.buckets.resize(num_buckets);
    const std::size_t base = n / num_buckets;
    const std::size_t extra = n % num_buckets;
    std::size_t pos = 0;
    for (std::size_t b = 0; b < num_buckets; ++b) {
        const std::size_t size = base + (b < extra ? 1 : 0);
        out.buckets[b].assign(perm.begin() + static_cast<std::ptrdiff_t>(pos),
                              perm.begin() + static_cast<std::ptrdiff_t>(pos + size));
        pos += size;
    }
    return out;
}

} // namespace sdlc
