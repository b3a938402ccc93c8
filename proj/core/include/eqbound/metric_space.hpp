#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>
#include <vector>

namespace eqbound {

/// Thrown when an input table violates a structural invariant (bad metric,
/// malformed group table, inconsistent action, ...). The message names the
/// offending entries.
class invalid_input : public std::runtime_error {
public:
    explicit invalid_input(const std::string& what) : std::runtime_error(what) {}
};

/// Thrown when an exact computation is requested above its size cap.
class size_cap_error : public std::runtime_error {
public:
    explicit size_cap_error(const std::string& what) : std::runtime_error(what) {}
};

/// A finite metric space: labeled points plus a full symmetric distance table.
/// Distances are dimensionless; units are whatever the producing scenario
/// declares. Immutable after construction; all member functions are const.
class FiniteMetricSpace {
public:
    /// Validates symmetry, zero diagonal, positivity off the diagonal and the
    /// triangle inequality (absolute slack 1e-9). Violations raise
    /// invalid_input naming the offending pair or triple.
    FiniteMetricSpace(std::vector<std::string> labels, std::vector<double> dist_row_major);

    std::size_t size() const { return labels_.size(); }
    const std::vector<std::string>& labels() const { return labels_; }
    const std::string& label(std::size_t i) const { return labels_[i]; }

    double dist(std::size_t i, std::size_t j) const { return dist_[i * labels_.size() + j]; }

    double diameter() const;

    /// Sorted distinct positive pairwise distances.
    std::vector<double> distance_values() const;

    /// Restriction of the metric to a subset of point indices; labels carry over.
    FiniteMetricSpace restrict(const std::vector<std::size_t>& points) const;

private:
    std::vector<std::string> labels_;
    std::vector<double> dist_;
};

/// min over i != j of dist(i, j). A single-point space has no pair, which is
/// reported as an error; callers treat every covering of such a space as one
/// ball.
double min_separation(const FiniteMetricSpace& space);

// Built-in generators. "cycle" is Z/mZ with the word metric of generators
// +-1, "path" is m unit-spaced collinear points, "torus2d" is (Z/mZ)^2 with
// the word metric of the four unit translations (L1 distance on the torus).
FiniteMetricSpace make_cycle_space(std::size_t m);
FiniteMetricSpace make_path_space(std::size_t m);
FiniteMetricSpace make_torus2d_space(std::size_t m);

/// Loads {"labels": [...], "dist": [[...]]} or {"preset": "cycle"|"path"|"torus2d", "size": m}.
FiniteMetricSpace load_metric_space_json(const std::string& json_text);

} // namespace eqbound
