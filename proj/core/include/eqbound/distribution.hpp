#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include "eqbound/action.hpp"

namespace eqbound {

/// A data distribution over the points of an action's space. When the space
/// factors as X x Y and the learning task is deterministic, `ystar` holds the
/// zero-risk labeling (a Y index per point) and `lip_ystar` its recorded
/// Lipschitz constant.
struct DataDistribution {
    std::vector<double> probabilities; // indexed by space point, sums to 1 within 1e-12
    std::optional<std::vector<std::size_t>> ystar;
    double lip_ystar = 0.0;

    /// Indices of points with positive mass.
    std::vector<std::size_t> support() const;
    void validate(std::size_t space_size) const;
};

struct Sample {
    std::vector<std::size_t> draws;
    std::uint64_t seed = 0;

    std::size_t n() const { return draws.size(); }
};

/// n i.i.d. draws by inverse CDF over the finite support; identical seeds
/// produce identical samples.
Sample draw_sample(const DataDistribution& dist, std::size_t n, std::uint64_t seed);

} // namespace eqbound
