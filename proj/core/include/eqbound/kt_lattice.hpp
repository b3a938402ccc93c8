#pragma once

#include <cstddef>
#include <cstdint>
#include <vector>

#include "eqbound/metric_space.hpp"

namespace eqbound {

/// All functions from the space to the value grid {-M/2, -M/2 + resolution,
/// ..., M/2} that are `lipschitz`-Lipschitz for the space metric. The grid
/// must tile [-M/2, M/2] exactly (M must be an integer multiple of the
/// resolution). Functions are returned in DFS order over grid levels.
std::vector<std::vector<double>> lipschitz_lattice(const FiniteMetricSpace& space, double M,
                                                   double resolution, double lipschitz = 1.0);

struct SupCoverOptions {
    /// Destroy-and-repair passes run after the greedy cover; each removes a
    /// few centers and rebuilds greedily, keeping improvements. Deterministic
    /// under the seed.
    std::size_t refine_iterations = 0;
    std::uint64_t seed = 0xC0FE5EEDULL;
};

/// Upper bound on the sup-norm covering number of a finite function family by
/// closed balls of `radius` centered at members: lazy greedy plus optional
/// refinement. Always a valid cover size.
std::size_t sup_cover_upper(const std::vector<std::vector<double>>& fns, double radius,
                            double resolution, SupCoverOptions options = {});

/// Size of a greedily grown family with pairwise sup distance strictly above
/// `gap`. Any such family lower-bounds the covering number at radius gap/2.
std::size_t sup_packing_lower(const std::vector<std::vector<double>>& fns, double gap);

/// Exact sup-norm covering number by member-centered closed balls, via the
/// branch-and-bound set cover engine. Requires at most 64 functions.
std::size_t sup_cover_exact(const std::vector<std::vector<double>>& fns, double radius);

} // namespace eqbound
