#pragma once

#include <cstdint>

#include "eqbound/distribution.hpp"
#include "eqbound/function_class.hpp"

namespace eqbound {

/// A seeded random verification instance: a preset group acting naturally on
/// a handful of disjoint blocks whose points carry a random Euclidean
/// embedding metric, a random tabular class, and a random distribution.
/// Deterministic in the seed.
struct RandomInstance {
    GroupAction action;
    FunctionClass cls;
    DataDistribution dist;
};

struct RandomInstanceOptions {
    std::size_t max_group_order = 24;
    std::size_t max_space_points = 64;
    std::size_t max_class_size = 6;
};

RandomInstance make_random_instance(std::uint64_t seed, RandomInstanceOptions options = {});

} // namespace eqbound
