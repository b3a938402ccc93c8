#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include "eqbound/group.hpp"

namespace eqbound {

struct IsodiametricRow {
    std::size_t cardinality = 0;
    double lambda = 0.0;
    double min_diameter = 0.0;
};

/// Result of fitting the isodiametric inequality
///   |X|/|G| >= lambda  =>  diam(X) >= C_G lambda^(1/ddim(G))
/// over the group's word metric. In exhaustive mode the per-cardinality
/// minimum diameters are exact and the inequality holds for every subset by
/// construction, with the binding cardinality as a tight witness. Singletons
/// have diameter 0 and are excluded from the fit; lambda_threshold = 2/|G| is
/// the smallest density the constant is certified for.
struct IsodiametricFit {
    double C_G = 0.0;
    double ddim = 0.0;
    bool exhaustive = true;
    std::size_t tight_cardinality = 0;
    double lambda_threshold = 0.0;
    std::vector<IsodiametricRow> rows;
};

struct IsodiametricOptions {
    std::size_t exhaustive_cap = 16;       // |G| above this switches to sampling
    std::size_t samples_per_cardinality = 128;
    std::uint64_t seed = 0;
    /// ddim(G) override for groups too large for the exact doubling-dimension
    /// search; required above the covering cap.
    std::optional<double> ddim_override;
};

IsodiametricFit isodiametric_constant(const FiniteGroup& group, IsodiametricOptions options = {});

} // namespace eqbound
