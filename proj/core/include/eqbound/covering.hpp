#pragma once

#include <cstdint>
#include <vector>

#include "eqbound/metric_space.hpp"

namespace eqbound {

enum class CoverMode { exact, greedy };

/// Witness for a covering: every point of the space lies within `radius` of
/// some center. Balls are closed and centered at points of the space.
struct CoverCertificate {
    double radius = 0.0;
    std::vector<std::size_t> centers;
    CoverMode mode = CoverMode::exact;
};

struct CoverResult {
    std::int64_t count = 0;
    CoverCertificate certificate;
};

/// Default point-count cap for exact covering searches.
inline constexpr std::size_t kDefaultExactCoverCap = 64;

/// Covering number N(X, radius) with closed balls centered at points of the
/// space. Exact mode runs branch-and-bound set cover seeded with the greedy
/// incumbent and aborts with size_cap_error above `exact_cap` points; greedy
/// mode returns an upper bound with its certificate.
CoverResult covering_number(const FiniteMetricSpace& space, double radius,
                            CoverMode mode = CoverMode::exact,
                            std::size_t exact_cap = kDefaultExactCoverCap);

/// True iff the certificate covers the space at its stated radius.
bool certificate_covers(const FiniteMetricSpace& space, const CoverCertificate& cert);

/// log2 of the worst-case number of closed R/2-balls needed to cover a closed
/// R-ball, maximized over all centers and all radii R in the pairwise-distance
/// set. Each inner cover is exact (covering centers may be any point of the
/// space). Single point -> 0.
double doubling_dimension(const FiniteMetricSpace& space,
                          std::size_t exact_cap = kDefaultExactCoverCap);

/// One row of the cover-growth diagnostic: exact N(Z, eps) against the
/// doubling bound (2 diam / eps)^ddim, with the implied constant
/// N * eps^ddim / (2 diam)^ddim. Diagnostic only; the bound's universal
/// constant is unspecified, so nothing is asserted.
struct CoverGrowthRow {
    double radius = 0.0;
    std::int64_t cover_count = 0;
    double doubling_bound = 0.0;
    double implied_constant = 0.0;
};

std::vector<CoverGrowthRow> cover_growth_check(const FiniteMetricSpace& space,
                                               const std::vector<double>& radii,
                                               std::size_t exact_cap = kDefaultExactCoverCap);

} // namespace eqbound
