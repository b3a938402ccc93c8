#include "eqbound/isodiametric.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

#include "eqbound/covering.hpp"
#include "eqbound/rng.hpp"

namespace eqbound {

namespace {

double subset_diameter(const FiniteMetricSpace& space, const std::vector<std::size_t>& pts) {
    double d = 0.0;
    for (std::size_t a = 0; a < pts.size(); ++a)
        for (std::size_t b = a + 1; b < pts.size(); ++b) d = std::max(d, space.dist(pts[a], pts[b]));
    return d;
}

} // namespace

IsodiametricFit isodiametric_constant(const FiniteGroup& group, IsodiametricOptions options) {
    const FiniteMetricSpace space = group.word_metric_space();
    const std::size_t n = group.size();
    IsodiametricFit fit;
    fit.ddim = options.ddim_override ? *options.ddim_override : doubling_dimension(space);
    fit.exhaustive = n <= options.exhaustive_cap;
    fit.lambda_threshold = n >= 2 ? 2.0 / static_cast<double>(n) : 1.0;

    std::vector<double> min_diam(n + 1, std::numeric_limits<double>::infinity());
    min_diam[1] = 0.0;

    if (fit.exhaustive) {
        // Walk every subset once, tracking the minimum diameter per cardinality.
        const std::uint64_t total = 1ULL << n;
        for (std::uint64_t mask = 1; mask < total; ++mask) {
            std::vector<std::size_t> pts;
            for (std::size_t i = 0; i < n; ++i)
                if (mask >> i & 1) pts.push_back(i);
            const double d = subset_diameter(space, pts);
            min_diam[pts.size()] = std::min(min_diam[pts.size()], d);
        }
    } else {
        SplitMix64 rng(options.seed ^ 0x150d1a0ULL);
        std::vector<std::size_t> perm(n);
        std::iota(perm.begin(), perm.end(), 0);
        // Word-length balls around the identity supply low-diameter subsets
        // deterministically; random subsets probe the rest. Cardinalities are
        // sampled on a stride grid to keep large groups cheap.
        std::vector<std::size_t> by_length(n);
        std::iota(by_length.begin(), by_length.end(), 0);
        std::sort(by_length.begin(), by_length.end(), [&](std::size_t a, std::size_t b) {
            return group.word_length(a) < group.word_length(b);
        });
        const std::size_t stride = std::max<std::size_t>(1, n / 48);
        for (std::size_t k = 2; k <= n; k = (k == n ? n + 1 : std::min(n, k + stride))) {
            std::vector<std::size_t> ball(by_length.begin(), by_length.begin() + k);
            min_diam[k] = std::min(min_diam[k], subset_diameter(space, ball));
            for (std::size_t s = 0; s < options.samples_per_cardinality; ++s) {
                for (std::size_t i = 0; i < k; ++i) {
                    const std::size_t j = i + rng.below(n - i);
                    std::swap(perm[i], perm[j]);
                }
                std::vector<std::size_t> pts(perm.begin(), perm.begin() + k);
                min_diam[k] = std::min(min_diam[k], subset_diameter(space, pts));
            }
        }
    }

    fit.C_G = std::numeric_limits<double>::infinity();
    for (std::size_t k = 1; k <= n; ++k) {
        if (!std::isfinite(min_diam[k])) continue; // cardinality not sampled
        IsodiametricRow row;
        row.cardinality = k;
        row.lambda = static_cast<double>(k) / static_cast<double>(n);
        row.min_diameter = min_diam[k];
        fit.rows.push_back(row);
        if (k < 2) continue; // diameter 0, excluded from the fit
        const double ratio = min_diam[k] / std::pow(row.lambda, 1.0 / fit.ddim);
        if (ratio < fit.C_G) {
            fit.C_G = ratio;
            fit.tight_cardinality = k;
        }
    }
    if (!std::isfinite(fit.C_G)) fit.C_G = 0.0;
    return fit;
}

} // namespace eqbound
