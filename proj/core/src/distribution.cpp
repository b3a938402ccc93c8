#include "eqbound/distribution.hpp"

#include <algorithm>
#include <cmath>

#include "eqbound/rng.hpp"

namespace eqbound {

std::vector<std::size_t> DataDistribution::support() const {
    std::vector<std::size_t> s;
    for (std::size_t z = 0; z < probabilities.size(); ++z)
        if (probabilities[z] > 0.0) s.push_back(z);
    return s;
}

void DataDistribution::validate(std::size_t space_size) const {
    if (probabilities.size() != space_size) {
        throw invalid_input("distribution must assign a probability to every point");
    }
    double total = 0.0;
    for (double p : probabilities) {
        if (p < 0.0 || !std::isfinite(p)) throw invalid_input("probabilities must be nonnegative");
        total += p;
    }
    if (std::abs(total - 1.0) > 1e-12) throw invalid_input("probabilities must sum to 1 within 1e-12");
    if (ystar && ystar->size() != space_size) {
        throw invalid_input("ystar must be defined on every point");
    }
}

Sample draw_sample(const DataDistribution& dist, std::size_t n, std::uint64_t seed) {
    std::vector<double> cdf(dist.probabilities.size(), 0.0);
    double run = 0.0;
    for (std::size_t z = 0; z < cdf.size(); ++z) {
        run += dist.probabilities[z];
        cdf[z] = run;
    }
    Sample s;
    s.seed = seed;
    s.draws.reserve(n);
    SplitMix64 rng(seed);
    for (std::size_t i = 0; i < n; ++i) {
        const double u = rng.uniform() * run;
        std::size_t z = static_cast<std::size_t>(
            std::lower_bound(cdf.begin(), cdf.end(), u, [](double c, double v) { return c <= v; }) -
            cdf.begin());
        if (z >= cdf.size()) z = cdf.size() - 1;
        // Never emit a zero-probability point off the support boundary.
        while (z > 0 && dist.probabilities[z] == 0.0) --z;
        s.draws.push_back(z);
    }
    return s;
}

} // namespace eqbound
