#include "eqbound/instances.hpp"

#include <algorithm>
#include <cmath>

#include "eqbound/rng.hpp"

namespace eqbound {

namespace {

std::string zero_pad(std::size_t v, std::size_t width) {
    std::string s = std::to_string(v);
    while (s.size() < width) s.insert(s.begin(), '0');
    return s;
}

double table_lipschitz(const std::vector<std::vector<double>>& values,
                       const FiniteMetricSpace& space) {
    double worst = 0.0;
    for (const auto& f : values)
        for (std::size_t i = 0; i < space.size(); ++i)
            for (std::size_t j = i + 1; j < space.size(); ++j)
                worst = std::max(worst, std::abs(f[i] - f[j]) / space.dist(i, j));
    return worst;
}

} // namespace

RandomInstance make_random_instance(std::uint64_t seed, RandomInstanceOptions options) {
    SplitMix64 rng(seed ^ 0x1257a7ce5ULL);

    // Group: one of the presets, with its natural block action.
    FiniteGroup group = make_cyclic_group(2);
    std::size_t block_size = 0;
    std::vector<std::size_t> natural; // natural[g * block_size + p]
    const std::uint64_t kind = rng.below(3);
    if (kind == 0) {
        const std::size_t k = 3 + rng.below(options.max_group_order - 2);
        group = make_cyclic_group(k);
        block_size = k;
        natural.resize(k * k);
        for (std::size_t g = 0; g < k; ++g)
            for (std::size_t p = 0; p < k; ++p) natural[g * k + p] = (p + g) % k;
    } else if (kind == 1) {
        const std::size_t k = 2 + rng.below(options.max_group_order / 2 - 1);
        group = make_dihedral_group(k);
        block_size = k;
        natural.resize(group.size() * k);
        for (std::size_t f = 0; f < 2; ++f)
            for (std::size_t r = 0; r < k; ++r)
                for (std::size_t p = 0; p < k; ++p) {
                    const std::size_t flipped = f ? (k - p) % k : p;
                    natural[(f * k + r) * k + p] = (flipped + r) % k;
                }
    } else {
        const std::size_t m = 2 + rng.below(3); // order m^2 <= 16
        group = make_torus2d_group(m);
        block_size = m * m;
        natural.resize(group.size() * block_size);
        for (std::size_t g = 0; g < group.size(); ++g)
            for (std::size_t p = 0; p < block_size; ++p) {
                const std::size_t a = (p / m + g / m) % m;
                const std::size_t b = (p % m + g % m) % m;
                natural[g * block_size + p] = a * m + b;
            }
    }

    std::size_t blocks = 1 + rng.below(3);
    while (blocks > 1 && blocks * block_size > options.max_space_points) --blocks;
    const std::size_t nz = blocks * block_size;

    // Random Euclidean embedding metric; distinct points almost surely.
    std::vector<double> coords(nz * 3);
    for (double& c : coords) c = rng.uniform();
    std::vector<std::string> labels(nz);
    for (std::size_t z = 0; z < nz; ++z) labels[z] = "z" + zero_pad(z, 2);
    std::vector<double> dist(nz * nz, 0.0);
    for (std::size_t i = 0; i < nz; ++i)
        for (std::size_t j = 0; j < nz; ++j) {
            double acc = 0.0;
            for (int c = 0; c < 3; ++c) {
                const double d = coords[i * 3 + c] - coords[j * 3 + c];
                acc += d * d;
            }
            dist[i * nz + j] = std::sqrt(acc);
        }
    FiniteMetricSpace space(std::move(labels), std::move(dist));

    std::vector<std::size_t> act(group.size() * nz);
    for (std::size_t g = 0; g < group.size(); ++g)
        for (std::size_t z = 0; z < nz; ++z) {
            const std::size_t block = z / block_size;
            act[g * nz + z] = block * block_size + natural[g * block_size + z % block_size];
        }
    GroupAction action(std::move(group), std::move(space), std::move(act));

    const std::size_t nf = 2 + rng.below(options.max_class_size - 1);
    std::vector<std::vector<double>> values(nf, std::vector<double>(nz));
    for (auto& f : values)
        for (double& v : f) v = 2.0 * rng.uniform() - 1.0;
    const double ell = std::max(table_lipschitz(values, action.space()), 1e-9) * (1.0 + 1e-9);
    FunctionClass cls(action.space(), std::move(values), 2.0, ell);

    DataDistribution dd;
    dd.probabilities.resize(nz);
    double total = 0.0;
    for (double& p : dd.probabilities) {
        p = 0.1 + rng.uniform();
        total += p;
    }
    for (double& p : dd.probabilities) p /= total;
    double run = 0.0;
    std::size_t largest = 0;
    for (std::size_t z = 0; z < nz; ++z) {
        run += dd.probabilities[z];
        if (dd.probabilities[z] > dd.probabilities[largest]) largest = z;
    }
    dd.probabilities[largest] += 1.0 - run;

    return RandomInstance{std::move(action), std::move(cls), std::move(dd)};
}

} // namespace eqbound
