#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <vector>

#include "eqbound/empirical.hpp"
#include "eqbound/instances.hpp"
#include "eqbound/rng.hpp"

using namespace eqbound;

namespace {

GroupAction natural_cycle_action(std::size_t m) {
    FiniteGroup group = make_cyclic_group(m);
    FiniteMetricSpace space = make_cycle_space(m);
    std::vector<std::size_t> act(m * m);
    for (std::size_t g = 0; g < m; ++g)
        for (std::size_t z = 0; z < m; ++z) act[g * m + z] = (z + g) % m;
    return GroupAction(std::move(group), std::move(space), std::move(act));
}

FunctionClass ramp_class(const GroupAction& action) {
    const std::size_t m = action.space().size();
    std::vector<std::vector<double>> values;
    for (std::size_t shift = 0; shift < 3; ++shift) {
        std::vector<double> f(m);
        for (std::size_t z = 0; z < m; ++z) {
            const std::size_t s = (z + shift) % m;
            const double fwd = static_cast<double>(s);
            f[z] = 0.25 * std::min(fwd, static_cast<double>(m) - fwd) - 0.4;
        }
        values.push_back(std::move(f));
    }
    return FunctionClass(action.space(), std::move(values), 2.0, 0.25);
}

DataDistribution dyadic_distribution(std::size_t m) {
    // exactly representable probabilities so sample frequencies can match
    DataDistribution d;
    d.probabilities.assign(m, 0.0);
    d.probabilities[0] = 0.5;
    d.probabilities[1] = 0.25;
    d.probabilities[2] = 0.125;
    d.probabilities[3] = 0.125;
    return d;
}

} // namespace

TEST_CASE("sampling") {
    auto dist = dyadic_distribution(6);
    SUBCASE("point mass") {
        DataDistribution point;
        point.probabilities.assign(4, 0.0);
        point.probabilities[2] = 1.0;
        const auto s = draw_sample(point, 100, 42);
        for (std::size_t z : s.draws) CHECK(z == 2);
    }
    SUBCASE("uniform two points within three sigma") {
        DataDistribution two;
        two.probabilities = {0.5, 0.5};
        const std::size_t n = 100000;
        const auto s = draw_sample(two, n, 7);
        const double freq =
            static_cast<double>(std::count(s.draws.begin(), s.draws.end(), 0)) / n;
        CHECK(std::abs(freq - 0.5) <= 3.0 * 0.5 / std::sqrt(static_cast<double>(n)));
    }
    SUBCASE("identical seeds give identical samples") {
        const auto a = draw_sample(dist, 1000, 99);
        const auto b = draw_sample(dist, 1000, 99);
        CHECK(a.draws == b.draws);
        const auto c = draw_sample(dist, 1000, 100);
        CHECK(a.draws != c.draws);
    }
}

TEST_CASE("empirical generalization error") {
    auto action = natural_cycle_action(6);
    auto cls = ramp_class(action);
    auto dist = dyadic_distribution(6);

    SUBCASE("sample with exact frequencies gives zero") {
        Sample s;
        s.draws = {0, 0, 0, 0, 1, 1, 2, 3}; // matches 1/2, 1/4, 1/8, 1/8
        CHECK(empirical_gen_err(cls, s, dist) == doctest::Approx(0.0).epsilon(1e-12));
    }
    SUBCASE("singleton constant class gives zero") {
        FunctionClass constant(action.space(), {std::vector<double>(6, 0.3)}, 1.0, 1.0);
        const auto s = draw_sample(dist, 9, 5);
        CHECK(empirical_gen_err(constant, s, dist) == doctest::Approx(0.0));
    }
    SUBCASE("seeded sample against the exhaustive oracle") {
        const auto s = draw_sample(dist, 5, 2024);
        double oracle = -1e300;
        for (std::size_t f = 0; f < cls.size(); ++f) {
            double pf = 0.0;
            for (std::size_t z = 0; z < 6; ++z) pf += dist.probabilities[z] * cls.value(f, z);
            double pn = 0.0;
            for (std::size_t z : s.draws) pn += cls.value(f, z);
            pn /= static_cast<double>(s.n());
            oracle = std::max(oracle, pf - pn);
        }
        CHECK(empirical_gen_err(cls, s, dist) == doctest::Approx(oracle).epsilon(1e-12));
    }
}

TEST_CASE("subset-averaged generalization error") {
    auto action = natural_cycle_action(6);
    auto dist = dyadic_distribution(6);
    const auto sample = draw_sample(dist, 8, 11);

    SUBCASE("invariant class matches the plain error exactly") {
        FunctionClass constants(action.space(),
                                {std::vector<double>(6, -0.25), std::vector<double>(6, 0.5)},
                                1.0, 1.0);
        const double plain = empirical_gen_err(constants, sample, dist);
        const double averaged =
            g_averaged_gen_err(constants, sample, dist, action, action.full_subset());
        CHECK(plain == doctest::Approx(averaged).epsilon(1e-13));
    }
    SUBCASE("identity subset matches the plain error") {
        auto cls = ramp_class(action);
        CHECK(empirical_gen_err(cls, sample, dist) ==
              doctest::Approx(
                  g_averaged_gen_err(cls, sample, dist, action, action.identity_subset())));
    }
    SUBCASE("half window against the direct double sum") {
        auto cls = ramp_class(action);
        const auto subset = action.subset_of({0, 1, 2});
        double oracle = -1e300;
        for (std::size_t f = 0; f < cls.size(); ++f) {
            double pop = 0.0;
            for (std::size_t g : subset.members)
                for (std::size_t z = 0; z < 6; ++z)
                    pop += dist.probabilities[z] * cls.value(f, action.act(g, z)) / 3.0;
            double emp = 0.0;
            for (std::size_t z : sample.draws)
                for (std::size_t g : subset.members) emp += cls.value(f, action.act(g, z)) / 3.0;
            emp /= static_cast<double>(sample.n());
            oracle = std::max(oracle, pop - emp);
        }
        CHECK(g_averaged_gen_err(cls, sample, dist, action, subset) ==
              doctest::Approx(oracle).epsilon(1e-12));
    }
    SUBCASE("augmentation identity: averaged error equals the error on augmented data") {
        // both sides of the change of variables: the population term under
        // the augmented law, and the empirical term under orbit-averaged
        // sample weights
        auto cls = ramp_class(action);
        const auto subset = action.subset_of({0, 2, 3});
        const auto augmented =
            augment_distribution(action, subset, dist.probabilities);
        const double w = 1.0 / static_cast<double>(subset.members.size());
        double oracle = -1e300;
        for (std::size_t f = 0; f < cls.size(); ++f) {
            double pop = 0.0;
            for (std::size_t z = 0; z < 6; ++z) pop += augmented[z] * cls.value(f, z);
            // each draw contributes its orbit-averaged value
            double emp = 0.0;
            for (std::size_t z : sample.draws) {
                std::vector<double> weights(6, 0.0);
                for (std::size_t g : subset.members) weights[action.act(g, z)] += w;
                for (std::size_t zz = 0; zz < 6; ++zz) emp += weights[zz] * cls.value(f, zz);
            }
            emp /= static_cast<double>(sample.n());
            oracle = std::max(oracle, pop - emp);
        }
        CHECK(g_averaged_gen_err(cls, sample, dist, action, subset) ==
              doctest::Approx(oracle).epsilon(1e-12));
    }
}

TEST_CASE("Rademacher complexity") {
    auto action = natural_cycle_action(6);
    auto dist = dyadic_distribution(6);

    SUBCASE("single constant function has zero complexity") {
        for (double c : {0.0, 0.4}) {
            FunctionClass constant(action.space(), {std::vector<double>(6, c)}, 1.0, 1.0);
            const auto s = draw_sample(dist, 10, 3);
            const auto r = empirical_rademacher(constant, s, 0, 0);
            CHECK(r.exact);
            CHECK(r.estimate == doctest::Approx(0.0).epsilon(1e-15));
        }
    }
    SUBCASE("n = 2 two-function class against the hand enumeration") {
        FunctionClass cls(action.space(),
                          {std::vector<double>{0.5, -0.5, 0.0, 0.0, 0.0, 0.0},
                           std::vector<double>{-0.5, 0.5, 0.0, 0.0, 0.0, 0.0}},
                          1.0, 1.0);
        Sample s;
        s.draws = {0, 1};
        // four sign vectors; sup over the two antisymmetric functions
        double oracle = 0.0;
        for (int s0 : {-1, 1})
            for (int s1 : {-1, 1}) {
                const double f1 = (s0 * 0.5 + s1 * -0.5) / 2.0;
                const double f2 = (s0 * -0.5 + s1 * 0.5) / 2.0;
                oracle += std::max(f1, f2) / 4.0;
            }
        const auto r = empirical_rademacher(cls, s, 0, 0);
        CHECK(r.exact);
        CHECK(r.estimate == doctest::Approx(oracle).epsilon(1e-15));
        CHECK(r.estimate == doctest::Approx(0.25));
    }
    SUBCASE("Monte Carlo half-width shrinks like sqrt(trials)") {
        auto cls = ramp_class(action);
        const auto s = draw_sample(dist, 40, 17);
        const auto narrow = empirical_rademacher(cls, s, 4000, 5);
        const auto wide = empirical_rademacher(cls, s, 2000, 5);
        CHECK_FALSE(narrow.exact);
        CHECK(narrow.half_width > 0.0);
        const double ratio = wide.half_width / narrow.half_width;
        CHECK(ratio == doctest::Approx(std::sqrt(2.0)).epsilon(0.2));
    }
    SUBCASE("exact path is used up to n = 20") {
        auto cls = ramp_class(action);
        const auto s = draw_sample(dist, 20, 23);
        CHECK(empirical_rademacher(cls, s, 0, 0).exact);
        const auto s21 = draw_sample(dist, 21, 23);
        CHECK_FALSE(empirical_rademacher(cls, s21, 50, 1).exact);
    }
    SUBCASE("gray-code walk against a direct enumeration at n = 10") {
        auto cls = ramp_class(action);
        const auto s = draw_sample(dist, 10, 77);
        double oracle = 0.0;
        for (std::uint32_t bits = 0; bits < (1u << 10); ++bits) {
            double best = -1e300;
            for (std::size_t f = 0; f < cls.size(); ++f) {
                double acc = 0.0;
                for (std::size_t i = 0; i < 10; ++i) {
                    const double sigma = (bits >> i & 1) ? 1.0 : -1.0;
                    acc += sigma * cls.value(f, s.draws[i]);
                }
                best = std::max(best, acc);
            }
            oracle += best;
        }
        oracle /= static_cast<double>(1u << 10) * 10.0;
        CHECK(empirical_rademacher(cls, s, 0, 0).estimate ==
              doctest::Approx(oracle).epsilon(1e-12));
    }
}

TEST_CASE("approximation error") {
    auto action = natural_cycle_action(6);
    auto dist = dyadic_distribution(6);
    SUBCASE("singleton nonnegative constant") {
        FunctionClass constant(action.space(), {std::vector<double>(6, 0.35)}, 1.0, 1.0);
        CHECK(empirical_app_err(constant, dist) == doctest::Approx(0.35));
    }
    SUBCASE("matches exhaustive minimum") {
        auto cls = ramp_class(action);
        double oracle = 1e300;
        for (std::size_t f = 0; f < cls.size(); ++f) {
            double pf = 0.0;
            for (std::size_t z = 0; z < 6; ++z) pf += dist.probabilities[z] * cls.value(f, z);
            oracle = std::min(oracle, pf);
        }
        CHECK(empirical_app_err(cls, dist) == doctest::Approx(oracle));
    }
}

TEST_CASE("orbit-reduction check on random instances") {
    std::size_t failures = 0;
    for (std::uint64_t seed = 0; seed < 10; ++seed) {
        auto inst = make_random_instance(seed);
        const auto sample = draw_sample(inst.dist, 12, derive_seed(seed, 1));
        for (double eps : {0.0, 0.1, 0.5}) {
            const auto subset = stabilizer(inst.cls, inst.action, eps);
            const auto check =
                verify_generr2(inst.cls, inst.action, subset, inst.dist, sample, eps);
            if (!check.inequality_holds) ++failures;
        }
    }
    CHECK(failures == 0);
}

TEST_CASE("orbitwise approximation value on a misaligned labeling") {
    // shifts of Z/6 on inputs, labels on the same cycle, but the labeling
    // carries angle noise: no single equivariant label choice fits every
    // reachable point, so the representative-wise value is positive
    auto action = natural_cycle_action(6);
    ProductSplit split{make_cycle_space(6), {}, {}, {}};
    split.x_of.resize(6);
    split.y_of.resize(6);
    for (std::size_t z = 0; z < 6; ++z) {
        split.x_of[z] = z;
        split.y_of[z] = z;
    }
    split.y_act.resize(36);
    for (std::size_t g = 0; g < 6; ++g)
        for (std::size_t y = 0; y < 6; ++y) split.y_act[g * 6 + y] = (y + g) % 6;
    action.attach_split(std::move(split));

    const std::vector<std::size_t> eta{0, 1, 0, 0, 1, 0};
    DataDistribution dist;
    dist.probabilities.assign(6, 1.0 / 6.0);
    double total = 0.0;
    for (double p : dist.probabilities) total += p;
    dist.probabilities[0] += 1.0 - total;
    dist.ystar = std::vector<std::size_t>(6);
    for (std::size_t z = 0; z < 6; ++z) (*dist.ystar)[z] = (z + eta[z]) % 6;

    auto ang = [](std::size_t a, std::size_t b) {
        const std::size_t fwd = (b >= a) ? b - a : a - b;
        return static_cast<double>(std::min(fwd, 6 - fwd));
    };
    // single transitive orbit with representative 0 and uniform weights:
    // min over y of (1/6) sum_g ang(y + g, g + eta(g))^2
    double oracle = 1e300;
    for (std::size_t y = 0; y < 6; ++y) {
        double acc = 0.0;
        for (std::size_t g = 0; g < 6; ++g) {
            const double d = ang((y + g) % 6, (g + eta[g]) % 6);
            acc += d * d / 6.0;
        }
        oracle = std::min(oracle, acc);
    }
    CHECK(oracle == doctest::Approx(1.0 / 3.0)); // four exact labels, two off by one

    const double value = orbitwise_app_bound(action, action.full_subset(), dist, 0.0);
    CHECK(value == doctest::Approx(oracle).epsilon(1e-12));
    CHECK(value > 0.0);

    // a budget covering the label-space diameter clamps the value to zero
    CHECK(orbitwise_app_bound(action, action.full_subset(), dist, 3.0) == 0.0);
    // missing y* is rejected
    DataDistribution bare;
    bare.probabilities = dist.probabilities;
    CHECK_THROWS_AS(orbitwise_app_bound(action, action.full_subset(), bare, 0.0), invalid_input);
}

TEST_CASE("cover product collapses to monotonicity for the identity subset") {
    // S = {identity}: representatives are all of Z, covers compare Z with Z
    auto space = make_torus2d_space(3);
    const auto grid = space.distance_values();
    const auto rows = verify_cover_product(space, space,
                                           FiniteMetricSpace({"e"}, {0.0}), 1.0, 1.0, grid);
    for (const auto& row : rows) {
        CHECK(row.lower_ok);
        CHECK(row.upper_ok);
        CHECK(row.quotient_ok);
    }
}

TEST_CASE("explicit generalization bound pipeline") {
    auto action = natural_cycle_action(6);
    auto cls = ramp_class(action);
    auto dist = dyadic_distribution(6);
    SUBCASE("small samples use the exact Rademacher path") {
        const auto s = draw_sample(dist, 12, 31);
        const auto b = explicit_generalization_bound(cls, s, 0.1);
        CHECK(b.method == "exact-rademacher");
        CHECK(b.total == doctest::Approx(b.complexity + b.confidence));
        CHECK(b.total >= empirical_gen_err(cls, s, dist));
    }
    SUBCASE("large samples switch to chaining") {
        const auto s = draw_sample(dist, 40, 31);
        const auto b = explicit_generalization_bound(cls, s, 0.1);
        CHECK(b.method == "chaining");
        CHECK(b.complexity > 0.0);
    }
}
