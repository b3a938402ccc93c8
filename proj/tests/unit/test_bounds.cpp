#include <doctest.h>

#include <cmath>
#include <vector>

#include "eqbound/bounds.hpp"
#include "eqbound/isodiametric.hpp"
#include "eqbound/rng.hpp"

using namespace eqbound;

TEST_CASE("concentration bound") {
    CHECK(concentration_bound(0.1, 100, 1.0, 0.1) ==
          doctest::Approx(0.1 + std::sqrt(std::log(20.0) / 100.0)).epsilon(1e-12));
    // n -> 4n scales the term by 1/2
    const double a = concentration_bound(0.0, 1000, 1.0, 0.05);
    const double b = concentration_bound(0.0, 4000, 1.0, 0.05);
    CHECK(a / b == doctest::Approx(2.0).epsilon(1e-9));
    CHECK_THROWS_AS(concentration_bound(0.0, 10, 1.0, 1.5), invalid_input);
    CHECK_THROWS_AS(concentration_bound(0.0, 10, 1.0, 0.0), invalid_input);
}

TEST_CASE("kt sandwich") {
    SUBCASE("single-point space") {
        auto cover = [](double) { return std::int64_t{1}; };
        const auto kt = kt_sandwich(cover, 1.0, 0.5);
        CHECK(kt.lower == 1.0);
        CHECK(kt.upper == doctest::Approx(std::log2(3.0) + 1.0));
    }
    SUBCASE("log term at eps = M") {
        auto cover = [](double) { return std::int64_t{1}; };
        const auto kt = kt_sandwich(cover, 2.0, 2.0);
        CHECK(kt.upper - 1.0 == doctest::Approx(1.0)); // log2(2) + N = 1 + 1
    }
    SUBCASE("Lipschitz rescaling substitutes eps/ell in the covers") {
        std::vector<double> seen;
        auto cover = [&](double r) {
            seen.push_back(r);
            return std::int64_t{2};
        };
        kt_sandwich_lipschitz(cover, 1.0, 0.5, 2.0);
        REQUIRE(seen.size() == 2);
        CHECK(seen[0] == doctest::Approx(0.5));  // 2 eps / ell
        CHECK(seen[1] == doctest::Approx(0.125)); // eps / (2 ell)
    }
    CHECK_THROWS_AS(kt_sandwich([](double) { return std::int64_t{1}; }, 1.0, 2.0), invalid_input);
}

TEST_CASE("dudley bound") {
    SUBCASE("zero entropy collapses to the vanishing alpha") {
        const double v = dudley_bound([](double) { return 0.0; }, 1.0, 100.0);
        CHECK(v <= 4.0 * 1e-8);
    }
    SUBCASE("constant entropy, both analytic branches") {
        // h(alpha) = alpha + 3 sqrt(c/n) (T - alpha): slope decides the optimum
        const double c = 0.25, T = 2.0;
        const double flat_n = 100.0; // 3 sqrt(c/n) = 0.15 < 1: alpha* = 0
        const double v1 = dudley_bound([&](double) { return c; }, T, flat_n);
        CHECK(v1 == doctest::Approx(12.0 * std::sqrt(c) * T / std::sqrt(flat_n)).epsilon(1e-5));
        const double steep_n = 1.0; // 3 sqrt(c) = 1.5 > 1: alpha* = T
        const double v2 = dudley_bound([&](double) { return c; }, T, steep_n);
        CHECK(v2 == doctest::Approx(4.0 * T).epsilon(1e-6));
    }
    SUBCASE("power-law entropy against a dense-grid oracle") {
        auto log_cover = [](double t) { return std::pow(1.0 / t, 3.0); };
        const double T = 2.0, n = 400.0;
        // oracle: 10^4 log-spaced alphas with the analytic tail integral
        // of sqrt(t^-3), namely 2 (alpha^-1/2 - T^-1/2)
        double oracle = std::numeric_limits<double>::infinity();
        for (int i = 0; i < 10000; ++i) {
            const double alpha =
                0.01 * std::pow(T / 0.01, static_cast<double>(i) / 9999.0);
            const double integral = 2.0 * (1.0 / std::sqrt(alpha) - 1.0 / std::sqrt(T));
            oracle = std::min(oracle, 4.0 * (alpha + 3.0 / std::sqrt(n) * integral));
        }
        const double v = dudley_bound(log_cover, T, n);
        CHECK(v == doctest::Approx(oracle).epsilon(1e-3));
    }
    SUBCASE("halving the tolerance moves the result by less than 1e-5 relative") {
        auto log_cover = [](double t) { return std::pow(1.0 / t, 3.0); };
        const double a = dudley_bound(log_cover, 2.0, 400.0, 1e-6);
        const double b = dudley_bound(log_cover, 2.0, 400.0, 5e-7);
        CHECK(std::abs(a - b) / a < 1e-5);
    }
    SUBCASE("larger samples shrink the bound") {
        auto log_cover = [](double t) { return 1.0 / t; };
        CHECK(dudley_bound(log_cover, 1.0, 400.0) < dudley_bound(log_cover, 1.0, 100.0));
    }
    SUBCASE("non-finite entropy is rejected") {
        CHECK_THROWS_AS(dudley_bound([](double) { return std::nan(""); }, 1.0, 100.0),
                        invalid_input);
    }
}

TEST_CASE("ambient chaining bound") {
    BoundInputs in;
    in.d = 3.0;
    in.diameter = 1.0;
    in.n = 1000.0;
    in.M = 1.0;
    in.delta = 0.1;
    SUBCASE("term-by-term values") {
        const auto r = base_bound(in);
        const long double chaining = 1.0L * std::pow(4.0L, 3.0L) * 3.0L / 1.0L *
                                     std::pow(1.0L / 1000.0L, 1.0L / 3.0L);
        const long double confidence = std::sqrt(1.0L * std::log(20.0L) / 1000.0L);
        CHECK(r.term("chaining") == doctest::Approx(static_cast<double>(chaining)).epsilon(1e-12));
        CHECK(r.term("confidence") ==
              doctest::Approx(static_cast<double>(confidence)).epsilon(1e-12));
        CHECK(r.total == doctest::Approx(r.term("chaining") + r.term("confidence")));
    }
    SUBCASE("scaling law: n -> 2^d n halves the chaining term") {
        auto big = in;
        big.n = in.n * std::pow(2.0, in.d);
        CHECK(base_bound(in).term("chaining") / base_bound(big).term("chaining") ==
              doctest::Approx(2.0).epsilon(1e-9));
    }
    SUBCASE("confidence vanishes toward delta = 2") {
        auto edge = in;
        edge.delta = 1.999;
        edge.n = 1e9;
        CHECK(base_bound(edge).term("confidence") < 1e-6);
    }
    SUBCASE("dimension hypothesis is named") {
        auto flat = in;
        flat.d = 2.0;
        CHECK_THROWS_WITH_AS(base_bound(flat), doctest::Contains("ddim"), invalid_input);
    }
}

TEST_CASE("partial equivariance bound") {
    BoundInputs in;
    in.d = 4.0;
    in.d_G = 1.0;
    in.delta_G = 1.0;
    in.L_eps = 1.0;
    in.diameter = 2.0;
    in.stab_size = 6.0;
    in.group_size = 12.0;
    in.n = 1e4;
    in.M = 1.0;
    in.delta = 0.1;
    in.eps = 0.1;

    SUBCASE("branch selection and term values") {
        const auto r = partial_gen_bound(in);
        // (2 L D)^d = 4^4 = 256 < stab * n * delta^d0 = 6e4: finite branch
        CHECK(r.regime == "finite-group");
        const double d0 = 3.0;
        const double prefix = std::pow(4.0, d0) * d0 / (d0 - 2.0);
        const double expected = prefix * std::sqrt(256.0 / (6.0 * 1e4));
        CHECK(r.term("E_eps") == doctest::Approx(expected).epsilon(1e-12));
        CHECK(r.term("two_eps") == doctest::Approx(0.2));
        CHECK(r.total ==
              doctest::Approx(r.term("confidence") + r.term("two_eps") + r.term("E_eps")));
    }
    SUBCASE("doubling the stabilizer shrinks the finite branch by sqrt(2)") {
        auto doubled = in;
        doubled.stab_size = 12.0;
        const double ratio =
            partial_gen_bound(in).term("E_eps") / partial_gen_bound(doubled).term("E_eps");
        CHECK(ratio == doctest::Approx(std::sqrt(2.0)).epsilon(1e-9));
    }
    SUBCASE("general branch on large mass") {
        auto heavy = in;
        heavy.diameter = 40.0;
        const auto r = partial_gen_bound(heavy);
        CHECK(r.regime == "general");
        const double d0 = 3.0;
        const double prefix = std::pow(4.0, d0) * d0 / (d0 - 2.0);
        const double mass = std::pow(80.0, 4.0);
        CHECK(r.term("E_eps") ==
              doctest::Approx(prefix * std::pow(mass / (6.0 * 1e4), 1.0 / d0)).epsilon(1e-12));
    }
    SUBCASE("near-boundary inputs report both branches") {
        auto edge = in;
        // tune n so (2LD)^d = stab * n * delta^d0 exactly
        edge.n = 256.0 / 6.0;
        const auto r = partial_gen_bound(edge);
        CHECK(r.near_boundary);
        CHECK(r.alternate_total > 0.0);
    }
    SUBCASE("specialization to the exact equivariance case is bitwise") {
        auto spec = in;
        spec.eps = 0.0;
        spec.stab_size = spec.group_size;
        const auto direct = partial_gen_bound(spec);
        const auto wrapped = exact_equivariance_bound(in);
        CHECK(direct.total == wrapped.total);
        CHECK(direct.term("E_eps") == wrapped.term("E_eps"));
    }
    SUBCASE("flat quotient dimension is rejected") {
        auto flat = in;
        flat.d_G = 2.5;
        CHECK_THROWS_WITH_AS(partial_gen_bound(flat), doctest::Contains("d0"), invalid_input);
    }
}

TEST_CASE("approximation bound") {
    BoundInputs in;
    in.C_G = 0.5;
    in.L_prime = 1.0;
    in.lip_ystar = 1.0;
    in.lambda = 0.25;
    in.d_G = 2.0;
    in.eps = 0.1;
    // (0.5 * 1 * 2 * 0.5 - 0.1)^2 = 0.16
    CHECK(approx_bound(in) == doctest::Approx(0.16).epsilon(1e-12));

    SUBCASE("clamped to zero for generous budgets") {
        auto loose = in;
        loose.eps = 10.0;
        CHECK(approx_bound(loose) == 0.0);
    }
    SUBCASE("full density with zero budget") {
        auto full = in;
        full.lambda = 1.0;
        full.eps = 0.0;
        CHECK(approx_bound(full) == doctest::Approx(1.0)); // (0.5 * 2)^2
    }
    SUBCASE("zero group dimension is rejected") {
        auto bad = in;
        bad.d_G = 0.0;
        CHECK_THROWS_AS(approx_bound(bad), invalid_input);
    }
}

TEST_CASE("performance bound") {
    TradeoffConstants constants{0.04, 0.04, 0.04, 0.01};
    BoundInputs in;
    in.d_G = 1.0;
    in.d = 4.0;
    in.n = 1e6;
    in.M = 1.0;
    in.delta = 0.1;
    in.eps = 0.0;

    SUBCASE("large-sample regime assembles the stated terms") {
        in.lambda = 1.0;
        const auto r = perf_bound(in, constants);
        CHECK(r.regime == "large-sample");
        CHECK(r.term("approx") == doctest::Approx(0.0016)); // C^2
        CHECK(r.term("statistical") == doctest::Approx(0.04 / std::sqrt(1e6)));
        CHECK(r.total == doctest::Approx(r.term("confidence") + r.term("approx") +
                                         r.term("statistical") + r.term("two_eps")));
    }
    SUBCASE("regime boundary flags both branches") {
        in.lambda = constants.C3 / in.n;
        const auto r = perf_bound(in, constants);
        CHECK(r.near_boundary);
        CHECK(r.regime == "large-sample"); // >= at equality
        CHECK(r.alternate_total != r.total);
    }
    SUBCASE("density must be positive") {
        in.lambda = 0.0;
        CHECK_THROWS_AS(perf_bound(in, constants), invalid_input);
    }
}

TEST_CASE("optimal lambda closed form") {
    CHECK(optimal_lambda(1.0, 1.0, 2.0, 2.0) == doctest::Approx(1.0));
    SUBCASE("homogeneity") {
        const double alpha = 0.7, beta = 1.3, C = 0.3, Cp = 0.02;
        const double base = optimal_lambda(alpha, beta, C, Cp);
        const double scaled =
            optimal_lambda(alpha, beta, C, std::pow(2.0, alpha + beta) * Cp);
        CHECK(scaled / base == doctest::Approx(2.0).epsilon(1e-12));
    }
    SUBCASE("matches the dense-grid argmin") {
        const double alpha = 0.5, beta = 0.5, C = 0.04, Cp = 0.004;
        double best = 0.0, best_v = std::numeric_limits<double>::infinity();
        for (int i = 0; i < 200000; ++i) {
            const double lam = 1e-4 * std::pow(1e4, static_cast<double>(i) / 199999.0);
            const double v = C * std::pow(lam, alpha) + Cp * std::pow(lam, -beta);
            if (v < best_v) {
                best_v = v;
                best = lam;
            }
        }
        const double closed = optimal_lambda(alpha, beta, C, Cp);
        CHECK(closed == doctest::Approx(0.1).epsilon(1e-9));
        CHECK(std::abs(closed - best) / closed < 0.01);
    }
    SUBCASE("stationarity identity") {
        const double alpha = 0.8, beta = 0.4, C = 0.2, Cp = 0.05;
        const double star = optimal_lambda(alpha, beta, C, Cp);
        const double lhs = alpha * C * std::pow(star, alpha);
        const double rhs = beta * Cp * std::pow(star, -beta);
        CHECK(lhs == doctest::Approx(rhs).epsilon(1e-9));
    }
    CHECK_THROWS_AS(optimal_lambda(0.0, 1.0, 1.0, 1.0), invalid_input);
}

TEST_CASE("derived tradeoff constants mirror the generalization branches") {
    BoundInputs in;
    in.d = 4.0;
    in.d_G = 1.0;
    in.delta_G = 1.0;
    in.L_eps = 1.0;
    in.diameter = 2.0;
    in.group_size = 12.0;
    in.n = 1e4;
    const auto c = derive_tradeoff_constants(in);
    // C1 (n lambda)^{-1/2} must equal the finite branch of the gap bound
    in.lambda = 0.5;
    in.stab_size = in.lambda * in.group_size;
    const auto report = partial_gen_bound(in);
    REQUIRE(report.regime == "finite-group");
    CHECK(c.C1 / std::sqrt(in.n * in.lambda) ==
          doctest::Approx(report.term("E_eps")).epsilon(1e-12));
    // the regime thresholds agree as well
    CHECK((std::pow(2.0 * in.L_eps * in.diameter, in.d) <
           in.stab_size * in.n * std::pow(in.delta_G, in.d0())) ==
          (in.n * in.lambda > c.C3));
}

TEST_CASE("isodiametric constant on the 8-cycle") {
    const auto fit = isodiametric_constant(make_cyclic_group(8));
    CHECK(fit.exhaustive);
    CHECK(fit.ddim == doctest::Approx(std::log2(3.0)));
    // minimum diameters by cardinality: 1, 2, 3, then the antipodal 4
    const std::vector<double> expected{0.0, 1.0, 2.0, 3.0, 4.0, 4.0, 4.0, 4.0};
    REQUIRE(fit.rows.size() == 8);
    for (std::size_t k = 1; k <= 8; ++k)
        CHECK(fit.rows[k - 1].min_diameter == doctest::Approx(expected[k - 1]));
    // the k = 2 row is the binding one
    CHECK(fit.tight_cardinality == 2);
    CHECK(fit.C_G == doctest::Approx(1.0 / std::pow(0.25, 1.0 / std::log2(3.0))));
    // full-cardinality constraint: C_G can not exceed the diameter
    CHECK(fit.C_G <= make_cyclic_group(8).word_metric_space().diameter());
    CHECK(fit.lambda_threshold == doctest::Approx(0.25));
}

TEST_CASE("bounds are monotone over parameter grids") {
    BoundInputs in;
    in.d = 4.5;
    in.d_G = 1.0;
    in.delta_G = 1.0;
    in.L_eps = 1.2;
    in.diameter = 2.0;
    in.group_size = 24.0;
    in.M = 1.0;
    in.delta = 0.1;
    in.lambda = 0.5;
    in.stab_size = in.lambda * in.group_size;
    in.C_G = 1.5;
    in.L_prime = 0.5;
    in.lip_ystar = 1.0;

    SUBCASE("nonincreasing in n, including across the regime switch") {
        double prev_partial = 1e300, prev_base = 1e300, prev_perf = 1e300;
        for (double n = 4.0; n < 1e9; n *= 1.7) {
            in.n = n;
            const double partial = partial_gen_bound(in).total;
            const double base = base_bound(in).total;
            // derived constants keep the performance curve continuous at the
            // regime boundary, so it stays monotone too
            const double perf = perf_bound(in).total;
            CHECK(partial <= prev_partial + 1e-12);
            CHECK(base <= prev_base + 1e-12);
            CHECK(perf <= prev_perf + 1e-12);
            prev_partial = partial;
            prev_base = base;
            prev_perf = perf;
        }
    }
    SUBCASE("nondecreasing in eps") {
        in.n = 1e4;
        double prev_partial = -1e300, prev_approx = -1e300, prev_perf = -1e300;
        for (double eps = 0.0; eps <= 2.0; eps += 0.1) {
            in.eps = eps;
            const double partial = partial_gen_bound(in).total;
            const double approx = approx_bound(in) + 2.0 * eps; // the combined eps terms
            const double perf = perf_bound(in).total;
            CHECK(partial >= prev_partial - 1e-12);
            CHECK(approx >= prev_approx - 1e-12);
            CHECK(perf >= prev_perf - 1e-12);
            prev_partial = partial;
            prev_approx = approx;
            prev_perf = perf;
        }
    }
}

TEST_CASE("bound inputs parse from JSON documents") {
    const auto in = bound_inputs_from_json(
        R"({"d": 4.0, "d_G": 1.5, "n": 2000, "lambda": 0.25, "C_G": 2.4})");
    CHECK(in.d == 4.0);
    CHECK(in.d_G == 1.5);
    CHECK(in.n == 2000.0);
    CHECK(in.lambda == 0.25);
    CHECK(in.C_G == 2.4);
    CHECK(in.delta == 0.1); // untouched default
    CHECK_THROWS_WITH_AS(bound_inputs_from_json(R"({"dd": 3})"),
                         doctest::Contains("unknown bound input"), invalid_input);
    CHECK_THROWS_AS(bound_inputs_from_json("not json"), invalid_input);
}

TEST_CASE("bound reports serialize with terms, regime and inputs") {
    BoundInputs in;
    in.d = 3.5;
    in.n = 500.0;
    const auto r = base_bound(in);
    const std::string json = r.to_json();
    CHECK(json.find("\"chaining\"") != std::string::npos);
    CHECK(json.find("\"regime\"") != std::string::npos);
    CHECK(json.find("\"inputs\"") != std::string::npos);
}
