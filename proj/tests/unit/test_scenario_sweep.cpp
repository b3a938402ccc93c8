#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <set>
#include <vector>

#include "eqbound/scenario.hpp"
#include "eqbound/sweep.hpp"

using namespace eqbound;

TEST_CASE("padded torus scenario") {
    auto scenario = scenario_padded_torus(4, 3, 3);

    SUBCASE("group order is the padded square") {
        CHECK(scenario->action().group().size() == 36);
        CHECK(scenario->action().space().size() == 36);
    }
    SUBCASE("density endpoints and the 4x4 window") {
        CHECK(scenario->subset_for(1.0).measure_fraction() == 1.0);
        const auto window = scenario->subset_for(16.0 / 36.0);
        CHECK(window.members.size() == 16);
        CHECK(window.measure_fraction() == doctest::Approx(16.0 / 36.0));
        CHECK(window.contains(scenario->action().group().identity()));
    }
    SUBCASE("translations are pixel isometries") {
        const auto& action = scenario->action();
        const auto& space = action.space();
        for (std::size_t g : {1UL, 7UL, 35UL})
            for (std::size_t a = 0; a < 6; ++a)
                for (std::size_t b = a + 1; b < 6; ++b)
                    CHECK(space.dist(action.act(g, a), action.act(g, b)) ==
                          doctest::Approx(space.dist(a, b)).epsilon(1e-12));
    }
    SUBCASE("class builder respects the cap and the subset guarantee") {
        const auto subset = scenario->subset_for(16.0 / 36.0);
        const auto cls = scenario->build_class(subset, 0.5, 7);
        CHECK(cls.size() <= 200);
        for (std::size_t g : subset.members)
            CHECK(class_equivariance_error(cls, g, scenario->action()) <= 0.5 + 1e-12);
    }
    SUBCASE("bound inputs are exact-search products") {
        const auto in = scenario->bound_inputs(scenario->subset_for(1.0), 0.0, 50, 0.1, 1.0);
        CHECK_FALSE(scenario->dims_reduced());
        CHECK(in.d > in.d_G);
        CHECK(in.delta_G == 1.0);
        CHECK(in.group_size == 36.0);
        CHECK(std::isfinite(in.L_eps));
        CHECK(in.C_G > 0.0);
    }
    SUBCASE("the exact-suite cap is enforced") {
        CHECK_THROWS_AS(scenario_padded_torus(7, 3, 2), size_cap_error);
    }
}

TEST_CASE("rotation scenario") {
    auto scenario = scenario_rotation(360, 60.0);

    SUBCASE("exact window densities") {
        CHECK(scenario->subset_for(1.0 / 3.0).measure_fraction() == 1.0 / 3.0);
        CHECK(scenario->subset_for(1.0 / 6.0).measure_fraction() == 1.0 / 6.0);
        CHECK(scenario->subset_for(1.0).measure_fraction() == 1.0);
    }
    SUBCASE("window is centered and half-open") {
        const auto subset = scenario->subset_for(1.0 / 3.0);
        CHECK(subset.members.size() == 120);
        CHECK(subset.contains(0));    // identity
        CHECK(subset.contains(59));   // +59 degrees
        CHECK_FALSE(subset.contains(60)); // +60 is excluded
        CHECK(subset.contains(300));  // -60 is included
        CHECK_FALSE(subset.contains(299));
    }
    SUBCASE("digit labels are invariant, angles shift") {
        const auto& action = scenario->action();
        const auto& split = action.split();
        for (std::size_t z : {0UL, 100UL, 400UL}) {
            const std::size_t moved = action.act(45, z);
            CHECK(moved / 360 == z / 360);
            CHECK(moved % 360 == (z % 360 + 45) % 360);
            CHECK(split.y_of[moved] == split.act_y(45, split.y_of[z]));
        }
    }
    SUBCASE("the class contains a zero-risk predictor") {
        const auto subset = scenario->subset_for(1.0 / 3.0);
        const auto cls = scenario->build_class(subset, 0.0, 0);
        CHECK(empirical_app_err(cls, scenario->dist()) == doctest::Approx(0.0));
        // every member is invariant: the whole group stabilizes the class
        const auto stab = stabilizer(cls, scenario->action(), 0.0);
        CHECK(stab.members.size() == 360);
    }
    SUBCASE("metric dimensions come from a reduced twin") {
        CHECK(scenario->dims_reduced());
        const auto in = scenario->bound_inputs(scenario->subset_for(1.0), 0.0, 100, 0.1, 1.0);
        CHECK(in.d_G == doctest::Approx(std::log2(3.0)));
        CHECK(in.L_prime == doctest::Approx(1.0 / 360.0));
    }
    SUBCASE("data window validation") {
        CHECK_THROWS_AS(scenario_rotation(360, 0.0), invalid_input);
        CHECK_THROWS_AS(scenario_rotation(360, 200.0), invalid_input);
    }
}

TEST_CASE("sweeps") {
    auto scenario = scenario_padded_torus(4, 3, 3);
    SweepConfig cfg;
    cfg.axis = GridAxis::lambda;
    cfg.grid = {16.0 / 36.0, 1.0};
    cfg.n = 12;
    cfg.trials = 4;
    cfg.delta = 0.1;
    cfg.seed = 2024;

    SUBCASE("row count and schema") {
        const auto rows = run_sweep(*scenario, cfg);
        CHECK(rows.size() == 8);
        const std::string csv = sweep_rows_to_csv(rows);
        CHECK(csv.rfind("scenario,lambda,epsilon,n,trial,gen_err,app_err,perf_err,gen_bound,"
                        "app_bound,perf_bound,regime,violation,seed\n",
                        0) == 0);
        CHECK(std::count(csv.begin(), csv.end(), '\n') == 9);
        CHECK(csv.find("\r") == std::string::npos);
    }
    SUBCASE("lambda column carries the window fraction") {
        const auto rows = run_sweep(*scenario, cfg);
        std::set<double> lambdas;
        for (const auto& r : rows) lambdas.insert(r.lambda);
        CHECK(lambdas.count(16.0 / 36.0) == 1);
        CHECK(lambdas.count(1.0) == 1);
    }
    SUBCASE("per-row performance identity") {
        for (const auto& r : run_sweep(*scenario, cfg)) {
            if (std::isnan(r.gen_err)) continue;
            CHECK(r.perf_err == doctest::Approx(r.gen_err + r.app_err));
        }
    }
    SUBCASE("deterministic under the seed, byte for byte") {
        const auto a = sweep_rows_to_csv(run_sweep(*scenario, cfg));
        const auto b = sweep_rows_to_csv(run_sweep(*scenario, cfg));
        CHECK(a == b);
        auto cfg2 = cfg;
        cfg2.seed = 2025;
        CHECK(a != sweep_rows_to_csv(run_sweep(*scenario, cfg2)));
    }
    SUBCASE("zero trials produce an empty table") {
        auto empty = cfg;
        empty.trials = 0;
        const auto rows = run_sweep(*scenario, empty);
        CHECK(rows.empty());
        CHECK(sweep_rows_to_csv(rows) ==
              std::string(kSweepCsvHeader) + "\n");
    }
    SUBCASE("epsilon axis holds the subset fixed") {
        SweepConfig ec;
        ec.axis = GridAxis::epsilon;
        ec.grid = {0.0, 0.5};
        ec.fixed_lambda = 1.0;
        ec.n = 10;
        ec.trials = 2;
        ec.seed = 9;
        const auto rows = run_sweep(*scenario, ec);
        CHECK(rows.size() == 4);
        for (const auto& r : rows) CHECK(r.lambda == 1.0);
        std::set<double> eps;
        for (const auto& r : rows) eps.insert(r.epsilon);
        CHECK(eps == std::set<double>{0.0, 0.5});
    }
}
