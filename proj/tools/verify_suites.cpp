#include "verify_suites.hpp"

#include <cmath>

#include "eqbound/bounds.hpp"
#include "eqbound/covering.hpp"
#include "eqbound/empirical.hpp"
#include "eqbound/instances.hpp"
#include "eqbound/isodiametric.hpp"
#include "eqbound/kt_lattice.hpp"
#include "eqbound/rng.hpp"

namespace eqbound::cli {

bool SuiteReport::all_pass() const {
    for (const auto& c : checks)
        if (!c.pass) return false;
    return true;
}

nlohmann::json SuiteReport::to_json() const {
    nlohmann::json j;
    j["suite"] = suite;
    j["pass"] = all_pass();
    j["checks"] = nlohmann::json::array();
    for (const auto& c : checks) {
        nlohmann::json e;
        e["name"] = c.name;
        e["status"] = c.pass ? "pass" : "fail";
        if (!c.details.is_null()) e["details"] = c.details;
        j["checks"].push_back(e);
    }
    return j;
}

namespace {

// Shift action of Z/6Z on itself with a subgroup-invariant class: the
// work-horse instance for the orbit-reduction identities.
struct InvariantInstance {
    GroupAction action;
    TransformationSubset subset;
    FunctionClass cls;
    DataDistribution dist;
};

InvariantInstance make_invariant_cycle6() {
    FiniteGroup group = make_cyclic_group(6);
    FiniteMetricSpace space = make_cycle_space(6);
    std::vector<std::size_t> act(6 * 6);
    for (std::size_t g = 0; g < 6; ++g)
        for (std::size_t z = 0; z < 6; ++z) act[g * 6 + z] = (z + g) % 6;
    GroupAction action(std::move(group), std::move(space), std::move(act));
    TransformationSubset subset = action.subset_of({0, 2, 4});

    // All functions constant on the two parity orbits, values on a 3-grid.
    const std::vector<double> grid{-0.5, 0.0, 0.5};
    std::vector<std::vector<double>> values;
    for (double even : grid)
        for (double odd : grid) {
            std::vector<double> f(6);
            for (std::size_t z = 0; z < 6; ++z) f[z] = (z % 2 == 0) ? even : odd;
            values.push_back(std::move(f));
        }
    FunctionClass cls(action.space(), std::move(values), 1.0, 1.0);

    DataDistribution dist;
    dist.probabilities = {1.0 / 12, 2.0 / 12, 3.0 / 12, 1.0 / 12, 2.0 / 12, 3.0 / 12};
    double total = 0.0;
    for (double p : dist.probabilities) total += p;
    dist.probabilities[2] += 1.0 - total;
    return InvariantInstance{std::move(action), std::move(subset), std::move(cls), std::move(dist)};
}

} // namespace

SuiteReport run_generr_suite(std::uint64_t seed, std::size_t random_instances) {
    SuiteReport report;
    report.suite = "generr";

    {
        auto inst = make_invariant_cycle6();
        const Sample sample = draw_sample(inst.dist, 10, seed);
        const auto check = verify_generr2(inst.cls, inst.action, inst.subset, inst.dist, sample, 0.0);
        CheckResult r;
        r.name = "invariant-class cycle6: averaged error matches plain error";
        r.pass = std::abs(check.gen_err - check.averaged) <= 1e-12 &&
                 check.equality_gap <= 1e-12 && check.inequality_holds;
        r.details = {{"gen_err", check.gen_err},
                     {"averaged", check.averaged},
                     {"projected", check.projected},
                     {"equality_gap", check.equality_gap}};
        report.checks.push_back(std::move(r));
    }

    {
        // Identity subset: the reduction is vacuous and must hold exactly.
        auto inst = make_random_instance(seed ^ 0x1d);
        const Sample sample = draw_sample(inst.dist, 15, seed ^ 0x2d);
        const auto subset = inst.action.identity_subset();
        const auto check =
            verify_generr2(inst.cls, inst.action, subset, inst.dist, sample, 0.0, 1e-12);
        CheckResult r;
        r.name = "identity subset: reduction vacuous";
        r.pass = check.inequality_holds && std::abs(check.gen_err - check.averaged) <= 1e-12;
        r.details = {{"gen_err", check.gen_err}, {"averaged", check.averaged}};
        report.checks.push_back(std::move(r));
    }

    std::size_t violations = 0;
    double worst_margin = 0.0;
    for (std::size_t i = 0; i < random_instances; ++i) {
        auto inst = make_random_instance(derive_seed(seed, i));
        const Sample sample = draw_sample(inst.dist, 20, derive_seed(seed, i ^ 0xabcULL));
        for (double eps : {0.0, 0.1, 0.5}) {
            const auto subset = stabilizer(inst.cls, inst.action, eps);
            const auto check =
                verify_generr2(inst.cls, inst.action, subset, inst.dist, sample, eps);
            if (!check.inequality_holds) ++violations;
            worst_margin = std::max(worst_margin, check.gen_err - 2.0 * eps - check.averaged);
            if (eps == 0.0 && !is_subgroup(inst.action.group(), subset)) ++violations;
        }
    }
    CheckResult r;
    r.name = "random instances: orbit-reduction inequality";
    r.pass = violations == 0;
    r.details = {{"instances", random_instances},
                 {"violations", violations},
                 {"worst_margin", worst_margin}};
    report.checks.push_back(std::move(r));
    return report;
}

SuiteReport run_cover_suite() {
    SuiteReport report;
    report.suite = "cover";

    FiniteGroup group = make_torus2d_group(4);
    FiniteMetricSpace space = make_torus2d_space(4);
    const std::size_t n = space.size();
    std::vector<std::size_t> act(n * n);
    for (std::size_t g = 0; g < n; ++g)
        for (std::size_t z = 0; z < n; ++z) act[g * n + z] = group.compose(g, z);
    GroupAction action(group, std::move(space), std::move(act));

    const auto grid = action.space().distance_values();

    auto run_case = [&](const TransformationSubset& subset, const std::string& name) {
        const auto reps = orbit_representatives(action, subset);
        const auto deform = action_deformation_constants(action, subset, reps);
        const FiniteMetricSpace subset_space =
            group.word_metric_space().restrict(subset.members);
        const auto rows = verify_cover_product(action.space(), reps.space, subset_space, deform.L,
                                               deform.L_prime, grid);
        CheckResult r;
        r.name = name;
        r.pass = true;
        nlohmann::json jrows = nlohmann::json::array();
        for (const auto& row : rows) {
            if (!row.lower_ok || !row.upper_ok || !row.quotient_ok) r.pass = false;
            jrows.push_back({{"delta_prime", row.delta_prime},
                            {"N_Z", row.n_Z},
                            {"lower", row.lower_side},
                            {"upper", row.upper_side},
                            {"quotient_lhs", row.quotient_lhs},
                            {"quotient_rhs", row.quotient_rhs}});
        }
        r.details = {{"L", deform.L}, {"L_prime", deform.L_prime}, {"rows", jrows}};
        report.checks.push_back(std::move(r));
        return deform;
    };

    const auto deform_full = run_case(action.full_subset(), "cycle x cycle, full translation subset");
    CheckResult consts;
    consts.name = "full translation subset has unit deformation constants";
    consts.pass = deform_full.L == 1.0 && deform_full.L_prime == 1.0;
    consts.details = {{"L", deform_full.L}, {"L_prime", deform_full.L_prime}};
    report.checks.push_back(std::move(consts));

    std::vector<std::size_t> window;
    for (int a : {-1, 0, 1})
        for (int b : {-1, 0, 1}) window.push_back(((a + 4) % 4) * 4 + (b + 4) % 4);
    run_case(action.subset_of(window), "cycle x cycle, 3x3 translation window");
    return report;
}

SuiteReport run_iso_suite() {
    SuiteReport report;
    report.suite = "iso";
    for (const char* preset : {"cyclic:8", "dihedral:3"}) {
        FiniteGroup group = make_group_preset(preset);
        const auto fit = isodiametric_constant(group);
        const FiniteMetricSpace space = group.word_metric_space();
        const std::size_t n = group.size();

        bool all_hold = true;
        bool tight_found = false;
        double worst_slack = 0.0;
        for (std::uint64_t mask = 1; mask < (1ULL << n); ++mask) {
            std::vector<std::size_t> pts;
            for (std::size_t i = 0; i < n; ++i)
                if (mask >> i & 1) pts.push_back(i);
            if (pts.size() < 2) continue;
            double diam = 0.0;
            for (std::size_t a = 0; a < pts.size(); ++a)
                for (std::size_t b = a + 1; b < pts.size(); ++b)
                    diam = std::max(diam, space.dist(pts[a], pts[b]));
            const double lambda = static_cast<double>(pts.size()) / static_cast<double>(n);
            const double floor_value = fit.C_G * std::pow(lambda, 1.0 / fit.ddim);
            if (diam < floor_value - 1e-12) {
                all_hold = false;
                worst_slack = std::max(worst_slack, floor_value - diam);
            }
            if (std::abs(diam - floor_value) <= 1e-9) tight_found = true;
        }
        CheckResult r;
        r.name = std::string(preset) + ": isodiametric inequality over every subset";
        r.pass = all_hold && tight_found;
        r.details = {{"C_G", fit.C_G},
                     {"ddim", fit.ddim},
                     {"tight_cardinality", fit.tight_cardinality},
                     {"tight_witness_found", tight_found},
                     {"worst_violation", worst_slack}};
        report.checks.push_back(std::move(r));
    }
    return report;
}

SuiteReport run_kt_suite() {
    SuiteReport report;
    report.suite = "kt";
    FiniteMetricSpace path = make_path_space(3);
    const double M = 2.0;
    auto cover = [&](double r) { return covering_number(path, r).count; };
    // The bracket's lower half degenerates at eps = M/2 (one ball centered at
    // the zero function covers the whole class), so the bundled suite runs
    // the non-degenerate radii.
    for (double eps : {0.25, 0.5}) {
        const auto fns = lipschitz_lattice(path, M, eps / 2.0);
        const auto kt = kt_sandwich(cover, M, eps);
        std::size_t upper_count, lower_count;
        bool exact = fns.size() <= 64;
        if (exact) {
            upper_count = lower_count = sup_cover_exact(fns, eps);
        } else {
            SupCoverOptions opt;
            opt.refine_iterations = 200;
            upper_count = sup_cover_upper(fns, eps, eps / 2.0, opt);
            lower_count = sup_packing_lower(fns, 2.0 * eps);
        }
        CheckResult r;
        r.name = "path3 lattice bracket at eps=" + std::to_string(eps);
        r.pass = kt.lower <= std::log2(static_cast<double>(lower_count)) + 1e-12 &&
                 std::log2(static_cast<double>(upper_count)) <= kt.upper + 1e-12;
        r.details = {{"eps", eps},
                     {"lattice_size", fns.size()},
                     {"kt_lower", kt.lower},
                     {"kt_upper", kt.upper},
                     {"cover_certificate", upper_count},
                     {"packing_certificate", lower_count},
                     {"exact", exact}};
        report.checks.push_back(std::move(r));
    }
    return report;
}

} // namespace eqbound::cli
