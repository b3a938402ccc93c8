#include <cmath>
#include <cstdint>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>

#include <CLI11.hpp>
#include <json.hpp>

#include "eqbound/bounds.hpp"
#include "eqbound/covering.hpp"
#include "eqbound/isodiametric.hpp"
#include "eqbound/scenario.hpp"
#include "eqbound/sweep.hpp"
#include "verify_suites.hpp"

namespace {

constexpr const char* kVersion = "0.1.0";

constexpr int kExitPass = 0;
constexpr int kExitAssertionFailure = 1;
constexpr int kExitConfigError = 2;

using nlohmann::json;

json load_json_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open config file: " + path);
    json j;
    in >> j;
    return j;
}

void write_text_file(const std::string& path, const std::string& text) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::runtime_error("cannot open output file: " + path);
    out << text;
}

// "lin:lo:hi:count", "log:lo:hi:count" or a comma list.
std::vector<double> parse_grid(const std::string& spec) {
    std::vector<double> grid;
    if (spec.rfind("lin:", 0) == 0 || spec.rfind("log:", 0) == 0) {
        const bool log_spaced = spec[2] == 'g';
        std::istringstream is(spec.substr(4));
        std::string lo_s, hi_s, count_s;
        if (!std::getline(is, lo_s, ':') || !std::getline(is, hi_s, ':') ||
            !std::getline(is, count_s, ':')) {
            throw std::runtime_error("grid spec must be lin:lo:hi:count or log:lo:hi:count");
        }
        const double lo = std::stod(lo_s), hi = std::stod(hi_s);
        const std::size_t count = std::stoul(count_s);
        if (count < 1 || !(hi >= lo)) throw std::runtime_error("invalid grid spec: " + spec);
        for (std::size_t i = 0; i < count; ++i) {
            const double t = count == 1 ? 0.0 : static_cast<double>(i) / static_cast<double>(count - 1);
            grid.push_back(log_spaced ? lo * std::pow(hi / lo, t) : lo + (hi - lo) * t);
        }
        return grid;
    }
    std::istringstream is(spec);
    std::string tok;
    while (std::getline(is, tok, ',')) grid.push_back(std::stod(tok));
    if (grid.empty()) throw std::runtime_error("empty grid spec");
    return grid;
}

std::unique_ptr<eqbound::SweepScenario> scenario_from_json(const json& j) {
    const std::string preset = j.at("preset").get<std::string>();
    if (preset == "padded_torus") {
        return eqbound::scenario_padded_torus(j.value("n_img", 4), j.value("k", 3),
                                              j.value("levels", 3));
    }
    if (preset == "rotation") {
        return eqbound::scenario_rotation(j.value("order", 360), j.value("window_degrees", 60.0));
    }
    throw std::runtime_error("unknown scenario preset: " + preset);
}

struct CommonFlags {
    std::string config_path;
    std::string out_path;
    std::uint64_t seed = 0;
    std::string grid_spec;
    double delta = 0.1;
    double constant_factor = 1.0;
};

void add_common_flags(CLI::App* cmd, CommonFlags& flags) {
    cmd->add_option("--config", flags.config_path, "JSON config path");
    cmd->add_option("--out", flags.out_path, "output file path");
    cmd->add_option("--seed", flags.seed, "run seed");
    cmd->add_option("--grid", flags.grid_spec, "grid spec: lin:lo:hi:n, log:lo:hi:n or v1,v2,...");
    cmd->add_option("--delta", flags.delta, "confidence level in (0, 1/2)");
    cmd->add_option("--constant-factor", flags.constant_factor,
                    "multiplier standing in for the rate-form bounds' implicit constants");
}

int cmd_verify(const std::string& suite, const CommonFlags& flags) {
    using namespace eqbound::cli;
    if (!(flags.delta > 0.0 && flags.delta < 0.5)) {
        std::cerr << "delta must lie in (0, 1/2)\n";
        return kExitConfigError;
    }
    std::vector<SuiteReport> reports;
    if (suite == "generr" || suite == "all") reports.push_back(run_generr_suite(flags.seed));
    if (suite == "cover" || suite == "all") reports.push_back(run_cover_suite());
    if (suite == "iso" || suite == "all") reports.push_back(run_iso_suite());
    if (suite == "kt" || suite == "all") reports.push_back(run_kt_suite());
    if (reports.empty()) {
        std::cerr << "unknown suite '" << suite << "' (expected generr|cover|iso|kt|all)\n";
        return kExitConfigError;
    }

    json out;
    out["version"] = kVersion;
    out["command"] = "verify";
    out["config"] = {{"suite", suite}, {"seed", flags.seed}, {"delta", flags.delta}};
    out["suites"] = json::array();
    bool all_pass = true;
    for (const auto& r : reports) {
        out["suites"].push_back(r.to_json());
        all_pass = all_pass && r.all_pass();
        for (const auto& c : r.checks) {
            std::cout << (c.pass ? "[pass] " : "[FAIL] ") << r.suite << ": " << c.name << "\n";
        }
    }
    out["pass"] = all_pass;
    if (!flags.out_path.empty()) write_text_file(flags.out_path, out.dump(2) + "\n");
    return all_pass ? kExitPass : kExitAssertionFailure;
}

int cmd_sweep(const CommonFlags& flags) {
    if (flags.config_path.empty()) {
        std::cerr << "sweep requires --config\n";
        return kExitConfigError;
    }
    const json cfg = load_json_file(flags.config_path);
    auto scenario = scenario_from_json(cfg.at("scenario"));

    eqbound::SweepConfig sc;
    const std::string axis = cfg.value("axis", "lambda");
    if (axis == "lambda") {
        sc.axis = eqbound::GridAxis::lambda;
    } else if (axis == "epsilon") {
        sc.axis = eqbound::GridAxis::epsilon;
    } else {
        std::cerr << "axis must be lambda or epsilon\n";
        return kExitConfigError;
    }
    if (!flags.grid_spec.empty()) {
        sc.grid = parse_grid(flags.grid_spec);
    } else if (cfg.contains("grid")) {
        if (cfg["grid"].is_string()) {
            sc.grid = parse_grid(cfg["grid"].get<std::string>());
        } else {
            sc.grid = cfg["grid"].get<std::vector<double>>();
        }
    } else {
        std::cerr << "sweep needs a grid (config \"grid\" or --grid)\n";
        return kExitConfigError;
    }
    sc.fixed_lambda = cfg.value("lambda", 1.0);
    sc.fixed_eps = cfg.value("epsilon", 0.0);
    sc.n = cfg.value("n", 50);
    sc.trials = cfg.value("trials", 10);
    sc.delta = flags.delta;
    sc.constant_factor = flags.constant_factor;
    sc.seed = flags.seed;

    const auto rows = eqbound::run_sweep(*scenario, sc);
    const std::string csv = eqbound::sweep_rows_to_csv(rows);
    if (!flags.out_path.empty()) write_text_file(flags.out_path, csv);
    else std::cout << csv;

    // Audit line: version plus the fully resolved configuration.
    json resolved = cfg;
    resolved["axis"] = axis;
    resolved["grid"] = sc.grid;
    resolved["n"] = sc.n;
    resolved["trials"] = sc.trials;
    resolved["delta"] = sc.delta;
    resolved["constant_factor"] = sc.constant_factor;
    resolved["seed"] = sc.seed;
    std::cerr << "version=" << kVersion << " config=" << resolved.dump() << "\n";

    // Summary: violation rate and the empirical performance-error argmin.
    std::size_t violations = 0, valid = 0;
    std::map<double, std::pair<double, std::size_t>> perf_by_lambda;
    for (const auto& r : rows) {
        if (!r.error.empty() && std::isnan(r.gen_err)) continue;
        ++valid;
        if (r.violation) ++violations;
        auto& acc = perf_by_lambda[r.lambda];
        acc.first += r.perf_err;
        acc.second += 1;
    }
    std::cerr << "rows=" << rows.size() << " violations=" << violations << "/" << valid;
    if (!perf_by_lambda.empty()) {
        double best_lambda = 0.0, best_perf = std::numeric_limits<double>::infinity();
        for (const auto& [lam, acc] : perf_by_lambda) {
            const double mean = acc.first / static_cast<double>(acc.second);
            if (mean < best_perf) {
                best_perf = mean;
                best_lambda = lam;
            }
        }
        std::cerr << " argmin_lambda(mean perf_err)=" << best_lambda;
    }
    std::cerr << "\n";
    return kExitPass;
}

int cmd_tradeoff(const CommonFlags& flags) {
    json cfg = json::object();
    if (!flags.config_path.empty()) cfg = load_json_file(flags.config_path);

    eqbound::TradeoffConstants constants;
    constants.C = cfg.value("C", 0.04);
    constants.C1 = cfg.value("C1", 0.04);
    constants.C2 = cfg.value("C2", 0.04);
    constants.C3 = cfg.value("C3", 0.01);

    eqbound::BoundInputs in;
    in.n = cfg.value("n", 1e6);
    in.d_G = cfg.value("d_G", 1.0);
    const double d0 = cfg.value("d0", 3.0);
    in.d = in.d_G + d0;
    in.eps = cfg.value("eps", 0.0);
    in.M = cfg.value("M", 1.0);
    in.delta = flags.delta;
    in.constant_factor = flags.constant_factor;

    std::vector<double> grid = flags.grid_spec.empty()
                                   ? parse_grid("lin:0.001:1:1000")
                                   : parse_grid(flags.grid_spec);

    std::ostringstream csv;
    csv << "# tradeoff curve; constants C=" << constants.C << " C1=" << constants.C1
        << " C2=" << constants.C2 << " C3=" << constants.C3 << " n=" << in.n << "\n";
    csv << "# defaults unless configured: d_G=" << in.d_G << " d0=" << d0 << " eps=" << in.eps
        << " M=" << in.M << " delta=" << in.delta << " (override via --config)\n";
    csv << "lambda,bound\n";
    double best_lambda = 0.0, best_value = std::numeric_limits<double>::infinity();
    std::string argmin_regime;
    for (double lam : grid) {
        if (!(lam > 0.0 && lam <= 1.0)) {
            std::cerr << "tradeoff grid values must lie in (0, 1]\n";
            return kExitConfigError;
        }
        in.lambda = lam;
        const auto report = eqbound::perf_bound(in, constants);
        csv.precision(17);
        csv << lam << ',' << report.total << "\n";
        if (report.total < best_value) {
            best_value = report.total;
            best_lambda = lam;
            argmin_regime = report.regime;
        }
    }
    if (!flags.out_path.empty()) write_text_file(flags.out_path, csv.str());
    else std::cout << csv.str();

    // Closed-form lambda*: the curve's increasing term is the squared
    // approximation term, so alpha = 2/d_G with coefficient C^2; the appendix
    // parameterization (alpha = 1/d_G, coefficient C) is reported alongside.
    const int regime = argmin_regime == "large-sample" ? 1 : 2;
    const auto p_curve = eqbound::lambda_star_parameters(in, constants, regime, true);
    const auto p_appendix = eqbound::lambda_star_parameters(in, constants, regime, false);
    const double star_curve =
        eqbound::optimal_lambda(p_curve.alpha, p_curve.beta, p_curve.C, p_curve.C_prime);
    const double star_appendix = eqbound::optimal_lambda(p_appendix.alpha, p_appendix.beta,
                                                         p_appendix.C, p_appendix.C_prime);
    std::cerr.precision(12);
    std::cerr << "grid argmin lambda=" << best_lambda << " bound=" << best_value
              << " regime=" << argmin_regime << "\n";
    std::cerr << "lambda_star closed form (curve parameterization)=" << star_curve << "\n";
    std::cerr << "lambda_star closed form (unsquared parameterization)=" << star_appendix << "\n";
    return kExitPass;
}

int cmd_analyze(const CommonFlags& flags) {
    if (flags.config_path.empty()) {
        std::cerr << "analyze requires --config\n";
        return kExitConfigError;
    }
    const json cfg = load_json_file(flags.config_path);
    json out;
    out["version"] = kVersion;
    out["command"] = "analyze";
    out["config"] = cfg;

    if (cfg.contains("space")) {
        const eqbound::FiniteMetricSpace space =
            eqbound::load_metric_space_json(cfg["space"].dump());
        out["space"]["points"] = space.size();
        out["space"]["diameter"] = space.diameter();
        if (space.size() >= 2) out["space"]["min_separation"] = eqbound::min_separation(space);
        out["space"]["ddim"] = eqbound::doubling_dimension(space);
        json rows = json::array();
        for (const auto& row : eqbound::cover_growth_check(space, space.distance_values())) {
            rows.push_back({{"radius", row.radius},
                            {"cover_count", row.cover_count},
                            {"doubling_bound", row.doubling_bound},
                            {"implied_constant", row.implied_constant}});
        }
        out["space"]["cover_growth"] = rows;
    }
    if (cfg.contains("group")) {
        const eqbound::FiniteGroup group = cfg["group"].is_string()
            ? eqbound::make_group_preset(cfg["group"].get<std::string>())
            : eqbound::load_group_json(cfg["group"].dump());
        out["group"]["order"] = group.size();
        out["group"]["right_invariant_word_metric"] = group.right_invariant();
        const auto space = group.word_metric_space();
        out["group"]["diameter"] = space.diameter();
        if (group.size() >= 2) {
            out["group"]["delta_G"] = eqbound::min_separation(space);
            if (group.size() <= eqbound::kDefaultExactCoverCap) {
                out["group"]["ddim"] = eqbound::doubling_dimension(space);
            }
        }
        eqbound::IsodiametricOptions iso_opt;
        if (group.size() > eqbound::kDefaultExactCoverCap) {
            if (!cfg.contains("ddim_G")) {
                std::cerr << "analyze: group too large for exact ddim; supply \"ddim_G\"\n";
                return kExitConfigError;
            }
            iso_opt.ddim_override = cfg["ddim_G"].get<double>();
        }
        const auto fit = eqbound::isodiametric_constant(group, iso_opt);
        out["group"]["isodiametric_C_G"] = fit.C_G;
        out["group"]["isodiametric_exhaustive"] = fit.exhaustive;
    }
    if (cfg.contains("action")) {
        // Natural action of a named preset; optional "members" picks a subset.
        auto action = eqbound::make_natural_action_preset(cfg["action"].get<std::string>());
        const auto subset = cfg.contains("members")
                                ? action.subset_of(cfg["members"].get<std::vector<std::size_t>>())
                                : action.full_subset();
        const auto reps = eqbound::orbit_representatives(action, subset);
        const auto deform = eqbound::action_deformation_constants(action, subset, reps);
        out["action"]["group_order"] = action.group().size();
        out["action"]["points"] = action.space().size();
        out["action"]["subset_size"] = subset.members.size();
        out["action"]["density"] = subset.measure_fraction();
        out["action"]["orbits"] = reps.rep_points.size();
        out["action"]["L"] = deform.L;
        out["action"]["L_prime"] = deform.L_prime;
        out["action"]["action_lipschitz"] = deform.action_lipschitz;
    }
    if (cfg.contains("bounds")) {
        // A BoundInputs document: evaluate every closed-form bound on it.
        const auto inputs = eqbound::bound_inputs_from_json(cfg["bounds"].dump());
        auto report_or_error = [&](const char* name, auto&& fn) {
            try {
                out["bounds"][name] = json::parse(fn().to_json());
            } catch (const std::exception& e) {
                out["bounds"][name] = {{"error", e.what()}};
            }
        };
        report_or_error("ambient", [&] { return eqbound::base_bound(inputs); });
        report_or_error("partial", [&] { return eqbound::partial_gen_bound(inputs); });
        report_or_error("performance", [&] { return eqbound::perf_bound(inputs); });
        try {
            out["bounds"]["approximation"] = eqbound::approx_bound(inputs);
        } catch (const std::exception& e) {
            out["bounds"]["approximation"] = {{"error", e.what()}};
        }
    }
    if (cfg.contains("scenario")) {
        auto scenario = scenario_from_json(cfg["scenario"]);
        const double lambda = cfg.value("lambda", 1.0);
        const double eps = cfg.value("epsilon", 0.0);
        const auto subset = scenario->subset_for(lambda);
        const auto inputs = scenario->bound_inputs(subset, eps, cfg.value("n", 100.0), flags.delta,
                                                   flags.constant_factor);
        out["scenario"]["id"] = scenario->id();
        out["scenario"]["density"] = subset.measure_fraction();
        out["scenario"]["stab_size"] = subset.members.size();
        out["scenario"]["metric_dims_from_reduced_order"] = scenario->dims_reduced();
        out["scenario"]["inputs"] = nlohmann::json::parse(
            eqbound::BoundReport{{}, 0.0, "", false, 0.0, inputs}.to_json())["inputs"];
        const auto reps = eqbound::orbit_representatives(scenario->action(), subset);
        out["scenario"]["orbit_representatives"] = reps.rep_points.size();
    }
    const std::string text = out.dump(2) + "\n";
    if (!flags.out_path.empty()) write_text_file(flags.out_path, text);
    else std::cout << text;
    return kExitPass;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"generalization and approximation bound calculator for finite symmetry groups"};
    app.require_subcommand(1);

    CommonFlags verify_flags, sweep_flags, tradeoff_flags, analyze_flags;
    std::string suite = "all";

    CLI::App* verify = app.add_subcommand("verify", "run a verification suite");
    verify->add_option("suite", suite, "generr|cover|iso|kt|all");
    add_common_flags(verify, verify_flags);

    CLI::App* sweep = app.add_subcommand("sweep", "run a scenario sweep, emit CSV rows");
    add_common_flags(sweep, sweep_flags);

    CLI::App* tradeoff = app.add_subcommand("tradeoff", "emit the performance-bound curve over lambda");
    add_common_flags(tradeoff, tradeoff_flags);

    CLI::App* analyze = app.add_subcommand("analyze", "print metric/group/scenario diagnostics");
    add_common_flags(analyze, analyze_flags);

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? kExitPass : kExitConfigError;
    }

    try {
        if (verify->parsed()) return cmd_verify(suite, verify_flags);
        if (sweep->parsed()) return cmd_sweep(sweep_flags);
        if (tradeoff->parsed()) return cmd_tradeoff(tradeoff_flags);
        if (analyze->parsed()) return cmd_analyze(analyze_flags);
    } catch (const eqbound::invalid_input& e) {
        std::cerr << "config error: " << e.what() << "\n";
        return kExitConfigError;
    } catch (const std::exception& e) {
        std::cerr << "config error: " << e.what() << "\n";
        return kExitConfigError;
    }
    return kExitConfigError;
}
