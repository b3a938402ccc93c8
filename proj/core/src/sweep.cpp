#include "eqbound/sweep.hpp"

#include <cmath>
#include <sstream>

#include "eqbound/rng.hpp"

namespace eqbound {

namespace {

std::string format_double(double v) {
    if (std::isnan(v)) return "nan";
    std::ostringstream os;
    os.precision(17);
    os << v;
    return os.str();
}

} // namespace

std::vector<SweepRow> run_sweep(const SweepScenario& scenario, const SweepConfig& config) {
    std::vector<SweepRow> rows;
    if (config.grid.empty()) throw invalid_input("sweep grid must be nonempty");
    if (!(config.delta > 0.0 && config.delta < 0.5)) {
        throw invalid_input("sweep confidence level must lie in (0, 1/2)");
    }
    rows.reserve(config.grid.size() * config.trials);
    for (std::size_t gi = 0; gi < config.grid.size(); ++gi) {
        const double gval = config.grid[gi];
        const double lambda_req = config.axis == GridAxis::lambda ? gval : config.fixed_lambda;
        const double eps = config.axis == GridAxis::epsilon ? gval : config.fixed_eps;
        const std::uint64_t class_seed = derive_seed(config.seed, gi);

        TransformationSubset subset = scenario.subset_for(lambda_req);
        // The class is a function of the grid point alone; samples vary per trial.
        FunctionClass cls = scenario.build_class(subset, eps, class_seed);
        const double app_err = empirical_app_err(cls, scenario.dist());

        double gen_bound = std::nan("");
        double app_bound_v = std::nan("");
        double perf_bound_v = std::nan("");
        std::string regime;
        std::string bound_error;
        const BoundInputs inputs = scenario.bound_inputs(subset, eps, static_cast<double>(config.n),
                                                         config.delta, config.constant_factor);
        try {
            const BoundReport gr = partial_gen_bound(inputs);
            gen_bound = gr.total;
            regime = gr.regime;
        } catch (const std::exception& e) {
            bound_error = e.what();
            regime = "error";
        }
        try {
            app_bound_v = approx_bound(inputs);
            perf_bound_v = perf_bound(inputs).total;
        } catch (const std::exception& e) {
            if (bound_error.empty()) bound_error = e.what();
            if (regime.empty()) regime = "error";
        }

        for (std::size_t trial = 0; trial < config.trials; ++trial) {
            SweepRow row;
            row.scenario = scenario.id();
            row.lambda = subset.measure_fraction();
            row.epsilon = eps;
            row.n = config.n;
            row.trial = trial;
            row.seed = derive_seed(config.seed, (gi << 32) | (trial + 1));
            row.app_err = app_err;
            row.gen_bound = gen_bound;
            row.app_bound = app_bound_v;
            row.perf_bound = perf_bound_v;
            row.regime = regime;
            row.error = bound_error;
            try {
                const Sample sample = draw_sample(scenario.dist(), config.n, row.seed);
                row.gen_err = empirical_gen_err(cls, sample, scenario.dist());
                row.perf_err = row.gen_err + row.app_err;
                const ExplicitBound explicit_bound =
                    explicit_generalization_bound(cls, sample, config.delta);
                row.violation = row.gen_err > explicit_bound.total;
            } catch (const std::exception& e) {
                row.error = row.error.empty() ? e.what() : row.error + "; " + e.what();
                row.gen_err = std::nan("");
                row.perf_err = std::nan("");
            }
            rows.push_back(std::move(row));
        }
    }
    return rows;
}

std::string sweep_rows_to_csv(const std::vector<SweepRow>& rows) {
    std::ostringstream os;
    os << kSweepCsvHeader << "\n";
    for (const auto& r : rows) {
        os << r.scenario << ',' << format_double(r.lambda) << ',' << format_double(r.epsilon) << ','
           << r.n << ',' << r.trial << ',' << format_double(r.gen_err) << ','
           << format_double(r.app_err) << ',' << format_double(r.perf_err) << ','
           << format_double(r.gen_bound) << ',' << format_double(r.app_bound) << ','
           << format_double(r.perf_bound) << ',' << r.regime << ',' << (r.violation ? 1 : 0) << ','
           << r.seed << "\n";
    }
    return os.str();
}

} // namespace eqbound
