#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "eqbound/scenario.hpp"

namespace eqbound {

/// One (grid point, trial) evaluation. PerfErr = GenErr + AppErr. `violation`
/// compares the empirical generalization error against the explicit-constant
/// pipeline; the rate-form bounds land in the *_bound columns. A per-row
/// failure is recorded in `error` without aborting the sweep.
struct SweepRow {
    std::string scenario;
    double lambda = 0.0;
    double epsilon = 0.0;
    std::size_t n = 0;
    std::size_t trial = 0;
    double gen_err = 0.0;
    double app_err = 0.0;
    double perf_err = 0.0;
    double gen_bound = 0.0;
    double app_bound = 0.0;
    double perf_bound = 0.0;
    std::string regime;
    bool violation = false;
    std::uint64_t seed = 0;
    std::string error;
};

enum class GridAxis { lambda, epsilon };

struct SweepConfig {
    GridAxis axis = GridAxis::lambda;
    std::vector<double> grid;
    double fixed_lambda = 1.0; // used when sweeping epsilon
    double fixed_eps = 0.0;    // used when sweeping lambda
    std::size_t n = 50;
    std::size_t trials = 10;
    double delta = 0.1;
    double constant_factor = 1.0;
    std::uint64_t seed = 0;
};

/// Deterministic under (scenario, config, seed): per-trial seeds derive from
/// the run seed and the (grid point, trial) counter.
std::vector<SweepRow> run_sweep(const SweepScenario& scenario, const SweepConfig& config);

inline constexpr const char* kSweepCsvHeader =
    "scenario,lambda,epsilon,n,trial,gen_err,app_err,perf_err,gen_bound,app_bound,perf_bound,"
    "regime,violation,seed";

/// CSV with the fixed header, '.' decimals, LF line endings.
std::string sweep_rows_to_csv(const std::vector<SweepRow>& rows);

} // namespace eqbound
