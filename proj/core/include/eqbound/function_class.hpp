#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "eqbound/action.hpp"

namespace eqbound {

/// A finite set of tabular real-valued functions on a finite metric space.
/// Values live in [-M/2, M/2] and every function is ell-Lipschitz with
/// respect to the domain metric; both are validated at construction.
class FunctionClass {
public:
    FunctionClass(FiniteMetricSpace domain, std::vector<std::vector<double>> values,
                  double range_bound, double lipschitz);

    const FiniteMetricSpace& domain() const { return domain_; }
    std::size_t size() const { return values_.size(); }
    const std::vector<double>& function(std::size_t f) const { return values_[f]; }
    double value(std::size_t f, std::size_t z) const { return values_[f][z]; }
    double range_bound() const { return range_bound_; }
    double lipschitz() const { return lipschitz_; }

private:
    FiniteMetricSpace domain_;
    std::vector<std::vector<double>> values_;
    double range_bound_;
    double lipschitz_;
};

/// Loss-level equivariance error ee(f, g) = max over z of |f(g z) - f(z)|.
double equivariance_error(const std::vector<double>& f, std::size_t g, const GroupAction& action);

/// Worst equivariance error over a whole class: max over f of ee(f, g).
double class_equivariance_error(const FunctionClass& cls, std::size_t g, const GroupAction& action);

/// Predictor-level error sup over x of loss(f(g x), g f(x)) for a tabular
/// predictor x -> y (indices into the split's Y space), with the squared
/// Y-distance loss. Requires a declared X x Y split; this is the lower
/// quantity obtained by restricting the loss-level supremum to the
/// predictor's graph.
double predictor_equivariance_error(const std::vector<std::size_t>& predictor, std::size_t g,
                                    const GroupAction& action);

/// {g : max over f of ee(f, g) <= eps}. For eps = 0 over a full ambient group
/// the result is verified to be a subgroup. The identity always qualifies, so
/// an empty result signals a table bug and raises an error.
TransformationSubset stabilizer(const FunctionClass& cls, const GroupAction& action, double eps);

struct PartialClassOptions {
    std::size_t max_functions = 100000;
    std::uint64_t seed = 0; // shuffles DFS value order once the cap binds
};

/// Enumerates tabular functions with values in `value_grid` that are
/// ell-Lipschitz and satisfy |f(g z) - f(z)| <= eps for every g in the
/// subset, so the returned class has stabilizer containing the subset and
/// density at least the subset's measure fraction. Enumeration is exhaustive
/// up to the cap; above it, the DFS draws a seed-shuffled sample and records
/// the truncation.
struct PartialClassResult {
    FunctionClass cls;
    bool truncated = false;
    std::uint64_t seed = 0;
};

PartialClassResult build_partial_class(const GroupAction& action, const TransformationSubset& subset,
                                       const std::vector<double>& value_grid, double range_bound,
                                       double lipschitz, double eps, PartialClassOptions options = {});

} // namespace eqbound
