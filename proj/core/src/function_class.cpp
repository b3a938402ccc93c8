#include "eqbound/function_class.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

namespace eqbound {

namespace {
constexpr double kValueSlack = 1e-12;

std::uint64_t splitmix(std::uint64_t& state) {
    state += 0x9e3779b97f4a7c15ULL;
    std::uint64_t z = state;
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
}
} // namespace

FunctionClass::FunctionClass(FiniteMetricSpace domain, std::vector<std::vector<double>> values,
                             double range_bound, double lipschitz)
    : domain_(std::move(domain)), values_(std::move(values)), range_bound_(range_bound),
      lipschitz_(lipschitz) {
    if (values_.empty()) throw invalid_input("function class must be nonempty");
    if (!(range_bound_ > 0.0) || !(lipschitz_ > 0.0)) {
        throw invalid_input("range bound and Lipschitz constant must be positive");
    }
    const std::size_t n = domain_.size();
    const double half = range_bound_ / 2.0 + kValueSlack;
    for (std::size_t f = 0; f < values_.size(); ++f) {
        if (values_[f].size() != n) throw invalid_input("function table size mismatch");
        for (double v : values_[f]) {
            if (std::abs(v) > half) {
                std::ostringstream os;
                os << "function " << f << " leaves [-M/2, M/2] with value " << v;
                throw invalid_input(os.str());
            }
        }
        for (std::size_t i = 0; i < n; ++i)
            for (std::size_t j = i + 1; j < n; ++j) {
                if (std::abs(values_[f][i] - values_[f][j]) >
                    lipschitz_ * domain_.dist(i, j) + kValueSlack) {
                    std::ostringstream os;
                    os << "function " << f << " breaks the Lipschitz bound on (" << domain_.label(i)
                       << "," << domain_.label(j) << ")";
                    throw invalid_input(os.str());
                }
            }
    }
}

double equivariance_error(const std::vector<double>& f, std::size_t g, const GroupAction& action) {
    if (g >= action.group().size()) throw invalid_input("element index outside the action's group");
    const std::size_t n = action.space().size();
    if (f.size() != n) throw invalid_input("function not defined on the action's space");
    double worst = 0.0;
    for (std::size_t z = 0; z < n; ++z) worst = std::max(worst, std::abs(f[action.act(g, z)] - f[z]));
    return worst;
}

double class_equivariance_error(const FunctionClass& cls, std::size_t g, const GroupAction& action) {
    double worst = 0.0;
    for (std::size_t f = 0; f < cls.size(); ++f)
        worst = std::max(worst, equivariance_error(cls.function(f), g, action));
    return worst;
}

double predictor_equivariance_error(const std::vector<std::size_t>& predictor, std::size_t g,
                                    const GroupAction& action) {
    const ProductSplit& split = action.split();
    const std::size_t n = action.space().size();
    if (predictor.size() != n) throw invalid_input("predictor not defined on the action's space");
    double worst = 0.0;
    for (std::size_t z = 0; z < n; ++z) {
        const std::size_t moved = predictor[action.act(g, z)];
        const std::size_t acted = split.act_y(g, predictor[z]);
        const double d = split.yspace.dist(moved, acted);
        worst = std::max(worst, d * d);
    }
    return worst;
}

TransformationSubset stabilizer(const FunctionClass& cls, const GroupAction& action, double eps) {
    if (cls.domain().size() != action.space().size()) {
        throw invalid_input("class functions not defined on the action's space");
    }
    std::vector<std::size_t> members;
    for (std::size_t g = 0; g < action.group().size(); ++g) {
        if (class_equivariance_error(cls, g, action) <= eps) members.push_back(g);
    }
    if (members.empty()) {
        throw invalid_input("empty stabilizer: the identity always qualifies, so the action or "
                            "function tables are inconsistent");
    }
    TransformationSubset subset = action.subset_of(std::move(members));
    if (eps == 0.0 && !is_subgroup(action.group(), subset)) {
        throw invalid_input("Stab_0 failed subgroup closure; action or class tables are inconsistent");
    }
    return subset;
}

namespace {

struct PartialClassSearch {
    const GroupAction& action;
    const std::vector<std::size_t>& subset;
    const std::vector<double>& grid;
    double lipschitz;
    double eps;
    std::size_t cap;
    std::uint64_t rng_state;
    bool shuffle;

    std::vector<double> current;
    std::vector<std::vector<double>> found;
    bool truncated = false;

    // Pairwise constraints touching point z against already-assigned points.
    bool feasible(std::size_t z) const {
        const auto& space = action.space();
        for (std::size_t w = 0; w < z; ++w) {
            if (std::abs(current[z] - current[w]) > lipschitz * space.dist(z, w) + kValueSlack) {
                return false;
            }
        }
        for (std::size_t g : subset) {
            const std::size_t gz = action.act(g, z);
            if (gz <= z && std::abs(current[z] - current[gz]) > eps + kValueSlack) return false;
            const std::size_t gz_inv = action.act_inverse(g, z);
            if (gz_inv <= z && std::abs(current[z] - current[gz_inv]) > eps + kValueSlack) return false;
        }
        return true;
    }

    void assign(std::size_t z) {
        if (found.size() >= cap) {
            truncated = true;
            return;
        }
        if (z == current.size()) {
            found.push_back(current);
            return;
        }
        std::vector<std::size_t> order(grid.size());
        for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
        if (shuffle) {
            for (std::size_t i = order.size(); i > 1; --i)
                std::swap(order[i - 1], order[splitmix(rng_state) % i]);
        }
        for (std::size_t i : order) {
            current[z] = grid[i];
            if (feasible(z)) assign(z + 1);
            if (found.size() >= cap) {
                truncated = true;
                return;
            }
        }
    }
};

} // namespace

PartialClassResult build_partial_class(const GroupAction& action, const TransformationSubset& subset,
                                       const std::vector<double>& value_grid, double range_bound,
                                       double lipschitz, double eps, PartialClassOptions options) {
    if (value_grid.empty()) throw invalid_input("value grid must be nonempty");
    for (double v : value_grid) {
        if (std::abs(v) > range_bound / 2.0 + kValueSlack) {
            throw invalid_input("value grid must lie inside [-M/2, M/2]");
        }
    }
    // Rough enumeration-size estimate decides whether the DFS order is
    // shuffled; an exhaustive run must stay deterministic and grid-ordered.
    const std::size_t n = action.space().size();
    double log_count = static_cast<double>(n) * std::log(static_cast<double>(value_grid.size()));
    const bool may_truncate =
        log_count > std::log(static_cast<double>(options.max_functions)) + 1e-9;

    PartialClassSearch search{action,
                              subset.members,
                              value_grid,
                              lipschitz,
                              eps,
                              options.max_functions,
                              options.seed ^ 0x9e3779b97f4a7c15ULL,
                              may_truncate,
                              {},
                              {}};
    search.current.assign(n, 0.0);
    search.assign(0);
    if (search.found.empty()) {
        throw invalid_input("partial class is empty: value grid too coarse for the Lipschitz "
                            "constraint");
    }

    PartialClassResult result{
        FunctionClass(action.space(), std::move(search.found), range_bound, lipschitz),
        search.truncated, options.seed};
    return result;
}

} // namespace eqbound
