#include "eqbound/scenario.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <sstream>

#include "eqbound/covering.hpp"

namespace eqbound {

namespace {

std::string zero_pad(std::size_t v, std::size_t width) {
    std::string s = std::to_string(v);
    while (s.size() < width) s.insert(s.begin(), '0');
    return s;
}

// Largest Lipschitz constant realized by a table of functions; the class
// constant must dominate every member.
double table_lipschitz(const std::vector<std::vector<double>>& values,
                       const FiniteMetricSpace& space) {
    double worst = 0.0;
    for (const auto& f : values)
        for (std::size_t i = 0; i < space.size(); ++i)
            for (std::size_t j = i + 1; j < space.size(); ++j)
                worst = std::max(worst, std::abs(f[i] - f[j]) / space.dist(i, j));
    return worst;
}

double ystar_lipschitz(const FiniteMetricSpace& zspace, const FiniteMetricSpace& yspace,
                       const std::vector<std::size_t>& ystar) {
    double worst = 0.0;
    for (std::size_t i = 0; i < zspace.size(); ++i)
        for (std::size_t j = i + 1; j < zspace.size(); ++j)
            worst = std::max(worst, yspace.dist(ystar[i], ystar[j]) / zspace.dist(i, j));
    return worst;
}

void fix_probability_residual(std::vector<double>& p) {
    double total = 0.0;
    std::size_t largest = 0;
    for (std::size_t i = 0; i < p.size(); ++i) {
        total += p[i];
        if (p[i] > p[largest]) largest = i;
    }
    p[largest] += 1.0 - total;
}

// ---------------------------------------------------------------------------
// Padded torus translations.
// ---------------------------------------------------------------------------

class PaddedTorusScenario final : public SweepScenario {
public:
    PaddedTorusScenario(std::size_t n_img, std::size_t k, std::size_t levels)
        : id_("padded_torus"), m_(n_img + k - 1),
          action_(build_action(n_img, k, levels, m_)) {
        std::ostringstream os;
        os << "padded_torus_n" << n_img << "_k" << k << "_l" << levels;
        id_ = os.str();

        const auto& space = action_.space();
        dist_.probabilities.assign(space.size(), 0.0);
        double total = 0.0;
        for (std::size_t z = 0; z < space.size(); ++z) {
            const double w = 3.0 + static_cast<double>(z % 5);
            dist_.probabilities[z] = w;
            total += w;
        }
        for (double& p : dist_.probabilities) p /= total;
        fix_probability_residual(dist_.probabilities);
        std::vector<std::size_t> ystar(space.size());
        for (std::size_t z = 0; z < space.size(); ++z) ystar[z] = z; // position label
        dist_.ystar = ystar;
        dist_.lip_ystar = ystar_lipschitz(space, action_.split().yspace, ystar);

        d_ = doubling_dimension(space);
        d_G_ = doubling_dimension(action_.group().word_metric_space());
        diameter_ = space.diameter();
        IsodiametricOptions iso;
        iso.ddim_override = d_G_;
        iso_fit_ = isodiametric_constant(action_.group(), iso);
    }

    const std::string& id() const override { return id_; }
    const GroupAction& action() const override { return action_; }
    const DataDistribution& dist() const override { return dist_; }
    bool dims_reduced() const override { return false; }

    TransformationSubset subset_for(double lambda) const override {
        if (!(lambda > 0.0 && lambda <= 1.0)) throw invalid_input("density must lie in (0, 1]");
        std::size_t w = static_cast<std::size_t>(
            std::llround(std::sqrt(lambda * static_cast<double>(m_ * m_))));
        w = std::clamp<std::size_t>(w, 1, m_);
        return window_subset(w);
    }

    /// Translations (a, b) with both coordinates in a centered w-window.
    TransformationSubset window_subset(std::size_t w) const {
        std::vector<std::size_t> members;
        const std::size_t lo = m_ - w / 2; // wraps to negative offsets
        for (std::size_t i = 0; i < w; ++i)
            for (std::size_t j = 0; j < w; ++j) {
                const std::size_t a = (lo + i) % m_;
                const std::size_t b = (lo + j) % m_;
                members.push_back(a * m_ + b);
            }
        return action_.subset_of(std::move(members));
    }

    FunctionClass build_class(const TransformationSubset& subset, double eps,
                              std::uint64_t seed) const override {
        PartialClassOptions opt;
        opt.max_functions = 200;
        opt.seed = seed;
        // Loss-like values: nonnegative grid inside [-M/2, M/2] for M = 2.
        const std::vector<double> grid{0.0, 0.5, 1.0};
        const double ell = 0.75 / min_separation(action_.space());
        return build_partial_class(action_, subset, grid, 2.0, ell, eps, opt).cls;
    }

    BoundInputs bound_inputs(const TransformationSubset& subset, double eps, double n, double delta,
                             double constant_factor) const override {
        BoundInputs in;
        in.d = d_;
        in.d_G = d_G_;
        in.diameter = diameter_;
        in.delta_G = 1.0;
        const auto reps = orbit_representatives(action_, subset);
        const auto deform = action_deformation_constants(action_, subset, reps);
        in.L_eps = deform.L;
        in.L_prime = deform.action_lipschitz;
        in.stab_size = static_cast<double>(subset.members.size());
        in.group_size = static_cast<double>(action_.group().size());
        in.n = n;
        in.M = 2.0;
        in.delta = delta;
        in.eps = eps;
        in.lambda = subset.measure_fraction();
        in.lip_ystar = dist_.lip_ystar;
        in.C_G = iso_fit_.C_G;
        in.constant_factor = constant_factor;
        return in;
    }

private:
    static GroupAction build_action(std::size_t n_img, std::size_t k, std::size_t levels,
                                    std::size_t m) {
        if (n_img == 0 || k == 0) throw invalid_input("image and kernel sizes must be positive");
        if (levels < 2) throw invalid_input("need at least two pixel levels");
        if (m > 8) {
            std::ostringstream os;
            os << "padded torus side " << m << " exceeds the exact-suite cap of 8";
            throw size_cap_error(os.str());
        }
        // Aperiodic base pattern in the n_img window, zero padding outside.
        std::vector<double> base(m * m, 0.0);
        for (std::size_t i = 0; i < n_img; ++i)
            for (std::size_t j = 0; j < n_img; ++j)
                base[i * m + j] =
                    static_cast<double>((i * n_img + j) % levels + 1) / static_cast<double>(levels);

        const std::size_t nz = m * m;
        auto pixel = [&](std::size_t shift_a, std::size_t shift_b, std::size_t i, std::size_t j) {
            return base[((i + m - shift_a) % m) * m + (j + m - shift_b) % m];
        };
        std::vector<std::string> labels(nz);
        const std::size_t width = std::to_string(m - 1).size();
        for (std::size_t a = 0; a < m; ++a)
            for (std::size_t b = 0; b < m; ++b)
                labels[a * m + b] = "s" + zero_pad(a, width) + "_" + zero_pad(b, width);
        std::vector<double> d(nz * nz, 0.0);
        for (std::size_t z = 0; z < nz; ++z)
            for (std::size_t w = 0; w < nz; ++w) {
                double acc = 0.0;
                for (std::size_t i = 0; i < m; ++i)
                    for (std::size_t j = 0; j < m; ++j) {
                        const double diff = pixel(z / m, z % m, i, j) - pixel(w / m, w % m, i, j);
                        acc += diff * diff;
                    }
                d[z * nz + w] = std::sqrt(acc);
            }
        FiniteMetricSpace space(std::move(labels), std::move(d));

        FiniteGroup group = make_torus2d_group(m);
        std::vector<std::size_t> act(group.size() * nz);
        for (std::size_t g = 0; g < group.size(); ++g) {
            const std::size_t u = g / m, v = g % m;
            for (std::size_t z = 0; z < nz; ++z) {
                const std::size_t a = z / m, b = z % m;
                act[g * nz + z] = ((a + u) % m) * m + (b + v) % m;
            }
        }
        GroupAction action(std::move(group), std::move(space), std::move(act));

        // Position labels with the torus word metric; translations act on them
        // the same way.
        ProductSplit split{make_torus2d_space(m), {}, {}, {}};
        split.x_of.resize(nz);
        split.y_of.resize(nz);
        for (std::size_t z = 0; z < nz; ++z) {
            split.x_of[z] = z;
            split.y_of[z] = z;
        }
        split.y_act.resize(action.group().size() * nz);
        for (std::size_t g = 0; g < action.group().size(); ++g)
            for (std::size_t y = 0; y < nz; ++y) split.y_act[g * nz + y] = action.act(g, y);
        action.attach_split(std::move(split));
        return action;
    }

    std::string id_;
    std::size_t m_;
    GroupAction action_;
    DataDistribution dist_;
    double d_ = 0.0, d_G_ = 0.0, diameter_ = 0.0;
    IsodiametricFit iso_fit_;
};

// ---------------------------------------------------------------------------
// Discretized rotations on digit/angle labels.
// ---------------------------------------------------------------------------

class RotationScenario final : public SweepScenario {
public:
    static constexpr std::size_t kDigits = 2;
    static constexpr std::size_t kReducedOrder = 24;

    RotationScenario(std::size_t order, double window_degrees)
        : order_(order), action_(build_action(order)) {
        if (!(window_degrees > 0.0 && window_degrees <= 180.0)) {
            throw invalid_input("rotation data window must lie in (0, 180] degrees");
        }
        std::ostringstream os;
        os << "rotation" << order_;
        id_ = os.str();

        const auto& space = action_.space();
        // Uniform data over both digits and angles inside the data window.
        const std::size_t w_data = window_size(window_degrees);
        dist_.probabilities.assign(space.size(), 0.0);
        std::size_t count = 0;
        for (std::size_t d = 0; d < kDigits; ++d)
            for (std::size_t t = 0; t < w_data; ++t) {
                const std::size_t theta = (order_ - w_data / 2 + t) % order_;
                dist_.probabilities[d * order_ + theta] = 1.0;
                ++count;
            }
        for (double& p : dist_.probabilities) p /= static_cast<double>(count);
        fix_probability_residual(dist_.probabilities);
        std::vector<std::size_t> ystar(space.size());
        for (std::size_t z = 0; z < space.size(); ++z) ystar[z] = z; // exact labeling
        dist_.ystar = ystar;
        dist_.lip_ystar = 1.0; // identity labeling between identical metrics

        if (order_ * kDigits <= kDefaultExactCoverCap) {
            d_ = doubling_dimension(space);
            d_G_ = doubling_dimension(action_.group().word_metric_space());
            dims_reduced_ = false;
        } else {
            // Exact searches on a reduced-order twin of the same construction.
            GroupAction twin = build_action(kReducedOrder);
            d_ = doubling_dimension(twin.space());
            d_G_ = doubling_dimension(twin.group().word_metric_space());
            dims_reduced_ = true;
        }
        diameter_ = space.diameter();
        IsodiametricOptions iso;
        iso.ddim_override = d_G_;
        iso_fit_ = isodiametric_constant(action_.group(), iso);
    }

    const std::string& id() const override { return id_; }
    const GroupAction& action() const override { return action_; }
    const DataDistribution& dist() const override { return dist_; }
    bool dims_reduced() const override { return dims_reduced_; }

    std::size_t window_size(double degrees) const {
        // Total width in group steps of the centered half-open window
        // [-degrees, degrees).
        const double steps = 2.0 * degrees / 360.0 * static_cast<double>(order_);
        const auto w = static_cast<std::size_t>(std::llround(steps));
        return std::clamp<std::size_t>(w, 1, order_);
    }

    TransformationSubset subset_for(double lambda) const override {
        if (!(lambda > 0.0 && lambda <= 1.0)) throw invalid_input("density must lie in (0, 1]");
        const auto w = static_cast<std::size_t>(
            std::llround(lambda * static_cast<double>(order_)));
        return window_subset(std::clamp<std::size_t>(w, 1, order_));
    }

    /// Rotations in the half-open centered window of `w` steps.
    TransformationSubset window_subset(std::size_t w) const {
        std::vector<std::size_t> members;
        const std::size_t lo = order_ - w / 2;
        for (std::size_t t = 0; t < w; ++t) members.push_back((lo + t) % order_);
        return action_.subset_of(std::move(members));
    }

    FunctionClass build_class(const TransformationSubset& subset, double eps,
                              std::uint64_t seed) const override {
        (void)seed;
        // Loss classes of equivariant tabular predictors: a digit permutation
        // plus a per-digit rotation offset. Every member is exactly
        // equivariant, so the class stabilizer contains any prescribed
        // subset; the identity predictor has zero risk.
        const auto& space = action_.space();
        const auto& yspace = action_.split().yspace;
        const auto& ystar = *dist_.ystar;
        const std::size_t shift_step = std::max<std::size_t>(1, order_ / 24);

        std::vector<std::vector<double>> values;
        std::map<std::vector<double>, bool> seen;
        for (int swap = 0; swap < 2; ++swap) {
            for (std::size_t sa = 0; sa < order_; sa += shift_step)
                for (std::size_t sb = 0; sb < order_; sb += shift_step) {
                    std::vector<double> f(space.size());
                    for (std::size_t z = 0; z < space.size(); ++z) {
                        const std::size_t d = z / order_, theta = z % order_;
                        const std::size_t pd = swap ? (kDigits - 1 - d) : d;
                        const std::size_t shift = d == 0 ? sa : sb;
                        const std::size_t py = pd * order_ + (theta + shift) % order_;
                        const double dy = yspace.dist(py, ystar[z]);
                        f[z] = dy * dy;
                    }
                    if (!seen.emplace(f, true).second) continue;
                    values.push_back(std::move(f));
                }
        }
        const double ell = std::max(table_lipschitz(values, space), 1e-9) * (1.0 + 1e-9);
        const double M = 2.0 * std::pow(yspace.diameter(), 2.0);
        FunctionClass cls(space, std::move(values), M, ell);
        // Guaranteed by equivariance; cheap to verify on construction.
        for (std::size_t g : subset.members) {
            if (class_equivariance_error(cls, g, action_) > eps) {
                throw invalid_input("rotation class failed its equivariance guarantee");
            }
        }
        return cls;
    }

    BoundInputs bound_inputs(const TransformationSubset& subset, double eps, double n, double delta,
                             double constant_factor) const override {
        BoundInputs in;
        in.d = d_;
        in.d_G = d_G_;
        in.diameter = diameter_;
        in.delta_G = 1.0;
        const auto reps = orbit_representatives(action_, subset);
        const auto deform = action_deformation_constants(action_, subset, reps);
        in.L_eps = deform.L;
        in.L_prime = deform.action_lipschitz;
        in.stab_size = static_cast<double>(subset.members.size());
        in.group_size = static_cast<double>(action_.group().size());
        in.n = n;
        in.M = 2.0 * std::pow(action_.split().yspace.diameter(), 2.0);
        in.delta = delta;
        in.eps = eps;
        in.lambda = subset.measure_fraction();
        in.lip_ystar = dist_.lip_ystar;
        in.C_G = iso_fit_.C_G;
        in.constant_factor = constant_factor;
        return in;
    }

private:
    static GroupAction build_action(std::size_t order) {
        if (order < 2) throw invalid_input("rotation order must be at least 2");
        const std::size_t nz = kDigits * order;
        // Distances in turns: half a turn separates digits, angles contribute
        // their cyclic distance as a fraction of the full turn.
        const double digit_gap = 0.5;
        auto ang = [order](std::size_t a, std::size_t b) {
            const std::size_t fwd = (b >= a) ? b - a : a - b;
            return static_cast<double>(std::min(fwd, order - fwd)) / static_cast<double>(order);
        };
        const std::size_t width = std::to_string(order - 1).size();
        std::vector<std::string> labels(nz);
        for (std::size_t d = 0; d < kDigits; ++d)
            for (std::size_t t = 0; t < order; ++t)
                labels[d * order + t] =
                    std::string("x") + static_cast<char>('a' + d) + "_" + zero_pad(t, width);
        std::vector<double> dm(nz * nz, 0.0);
        for (std::size_t z = 0; z < nz; ++z)
            for (std::size_t w = 0; w < nz; ++w) {
                const double dd = (z / order == w / order) ? 0.0 : digit_gap;
                dm[z * nz + w] = dd + ang(z % order, w % order);
            }
        FiniteMetricSpace space(labels, std::move(dm));

        FiniteGroup group = make_cyclic_group(order);
        std::vector<std::size_t> act(order * nz);
        for (std::size_t g = 0; g < order; ++g)
            for (std::size_t z = 0; z < nz; ++z)
                act[g * nz + z] = (z / order) * order + (z % order + g) % order;
        GroupAction action(std::move(group), std::move(space), std::move(act));

        // Y is the same digit/angle space; rotations shift the angle label.
        std::vector<double> ym(nz * nz, 0.0);
        for (std::size_t z = 0; z < nz; ++z)
            for (std::size_t w = 0; w < nz; ++w) {
                const double dd = (z / order == w / order) ? 0.0 : digit_gap;
                ym[z * nz + w] = dd + ang(z % order, w % order);
            }
        std::vector<std::string> ylabels(labels);
        for (auto& l : ylabels) l[0] = 'y';
        ProductSplit split{FiniteMetricSpace(std::move(ylabels), std::move(ym)), {}, {}, {}};
        split.x_of.resize(nz);
        split.y_of.resize(nz);
        for (std::size_t z = 0; z < nz; ++z) {
            split.x_of[z] = z;
            split.y_of[z] = z;
        }
        split.y_act.resize(order * nz);
        for (std::size_t g = 0; g < order; ++g)
            for (std::size_t y = 0; y < nz; ++y) split.y_act[g * nz + y] = action.act(g, y);
        action.attach_split(std::move(split));
        return action;
    }

    std::string id_;
    std::size_t order_;
    GroupAction action_;
    DataDistribution dist_;
    double d_ = 0.0, d_G_ = 0.0, diameter_ = 0.0;
    bool dims_reduced_ = false;
    IsodiametricFit iso_fit_;
};

} // namespace

std::unique_ptr<SweepScenario> scenario_padded_torus(std::size_t n_img, std::size_t k,
                                                     std::size_t levels) {
    return std::make_unique<PaddedTorusScenario>(n_img, k, levels);
}

std::unique_ptr<SweepScenario> scenario_rotation(std::size_t order, double window_degrees) {
    return std::make_unique<RotationScenario>(order, window_degrees);
}

} // namespace eqbound
