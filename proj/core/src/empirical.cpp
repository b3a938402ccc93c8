#include "eqbound/empirical.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <limits>

#include "eqbound/bounds.hpp"
#include "eqbound/rng.hpp"

namespace eqbound {

namespace {

double exact_mean(const std::vector<double>& f, const DataDistribution& dist) {
    double m = 0.0;
    for (std::size_t z = 0; z < f.size(); ++z) m += dist.probabilities[z] * f[z];
    return m;
}

double sample_mean(const std::vector<double>& f, const Sample& sample) {
    double m = 0.0;
    for (std::size_t z : sample.draws) m += f[z];
    return m / static_cast<double>(sample.n());
}

} // namespace

double empirical_gen_err(const FunctionClass& cls, const Sample& sample,
                         const DataDistribution& dist) {
    dist.validate(cls.domain().size());
    if (sample.n() == 0) throw invalid_input("sample must be nonempty");
    double best = -std::numeric_limits<double>::infinity();
    for (std::size_t f = 0; f < cls.size(); ++f) {
        best = std::max(best, exact_mean(cls.function(f), dist) - sample_mean(cls.function(f), sample));
    }
    return best;
}

double g_averaged_gen_err(const FunctionClass& cls, const Sample& sample,
                          const DataDistribution& dist, const GroupAction& action,
                          const TransformationSubset& subset) {
    dist.validate(cls.domain().size());
    if (sample.n() == 0) throw invalid_input("sample must be nonempty");
    const double w = 1.0 / static_cast<double>(subset.members.size());
    double best = -std::numeric_limits<double>::infinity();
    for (std::size_t f = 0; f < cls.size(); ++f) {
        const auto& values = cls.function(f);
        // E_g f(g z) per point, then exact and sample means of that table.
        std::vector<double> averaged(values.size(), 0.0);
        for (std::size_t g : subset.members)
            for (std::size_t z = 0; z < values.size(); ++z)
                averaged[z] += w * values[action.act(g, z)];
        best = std::max(best, exact_mean(averaged, dist) - sample_mean(averaged, sample));
    }
    return best;
}

RademacherEstimate empirical_rademacher(const FunctionClass& cls, const Sample& sample,
                                        std::size_t trials, std::uint64_t seed) {
    const std::size_t n = sample.n();
    if (n == 0) throw invalid_input("sample must be nonempty");
    const std::size_t nf = cls.size();
    // Point-major value matrix: vals[i * nf + f] = f-th function at draw i.
    std::vector<double> vals(n * nf);
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t f = 0; f < nf; ++f) vals[i * nf + f] = cls.value(f, sample.draws[i]);

    RademacherEstimate out;
    if (n <= kExactRademacherMaxN) {
        out.exact = true;
        // Gray-code walk over all 2^n sign vectors; one coordinate flips per
        // step, so the per-function sums update in O(nf).
        std::vector<double> sums(nf, 0.0);
        std::vector<double> sign(n, 1.0);
        for (std::size_t i = 0; i < n; ++i)
            for (std::size_t f = 0; f < nf; ++f) sums[f] += vals[i * nf + f];
        double accum = *std::max_element(sums.begin(), sums.end());
        const std::uint64_t states = 1ULL << n;
        for (std::uint64_t k = 1; k < states; ++k) {
            const int b = std::countr_zero(k);
            sign[b] = -sign[b];
            const double* col = &vals[static_cast<std::size_t>(b) * nf];
            const double factor = 2.0 * sign[b];
            double best = -std::numeric_limits<double>::infinity();
            for (std::size_t f = 0; f < nf; ++f) {
                sums[f] += factor * col[f];
                best = std::max(best, sums[f]);
            }
            accum += best;
        }
        out.estimate = accum / static_cast<double>(states) / static_cast<double>(n);
        return out;
    }

    if (trials == 0) throw invalid_input("Monte Carlo Rademacher needs trials > 0");
    SplitMix64 rng(seed);
    double sum = 0.0, sumsq = 0.0;
    std::vector<double> sums(nf);
    for (std::size_t t = 0; t < trials; ++t) {
        std::fill(sums.begin(), sums.end(), 0.0);
        for (std::size_t i = 0; i < n; ++i) {
            const double s = (rng.next() & 1) ? 1.0 : -1.0;
            const double* col = &vals[i * nf];
            for (std::size_t f = 0; f < nf; ++f) sums[f] += s * col[f];
        }
        const double sup = *std::max_element(sums.begin(), sums.end()) / static_cast<double>(n);
        sum += sup;
        sumsq += sup * sup;
    }
    const double mean = sum / static_cast<double>(trials);
    const double var = std::max(0.0, sumsq / static_cast<double>(trials) - mean * mean);
    out.estimate = mean;
    out.half_width = 1.96 * std::sqrt(var / static_cast<double>(trials));
    return out;
}

double empirical_app_err(const FunctionClass& cls, const DataDistribution& dist) {
    dist.validate(cls.domain().size());
    double best = std::numeric_limits<double>::infinity();
    for (std::size_t f = 0; f < cls.size(); ++f) best = std::min(best, exact_mean(cls.function(f), dist));
    return best;
}

ExplicitBound explicit_generalization_bound(const FunctionClass& cls, const Sample& sample,
                                            double delta) {
    if (!(delta > 0.0 && delta < 1.0)) throw invalid_input("confidence level must lie in (0, 1)");
    const std::size_t n = sample.n();
    ExplicitBound out;
    out.confidence = std::sqrt(cls.range_bound() * std::log(2.0 / delta) / static_cast<double>(n));
    if (n <= kExactRademacherMaxN) {
        out.method = "exact-rademacher";
        out.complexity = empirical_rademacher(cls, sample, 0, 0).estimate;
        out.total = out.complexity + out.confidence;
        return out;
    }

    // Sup-norm covers of the finite class, evaluated lazily per threshold. The
    // cover count is a step function of the radius, constant between distinct
    // pairwise sup distances.
    const std::size_t nf = cls.size();
    const std::size_t nz = cls.domain().size();
    std::vector<double> supdist(nf * nf, 0.0);
    double diam_F = 0.0;
    for (std::size_t a = 0; a < nf; ++a)
        for (std::size_t b = a + 1; b < nf; ++b) {
            double d = 0.0;
            for (std::size_t z = 0; z < nz; ++z)
                d = std::max(d, std::abs(cls.value(a, z) - cls.value(b, z)));
            supdist[a * nf + b] = supdist[b * nf + a] = d;
            diam_F = std::max(diam_F, d);
        }
    if (diam_F == 0.0) {
        // A single point (up to duplicates) has zero complexity.
        out.method = "chaining";
        out.complexity = 0.0;
        out.total = out.confidence;
        return out;
    }
    std::vector<double> thresholds;
    for (std::size_t a = 0; a < nf; ++a)
        for (std::size_t b = a + 1; b < nf; ++b) thresholds.push_back(supdist[a * nf + b]);
    std::sort(thresholds.begin(), thresholds.end());
    thresholds.erase(std::unique(thresholds.begin(), thresholds.end()), thresholds.end());

    std::vector<double> cached(thresholds.size() + 1, -1.0);
    auto greedy_count = [&](double radius) {
        std::vector<char> covered(nf, 0);
        std::size_t remaining = nf, count = 0;
        while (remaining > 0) {
            std::size_t best = 0, gain = 0;
            for (std::size_t c = 0; c < nf; ++c) {
                std::size_t acc = 0;
                for (std::size_t p = 0; p < nf; ++p)
                    if (!covered[p] && supdist[c * nf + p] <= radius) ++acc;
                if (acc > gain) {
                    gain = acc;
                    best = c;
                }
            }
            for (std::size_t p = 0; p < nf; ++p)
                if (!covered[p] && supdist[best * nf + p] <= radius) {
                    covered[p] = 1;
                    --remaining;
                }
            ++count;
        }
        return static_cast<double>(count);
    };
    auto log_cover = [&](double t) {
        // Snap down to the largest threshold <= t; covers only change there.
        const auto it = std::upper_bound(thresholds.begin(), thresholds.end(), t);
        const std::size_t idx = static_cast<std::size_t>(it - thresholds.begin());
        if (cached[idx] < 0.0) {
            const double radius = idx == 0 ? 0.0 : thresholds[idx - 1];
            cached[idx] = std::log(greedy_count(radius));
        }
        return cached[idx];
    };
    out.method = "chaining";
    out.complexity = dudley_bound(log_cover, diam_F, static_cast<double>(n));
    out.total = out.complexity + out.confidence;
    return out;
}

double orbitwise_app_bound(const GroupAction& action, const TransformationSubset& subset,
                           const DataDistribution& dist, double eps) {
    if (!action.has_split()) throw invalid_input("orbitwise bound needs an X x Y split");
    if (!dist.ystar) throw invalid_input("orbitwise bound needs a distribution carrying y*");
    dist.validate(action.space().size());
    // Product-decomposed spaces must carry their mass on the graph of y*.
    // Collapsed encodings (points are inputs, x_of is the identity) carry y*
    // as a free label table instead, so misaligned labelings stay expressible.
    bool product_split = false;
    for (std::size_t z = 0; z < action.space().size(); ++z) {
        if (action.split().x_of[z] != z) {
            product_split = true;
            break;
        }
    }
    if (product_split) {
        for (std::size_t z = 0; z < dist.probabilities.size(); ++z) {
            if (dist.probabilities[z] > 0.0 && action.split().y_of[z] != (*dist.ystar)[z]) {
                throw invalid_input("support point " + action.space().label(z) +
                                    " is off the graph of y*");
            }
        }
    }

    const ProductSplit& split = action.split();
    const auto& ystar = *dist.ystar;
    const auto reps = orbit_representatives(action, subset);
    const std::size_t ny = split.yspace.size();

    double total = 0.0;
    std::vector<std::size_t> mult(action.space().size());
    for (std::size_t r : reps.rep_points) {
        std::fill(mult.begin(), mult.end(), 0);
        for (std::size_t g : subset.members) ++mult[action.act(g, r)];
        double mass = 0.0;
        for (std::size_t g : subset.members) {
            const std::size_t z = action.act(g, r);
            if (mult[z] > 0) {
                mass += dist.probabilities[z];
                mult[z] = 0; // count each reachable point once
            }
        }
        if (mass == 0.0) continue;
        // Restore multiplicities for the weighting pass.
        for (std::size_t g : subset.members) ++mult[action.act(g, r)];

        double best = std::numeric_limits<double>::infinity();
        for (std::size_t y = 0; y < ny; ++y) {
            double acc = 0.0;
            for (std::size_t g : subset.members) {
                const std::size_t z = action.act(g, r);
                const double w = dist.probabilities[z] / static_cast<double>(mult[z]);
                if (w == 0.0) continue;
                const double d = split.yspace.dist(split.act_y(g, y), ystar[z]);
                const double clipped = std::max(d - eps, 0.0);
                acc += w * clipped * clipped;
            }
            best = std::min(best, acc / mass);
        }
        total += mass * best;
    }
    return total;
}

GenErr2Check verify_generr2(const FunctionClass& cls, const GroupAction& action,
                            const TransformationSubset& subset, const DataDistribution& dist,
                            const Sample& sample, double eps, double slack) {
    GenErr2Check check;
    check.eps = eps;
    check.gen_err = empirical_gen_err(cls, sample, dist);
    check.averaged = g_averaged_gen_err(cls, sample, dist, action, subset);
    check.inequality_holds = check.gen_err <= 2.0 * eps + check.averaged + slack;

    // Restricted class on representative-projected data.
    const auto reps = orbit_representatives(action, subset);
    std::vector<std::vector<double>> restricted(cls.size());
    for (std::size_t f = 0; f < cls.size(); ++f) {
        restricted[f].reserve(reps.rep_points.size());
        for (std::size_t r : reps.rep_points) restricted[f].push_back(cls.value(f, r));
    }
    FunctionClass projected_cls(reps.space, std::move(restricted), cls.range_bound(), cls.lipschitz());
    DataDistribution projected_dist;
    projected_dist.probabilities.assign(reps.rep_points.size(), 0.0);
    for (std::size_t z = 0; z < dist.probabilities.size(); ++z) {
        projected_dist.probabilities[reps.rep_index_of(z)] += dist.probabilities[z];
    }
    Sample projected_sample;
    projected_sample.seed = sample.seed;
    projected_sample.draws.reserve(sample.n());
    for (std::size_t z : sample.draws) projected_sample.draws.push_back(reps.rep_index_of(z));

    check.projected = empirical_gen_err(projected_cls, projected_sample, projected_dist);
    check.equality_gap = std::abs(check.averaged - check.projected);
    return check;
}

namespace {

// Covering count with degenerate-radius conventions: radius 0 is
// infinitely expensive, infinite radius is free.
double cover_or_convention(const FiniteMetricSpace& space, double radius, std::size_t exact_cap) {
    if (!std::isfinite(radius)) return 0.0;
    if (radius <= 0.0) return std::numeric_limits<double>::infinity();
    return static_cast<double>(covering_number(space, radius, CoverMode::exact, exact_cap).count);
}

} // namespace

std::vector<CoverProductRow> verify_cover_product(const FiniteMetricSpace& ambient,
                                                  const FiniteMetricSpace& rep_space,
                                                  const FiniteMetricSpace& subset_space, double L,
                                                  double L_prime,
                                                  const std::vector<double>& delta_grid,
                                                  std::size_t exact_cap) {
    std::vector<CoverProductRow> rows;
    rows.reserve(delta_grid.size());
    for (double dp : delta_grid) {
        if (!(dp > 0.0)) throw invalid_input("cover-product radii must be positive");
        CoverProductRow row;
        row.delta_prime = dp;
        row.n_Z = cover_or_convention(ambient, dp, exact_cap);
        row.lower_side = cover_or_convention(rep_space, 2.0 * dp * L, exact_cap) *
                         cover_or_convention(subset_space, 2.0 * dp * L, exact_cap);
        row.upper_side = cover_or_convention(rep_space, dp / (2.0 * L_prime), exact_cap) *
                         cover_or_convention(subset_space, dp / (2.0 * L_prime), exact_cap);
        row.lower_ok = row.lower_side <= row.n_Z;
        row.upper_ok = row.n_Z <= row.upper_side;
        row.quotient_lhs = cover_or_convention(rep_space, dp, exact_cap);
        row.quotient_rhs = cover_or_convention(ambient, dp / (2.0 * L), exact_cap) /
                            cover_or_convention(subset_space, dp, exact_cap);
        row.quotient_ok = row.quotient_lhs <= row.quotient_rhs;
        rows.push_back(row);
    }
    return rows;
}

} // namespace eqbound
