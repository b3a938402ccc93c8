#pragma once

#include <functional>
#include <limits>
#include <optional>
#include <string>
#include <vector>

#include "eqbound/group.hpp"
#include "eqbound/metric_space.hpp"

namespace eqbound {

/// Declares that the acted-on space factors as X x Y. Point z of the ambient
/// space corresponds to the pair (x_of[z], y_of[z]); `y_act` is the induced
/// action on Y indices (g * |Y| + y). Used by predictor-level equivariance
/// errors and the approximation-error machinery.
struct ProductSplit {
    FiniteMetricSpace yspace;
    std::vector<std::size_t> x_of;
    std::vector<std::size_t> y_of;
    std::vector<std::size_t> y_act;

    std::size_t act_y(std::size_t g, std::size_t y) const { return y_act[g * yspace.size() + y]; }
};

/// A finite group acting on a finite metric space through a lookup table
/// (g, z) -> z. Construction checks that each element acts as a bijection,
/// that the identity acts trivially, and that act(g, act(h, z)) =
/// act(gh, z) (exhaustive when |G|^2 |Z| <= 2^24, sampled above).
class GroupAction {
public:
    GroupAction(FiniteGroup group, FiniteMetricSpace space, std::vector<std::size_t> act_table);

    const FiniteGroup& group() const { return group_; }
    const FiniteMetricSpace& space() const { return space_; }
    std::size_t act(std::size_t g, std::size_t z) const { return act_[g * space_.size() + z]; }
    /// z such that act(g, z) = target.
    std::size_t act_inverse(std::size_t g, std::size_t target) const {
        return act_inv_[g * space_.size() + target];
    }

    TransformationSubset full_subset() const;
    TransformationSubset identity_subset() const;
    /// Subset from explicit member indices (deduplicated, sorted).
    TransformationSubset subset_of(std::vector<std::size_t> members) const;

    /// Declares the X x Y factorization. Checks that the action respects it:
    /// the Y component of act(g, z) must equal y_act(g, y_of[z]).
    void attach_split(ProductSplit split);
    bool has_split() const { return split_.has_value(); }
    const ProductSplit& split() const;

private:
    FiniteGroup group_;
    FiniteMetricSpace space_;
    std::vector<std::size_t> act_;
    std::vector<std::size_t> act_inv_;
    std::optional<ProductSplit> split_;
};

/// Partition of the space into orbits of the symmetric-transitive closure of
/// z ~ act(g, z) for g in the subset. Closure is needed because an
/// epsilon-stabilizer need not be a group.
std::vector<std::vector<std::size_t>> orbits(const GroupAction& action,
                                             const TransformationSubset& subset);

/// Orbit representatives: the lexicographically smallest label in each
/// closure-orbit. `projection[z]` is the index of z's representative in the
/// ambient space; `rep_points` lists the representatives; `space` is the
/// ambient metric restricted to them.
struct OrbitRepresentatives {
    std::vector<std::size_t> rep_points;
    std::vector<std::size_t> projection;
    FiniteMetricSpace space;

    /// Index of rep_points[k] within the representative space for ambient point z.
    std::size_t rep_index_of(std::size_t z) const;
};

OrbitRepresentatives orbit_representatives(const GroupAction& action,
                                           const TransformationSubset& subset);

inline constexpr double kInfiniteConstant = std::numeric_limits<double>::infinity();

/// Smallest constants satisfying the two product-cover conditions for the
/// given subset and representative set, found by exhaustive scan. L bounds
/// d(z0,z0') <= L d(g z0, g z0') and d_G(g,g') <= L dist(g Z0, g' Z0); the
/// primed constants bound the opposite directions, d(g z0, g z0') <= L'
/// d(z0,z0') and d(g z0, g' z0) <= L' d_G(g,g'). `action_lipschitz` is the
/// same upper constant scanned over every point of the space and every pair
/// of the whole group, as used by the approximation bound. An unsatisfiable
/// condition yields infinity with a witness pair.
struct DeformationConstants {
    double L = 1.0;
    double L_prime = 1.0;
    double action_lipschitz = 1.0;
    std::string witness_L;
    std::string witness_L_prime;
};

DeformationConstants action_deformation_constants(const GroupAction& action,
                                                  const TransformationSubset& subset,
                                                  const OrbitRepresentatives& reps);

/// Orbit-averaged distribution: (1/|S|) sum over g in S of the pushforward of
/// `probabilities` by g. Probabilities are indexed by points of the action's
/// space and must sum to 1 within 1e-12.
std::vector<double> augment_distribution(const GroupAction& action,
                                         const TransformationSubset& subset,
                                         const std::vector<double>& probabilities);

/// Loads an action over the given space from a JSON document
/// {"elements": [...], "compose": [[...]], "act": [[...]]} with an optional
/// "generators" list. The act table is |G| rows of |Z| point indices.
GroupAction load_action_json(const std::string& json_text, FiniteMetricSpace space);

/// Natural action of a named preset on its own word-metric carrier:
/// "cyclic:n" and "rotation360" shift the cycle, "dihedral:n" acts on the
/// n polygon vertices, "torus2d:m" translates the m x m torus.
GroupAction make_natural_action_preset(const std::string& name);

} // namespace eqbound
