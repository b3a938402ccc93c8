#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "eqbound/metric_space.hpp"

namespace eqbound {

/// A finite group given by its composition table, with a symmetric-closed
/// generating set and the word metric of that set (BFS distance in the Cayley
/// graph, equivalently the minimal generator count expressing g^-1 h).
/// Immutable after construction.
class FiniteGroup {
public:
    /// Validates the table: closure, identity, inverses, associativity
    /// (exhaustive up to 256 elements, 10^5 sampled triples above), that the
    /// generator set is symmetric-closed and generates the group. A
    /// non-generating set yields a "disconnected Cayley graph" error.
    FiniteGroup(std::vector<std::string> elements, std::vector<std::size_t> compose_row_major,
                std::vector<std::size_t> generators);

    std::size_t size() const { return elements_.size(); }
    const std::vector<std::string>& elements() const { return elements_; }
    const std::string& element(std::size_t g) const { return elements_[g]; }
    std::size_t identity() const { return identity_; }
    std::size_t compose(std::size_t g, std::size_t h) const { return compose_[g * size() + h]; }
    std::size_t inverse(std::size_t g) const { return inverse_[g]; }
    const std::vector<std::size_t>& generators() const { return generators_; }

    /// Word distance d(g, h) = word length of g^-1 h.
    std::size_t word_dist(std::size_t g, std::size_t h) const {
        return word_length_[compose(inverse_[g], h)];
    }
    /// Word length of g (BFS distance from the identity).
    std::size_t word_length(std::size_t g) const { return word_length_[g]; }

    /// Whether d(gh, g'h) = d(g, g') holds for all triples. The word metric of
    /// g^-1 h is left-invariant by construction; this right-invariance only
    /// holds when the generator set is closed under conjugation, so the flag
    /// is recorded, not assumed.
    bool right_invariant() const { return right_invariant_; }

    /// The group as a finite metric space under the word metric.
    FiniteMetricSpace word_metric_space() const;

    /// The same group with a different symmetric-closed generating set (and
    /// hence a different word metric). Errors if the set does not generate.
    FiniteGroup with_generators(std::vector<std::size_t> generators) const;

private:
    std::vector<std::string> elements_;
    std::vector<std::size_t> compose_;
    std::vector<std::size_t> inverse_;
    std::vector<std::size_t> generators_;
    std::vector<std::size_t> word_length_;
    std::size_t identity_ = 0;
    bool right_invariant_ = false;
};

/// A subset of a group's elements together with its measure fraction
/// |members| / |group|. Stands in for epsilon-stabilizers; not necessarily a
/// subgroup.
struct TransformationSubset {
    std::vector<std::size_t> members; // sorted, distinct
    std::size_t group_size = 0;

    double measure_fraction() const {
        return static_cast<double>(members.size()) / static_cast<double>(group_size);
    }
    bool contains(std::size_t g) const;
};

/// lambda = |members| / |group|. Errors on an empty subset.
double density(const TransformationSubset& subset);

/// True iff the members form a subgroup of `group` (identity, closure under
/// composition and inverse).
bool is_subgroup(const FiniteGroup& group, const TransformationSubset& subset);

// Presets. cyclic:n is Z/nZ with generators +-1; dihedral:n has 2n elements
// r^i s^j with generators {r, r^-1, s}; torus2d:m is (Z/mZ)^2 with the four
// unit translations; rotation360 = cyclic:360 read as whole degrees.
FiniteGroup make_cyclic_group(std::size_t n);
FiniteGroup make_dihedral_group(std::size_t n);
FiniteGroup make_torus2d_group(std::size_t m);

/// Parses "cyclic:n", "dihedral:n", "torus2d:m", "rotation360".
FiniteGroup make_group_preset(const std::string& name);

/// Loads {"elements": [...], "compose": [[...]], "generators": [...]}.
/// Generators are optional; when omitted, all non-identity elements generate.
FiniteGroup load_group_json(const std::string& json_text);

} // namespace eqbound
