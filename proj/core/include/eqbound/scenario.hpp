#pragma once

#include <cstdint>
#include <memory>
#include <string>
#include <vector>

#include "eqbound/bounds.hpp"
#include "eqbound/distribution.hpp"
#include "eqbound/empirical.hpp"
#include "eqbound/function_class.hpp"
#include "eqbound/isodiametric.hpp"

namespace eqbound {

/// A runnable experiment: a group action with data, a family of prescribed
/// symmetry subsets indexed by density, a class builder, and the bound inputs
/// the closed-form bounds need. Construction precomputes the metric
/// dimensions; when the space is too large for the exact searches they come
/// from a reduced-order twin of the same preset and `dims_reduced` is set.
class SweepScenario {
public:
    virtual ~SweepScenario() = default;

    virtual const std::string& id() const = 0;
    virtual const GroupAction& action() const = 0;
    virtual const DataDistribution& dist() const = 0;

    /// Subset of prescribed symmetries with measure fraction as close to
    /// `lambda` as the preset's window structure allows.
    virtual TransformationSubset subset_for(double lambda) const = 0;

    virtual FunctionClass build_class(const TransformationSubset& subset, double eps,
                                      std::uint64_t seed) const = 0;

    virtual BoundInputs bound_inputs(const TransformationSubset& subset, double eps, double n,
                                     double delta, double constant_factor) const = 0;

    virtual bool dims_reduced() const = 0;
};

/// Translations of a padded torus acting on quantized pixel images: the group
/// (Z/mZ)^2 with m = n_img + k - 1 translates an n_img x n_img pattern with
/// `levels` gray levels around the torus; the data space is the translation
/// orbit with the L2 pixel metric, labels are the pattern positions. Window
/// subsets of w x w translations give density w^2 / m^2. m is capped at 8 so
/// every suite stays exact.
std::unique_ptr<SweepScenario> scenario_padded_torus(std::size_t n_img, std::size_t k,
                                                     std::size_t levels);

/// A cyclic discretization of planar rotations acting on digit/angle label
/// pairs: rotations shift the angle and leave the digit invariant, the
/// labeling y* is exactly equivariant, the class consists of loss functions
/// of equivariant tabular predictors, and window subsets of the stated width
/// give exact densities (the [-60, 60) window over order 360 has density
/// 1/3). Distances are measured in turns.
std::unique_ptr<SweepScenario> scenario_rotation(std::size_t order, double window_degrees);

} // namespace eqbound
