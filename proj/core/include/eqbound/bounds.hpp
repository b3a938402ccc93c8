#pragma once

#include <cstdint>
#include <functional>
#include <string>
#include <vector>

#include "eqbound/metric_space.hpp"

namespace eqbound {

/// Everything the closed-form bounds consume. The rate-form bounds hide
/// universal constants; constant_factor (default 1) stands in for them. The
/// explicit-constant concentration + chaining pipeline never applies it.
struct BoundInputs {
    double d = 3.0;            // ambient doubling dimension ddim(Z)
    double d_G = 1.0;          // group dimension ddim(G)
    double diameter = 1.0;     // diam(Z)
    double delta_G = 1.0;      // group minimum separation
    double L_eps = 1.0;        // deformation constant of the stabilizer action
    double L_prime = 1.0;      // Lipschitz constant of the action, d(g x, g' x) <= L' d_G(g,g')
    double stab_size = 1.0;    // |Stab_eps|
    double group_size = 1.0;   // |G|
    double n = 100.0;          // sample count
    double M = 1.0;            // range bound
    double delta = 0.1;        // confidence level
    double eps = 0.0;          // equivariance error budget
    double lambda = 1.0;       // density |Stab_eps| / |G|
    double lip_ystar = 1.0;    // Lipschitz constant of y*
    double C_G = 1.0;          // isodiametric constant of G
    double constant_factor = 1.0;

    double d0() const { return d - d_G; }
};

/// Parses a JSON document whose keys mirror the field names above; absent
/// fields keep their defaults. Unknown keys are rejected.
BoundInputs bound_inputs_from_json(const std::string& json_text);

/// Evaluated bound: named additive terms, their sum, and the regime that was
/// selected. `alternate_total` carries the other branch when the regime
/// condition sits within 1% of equality (near_boundary set).
struct BoundReport {
    std::vector<std::pair<std::string, double>> terms;
    double total = 0.0;
    std::string regime;
    bool near_boundary = false;
    double alternate_total = 0.0;
    BoundInputs inputs;

    double term(const std::string& name) const;
    std::string to_json() const;
};

/// rademacher + sqrt(M ln(2/delta) / n): the explicit-constant inversion of
/// the concentration inequality. No hidden constants; this is the pipeline
/// used for validity testing.
double concentration_bound(double rademacher, double n, double M, double delta);

/// Kolmogorov-Tikhomirov sandwich for log2 N(F, eps, sup-norm) over
/// 1-Lipschitz classes with values in [-M/2, M/2]:
///   N(Z, 2 eps)  <=  log2 N(F, eps)  <=  log2(M/eps + 1) + N(Z, eps/2).
/// cover_Z maps a radius to the exact covering number of Z.
struct KtBracket {
    double lower = 0.0;
    double upper = 0.0;
};
KtBracket kt_sandwich(const std::function<std::int64_t(double)>& cover_Z, double M, double eps);

/// ell-Lipschitz rescaling of the sandwich: substitutes eps -> eps/ell inside
/// the Z-covers.
KtBracket kt_sandwich_lipschitz(const std::function<std::int64_t(double)>& cover_Z, double M,
                                double eps, double ell);

/// 4 inf over alpha > 0 of (alpha + 3/sqrt(n) * integral_alpha^diam of
/// sqrt(log_cover(t)) dt). log_cover must be nonincreasing (natural log of a
/// covering number); the infimum is located by golden-section over log-spaced
/// alpha plus a 64-point local grid, the integral by adaptive trapezoid at
/// relative tolerance 1e-6.
double dudley_bound(const std::function<double(double)>& log_cover, double diam_F, double n,
                    double rel_tol = 1e-6);

/// Chaining + confidence bound with d = ddim(Z) > 2:
/// constant_factor * 4^d d/(d-2) (D^d/n)^(1/d) + sqrt(M ln(2/delta)/n).
BoundReport base_bound(const BoundInputs& in);

/// Generalization bound under partial/approximate equivariance:
/// confidence + 2 eps + E_eps, where E_eps switches between the finite-group
/// branch and the general branch on (2L)^d D^d < stab_size * n * delta_G^d0.
/// Near the regime boundary (within 1%) both branches are reported.
BoundReport partial_gen_bound(const BoundInputs& in);

/// partial_gen_bound specialized to eps = 0, stab_size = |G| (the exact
/// equivariance case). Shares the code path bitwise.
BoundReport exact_equivariance_bound(BoundInputs in);

/// Approximation bound (max{C_G L' (1 + Lip(y*)) lambda^(1/d_G) - eps, 0})^2.
double approx_bound(const BoundInputs& in);

/// Constants of the performance-error curve, derivable from BoundInputs:
/// C = C_G L' (1 + Lip), C1/C2 the statistical-term coefficients in the two
/// regimes, C3 the regime threshold on n*lambda.
struct TradeoffConstants {
    double C = 0.0;
    double C1 = 0.0;
    double C2 = 0.0;
    double C3 = 0.0;
};
TradeoffConstants derive_tradeoff_constants(const BoundInputs& in);

/// Performance bound
///   sqrt(M ln(2/delta)/n) * constant_factor + 2 eps
///   + (C lambda^(1/d_G) - eps)_+^2
///   + C1 (n lambda)^(-1/2)   if n lambda >= C3, else C2 (n lambda)^(-1/d0).
/// Constants may be supplied; otherwise they are derived from the inputs.
BoundReport perf_bound(const BoundInputs& in, const TradeoffConstants& constants);
BoundReport perf_bound(const BoundInputs& in);

/// Closed-form minimizer of C lambda^alpha + C' lambda^(-beta):
/// lambda* = ((beta/alpha) (C'/C))^(1/(alpha+beta)).
double optimal_lambda(double alpha, double beta, double C, double C_prime);

/// The (alpha, beta, C, C') parameterization of the performance curve in each
/// regime. `squared_approx_term` selects the curve-consistent increasing term
/// (C^2 lambda^(2/d_G), matching the performance bound); without it the
/// unsquared C lambda^(1/d_G) parameterization is returned.
struct LambdaStarParams {
    double alpha = 0.0;
    double beta = 0.0;
    double C = 0.0;
    double C_prime = 0.0;
};
LambdaStarParams lambda_star_parameters(const BoundInputs& in, const TradeoffConstants& constants,
                                        int regime, bool squared_approx_term);

} // namespace eqbound
