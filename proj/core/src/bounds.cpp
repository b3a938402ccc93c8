#include "eqbound/bounds.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>
#include <utility>

#include <json.hpp>

namespace eqbound {

namespace {

void require(bool cond, const std::string& msg) {
    if (!cond) throw invalid_input(msg);
}

double confidence_term(double M, double delta, double n) {
    return std::sqrt(M * std::log(2.0 / delta) / n);
}

} // namespace

BoundInputs bound_inputs_from_json(const std::string& json_text) {
    nlohmann::json j;
    try {
        j = nlohmann::json::parse(json_text);
    } catch (const nlohmann::json::parse_error& e) {
        throw invalid_input(std::string("bound inputs JSON parse error: ") + e.what());
    }
    BoundInputs in;
    const std::vector<std::pair<const char*, double*>> fields = {
        {"d", &in.d},
        {"d_G", &in.d_G},
        {"diameter", &in.diameter},
        {"delta_G", &in.delta_G},
        {"L_eps", &in.L_eps},
        {"L_prime", &in.L_prime},
        {"stab_size", &in.stab_size},
        {"group_size", &in.group_size},
        {"n", &in.n},
        {"M", &in.M},
        {"delta", &in.delta},
        {"eps", &in.eps},
        {"lambda", &in.lambda},
        {"lip_ystar", &in.lip_ystar},
        {"C_G", &in.C_G},
        {"constant_factor", &in.constant_factor},
    };
    for (const auto& [key, value] : j.items()) {
        bool known = false;
        for (const auto& [name, slot] : fields) {
            if (key == name) {
                *slot = value.get<double>();
                known = true;
                break;
            }
        }
        if (!known) throw invalid_input("unknown bound input field: " + key);
    }
    return in;
}

double BoundReport::term(const std::string& name) const {
    for (const auto& [k, v] : terms)
        if (k == name) return v;
    throw invalid_input("bound report has no term named " + name);
}

std::string BoundReport::to_json() const {
    nlohmann::json j;
    for (const auto& [k, v] : terms) j[k] = v;
    j["total"] = total;
    j["regime"] = regime;
    j["near_boundary"] = near_boundary;
    if (near_boundary) j["alternate_total"] = alternate_total;
    j["inputs"] = {{"d", inputs.d},
                   {"d_G", inputs.d_G},
                   {"diameter", inputs.diameter},
                   {"delta_G", inputs.delta_G},
                   {"L_eps", inputs.L_eps},
                   {"L_prime", inputs.L_prime},
                   {"stab_size", inputs.stab_size},
                   {"group_size", inputs.group_size},
                   {"n", inputs.n},
                   {"M", inputs.M},
                   {"delta", inputs.delta},
                   {"eps", inputs.eps},
                   {"lambda", inputs.lambda},
                   {"lip_ystar", inputs.lip_ystar},
                   {"C_G", inputs.C_G},
                   {"constant_factor", inputs.constant_factor}};
    return j.dump();
}

double concentration_bound(double rademacher, double n, double M, double delta) {
    require(delta > 0.0 && delta < 1.0, "confidence level must lie in (0, 1)");
    require(n > 0.0 && M > 0.0 && rademacher >= 0.0, "concentration inputs must be positive");
    return rademacher + confidence_term(M, delta, n);
}

KtBracket kt_sandwich(const std::function<std::int64_t(double)>& cover_Z, double M, double eps) {
    require(eps > 0.0 && eps <= M, "kt bracket needs eps in (0, M]");
    KtBracket out;
    out.lower = static_cast<double>(cover_Z(2.0 * eps));
    out.upper = std::log2(M / eps + 1.0) + static_cast<double>(cover_Z(eps / 2.0));
    return out;
}

KtBracket kt_sandwich_lipschitz(const std::function<std::int64_t(double)>& cover_Z, double M,
                                double eps, double ell) {
    require(ell > 0.0, "Lipschitz constant must be positive");
    KtBracket out;
    out.lower = static_cast<double>(cover_Z(2.0 * eps / ell));
    out.upper = std::log2(M / eps + 1.0) + static_cast<double>(cover_Z(eps / (2.0 * ell)));
    return out;
}

namespace {

// Adaptive trapezoid on [a, b]; depth-capped so step-function integrands
// terminate.
double adaptive_trapezoid(const std::function<double(double)>& f, double a, double b, double fa,
                          double fb, double whole, double rel_tol, int depth) {
    const double m = 0.5 * (a + b);
    const double fm = f(m);
    const double left = 0.5 * (m - a) * (fa + fm);
    const double right = 0.5 * (b - m) * (fm + fb);
    const double refined = left + right;
    if (depth <= 0 || std::abs(refined - whole) <= rel_tol * std::abs(refined) + 1e-300) {
        return refined;
    }
    return adaptive_trapezoid(f, a, m, fa, fm, left, rel_tol, depth - 1) +
           adaptive_trapezoid(f, m, b, fm, fb, right, rel_tol, depth - 1);
}

double integrate(const std::function<double(double)>& f, double a, double b, double rel_tol) {
    if (!(b > a)) return 0.0;
    const double fa = f(a);
    const double fb = f(b);
    return adaptive_trapezoid(f, a, b, fa, fb, 0.5 * (b - a) * (fa + fb), rel_tol, 36);
}

} // namespace

double dudley_bound(const std::function<double(double)>& log_cover, double diam_F, double n,
                    double rel_tol) {
    require(diam_F > 0.0, "class diameter must be positive");
    require(n > 0.0, "sample count must be positive");

    auto integrand = [&](double t) {
        const double v = log_cover(t);
        if (!std::isfinite(v)) {
            std::ostringstream os;
            os << "log_cover is not finite at t = " << t;
            throw invalid_input(os.str());
        }
        return std::sqrt(std::max(v, 0.0));
    };
    const double scale = 3.0 / std::sqrt(n);
    auto objective = [&](double alpha) {
        return alpha + scale * integrate(integrand, alpha, diam_F, rel_tol);
    };

    // Golden-section over log-spaced alpha, then a 64-point local grid.
    const double lo = 1e-9 * diam_F;
    double a = std::log(lo), b = std::log(diam_F);
    const double golden = 0.5 * (std::sqrt(5.0) - 1.0);
    double x1 = b - golden * (b - a), x2 = a + golden * (b - a);
    double f1 = objective(std::exp(x1)), f2 = objective(std::exp(x2));
    for (int it = 0; it < 80 && (b - a) > 1e-12; ++it) {
        if (f1 <= f2) {
            b = x2;
            x2 = x1;
            f2 = f1;
            x1 = b - golden * (b - a);
            f1 = objective(std::exp(x1));
        } else {
            a = x1;
            x1 = x2;
            f1 = f2;
            x2 = a + golden * (b - a);
            f2 = objective(std::exp(x2));
        }
    }
    double best_alpha = std::exp(0.5 * (a + b));
    double best = objective(best_alpha);
    const double center = 0.5 * (a + b);
    const double span = std::max(1.0, b - a);
    for (int i = 0; i < 64; ++i) {
        const double u = center + span * (static_cast<double>(i) / 63.0 - 0.5);
        const double alpha = std::min(std::exp(u), diam_F);
        const double v = objective(alpha);
        if (v < best) {
            best = v;
            best_alpha = alpha;
        }
    }
    // The endpoints are admissible choices of alpha as well.
    best = std::min({best, objective(lo), objective(diam_F)});
    return 4.0 * best;
}

BoundReport base_bound(const BoundInputs& in) {
    require(in.d > 2.0, "chaining bound requires ddim(Z) > 2");
    require(in.delta > 0.0 && in.delta < 2.0, "confidence level must lie in (0, 2)");
    require(in.n > 0.0 && in.M > 0.0 && in.diameter > 0.0, "inputs must be positive");
    BoundReport r;
    r.inputs = in;
    const double chaining = in.constant_factor * std::pow(4.0, in.d) * in.d / (in.d - 2.0) *
                            in.diameter * std::pow(in.n, -1.0 / in.d);
    const double confidence = confidence_term(in.M, in.delta, in.n);
    r.terms = {{"chaining", chaining}, {"confidence", confidence}};
    r.total = chaining + confidence;
    r.regime = "ambient";
    return r;
}

BoundReport partial_gen_bound(const BoundInputs& in) {
    const double d0 = in.d0();
    require(d0 > 2.0, "partial equivariance bound requires d0 = d - d_G > 2");
    require(in.stab_size > 0.0, "stabilizer must be nonempty");
    require(in.delta > 0.0 && in.delta < 2.0, "confidence level must lie in (0, 2)");
    require(in.eps >= 0.0, "equivariance budget must be nonnegative");
    require(in.delta_G > 0.0, "group separation must be positive");

    const double prefix = in.constant_factor * std::pow(4.0, d0) * d0 / (d0 - 2.0);
    const double mass = std::pow(2.0 * in.L_eps * in.diameter, in.d); // (2L D)^d
    const double lhs = mass;
    const double rhs = in.stab_size * in.n * std::pow(in.delta_G, d0);

    const double finite_branch =
        prefix * std::pow(in.delta_G, 1.0 - d0 / 2.0) * std::sqrt(mass / (in.stab_size * in.n));
    const double general_branch =
        prefix * std::exp(std::log(mass / (in.stab_size * in.n)) / d0);

    BoundReport r;
    r.inputs = in;
    const double confidence = confidence_term(in.M, in.delta, in.n);
    const bool finite_regime = lhs < rhs;
    const double e_eps = finite_regime ? finite_branch : general_branch;
    r.terms = {{"confidence", confidence}, {"two_eps", 2.0 * in.eps}, {"E_eps", e_eps}};
    r.total = confidence + 2.0 * in.eps + e_eps;
    r.regime = finite_regime ? "finite-group" : "general";
    if (std::abs(lhs - rhs) <= 0.01 * rhs) {
        r.near_boundary = true;
        const double other = finite_regime ? general_branch : finite_branch;
        r.alternate_total = confidence + 2.0 * in.eps + other;
    }
    return r;
}

BoundReport exact_equivariance_bound(BoundInputs in) {
    in.eps = 0.0;
    in.stab_size = in.group_size;
    return partial_gen_bound(in);
}

double approx_bound(const BoundInputs& in) {
    require(in.d_G != 0.0, "approximation bound undefined for d_G = 0");
    require(in.lambda > 0.0 && in.lambda <= 1.0, "density must lie in (0, 1]");
    require(in.eps >= 0.0, "equivariance budget must be nonnegative");
    const double raw = in.C_G * in.L_prime * (1.0 + in.lip_ystar) *
                           std::pow(in.lambda, 1.0 / in.d_G) -
                       in.eps;
    const double clamped = std::max(raw, 0.0);
    return clamped * clamped;
}

TradeoffConstants derive_tradeoff_constants(const BoundInputs& in) {
    const double d0 = in.d0();
    require(d0 > 2.0, "tradeoff constants require d0 > 2");
    require(in.delta_G > 0.0 && in.group_size > 0.0, "inputs must be positive");
    const double prefix = in.constant_factor * std::pow(4.0, d0) * d0 / (d0 - 2.0);
    const double mass = std::pow(2.0 * in.L_eps * in.diameter, in.d) / in.group_size;
    TradeoffConstants c;
    c.C = in.C_G * in.L_prime * (1.0 + in.lip_ystar);
    c.C1 = prefix * std::pow(in.delta_G, 1.0 - d0 / 2.0) * std::sqrt(mass);
    c.C2 = prefix * std::exp(std::log(mass) / d0);
    c.C3 = mass / std::pow(in.delta_G, d0);
    return c;
}

BoundReport perf_bound(const BoundInputs& in, const TradeoffConstants& constants) {
    require(in.lambda > 0.0 && in.lambda <= 1.0, "density must lie in (0, 1]");
    require(in.delta > 0.0 && in.delta < 2.0, "confidence level must lie in (0, 2)");
    require(constants.C1 > 0.0 && constants.C2 > 0.0 && constants.C3 > 0.0,
            "tradeoff constants must be positive");
    require(in.d_G > 0.0, "performance bound requires d_G > 0");

    const double confidence = in.constant_factor * confidence_term(in.M, in.delta, in.n);
    const double approx_raw =
        std::max(constants.C * std::pow(in.lambda, 1.0 / in.d_G) - in.eps, 0.0);
    const double approx = approx_raw * approx_raw;
    const double nl = in.n * in.lambda;
    const double stat1 = constants.C1 / std::sqrt(nl);
    const double d0 = in.d0();
    const bool regime1 = nl >= constants.C3;
    double stat2 = 0.0;
    if (!regime1 || std::abs(nl - constants.C3) <= 0.01 * constants.C3) {
        require(d0 > 0.0, "small-sample regime requires d0 > 0");
        stat2 = constants.C2 * std::exp(-std::log(nl) / d0);
    }

    BoundReport r;
    r.inputs = in;
    const double stat = regime1 ? stat1 : stat2;
    r.terms = {{"confidence", confidence},
               {"two_eps", 2.0 * in.eps},
               {"approx", approx},
               {"statistical", stat}};
    r.total = confidence + 2.0 * in.eps + approx + stat;
    r.regime = regime1 ? "large-sample" : "small-sample";
    if (std::abs(nl - constants.C3) <= 0.01 * constants.C3) {
        r.near_boundary = true;
        r.alternate_total = confidence + 2.0 * in.eps + approx + (regime1 ? stat2 : stat1);
    }
    return r;
}

BoundReport perf_bound(const BoundInputs& in) { return perf_bound(in, derive_tradeoff_constants(in)); }

double optimal_lambda(double alpha, double beta, double C, double C_prime) {
    require(alpha > 0.0 && beta > 0.0 && C > 0.0 && C_prime > 0.0,
            "optimal lambda needs positive parameters");
    return std::pow((beta / alpha) * (C_prime / C), 1.0 / (alpha + beta));
}

LambdaStarParams lambda_star_parameters(const BoundInputs& in, const TradeoffConstants& constants,
                                        int regime, bool squared_approx_term) {
    require(regime == 1 || regime == 2, "regime must be 1 or 2");
    require(in.d_G > 0.0, "lambda* parameters require d_G > 0");
    LambdaStarParams p;
    if (squared_approx_term) {
        p.alpha = 2.0 / in.d_G;
        p.C = constants.C * constants.C;
    } else {
        p.alpha = 1.0 / in.d_G;
        p.C = constants.C;
    }
    if (regime == 1) {
        p.beta = 0.5;
        p.C_prime = constants.C1 / std::sqrt(in.n);
    } else {
        const double d0 = in.d0();
        require(d0 > 0.0, "regime 2 requires d0 > 0");
        p.beta = 1.0 / d0;
        p.C_prime = constants.C2 * std::exp(-std::log(in.n) / d0);
    }
    return p;
}

} // namespace eqbound
