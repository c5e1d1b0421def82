#pragma once

#include <optional>

#include "gkdv/evolve.hpp"
#include "gkdv/report.hpp"

namespace gkdv {

enum class OuterVar { space, time };

// ||f||: outer Lebesgue norm in `outer` with exponent outer_exp of the inner
// norm (the other variable) with exponent inner_exp; `pre` is applied to
// every snapshot first.  Exponents use infinity() for the sup norm.  Time
// integrals are trapezoid over the snapshot grid, space integrals Riemann
// sums with weight dx.  A single-snapshot trajectory has a width-0 time
// interval: inner/outer time norms with finite exponent give 0, L^inf gives
// the snapshot value.
struct MixedNormSpec {
    OuterVar outer = OuterVar::time;
    double outer_exp = 2.0;
    double inner_exp = 2.0;
    std::optional<MultiplierSpec> pre;
};

double mixed_norm(const Trajectory& traj, const std::string& field,
                  const MixedNormSpec& spec);

// The composite trajectory norms.  Names are positional (the role each
// plays), with this dictionary:
//   X        : base norm of one field
//   Y        : pair norm of (u, v) with first-derivative weights plus the
//              sup of the primitive
//   Z        : u plus its gauged gradient plus the sup of the primitive
//   Ytilde   : Z plus the first-derivative weight on the gauged gradient
//   Ztilde   : the double-gauged analogue of Z
//   Xr       : fractional-regularity ladder norm X^r of one field
//   Zs       : Xr of u and of the gauged gradient at r = s-1, plus the
//              primitive sup
//   Zq       : the quadratic-family norm (u, gradient, gauged hessian,
//              mixed-gauged derivative, scaled primitive sup)
//   ZqPrime  : its c4 = 0 specialization
enum class CompositeNorm { X, Y, Z, Ytilde, Ztilde, Xr, Zs, Zq, ZqPrime };

struct CompositeParams {
    double s = 1.0;     // regularity for Xr (as r) and Zs (as s)
    double eps = 0.01;  // the small epsilon in the <d_x>^{-3/4-eps} weight
};

NormReport composite_norm(const Trajectory& traj, CompositeNorm which,
                          const CompositeParams& params,
                          const std::string& field = "u");

// Empirical checks of the free-evolution estimates.  Samples are propagated
// linearly over [0, T]; ratios LHS/RHS are reported per sample with their
// max and median, and the max is re-measured on a 2x finer grid: growth
// beyond 20% marks failure.
struct LinearEstimateParams {
    double q = 6.0;
    double r = std::numeric_limits<double>::infinity();
    double s = 0.0;     // smoothing index for the Strichartz check
    double max_s = 0.8; // H^s index for the maximal-function check (> 3/4)
    double eps = 0.01;
};

// Validates -s + 3/q + 1/r = 1/2 with 2 <= q, r <= infinity, 0 <= s <= 1/q.
void require_admissible(double q, double r, double s);

ExperimentReport check_linear_estimates(const std::vector<Field>& samples,
                                        double T,
                                        const LinearEstimateParams& params);

// ||fg||_{H^r} / (||f||_{H^r} ||g||_inf + ||f||_{H^{r-[r]}} ||g||_{H-dot^{[r]+1}}).
double check_product_estimate(const Field& f, const Field& g, double r);

struct UnboundCheck {
    double ratio = 0.0;
    bool degenerate = false;  // 0/0 (zero trajectory)
};

// Lemma-style bound on ||<d_x>^r u||_{L_x^2 L_T^inf} against the gauge-
// weighted right-hand side, measured on a coupled-variant trajectory.
// r = 0 uses the cubic right-hand side with weight e^{(3/2)||Lambda||};
// r > 0 uses the power [r]+3 with weight e^{2||Lambda||}.
UnboundCheck check_unbound_lemma(const Trajectory& traj, double r);

}  // namespace gkdv
