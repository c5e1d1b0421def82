#pragma once

#include <optional>
#include <string>

#include "gkdv/report.hpp"
#include "gkdv/spectral.hpp"

namespace gkdv {

// Which system is being evolved / diagnosed.
//   direct_kdv       : d_t u + (1/3) d_x^3 u = c1 u d_x^2 u + c2 (d_x u)^2
//   derivative_kdv   : the equation the gradient v = d_x u satisfies when
//                      c1 = 0 (v_t + (1/3) v_xxx = 2 c2 v v_x); internal
//                      auxiliary used by the c1 = 0 reduction check
//   coupled          : the pair (u, v) with v the gauged gradient
//   double_gauged    : the pair (ug, vg) with both unknowns gauged
//   quadratic        : d_t u + (1/3) d_x^3 u = c1 u d_x^2 u + c2 (d_x u)^2
//                      + c3 d_x u d_x^2 u + c4 (d_x^2 u)^2
//   quadratic_gauged : the chained system (u, p, w) for the quadratic family
enum class Variant {
    direct_kdv,
    derivative_kdv,
    coupled,
    double_gauged,
    quadratic,
    quadratic_gauged,
};

std::string variant_name(Variant v);
Variant variant_from_name(const std::string& name);

struct EquationSpec {
    Variant variant = Variant::direct_kdv;
    double c1 = 1.0;
    double c2 = 0.0;
    double c3 = 0.0;  // quadratic family only
    double c4 = 0.0;  // quadratic family only
};

void validate_spec(const EquationSpec& spec);

// Cumulative trapezoid integral from the left window edge; value 0 at -L.
// u must be physical.
Field primitive(const Field& u);

// Exact antiderivative of the trigonometric interpolant plus a linear ramp
// carrying the window mean; value 0 at -L.  Used inside gauge weights where
// spectral differentiation must invert it exactly.
Field primitive_spectral(const Field& u);

// True when |u| at both window edges is below 1e-8 * sup|u| (whole-line
// interpretations of window integrals are then trustworthy).
bool boundary_small(const Field& u);

// All gauge variables for a variant, computed from u alone.  Exponent
// fields hold the log of the corresponding weight; gauged fields hold the
// weighted unknowns.  Which members are populated depends on the variant:
//
//   every variant        : prim
//   direct/derivative/
//   coupled              : grad_exponent = c1 * prim
//                          grad_gauged   = e^{-grad_exponent} d_x u
//   double_gauged        : the above, plus
//                          amp_exponent   = c2 * prim
//                          amp_gauged     = e^{-amp_exponent} u
//                          cross_exponent = (c1 - c2) * prim
//                          grad_gauged    = e^{-c1 prim} (d_x u - c2 u^2)
//                            (so that d_x amp_gauged = e^{cross} grad_gauged)
//   quadratic(_gauged)   : hess_exponent   = 2 c4 d_x u
//                          hess_gauged     = e^{-hess_exponent} d_x^2 u
//                          mixed_exponent  = c1 * prim + c3 * u
//                          hess_grad_gauged= e^{-mixed_exponent} d_x hess_gauged
struct GaugeBundle {
    Variant variant = Variant::direct_kdv;
    Field u;
    Field prim;
    std::optional<Field> grad_exponent;
    std::optional<Field> grad_gauged;
    std::optional<Field> amp_exponent;
    std::optional<Field> amp_gauged;
    std::optional<Field> cross_exponent;
    std::optional<Field> hess_exponent;
    std::optional<Field> hess_gauged;
    std::optional<Field> mixed_exponent;
    std::optional<Field> hess_grad_gauged;
    bool boundary_ok = true;
    double max_exponent = 0.0;
};

GaugeBundle make_gauge_bundle(const Field& u, const EquationSpec& spec,
                              int pad_factor = 3);

// e^{scale * exponent} * prod(factors) in physical representation.  The
// factors (band-limited fields) are multiplied dealiased on a padded grid;
// the exponential weight is then applied pointwise on the caller's grid and
// never interpolated, since exponents built from primitives need not be
// periodic.  Throws NumericalError when |scale| * sup|exponent| exceeds the
// overflow guard (30).
Field weighted_product(const Field& exponent, double scale,
                       const std::vector<Field>& factors, int pad_factor = 3);

// Data-space norm: ||u||_{H^s} plus the sup of the running primitive.
NormReport xs_norm(const Field& u, double s);

}  // namespace gkdv
