#pragma once

#include "gkdv/norms.hpp"

namespace gkdv {

// The two ill-posedness data families:
//   unbounded_primitive : a low band of half-width N^{-2} and height N
//                         (integral sqrt(2 pi) N, unbounded as N grows) plus
//                         two bumps of the same half-width at +-N, height
//                         N^{-s+1}
//   bounded_primitive   : two bumps of width N^{-a} and height N^{-s+a/2}
//                         at +-N (primitive sup decaying in N)
enum class DataFamily { unbounded_primitive, bounded_primitive };

struct IllposedDataSpec {
    DataFamily family = DataFamily::unbounded_primitive;
    double N = 8.0;
    double s = 0.0;
    double a = 1.0;  // width exponent, bounded_primitive family only
};

// Frequency content as sparse bins on a virtual uniform frequency grid of
// spacing dxi: coefficient uhat(m * dxi) = bins[m].  Supports scans whose
// per-N grids are far too large to materialize.
struct SparseSpectrum {
    double dxi = 0.0;
    std::map<long long, cdouble> bins;

    double hs_norm(double s) const;
    double l2_norm() const { return hs_norm(0.0); }
    cdouble at_zero() const;
    double integral() const;  // sqrt(2 pi) * uhat(0)
};

// Data constructed as exact indicator functions on the grid's frequency
// bins.  Preconditions: Nyquist > N + 2 and dxi fine enough to resolve the
// indicator width (<= width/4).
Field make_illposed_data(const IllposedDataSpec& spec, const Grid1D& grid);

// Same data on a per-N virtual grid whose spacing is exactly width/4 (or
// width/(4*oversample)); only the nonzero bins are stored.
SparseSpectrum make_illposed_spectrum(const IllposedDataSpec& spec,
                                      int oversample = 1);

// Second Picard iterate of the u d_x^2 u interaction in closed form:
//   at frequency xi, sum over xi1 of
//     uhat0(xi - xi1) (-xi1^2) uhat0(xi1) e^{i t xi^3 / 3} timefac dxi
//   with timefac = (1 - e^{-i t Omega/3}) / (i Omega / 3),
//   Omega = 3 xi xi1 (xi - xi1), and timefac = t at the removable Omega = 0.
Field second_iterate(const Field& u0, double t);
SparseSpectrum second_iterate(const SparseSpectrum& u0, double t);

// Scaling-law scans over a dyadic N list (>= 4 values); slopes are
// least-squares fits on log-log data.
ExperimentReport illposed_scan(const IllposedDataSpec& base,
                               const std::vector<double>& N_list, double t,
                               int oversample = 1);

// Evolves the coupled system and measures the gauge residual
// d_x u - e^{Lambda} v together with the time-integrated reconstruction of
// the primitive's evolution; pass thresholds 1e-6 and 1e-5.
ExperimentReport gauge_consistency_run(const Field& u0, double T,
                                       const EquationSpec& spec,
                                       const StepperConfig& cfg);

// Flow-map Lipschitz probe: perturb u0 by delta * g and compare final-time
// differences against the data difference in the discrete H^1-plus-
// primitive-sup metric, per delta.
ExperimentReport lipschitz_probe(const Field& u0, const Field& g,
                                 const std::vector<double>& deltas, double T,
                                 const EquationSpec& spec,
                                 const StepperConfig& cfg);

// T-sweep of the a-priori-shaped inequality: measures the composite norm
// over [0, T], fits the tight affine law  norm = A + B sqrt(T)  across the
// sweep, and refits the excess over the intercept A as a power of T (the
// structural target is the exponent 1/2).  The intercept, not the T -> 0
// limit, plays the data-term constant: the limit value is polluted by the
// dispersive components that switch on with any finite window.
ExperimentReport apriori_diagnostic(const Field& u0,
                                    const std::vector<double>& T_list,
                                    const EquationSpec& spec,
                                    const StepperConfig& cfg);

}  // namespace gkdv
