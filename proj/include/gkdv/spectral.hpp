#pragma once

#include <functional>
#include <string>
#include <vector>

#include "gkdv/field.hpp"

namespace gkdv {

// A Fourier multiplier m(xi): (Mu)^(xi) = symbol(xi) * uhat(xi).
struct MultiplierSpec {
    std::function<cdouble(double)> symbol;
    std::string label;
};

namespace multipliers {

MultiplierSpec identity();
MultiplierSpec derivative(int order);        // (i*xi)^order; order >= 1
MultiplierSpec bessel(double s);             // <xi>^s = (1+xi^2)^{s/2}
MultiplierSpec riesz(double s);              // |xi|^s, zero mode annihilated for s<0
MultiplierSpec airy(double t);               // exp(i*t*xi^3/3)

}  // namespace multipliers

Field apply_multiplier(const Field& f, const MultiplierSpec& m);

// Solution of  d_t u + (1/3) d_x^3 u = 0  at time t from data f, i.e. the
// multiplier exp(i*t*xi^3/3).  An L^2 isometry for every t.
Field airy_propagate(const Field& f, double t);

// Dyadic frequency decomposition.  Block code 0.0 selects |xi| <= 1; block
// code N in {2, 4, 8, ...} selects N/2 < |xi| <= N.  The top admissible
// block is clipped at the grid's Nyquist frequency, so the admissible blocks
// partition every representable frequency exactly and the pieces of any
// field sum back to the field.
Field littlewood_paley(const Field& f, double block);
std::vector<double> admissible_blocks(const Grid1D& g);

// Zero-padded copy on the same interval with pad_factor*n points, and its
// inverse.  The Nyquist coefficient is carried into the fine grid as is, so
// pad followed by truncate is the exact identity.
Field pad_spectrum(const Field& f, int pad_factor);
Field truncate_spectrum(const Field& f, const Grid1D& coarse);

// Pointwise product of fields computed alias-free on a pad_factor-times
// finer grid, then truncated back (returned in frequency representation).
// pad_factor p handles products of total degree <= 2p - 1, so the vector
// call requires p >= (degree+1)/2 and rejects anything beyond.
Field product(const Field& a, const Field& b, int pad_factor = 3);
Field product(const std::vector<Field>& factors, int pad_factor = 3);

// Re-band-limit a field: drop every coefficient a degree-p product on the
// padded grid could have aliased, i.e. keep only what pad_factor protects.
Field dealias(const Field& f, int pad_factor);

}  // namespace gkdv
