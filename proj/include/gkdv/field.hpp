#pragma once

#include <complex>
#include <vector>

#include "gkdv/grid.hpp"

namespace gkdv {

using cdouble = std::complex<double>;

enum class Rep { physical, frequency };

// A field on a periodic grid, stored either as point values u(x_j) or as
// unitary Fourier coefficients uhat(xi_k).  The convention ties the discrete
// coefficients to the continuum transform
//     uhat(xi) = (2*pi)^{-1/2} * integral exp(-i*xi*x) u(x) dx
// so a band-limited function reproduces its continuum coefficients exactly
// and Parseval reads  sum |u_j|^2 dx = sum |uhat_k|^2 dxi.
class Field {
public:
    static Field from_values(const Grid1D& g, std::vector<cdouble> vals);
    static Field from_coeffs(const Grid1D& g, std::vector<cdouble> coeffs);

    const Grid1D& grid() const { return grid_; }
    Rep rep() const { return rep_; }

    const std::vector<cdouble>& data() const { return data_; }
    std::vector<cdouble>& data() { return data_; }

private:
    Field(const Grid1D& g, Rep r, std::vector<cdouble> d)
        : grid_(g), rep_(r), data_(std::move(d)) {}

    Grid1D grid_;
    Rep rep_;
    std::vector<cdouble> data_;
};

// Representation changes (FFT-backed, exact round trip up to rounding).
Field transform(const Field& f, Rep target);
Field to_physical(const Field& f);
Field to_frequency(const Field& f);

// Diagnostics.  l2_norm and mean_integral are evaluated in whatever
// representation the field is in; Parseval (exact for the unitary DFT up to
// rounding) makes the two readings agree.  sup_norm and max_imag force the
// physical side, hs_norm forces the frequency side.
double l2_norm(const Field& f);             // (sum |u_j|^2 dx)^{1/2}
double sup_norm(const Field& f);            // max_j |u_j|
double hs_norm(const Field& f, double s);   // (sum <xi>^{2s} |uhat|^2 dxi)^{1/2}
double mean_integral(const Field& f);       // integral of u over [-L, L)
double max_imag(const Field& f);            // max_j |Im u(x_j)|, reality check

}  // namespace gkdv
