#include "gkdv/field.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>

#include "fft_backend.hpp"

namespace gkdv {

namespace {
constexpr double two_pi = 2.0 * std::numbers::pi;
constexpr double sqrt_two_pi_inv = 0.39894228040143267794;  // (2*pi)^{-1/2}

void check_size(const Grid1D& g, const std::vector<cdouble>& d) {
    if (d.size() != g.size())
        throw ValidationError("field: data length does not match grid");
}
}  // namespace

Field Field::from_values(const Grid1D& g, std::vector<cdouble> vals) {
    check_size(g, vals);
    return Field(g, Rep::physical, std::move(vals));
}

Field Field::from_coeffs(const Grid1D& g, std::vector<cdouble> coeffs) {
    check_size(g, coeffs);
    return Field(g, Rep::frequency, std::move(coeffs));
}

Field transform(const Field& f, Rep target) {
    if (f.rep() == target) return f;
    const Grid1D& g = f.grid();
    const std::size_t n = g.size();
    std::vector<cdouble> buf = f.data();
    if (target == Rep::frequency) {
        detail::dft(buf, -1);
        // uhat_m = dx/sqrt(2 pi) * (-1)^m * Y_m; the sign carries the -L
        // origin of the physical nodes (m and the storage slot k share
        // parity because n is even).
        const double scale = g.dx() * sqrt_two_pi_inv;
        for (std::size_t k = 0; k < n; ++k)
            buf[k] *= (k & 1) ? -scale : scale;
    } else {
        const double scale = g.dxi() * sqrt_two_pi_inv;
        for (std::size_t k = 0; k < n; ++k)
            buf[k] *= (k & 1) ? -scale : scale;
        detail::dft(buf, +1);
        // dx * dxi * n = 2 pi exactly, so forward then backward is identity.
    }
    return target == Rep::frequency ? Field::from_coeffs(g, std::move(buf))
                                    : Field::from_values(g, std::move(buf));
}

Field to_physical(const Field& f) { return transform(f, Rep::physical); }
Field to_frequency(const Field& f) { return transform(f, Rep::frequency); }

double l2_norm(const Field& f) {
    const double w = f.rep() == Rep::physical ? f.grid().dx() : f.grid().dxi();
    double s = 0.0;
    for (const cdouble& v : f.data()) s += std::norm(v);
    return std::sqrt(s * w);
}

double sup_norm(const Field& f) {
    Field p = to_physical(f);
    double m = 0.0;
    for (const cdouble& v : p.data()) {
        const double a = std::abs(v);
        // NaN slips through max (its comparisons are all false); pin any
        // non-finite sample to +inf so blow-up detectors see it
        if (!std::isfinite(a)) return std::numeric_limits<double>::infinity();
        m = std::max(m, a);
    }
    return m;
}

double hs_norm(const Field& f, double s) {
    Field c = to_frequency(f);
    const Grid1D& g = c.grid();
    double acc = 0.0;
    for (std::size_t k = 0; k < g.size(); ++k) {
        const double xi = g.xi(k);
        acc += std::pow(1.0 + xi * xi, s) * std::norm(c.data()[k]);
    }
    return std::sqrt(acc * g.dxi());
}

double mean_integral(const Field& f) {
    if (f.rep() == Rep::frequency)
        return std::sqrt(two_pi) * f.data()[0].real();
    double s = 0.0;
    for (const cdouble& v : f.data()) s += v.real();
    return s * f.grid().dx();
}

double max_imag(const Field& f) {
    Field p = to_physical(f);
    double m = 0.0;
    for (const cdouble& v : p.data()) m = std::max(m, std::abs(v.imag()));
    return m;
}

}  // namespace gkdv
