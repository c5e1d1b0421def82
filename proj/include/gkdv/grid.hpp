#pragma once

#include <cstddef>
#include <numbers>

#include "gkdv/errors.hpp"

namespace gkdv {

// Uniform periodic grid on [-L, L).  n must be a power of two >= 16 (user
// grids) or 3x one (grids produced by dealiasing pads); either way n is
// even, so the FFT layout has a single Nyquist mode at index n/2.
//
// Physical nodes:   x_j  = -L + j*dx,          dx  = 2L/n,   j = 0..n-1
// Frequency nodes:  xi_k = pi*m(k)/L,          dxi = pi/L
// with m(k) the signed mode in FFT storage order: 0,1,..,n/2-1,-n/2,..,-1.
class Grid1D {
public:
    Grid1D(double half_length, std::size_t points) : L_(half_length), n_(points) {
        if (!(L_ > 0.0)) throw ValidationError("grid: half length must be positive");
        std::size_t base = n_ % 3 == 0 ? n_ / 3 : n_;
        if (base < 16 || (base & (base - 1)) != 0)
            throw ValidationError(
                "grid: point count must be a power of two >= 16, or 3x one");
    }

    double half_length() const { return L_; }
    std::size_t size() const { return n_; }

    double dx() const { return 2.0 * L_ / static_cast<double>(n_); }
    double dxi() const { return std::numbers::pi / L_; }

    double x(std::size_t j) const { return -L_ + static_cast<double>(j) * dx(); }

    // Signed mode index for FFT storage slot k; the single Nyquist slot n/2
    // represents mode -n/2.
    long long mode(std::size_t k) const {
        return k < n_ / 2 ? static_cast<long long>(k)
                          : static_cast<long long>(k) - static_cast<long long>(n_);
    }

    double xi(std::size_t k) const { return dxi() * static_cast<double>(mode(k)); }

    // Largest represented |mode| (the Nyquist mode n/2).
    long long nyquist_mode() const { return static_cast<long long>(n_ / 2); }
    double nyquist_xi() const { return dxi() * static_cast<double>(nyquist_mode()); }

    bool operator==(const Grid1D& o) const { return L_ == o.L_ && n_ == o.n_; }
    bool operator!=(const Grid1D& o) const { return !(*this == o); }

private:
    double L_;
    std::size_t n_;
};

}  // namespace gkdv
