#pragma once

#include <complex>
#include <cstddef>
#include <vector>

namespace gkdv::detail {

// Raw unnormalized c2c DFT, FFTW sign convention:
//   sign = -1 (forward):  Y_k = sum_j X_j exp(-2*pi*i*j*k/n)
//   sign = +1 (backward): Y_j = sum_k X_k exp(+2*pi*i*j*k/n)
// Plans are cached per (n, sign) and execution is thread safe.
void dft(std::vector<std::complex<double>>& inout, int sign);

}  // namespace gkdv::detail
