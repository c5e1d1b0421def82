#include "fft_backend.hpp"

#include <fftw3.h>

#include <map>
#include <mutex>
#include <utility>

namespace gkdv::detail {

namespace {

// fftw_plan creation is not thread safe; execution via fftw_execute_dft on
// caller buffers is.  One cached plan per (size, sign), created under a lock.
std::mutex plan_mutex;
std::map<std::pair<std::size_t, int>, fftw_plan> plan_cache;

fftw_plan get_plan(std::size_t n, int sign) {
    std::lock_guard<std::mutex> lock(plan_mutex);
    auto key = std::make_pair(n, sign);
    auto it = plan_cache.find(key);
    if (it != plan_cache.end()) return it->second;
    // FFTW_UNALIGNED: the plan must accept any caller buffer, std::vector
    // storage does not guarantee SIMD alignment.
    std::vector<std::complex<double>> scratch(n);
    auto* p = reinterpret_cast<fftw_complex*>(scratch.data());
    fftw_plan plan = fftw_plan_dft_1d(static_cast<int>(n), p, p, sign,
                                      FFTW_ESTIMATE | FFTW_UNALIGNED);
    plan_cache.emplace(key, plan);
    return plan;
}

}  // namespace

void dft(std::vector<std::complex<double>>& inout, int sign) {
    fftw_plan plan = get_plan(inout.size(), sign);
    auto* p = reinterpret_cast<fftw_complex*>(inout.data());
    fftw_execute_dft(plan, p, p);
}

}  // namespace gkdv::detail
