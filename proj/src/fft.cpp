#include "frmod/fft.hpp"

#include <fftw3.h>

#include <algorithm>
#include <mutex>

namespace frmod::fft {
namespace {

// fftw_plan_* and fftw_destroy_plan are not thread-safe; execution is.
std::mutex& planner_mutex() {
  static std::mutex m;
  return m;
}

fftw_complex* as_fftw(std::complex<double>* p) { return reinterpret_cast<fftw_complex*>(p); }

}  // namespace

cvec dft(const cvec& x, bool inverse) {
  const int n = static_cast<int>(x.size());
  cvec in = x;
  cvec out(x.size());
  if (n == 0) return out;
  fftw_plan plan;
  {
    std::lock_guard lock(planner_mutex());
    plan = fftw_plan_dft_1d(n, as_fftw(in.data()), as_fftw(out.data()), inverse ? FFTW_BACKWARD : FFTW_FORWARD,
                            FFTW_ESTIMATE);
  }
  fftw_execute(plan);
  {
    std::lock_guard lock(planner_mutex());
    fftw_destroy_plan(plan);
  }
  return out;
}

cvec rfft(const std::vector<double>& x) {
  const int n = static_cast<int>(x.size());
  std::vector<double> in = x;
  cvec out(x.size() / 2 + 1);
  if (n == 0) return out;
  fftw_plan plan;
  {
    std::lock_guard lock(planner_mutex());
    plan = fftw_plan_dft_r2c_1d(n, in.data(), as_fftw(out.data()), FFTW_ESTIMATE);
  }
  fftw_execute(plan);
  {
    std::lock_guard lock(planner_mutex());
    fftw_destroy_plan(plan);
  }
  return out;
}

std::vector<double> linear_convolution(const std::vector<double>& a, const std::vector<double>& b) {
  if (a.empty() || b.empty()) return {};
  const std::size_t len = a.size() + b.size() - 1;
  std::size_t m = 1;
  while (m < len) m <<= 1;
  cvec fa(m), fb(m);
  std::copy(a.begin(), a.end(), fa.begin());
  std::copy(b.begin(), b.end(), fb.begin());
  fa = dft(fa);
  fb = dft(fb);
  for (std::size_t k = 0; k < m; ++k) fa[k] *= fb[k];
  fa = dft(fa, true);
  std::vector<double> out(len);
  for (std::size_t i = 0; i < len; ++i) out[i] = fa[i].real() / static_cast<double>(m);
  return out;
}

}  // namespace frmod::fft
