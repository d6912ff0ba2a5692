#include "fft.hpp"

#include <fftw3.h>

#include <cstring>
#include <map>
#include <mutex>

#include "fraclab/errors.hpp"

namespace fraclab::detail {
namespace {

// FFTW planning is not thread-safe; execution on new-array is.
std::mutex& planner_mutex() {
  static std::mutex m;
  return m;
}

struct Plans {
  fftw_plan forward = nullptr;
  fftw_plan backward = nullptr;
};

const Plans& plans_for(int n) {
  static std::map<int, Plans> cache;
  std::lock_guard lock(planner_mutex());
  auto it = cache.find(n);
  if (it != cache.end()) return it->second;
  double* r = fftw_alloc_real(n);
  fftw_complex* c = fftw_alloc_complex(n / 2 + 1);
  Plans p;
  p.forward = fftw_plan_dft_r2c_1d(n, r, c, FFTW_ESTIMATE);
  p.backward = fftw_plan_dft_c2r_1d(n, c, r, FFTW_ESTIMATE);
  fftw_free(r);
  fftw_free(c);
  if (!p.forward || !p.backward) throw NumericError("fftw: planning failed");
  return cache.emplace(n, p).first->second;
}

}  // namespace

std::vector<std::complex<double>> rfft(const std::vector<double>& in) {
  const int n = static_cast<int>(in.size());
  const Plans& p = plans_for(n);
  double* r = fftw_alloc_real(n);
  fftw_complex* c = fftw_alloc_complex(n / 2 + 1);
  std::memcpy(r, in.data(), sizeof(double) * n);
  fftw_execute_dft_r2c(p.forward, r, c);
  std::vector<std::complex<double>> out(n / 2 + 1);
  for (int k = 0; k <= n / 2; ++k) out[k] = {c[k][0], c[k][1]};
  fftw_free(r);
  fftw_free(c);
  return out;
}

std::vector<double> irfft(const std::vector<std::complex<double>>& in, int n) {
  const Plans& p = plans_for(n);
  double* r = fftw_alloc_real(n);
  fftw_complex* c = fftw_alloc_complex(n / 2 + 1);
  for (int k = 0; k <= n / 2; ++k) {
    c[k][0] = in[k].real();
    c[k][1] = in[k].imag();
  }
  fftw_execute_dft_c2r(p.backward, c, r);
  std::vector<double> out(r, r + n);
  for (double& v : out) v /= n;
  fftw_free(r);
  fftw_free(c);
  return out;
}

}  // namespace fraclab::detail
