#pragma once

#include <complex>
#include <vector>

namespace fraclab::detail {

// Real-to-complex DFT: out[k] = sum_j in[j] exp(-2 pi i j k / N), k = 0..N/2.
std::vector<std::complex<double>> rfft(const std::vector<double>& in);
// Inverse of rfft including the 1/N factor.
std::vector<double> irfft(const std::vector<std::complex<double>>& in, int n);

}  // namespace fraclab::detail
