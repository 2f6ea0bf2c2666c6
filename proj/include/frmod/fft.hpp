#pragma once

#include <complex>
#include <vector>

namespace frmod::fft {

using cvec = std::vector<std::complex<double>>;

/// Unnormalised DFT: X_k = Σ_t x_t e^{∓2πikt/n} (minus sign for forward).
cvec dft(const cvec& x, bool inverse = false);

/// First n/2 + 1 bins of the forward DFT of a real sequence.
cvec rfft(const std::vector<double>& x);

/// Full linear convolution of a and b.
std::vector<double> linear_convolution(const std::vector<double>& a, const std::vector<double>& b);

}  // namespace frmod::fft
