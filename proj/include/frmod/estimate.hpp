#pragma once

#include <cstdint>
#include <variant>
#include <vector>

#include "frmod/model.hpp"

namespace frmod {

struct Periodogram {
  std::vector<double> frequencies;  // 2πj/n, j = 1..⌊n/2⌋
  std::vector<double> ordinates;
};

struct HilbertCompanion {};

/// Independent exact draw of `model` used as the companion series.
struct IndependentCompanion {
  ModelSpec model;
  std::uint64_t seed = 0;
};

using Companion = std::variant<HilbertCompanion, IndependentCompanion>;

struct Demodulated {
  std::vector<double> y1;
  std::vector<double> y2;
  std::vector<double> companion;
};

struct OscillatoryRemainders {
  double r1 = 0.0;
  double r2 = 0.0;
};

namespace estimate {

/// Biased (divisor n), mean-centred sample ACVF at lags 0..hmax.
ScalarAcvf sample_acvf(const std::vector<double>& x, std::size_t hmax);

/// Exact expectation of sample_acvf for a series of length n with ACVF gamma
/// (gamma must cover lags 0..n−1).
std::vector<double> expected_sample_acvf(const ScalarAcvf& gamma, std::size_t n, std::size_t hmax);

/// n⁻¹ Σ_t (x_{t+h} − x̄)(y_t − ȳ) for any integer h with |h| < n.
double sample_cross_acvf(const std::vector<double>& x, const std::vector<double>& y, long h);

/// I(λ_j) = |Σ_t x_t e^{−itλ_j}|² / (2πn).
Periodogram periodogram(const std::vector<double>& x);

/// Frequency-domain multiplier −i·sign(λ), DC and Nyquist bins zeroed.
std::vector<double> hilbert_transform(const std::vector<double>& x);

/// y1 = cos(λ0 n) x − sin(λ0 n) x2, y2 = sin(λ0 n) x + cos(λ0 n) x2. The Hilbert
/// companion is x2 = −Hx (multiplier +i·sign λ): with this rotation only that
/// sign moves the divergence at λ0 down to frequency 0.
Demodulated rice_demodulate(const std::vector<double>& x, double lambda0, const Companion& companion);

/// Rotation of an explicit companion series; the time index starts at 0.
Demodulated rice_demodulate(const std::vector<double>& x, double lambda0, std::vector<double> companion);

/// x_n = cos(λ0 n) y1_n + sin(λ0 n) y2_n.
std::vector<double> remodulate(const std::vector<double>& y1, const std::vector<double>& y2, double lambda0);

/// R1(ω) = Σ_{k≥1} sin(kω) k^{2d−1} − ω^{−2d} Γ(2d) sin(πd) and R2 likewise with cos.
/// The first max(K, 64/ω) terms are summed directly (compensated); the rest is
/// evaluated through Euler's transformation of the oscillatory tail.
OscillatoryRemainders oscillatory_remainder(double d, double omega, std::size_t K = 0);

}  // namespace estimate
}  // namespace frmod
