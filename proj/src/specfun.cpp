#include "frmod/specfun.hpp"

#include <array>
#include <cmath>
#include <numbers>
#include <string>

#include "frmod/errors.hpp"

namespace frmod::specfun {
namespace {

// Stirling series coefficients B_{2k}/(2k(2k−1)), k = 1..8.
constexpr std::array<double, 8> kStirling = {
    1.0 / 12.0,          -1.0 / 360.0,          1.0 / 1260.0,        -1.0 / 1680.0,
    1.0 / 1188.0,        -691.0 / 360360.0,     1.0 / 156.0,         -3617.0 / 122400.0};

constexpr double kShift = 15.0;

double stirling_log_gamma(double x) {
  // ln Γ(x) = (x − ½)ln x − x + ½ln(2π) + Σ B_{2k}/(2k(2k−1)x^{2k−1})
  const double inv = 1.0 / x;
  const double inv2 = inv * inv;
  double series = 0.0;
  double p = inv;
  for (double c : kStirling) {
    series += c * p;
    p *= inv2;
  }
  return (x - 0.5) * std::log(x) - x + 0.5 * std::log(2.0 * std::numbers::pi) + series;
}

}  // namespace

double log_gamma(double x) {
  if (!(x > 0.0) || !std::isfinite(x)) {
    throw DomainError("log_gamma: argument must be positive and finite, got " + std::to_string(x));
  }
  if (x >= kShift) return stirling_log_gamma(x);
  // Γ(x) = Γ(x + m) / (x (x+1) ... (x+m−1))
  double product = 1.0;
  double z = x;
  while (z < kShift) {
    product *= z;
    z += 1.0;
  }
  return stirling_log_gamma(z) - std::log(product);
}

double gamma_ratio(double a, double b) {
  if (!(a > 0.0) || !(b > 0.0)) {
    throw DomainError("gamma_ratio: arguments must be positive");
  }
  if (a == b) return 1.0;
  return std::exp(log_gamma(a) - log_gamma(b));
}

double gamma(double x) { return std::exp(log_gamma(x)); }

void require_memory_parameter(double d) {
  if (!(d > 0.0 && d < 0.5)) {
    throw DomainError("memory parameter d must lie in (0, 1/2), got " + std::to_string(d));
  }
}

FracCoeffSeq frac_coeff_seq(double d, std::size_t K) {
  require_memory_parameter(d);
  FracCoeffSeq seq;
  seq.d = d;
  seq.values.resize(K + 1);
  seq.values[0] = 1.0;
  for (std::size_t k = 1; k <= K; ++k) {
    const double kk = static_cast<double>(k);
    seq.values[k] = seq.values[k - 1] * (kk - 1.0 + d) / kk;
  }
  return seq;
}

}  // namespace frmod::specfun
