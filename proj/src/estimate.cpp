#include "frmod/estimate.hpp"

#include <cmath>
#include <complex>
#include <numbers>

#include "frmod/errors.hpp"
#include "frmod/fft.hpp"
#include "frmod/simulate.hpp"
#include "frmod/specfun.hpp"

namespace frmod::estimate {
namespace {

constexpr double pi = std::numbers::pi;

double mean(const std::vector<double>& x) {
  double s = 0.0;
  for (double v : x) s += v;
  return x.empty() ? 0.0 : s / static_cast<double>(x.size());
}

struct Kahan {
  double sum = 0.0;
  double c = 0.0;
  void add(double v) {
    const double y = v - c;
    const double t = sum + y;
    c = (t - sum) - y;
    sum = t;
  }
};

}  // namespace

ScalarAcvf sample_acvf(const std::vector<double>& x, std::size_t hmax) {
  const std::size_t n = x.size();
  if (hmax >= n) throw DomainError("sample_acvf: hmax must be smaller than the series length");
  const double m = mean(x);
  ScalarAcvf out;
  out.values.resize(hmax + 1);
  for (std::size_t h = 0; h <= hmax; ++h) {
    double s = 0.0;
    for (std::size_t t = 0; t + h < n; ++t) s += (x[t + h] - m) * (x[t] - m);
    out.values[h] = s / static_cast<double>(n);
  }
  return out;
}

std::vector<double> expected_sample_acvf(const ScalarAcvf& gamma, std::size_t n, std::size_t hmax) {
  if (gamma.values.size() < n) throw DomainError("expected_sample_acvf: gamma must cover lags 0..n-1");
  if (hmax >= n) throw DomainError("expected_sample_acvf: hmax must be smaller than n");
  const double dn = static_cast<double>(n);
  // G[k] = Σ_{j≤k} γ(j); m(s) = E x_s x̄ for s = 1..n.
  std::vector<double> G(n);
  G[0] = gamma.values[0];
  for (std::size_t k = 1; k < n; ++k) G[k] = G[k - 1] + gamma.values[k];
  std::vector<double> m(n + 1, 0.0);
  double V = 0.0;
  for (std::size_t s = 1; s <= n; ++s) {
    const double sum = G[s - 1] + G[n - s] - gamma.values[0];
    m[s] = sum / dn;
    V += m[s];
  }
  V /= dn;
  std::vector<double> out(hmax + 1);
  for (std::size_t h = 0; h <= hmax; ++h) {
    double cross = 0.0;
    for (std::size_t t = 1; t + h <= n; ++t) cross += m[t + h] + m[t];
    const double nh = static_cast<double>(n - h);
    out[h] = (nh * gamma.values[h] - cross + nh * V) / dn;
  }
  return out;
}

double sample_cross_acvf(const std::vector<double>& x, const std::vector<double>& y, long h) {
  if (x.size() != y.size()) throw DomainError("sample_cross_acvf: series differ in length");
  const long n = static_cast<long>(x.size());
  if (std::abs(h) >= n) throw DomainError("sample_cross_acvf: |h| must be smaller than the series length");
  const double mx = mean(x), my = mean(y);
  double s = 0.0;
  for (long t = std::max(0L, -h); t + h < n && t < n; ++t) {
    s += (x[static_cast<std::size_t>(t + h)] - mx) * (y[static_cast<std::size_t>(t)] - my);
  }
  return s / static_cast<double>(n);
}

Periodogram periodogram(const std::vector<double>& x) {
  const std::size_t n = x.size();
  if (n < 2) throw DomainError("periodogram: need at least two observations");
  const auto X = fft::rfft(x);
  Periodogram p;
  const std::size_t J = n / 2;
  p.frequencies.resize(J);
  p.ordinates.resize(J);
  for (std::size_t j = 1; j <= J; ++j) {
    p.frequencies[j - 1] = 2.0 * pi * static_cast<double>(j) / static_cast<double>(n);
    p.ordinates[j - 1] = std::norm(X[j]) / (2.0 * pi * static_cast<double>(n));
  }
  return p;
}

std::vector<double> hilbert_transform(const std::vector<double>& x) {
  const std::size_t n = x.size();
  if (n < 4) throw DomainError("hilbert_transform: need at least four observations");
  fft::cvec X(x.begin(), x.end());
  X = fft::dft(X);
  const std::complex<double> minus_i{0.0, -1.0};
  X[0] = 0.0;
  for (std::size_t k = 1; k < n; ++k) {
    if (2 * k == n) {
      X[k] = 0.0;
    } else if (2 * k < n) {
      X[k] *= minus_i;
    } else {
      X[k] *= -minus_i;
    }
  }
  X = fft::dft(X, true);
  std::vector<double> out(n);
  for (std::size_t t = 0; t < n; ++t) out[t] = X[t].real() / static_cast<double>(n);
  return out;
}

Demodulated rice_demodulate(const std::vector<double>& x, double lambda0, std::vector<double> companion) {
  if (companion.size() != x.size()) throw DomainError("rice_demodulate: companion length differs from x");
  Demodulated d;
  d.y1.resize(x.size());
  d.y2.resize(x.size());
  for (std::size_t t = 0; t < x.size(); ++t) {
    const double w = lambda0 * static_cast<double>(t);
    const double c = std::cos(w), s = std::sin(w);
    d.y1[t] = c * x[t] - s * companion[t];
    d.y2[t] = s * x[t] + c * companion[t];
  }
  d.companion = std::move(companion);
  return d;
}

Demodulated rice_demodulate(const std::vector<double>& x, double lambda0, const Companion& companion) {
  if (std::holds_alternative<HilbertCompanion>(companion)) {
    auto companion_series = hilbert_transform(x);
    for (double& v : companion_series) v = -v;
    return rice_demodulate(x, lambda0, std::move(companion_series));
  }
  const auto& ind = std::get<IndependentCompanion>(companion);
  return rice_demodulate(x, lambda0, simulate::simulate_exact(ind.model, x.size(), ind.seed).values);
}

std::vector<double> remodulate(const std::vector<double>& y1, const std::vector<double>& y2, double lambda0) {
  if (y1.size() != y2.size()) throw DomainError("remodulate: y1 and y2 differ in length");
  std::vector<double> x(y1.size());
  for (std::size_t t = 0; t < y1.size(); ++t) {
    const double w = lambda0 * static_cast<double>(t);
    x[t] = std::cos(w) * y1[t] + std::sin(w) * y2[t];
  }
  return x;
}

OscillatoryRemainders oscillatory_remainder(double d, double omega, std::size_t K) {
  specfun::require_memory_parameter(d);
  if (!(omega > 0.0 && omega <= pi / 4.0)) throw DomainError("oscillatory_remainder: omega must lie in (0, pi/4]");
  const double s = 2.0 * d - 1.0;
  const auto N = std::max<std::size_t>(K, static_cast<std::size_t>(std::ceil(64.0 / omega)));

  Kahan re, im;
  for (std::size_t k = 1; k < N; ++k) {
    const double kk = static_cast<double>(k);
    const double w = std::pow(kk, s);
    re.add(w * std::cos(kk * omega));
    im.add(w * std::sin(kk * omega));
  }

  // Σ_{k≥N} f(k) z^k = z^N/(1−z) Σ_m (z/(1−z))^m Δ^m f(N), with
  // Δ^m f(N) = N^s m! Σ_{p≥m} C(s,p) S(p,m) N^{−p} for f(k) = k^s.
  constexpr int M = 24;
  constexpr int P = M + 40;
  std::vector<std::vector<double>> stirling(P + 1, std::vector<double>(M + 1, 0.0));
  stirling[0][0] = 1.0;
  for (int p = 1; p <= P; ++p)
    for (int m = 1; m <= std::min(p, M); ++m)
      stirling[p][m] = m * stirling[p - 1][m] + stirling[p - 1][m - 1];
  const double dN = static_cast<double>(N);
  std::vector<double> binom_scaled(P + 1);  // C(s,p) N^{−p}
  binom_scaled[0] = 1.0;
  for (int p = 1; p <= P; ++p) binom_scaled[p] = binom_scaled[p - 1] * (s - (p - 1)) / (p * dN);

  const std::complex<double> z = std::polar(1.0, omega);
  const std::complex<double> ratio = z / (1.0 - z);
  std::complex<double> tail = 0.0, rpow = 1.0;
  double mfact = 1.0;
  for (int m = 0; m <= M; ++m) {
    if (m > 0) mfact *= m;
    double delta = 0.0;
    for (int p = m; p <= P; ++p) delta += binom_scaled[p] * stirling[p][m];
    tail += rpow * (mfact * delta);
    rpow *= ratio;
  }
  tail *= std::pow(dN, s) * std::polar(1.0, dN * omega) / (1.0 - z);

  const double lead = std::pow(omega, -2.0 * d) * specfun::gamma(2.0 * d);
  return {im.sum + tail.imag() - lead * std::sin(pi * d), re.sum + tail.real() - lead * std::cos(pi * d)};
}

}  // namespace frmod::estimate
