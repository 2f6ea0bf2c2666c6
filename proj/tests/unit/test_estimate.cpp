#include <doctest.h>

#include <cmath>
#include <numbers>

#include "frmod/errors.hpp"
#include "frmod/estimate.hpp"
#include "frmod/fft.hpp"
#include "frmod/model.hpp"
#include "frmod/params.hpp"
#include "frmod/simulate.hpp"

using namespace frmod;
using namespace frmod::estimate;

namespace {

constexpr double pi = std::numbers::pi;

FrmodSpec frmod0(double d, double lambda0, double q0, double q1) { return FrmodSpec{{d, lambda0}, {q0, q1}, {}, {}}; }

std::vector<double> cosine(std::size_t n, std::size_t j, double phase = 0.0) {
  std::vector<double> x(n);
  for (std::size_t t = 0; t < n; ++t) x[t] = std::cos(2 * pi * double(j * t) / double(n) + phase);
  return x;
}

}  // namespace

TEST_CASE("sample ACVF") {
  auto zero = sample_acvf(std::vector<double>(50, 0.0), 5);
  for (double v : zero.values) CHECK(v == 0.0);

  std::vector<double> alt(100);
  for (std::size_t t = 0; t < alt.size(); ++t) alt[t] = t % 2 ? -1.0 : 1.0;
  auto g = sample_acvf(alt, 3);
  CHECK(g(1) == doctest::Approx(-g(0) * 99.0 / 100.0));

  auto x = simulate::simulate_exact(frmod0(0.3, 1.0, 1, 1), 300, 3).values;
  auto s = sample_acvf(x, 299);
  CHECK(model::toeplitz_min_eigenvalue(s.values, 300) >= -1e-8 * s(0));
  CHECK_THROWS_AS(sample_acvf(x, 300), DomainError);
}

TEST_CASE("expected sample ACVF of white noise") {
  ScalarAcvf white{std::vector<double>(10, 0.0), 0.0};
  white.values[0] = 1.0;
  auto e = expected_sample_acvf(white, 10, 2);
  // E γ̂(0) = (n−1)/n, E γ̂(h) = −(n−h)/n² for white noise.
  CHECK(e[0] == doctest::Approx(0.9));
  CHECK(e[1] == doctest::Approx(-0.09));
}

TEST_CASE("sample cross ACVF") {
  std::vector<double> x{1, 2, 3, 4}, y{4, 3, 2, 1};
  CHECK(sample_cross_acvf(x, x, 1) == doctest::Approx(sample_acvf(x, 1)(1)));
  CHECK(sample_cross_acvf(x, y, 1) == doctest::Approx(sample_cross_acvf(y, x, -1)));
  CHECK(sample_cross_acvf(x, y, 0) == doctest::Approx(-1.25));
}

TEST_CASE("periodogram") {
  auto zero = periodogram(std::vector<double>(64, 0.0));
  CHECK(zero.ordinates.size() == 32);
  for (double v : zero.ordinates) CHECK(v == 0.0);

  auto p = periodogram(cosine(128, 9));
  CHECK(p.frequencies[8] == doctest::Approx(2 * pi * 9 / 128));
  CHECK(p.ordinates[8] == doctest::Approx(128.0 / (8 * pi)));
  for (std::size_t j = 0; j < p.ordinates.size(); ++j)
    if (j != 8) CHECK(p.ordinates[j] < 1e-20);
}

TEST_CASE("periodogram Parseval identity") {
  for (std::size_t n : {255u, 256u}) {
    auto x = simulate::gaussian_wn(5, n, 1)[0];
    auto p = periodogram(x);
    double total = 0.0;
    for (std::size_t j = 0; j < p.ordinates.size(); ++j)
      total += (n % 2 == 0 && j + 1 == p.ordinates.size() ? 1.0 : 2.0) * p.ordinates[j];
    CHECK(total * 2 * pi / double(n) == doctest::Approx(sample_acvf(x, 0)(0)).epsilon(1e-8));
  }
}

TEST_CASE("Hilbert transform") {
  const std::size_t n = 256;
  auto h = hilbert_transform(cosine(n, 17));
  auto s = cosine(n, 17, -pi / 2);
  for (std::size_t t = 0; t < n; ++t) CHECK(h[t] == doctest::Approx(s[t]).epsilon(1e-12).scale(1.0));

  auto x = simulate::gaussian_wn(8, n, 1)[0];
  auto twice = hilbert_transform(hilbert_transform(x));
  // −x with the mean and Nyquist components removed.
  auto X = fft::rfft(x);
  double mean = X[0].real() / n, nyq = X[n / 2].real() / n;
  for (std::size_t t = 0; t < n; ++t) {
    double expected = -(x[t] - mean - nyq * (t % 2 ? -1.0 : 1.0));
    CHECK(twice[t] == doctest::Approx(expected).epsilon(1e-10).scale(1.0));
  }

  // The cross-periodogram of (x, Hx) is purely imaginary at interior bins.
  auto hx = hilbert_transform(x);
  auto A = fft::rfft(x), B = fft::rfft(hx);
  for (std::size_t j = 1; j < n / 2; ++j) {
    auto c = A[j] * std::conj(B[j]);
    CHECK(std::abs(c.real()) <= 1e-10 * std::abs(c));
  }
}

TEST_CASE("demodulation round trips") {
  const double l0 = 0.8;
  auto x = simulate::simulate_exact(frmod0(0.3, l0, 1, 0.5), 500, 12).values;
  for (Companion c : {Companion{HilbertCompanion{}}, Companion{IndependentCompanion{frmod0(0.3, l0, 1, 0.5), 77}}}) {
    auto dm = rice_demodulate(x, l0, c);
    REQUIRE(dm.companion.size() == x.size());
    auto back = remodulate(dm.y1, dm.y2, l0);
    for (std::size_t t = 0; t < x.size(); ++t) CHECK(std::abs(back[t] - x[t]) < 1e-12 * (1 + std::abs(x[t])));
  }

  std::vector<double> y1{1, 2, 3, 4, 5}, zeros(5, 0.0);
  auto r = remodulate(y1, zeros, pi / 2);
  std::vector<double> pattern{1, 0, -1, 0, 1};
  for (std::size_t t = 0; t < 5; ++t) CHECK(r[t] == doctest::Approx(pattern[t] * y1[t]).scale(1.0));

  auto explicit_companion = rice_demodulate(x, l0, std::vector<double>(x.size(), 0.0));
  for (std::size_t t = 0; t < 10; ++t) CHECK(explicit_companion.y1[t] == doctest::Approx(std::cos(l0 * t) * x[t]));
  CHECK_THROWS_AS(rice_demodulate(x, l0, std::vector<double>(3, 0.0)), DomainError);
}

TEST_CASE("independent companion gives P-T structure in sample") {
  const double l0 = 1.0;
  auto spec = frmod0(0.2, l0, 1, 0.5);
  auto x = simulate::simulate_exact(spec, 1 << 14, 4).values;
  auto dm = rice_demodulate(x, l0, IndependentCompanion{spec, 5});
  double g0 = sample_acvf(dm.y1, 0)(0);
  for (long h : {0L, 1L, 3L, 10L}) {
    CHECK(std::abs(sample_cross_acvf(dm.y1, dm.y1, h) - sample_cross_acvf(dm.y2, dm.y2, h)) < 0.2 * g0);
    CHECK(std::abs(sample_cross_acvf(dm.y1, dm.y2, h) + sample_cross_acvf(dm.y2, dm.y1, h)) < 0.2 * g0);
  }
}

TEST_CASE("Hilbert demodulation recovers g0 = cf+ + cf- and g1 = cf- - cf+") {
  const double d = 0.3, l0 = pi / 3;
  auto spec = frmod0(d, l0, 1.0, 2.0);
  auto cf = params::timelimit_to_speclimit(params::r_to_timelimit(params::q_to_r(spec.q, d)), d);
  const std::size_t n = 4096, R = 40, J = 10;
  simulate::ExactSampler sampler(spec, n);
  double f11 = 0.0, g12 = 0.0;
  for (std::size_t r = 0; r < R; ++r) {
    auto x = sampler.sample(simulate::derive_seed(31, r)).values;
    auto dm = rice_demodulate(x, l0, HilbertCompanion{});
    auto A = fft::rfft(dm.y1), B = fft::rfft(dm.y2);
    // Lowest decade of Fourier frequencies, rescaled by λ^{2d}.
    for (std::size_t j = 1; j <= J; ++j) {
      double lam = 2 * pi * double(j) / double(n);
      double w = std::pow(lam, 2 * d) / (2 * pi * double(n));
      f11 += std::norm(A[j]) * w;
      g12 += (A[j] * std::conj(B[j])).imag() * w;
    }
  }
  f11 /= double(R * J), g12 /= double(R * J);
  double g0 = cf.cf_plus + cf.cf_minus, g1 = cf.cf_minus - cf.cf_plus;
  CHECK(std::abs(f11 - g0) < 0.25 * g0);
  CHECK(std::abs(g12 - g1) < 0.25 * std::abs(g1));
}

TEST_CASE("oscillatory-sum remainders") {
  const double d = 0.3;
  double prev1 = 0, prev2 = 0, last_step = 1e300;
  for (int m = 4; m <= 12; ++m) {
    auto r = oscillatory_remainder(d, std::ldexp(1.0, -m));
    if (m > 4) {
      double step = std::hypot(r.r1 - prev1, r.r2 - prev2);
      CHECK(step < last_step);
      last_step = step;
    }
    prev1 = r.r1, prev2 = r.r2;
  }
  CHECK(std::abs(prev1) < 1e-3);
  // The cosine remainder tends to ζ(1 − 2d); ζ(0.4) = −1.1347977838669...
  CHECK(prev2 == doctest::Approx(-1.1347977838669).epsilon(1e-3));

  // Close to d = 1/2 the sums decay slowly but the remainders still settle.
  double a = oscillatory_remainder(0.49, 1.0 / 256).r2, b = oscillatory_remainder(0.49, 1.0 / 1024).r2,
         c = oscillatory_remainder(0.49, 1.0 / 4096).r2;
  CHECK(std::abs(c - b) < std::abs(b - a));

  CHECK_THROWS_AS(oscillatory_remainder(d, 0.0), DomainError);
  CHECK_THROWS_AS(oscillatory_remainder(d, 1.0), DomainError);
}

TEST_CASE("the leading term dominates the oscillatory sum as omega shrinks") {
  const double d = 0.35, w = 1.0 / 4096;
  auto r = oscillatory_remainder(d, w);
  double lead = std::pow(w, -2 * d) * std::tgamma(2 * d) * std::cos(pi * d);
  CHECK(std::abs(r.r2) < 1e-2 * lead);
}
