#include <doctest.h>

#include <cmath>
#include <numbers>
#include <set>

#include "frmod/errors.hpp"
#include "frmod/estimate.hpp"
#include "frmod/params.hpp"
#include "frmod/simulate.hpp"

using namespace frmod;
using namespace frmod::simulate;

namespace {

constexpr double pi = std::numbers::pi;

FrmodSpec frmod0(double d, double lambda0, double q0, double q1) { return FrmodSpec{{d, lambda0}, {q0, q1}, {}, {}}; }

// Replicate second moments E[x_i x_j] with their standard errors.
struct Moments {
  std::vector<double> mean, se;
};

Moments second_moments(const std::vector<std::vector<double>>& paths, std::size_t n) {
  const double R = double(paths.size());
  Moments m{std::vector<double>(n * n), std::vector<double>(n * n)};
  std::vector<double> sq(n * n);
  for (const auto& p : paths)
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = 0; j < n; ++j) {
        double v = p[i] * p[j];
        m.mean[i * n + j] += v;
        sq[i * n + j] += v * v;
      }
  for (std::size_t k = 0; k < n * n; ++k) {
    m.mean[k] /= R;
    m.se[k] = std::sqrt(std::max(sq[k] / R - m.mean[k] * m.mean[k], 0.0) / R);
  }
  return m;
}

}  // namespace

TEST_CASE("seed derivation") {
  CHECK(derive_seed(1, 0) == derive_seed(1, 0));
  std::set<std::uint64_t> seen;
  for (std::uint64_t m = 0; m < 20; ++m)
    for (std::uint64_t s = 0; s < 20; ++s) seen.insert(derive_seed(m, s));
  CHECK(seen.size() == 400);
}

TEST_CASE("gaussian white noise") {
  auto a = gaussian_wn(42, 1000, 2), b = gaussian_wn(42, 1000, 2);
  CHECK(a == b);
  CHECK(gaussian_wn(43, 1000, 1)[0] != a[0]);

  const std::size_t n = 1000000;
  auto w = gaussian_wn(7, n, 2);
  REQUIRE(w.size() == 2);
  double mean = 0, var = 0, cross = 0;
  for (std::size_t i = 0; i < n; ++i) {
    mean += w[0][i];
    var += w[0][i] * w[0][i];
    cross += w[0][i] * w[1][i];
  }
  mean /= n, var /= n, cross /= n;
  CHECK(std::abs(mean) < 4 / std::sqrt(double(n)));
  CHECK(std::abs(var - 1) < 4 * std::sqrt(2.0 / n));
  CHECK(std::abs(cross) < 4 / std::sqrt(double(n)));
  CHECK_THROWS_AS(gaussian_wn(1, 10, 3), DomainError);
}

TEST_CASE("exact simulation is deterministic and records its method") {
  auto spec = frmod0(0.25, pi / 3, 1, 1);
  auto a = simulate_exact(spec, 500, 99), b = simulate_exact(spec, 500, 99);
  CHECK(a.values == b.values);
  CHECK(a.values.size() == 500);
  CHECK(a.method == Method::exact_embedding);
  CHECK(a.embedding_size >= 2 * 499);
  CHECK(simulate_exact(spec, 500, 100).values != a.values);

  auto forced = simulate_exact(spec, 100, 5, {.force_cholesky = true});
  CHECK(forced.method == Method::cholesky);

  ExactSampler sampler(spec, 200);
  auto many = sampler.sample_many({3, 4});
  CHECK(many[0].values == sampler.sample(3).values);
  CHECK(many[1].values == sampler.sample(4).values);
}

TEST_CASE("boundary model falls back to Cholesky") {
  auto spec = frmod0(0.4, pi / 4, params::boundary_q0(0.4, 3, -1), 3);
  auto s = simulate_exact(spec, 256, 1);
  CHECK(s.method == Method::cholesky);
  CHECK(s.cholesky_fallback);
  CHECK(s.clipped_eigenvalue == 0.0);
}

TEST_CASE("two-point covariance") {
  auto spec = frmod0(0.3, 1.0, 1.0, 2.0);
  ExactSampler sampler(spec, 2);
  std::vector<std::uint64_t> seeds;
  for (std::uint64_t r = 0; r < 100000; ++r) seeds.push_back(derive_seed(2024, r));
  std::vector<std::vector<double>> paths;
  for (auto& s : sampler.sample_many(seeds)) paths.push_back(s.values);
  auto m = second_moments(paths, 2);
  const auto& g = sampler.acvf();
  CHECK(std::abs(m.mean[0] - g(0)) < 3 * m.se[0]);
  CHECK(std::abs(m.mean[3] - g(0)) < 3 * m.se[3]);
  CHECK(std::abs(m.mean[1] - g(1)) < 3 * m.se[1]);
}

TEST_CASE("embedding and Cholesky draws share a covariance") {
  auto spec = frmod0(0.2, 2.0, 1.0, 0.5);
  const std::size_t n = 64, R = 2000;
  ExactSampler circ(spec, n), chol(spec, n, {.force_cholesky = true});
  REQUIRE_FALSE(circ.uses_cholesky());
  REQUIRE(chol.uses_cholesky());
  std::vector<std::uint64_t> s1, s2;
  for (std::uint64_t r = 0; r < R; ++r) s1.push_back(derive_seed(1, r)), s2.push_back(derive_seed(2, r));
  std::vector<std::vector<double>> p1, p2;
  for (auto& s : circ.sample_many(s1)) p1.push_back(s.values);
  for (auto& s : chol.sample_many(s2)) p2.push_back(s.values);
  auto a = second_moments(p1, n), b = second_moments(p2, n);
  std::size_t outside = 0;
  for (std::size_t k = 0; k < n * n; ++k)
    if (std::abs(a.mean[k] - b.mean[k]) > 4 * std::hypot(a.se[k], b.se[k])) ++outside;
  CHECK(outside == 0);
}

TEST_CASE("stationarity of a long path") {
  auto spec = frmod0(0.25, pi / 3, 1, 1);
  auto x = simulate_exact(spec, 1 << 15, 77).values;
  std::vector<double> first(x.begin(), x.begin() + x.size() / 2), second(x.begin() + x.size() / 2, x.end());
  auto a = estimate::sample_acvf(first, 10), b = estimate::sample_acvf(second, 10);
  double g0 = model::acvf_frmod0(spec, 0);
  // Long memory slows the convergence; a loose band still catches a drifting law.
  for (long h = 0; h <= 10; ++h) CHECK(std::abs(a(h) - b(h)) < 0.25 * g0);
}

TEST_CASE("rotation powers") {
  const double l0 = 1.1;
  for (long k : {-7L, -1L, 0L, 1L, 5L}) {
    auto m = rotation_power(l0, k);
    CHECK(m[0] == doctest::Approx(std::cos(k * l0)));
    CHECK(m[1] == doctest::Approx(std::sin(k * l0)));
    CHECK(m[2] == doctest::Approx(-std::sin(k * l0)));
    CHECK(m[0] * m[3] - m[1] * m[2] == doctest::Approx(1.0));
  }
  // M^a M^b = M^{a+b}, including negative exponents.
  auto a = rotation_power(l0, -3), b = rotation_power(l0, 5), c = rotation_power(l0, 2);
  CHECK(a[0] * b[0] + a[1] * b[2] == doctest::Approx(c[0]));
  CHECK(a[0] * b[1] + a[1] * b[3] == doctest::Approx(c[1]));
}

TEST_CASE("transformed noise stays white") {
  const double l0 = 1.1;
  const std::size_t R = 10000;
  for (long k : {-17L, 0L, 5L, 1000L}) {
    double s11 = 0, s12 = 0, s22 = 0;
    for (std::size_t r = 0; r < R; ++r) {
      auto w = gaussian_wn(derive_seed(k + 5000, r), 1, 2);
      auto t = transform_noise(l0, k, w[0], w[1]);
      s11 += t[0][0] * t[0][0], s12 += t[0][0] * t[1][0], s22 += t[1][0] * t[1][0];
    }
    const double band = 4.0 * std::sqrt(2.0 / R);
    CHECK(std::abs(s11 / R - 1) < band);
    CHECK(std::abs(s22 / R - 1) < band);
    CHECK(std::abs(s12 / R) < 4.0 / std::sqrt(double(R)));
  }
}

TEST_CASE("modulated coefficients") {
  auto spec = frmod0(0.3, 0.9, 1.2, -0.4);
  auto c0 = modulated_coefficients(spec, 0);
  CHECK(c0[0] == doctest::Approx(2 * spec.q.q0));
  CHECK(c0[1] == 0.0);
  auto lc = model::linear_coefficients(0.3, spec.q, 50);
  for (long j = -50; j <= 50; ++j) {
    auto c = modulated_coefficients(spec, j);
    double norm = lc.a0_at(j) * lc.a0_at(j) + lc.a1_at(j) * lc.a1_at(j);
    CHECK(c[0] * c[0] + c[1] * c[1] == doctest::Approx(norm).epsilon(1e-13));
  }
  for (long h : {0L, 1L, 7L, 20L}) {
    double a = modulated_partial_acvf(spec, h, 3000);
    double b = model::acvf_oracle(0.3, spec.q, 0.9, h, 3000);
    CHECK(std::abs(a - b) < 1e-10 * std::abs(model::acvf_oracle(0.3, spec.q, 0.9, 0, 3000)));
  }
}

TEST_CASE("truncated and modulated routes agree path by path") {
  auto spec = frmod0(0.3, 0.9, 1.2, -0.4);
  auto a = simulate_truncated(spec, 300, 11, 500);
  auto b = simulate_modulated(spec, 300, 11, 500);
  CHECK(a.method == Method::truncated_linear);
  CHECK(b.method == Method::modulated_linear);
  CHECK(a.truncation == 500);
  double worst = 0;
  for (std::size_t i = 0; i < 300; ++i) worst = std::max(worst, std::abs(a.values[i] - b.values[i]));
  CHECK(worst < 1e-10);
  CHECK(simulate_truncated(spec, 300, 11, 500).values == a.values);
}

TEST_CASE("truncated paths target the truncated model") {
  auto spec = frmod0(0.3, 0.9, 1.0, 0.5);
  const std::size_t K = 200, R = 4000;
  double sum = 0, sq = 0;
  for (std::size_t r = 0; r < R; ++r) {
    double v = simulate_truncated(spec, 1, derive_seed(9, r), K).values[0];
    sum += v * v, sq += v * v * v * v;
  }
  double mean = sum / R, se = std::sqrt((sq / R - mean * mean) / R);
  CHECK(std::abs(mean - model::acvf_oracle(0.3, spec.q, 0.9, 0, K)) < 3 * se);
}

TEST_CASE("ARMA filtering") {
  std::vector<double> impulse(8, 0.0);
  impulse[0] = 1.0;
  auto same = apply_arma(impulse, {}, {});
  CHECK(same.values == impulse);
  CHECK(same.burn_in == 0);

  auto ma = apply_arma(impulse, {}, {0.7});
  CHECK(ma.values == std::vector<double>{1.0, 0.7, 0, 0, 0, 0, 0, 0});
  CHECK(ma.burn_in == 0);

  auto ar = apply_arma(impulse, {0.5}, {});
  for (std::size_t k = 0; k < 8; ++k) CHECK(ar.values[k] == doctest::Approx(std::pow(0.5, double(k))));
  CHECK(ar.burn_in == 100);
  CHECK(apply_arma(impulse, std::vector<double>(12, 0.01), {}).burn_in == 120);
}

TEST_CASE("method names") {
  CHECK(to_string(Method::exact_embedding) == "exact-embedding");
  CHECK(to_string(Method::cholesky) == "cholesky");
  CHECK(to_string(Method::truncated_linear) == "truncated-linear");
  CHECK(to_string(Method::modulated_linear) == "modulated-linear");
}
