#include <doctest.h>

#include <cmath>
#include <numbers>

#include "frmod/errors.hpp"
#include "frmod/model.hpp"
#include "frmod/params.hpp"

using namespace frmod;
using namespace frmod::model;

namespace {

constexpr double pi = std::numbers::pi;

FrmodSpec frmod0(double d, double lambda0, double q0, double q1) { return FrmodSpec{{d, lambda0}, {q0, q1}, {}, {}}; }

}  // namespace

TEST_CASE("acvf_Y parity and lag zero") {
  const double d = 0.3;
  QPair q{1.3, -0.7};
  CHECK(acvf_Y(d, q, 0).gamma12 == 0.0);
  for (long h = 1; h <= 60; ++h) {
    auto a = acvf_Y(d, q, h), b = acvf_Y(d, q, -h);
    CHECK(a.gamma11 == b.gamma11);
    CHECK(a.gamma12 == -b.gamma12);
  }
  for (long h = -5; h <= 5; ++h) CHECK(acvf_Y(d, {2.0, 0.0}, h).gamma12 == 0.0);

  double F0 = std::tgamma(1 - 2 * d) * std::tgamma(d) * std::sin(pi * d) / (std::tgamma(1 - d) * pi);
  double expected = q.q0 * q.q0 * (2 * F0 + 2) + q.q1 * q.q1 * (2 * F0 - 2);
  CHECK(acvf_Y(d, q, 0).gamma11 == doctest::Approx(expected).epsilon(1e-12));
}

TEST_CASE("closed form against the truncated linear representation") {
  // At d = 0.4 the truncation error still decays like K^{2d−1} and is several
  // percent of γ(0) at K = 2·10⁵, so two truncations are extrapolated in K.
  const double d = 0.4;
  QPair q{1.0, 3.0};
  const std::size_t k1 = 50000, k2 = 200000;
  auto c1 = linear_coefficients(d, q, k1);
  auto c2 = linear_coefficients(d, q, k2);
  const double rho = std::pow(double(k2) / double(k1), 2 * d - 1);
  double scale = acvf_Y(d, q, 0).gamma11;
  for (long h = 1; h <= 50; ++h) {
    auto exact = acvf_Y(d, q, h);
    auto b1 = acvf_oracle_Y(c1, h), b2 = acvf_oracle_Y(c2, h);
    double extrapolated = (b2[0] - rho * b1[0]) / (1 - rho);
    CHECK(std::abs(extrapolated - exact.gamma11) < 5e-3 * scale);
    CHECK(std::abs(b2[0] - exact.gamma11) < 3 * oracle_tail_scale(d, k2) * scale);
    CHECK(std::abs(b2[1] - exact.gamma12) < 5e-3 * scale);
  }
}

TEST_CASE("oracle keeps the P-T structure") {
  auto coeffs = linear_coefficients(0.3, {0.8, 1.1}, 4000);
  for (long h = -50; h <= 50; ++h) {
    auto m = acvf_oracle_Y(coeffs, h);
    CHECK(std::abs(m[0] - m[3]) < 1e-10);
    CHECK(std::abs(m[1] + m[2]) < 1e-10);
  }
  auto zero = acvf_oracle_Y(linear_coefficients(0.3, {0.8, 0.0}, 500), 3);
  CHECK(zero[1] == 0.0);
}

TEST_CASE("oracle for X is even and tracks the closed form") {
  const double d = 0.25, lambda0 = pi / 3;
  QPair q{1.0, 1.0};
  for (long h : {1L, 4L, 9L}) {
    CHECK(std::abs(acvf_oracle(d, q, lambda0, h, 5000) - acvf_oracle(d, q, lambda0, -h, 5000)) < 1e-10);
  }
  auto spec = frmod0(d, lambda0, q.q0, q.q1);
  auto brute = acvf_oracle_batch(d, q, lambda0, 20, 200000);
  double g0 = acvf_frmod0(spec, 0);
  for (long h = 0; h <= 20; ++h) CHECK(std::abs(brute[h] - acvf_frmod0(spec, h)) < 5e-3 * g0);
  CHECK_THROWS_AS(acvf_oracle(d, q, lambda0, 10, 10), DomainError);
}

TEST_CASE("acvf_frmod0 basics") {
  auto spec = frmod0(0.35, 1.0, 0.5, 2.0);
  CHECK(acvf_frmod0(spec, 0) == acvf_Y(0.35, spec.q, 0).gamma11);
  for (long h = 1; h <= 100; ++h) CHECK(acvf_frmod0(spec, h) == doctest::Approx(acvf_frmod0(spec, -h)).epsilon(1e-14));
}

TEST_CASE("large-lag envelope") {
  const double d = 0.3, lambda0 = 1.0;
  auto spec = frmod0(d, lambda0, 0.5, 2.0);
  auto t = params::r_to_timelimit(params::q_to_r(spec.q, d));
  double prev = 1e300;
  for (long h : {1000L, 10000L, 100000L}) {
    // Worst normalised residual over one cycle around h.
    double worst = 0.0;
    for (long k = h; k < h + 8; ++k) {
      double resid = acvf_frmod0(spec, k) - asymptotic_envelope(d, t, lambda0, k);
      worst = std::max(worst, std::abs(resid) / std::pow(double(k), 2 * d - 1));
    }
    CHECK(worst < prev);
    prev = worst;
  }
  CHECK(prev < 1e-3 * t.c_gamma);
}

TEST_CASE("asymptotic_envelope") {
  TimeLimit t{2.0, 0.0};
  CHECK(asymptotic_envelope(0.3, t, pi / 2, 4) == doctest::Approx(2.0 * std::pow(4.0, -0.4)));
  CHECK(asymptotic_envelope(0.3, t, pi / 2, 2) < 0.0);
  CHECK_THROWS_AS(asymptotic_envelope(0.3, t, 1.0, 0), DomainError);
}

TEST_CASE("boundary parameterisation agrees with the general form") {
  for (double d : {0.1, 0.3, 0.45}) {
    for (int s : {-1, 1}) {
      QPair q{params::boundary_q0(d, 3.0, s), 3.0};
      for (long h = -40; h <= 40; ++h) {
        auto a = acvf_Y(d, q, h), b = acvf_Y_boundary(d, 3.0, s, h);
        double scale = std::abs(a.gamma11) + std::abs(a.gamma12);
        CHECK(std::abs(a.gamma11 - b.gamma11) <= 1e-10 * scale);
        CHECK(std::abs(a.gamma12 - b.gamma12) <= 1e-10 * scale);
      }
    }
  }
}

TEST_CASE("ARMA filters") {
  auto base = frmod0(0.3, 1.2, 1.0, 0.5);
  auto plain = acvf_frmod(base, 30);
  for (long h = 0; h <= 30; ++h) CHECK(plain(h) == acvf_frmod0(base, h));
  CHECK(plain.tail_bound == 0.0);

  const double theta = 0.6;
  auto ma = base;
  ma.ma = {theta};
  auto filtered = acvf_frmod(ma, 20);
  for (long h = 0; h <= 20; ++h) {
    double expected = (1 + theta * theta) * acvf_frmod0(base, h) +
                      theta * (acvf_frmod0(base, h + 1) + acvf_frmod0(base, h - 1));
    CHECK(filtered(h) == doctest::Approx(expected).epsilon(1e-12));
  }

  auto ar = base;
  ar.ar = {0.5};
  auto coarse = acvf_frmod(ar, 20, 1000);
  auto fine = acvf_frmod(ar, 20, 2000);
  for (long h = 0; h <= 20; ++h) CHECK(std::abs(coarse(h) - fine(h)) <= coarse.tail_bound + 1e-12 * fine(0));
}

TEST_CASE("polynomial root checks") {
  std::vector<double> c{1.0, -0.5};  // root at 2
  CHECK(min_root_modulus(c) == doctest::Approx(2.0));
  std::vector<double> c2{1.0, 0.0, 0.25};  // roots ±2i
  CHECK(min_root_modulus(c2) == doctest::Approx(2.0));
  CHECK(std::isinf(min_root_modulus(std::vector<double>{3.0})));

  auto bad = frmod0(0.3, 1.0, 1.0, 1.0);
  bad.ar = {1.5};
  CHECK_THROWS_AS(bad.validate(), InvalidPolynomial);
  bad.ar = {};
  bad.ma = {1.0};  // root on the unit circle
  CHECK_THROWS_AS(bad.validate(), InvalidPolynomial);
}

TEST_CASE("psi weights") {
  std::vector<double> ar{0.5}, ma{0.4}, none;
  auto psi = psi_weights(ar, none, 5);
  for (std::size_t j = 0; j <= 5; ++j) CHECK(psi[j] == doctest::Approx(std::pow(0.5, double(j))));
  auto arma = psi_weights(ar, ma, 4);
  CHECK(arma[0] == 1.0);
  CHECK(arma[1] == doctest::Approx(0.9));
  CHECK(arma[2] == doctest::Approx(0.45));
  auto pure_ma = psi_weights(none, ma, 3);
  CHECK(pure_ma == std::vector<double>{1.0, 0.4, 0.0, 0.0});
}

TEST_CASE("asymmetric memory") {
  AsymSpec spec{pi / 3, 0.3, 0.45, 1.0, 1.0};
  for (long h = -30; h <= 30; ++h) {
    double sum = acvf_frmod0(spec.plus_component(), h) + acvf_frmod0(spec.minus_component(), h);
    CHECK(acvf_asym(spec, h) == doctest::Approx(sum).epsilon(1e-10));
  }
  AsymSpec one{pi / 3, 0.3, 0.45, 1.0, 0.0};
  for (long h = 0; h <= 10; ++h) CHECK(acvf_asym(one, h) == doctest::Approx(acvf_frmod0(one.plus_component(), h)).epsilon(1e-12));
  CHECK(spec.d_star() == 0.45);

  // The slowest component sets the decay rate: peaks over a cycle shrink like h^{2·0.45−1}.
  auto peak = [&](long h) {
    double m = 0.0;
    for (long k = h; k < h + 7; ++k) m = std::max(m, std::abs(acvf_asym(spec, k)));
    return m;
  };
  double slope = std::log(peak(100000) / peak(1000)) / std::log(100.0);
  CHECK(slope == doctest::Approx(2 * 0.45 - 1).epsilon(0.3));
}

TEST_CASE("multi-factor additivity") {
  auto a = frmod0(0.3, pi / 4, 1.0, 0.5);
  auto b = frmod0(0.2, 2 * pi / 3, 0.4, 1.5);
  MultiFactorSpec single{{a}};
  MultiFactorSpec both{{a, b}};
  for (long h = 0; h <= 25; ++h) {
    CHECK(acvf_multifactor(single, h) == acvf_frmod0(a, h));
    CHECK(acvf_multifactor(both, h) == doctest::Approx(acvf_frmod0(a, h) + acvf_frmod0(b, h)).epsilon(1e-15));
  }
  MultiFactorSpec dup{{a, a}};
  CHECK_THROWS_AS(dup.validate(), DomainError);
}

TEST_CASE("Toeplitz matrices of model ACVFs are positive semidefinite") {
  std::vector<ModelSpec> specs{frmod0(0.25, pi / 3, 1, 1), frmod0(0.4, pi / 4, params::boundary_q0(0.4, 3, -1), 3),
                               AsymSpec{pi / 3, 0.3, 0.45, 1.0, 2.0}};
  for (const auto& s : specs) {
    auto g = acvf(s, 255);
    CHECK(toeplitz_min_eigenvalue(g.values, 256) >= -1e-8 * g(0));
  }
  std::vector<double> bad{1.0, 0.9, -0.9};
  CHECK(toeplitz_min_eigenvalue(bad, 3) < 0.0);
}
