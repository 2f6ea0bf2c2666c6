#include "frmod/model.hpp"

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <complex>
#include <limits>
#include <numbers>
#include <string>

#include "frmod/errors.hpp"
#include "frmod/specfun.hpp"

namespace frmod {
namespace {

constexpr double pi = std::numbers::pi;

// Γ(1−2d) sin(πd)/π · Γ(h+d)/Γ(h+1−d): the FARIMA(0,d,0) ACVF.
double farima_acvf(double d, long h) {
  const double hh = static_cast<double>(h);
  return specfun::gamma(1.0 - 2.0 * d) * std::sin(pi * d) / pi * specfun::gamma_ratio(hh + d, hh + 1.0 - d);
}

// Γ(2d+h)/(Γ(2d)Γ(1+h)) = c_{2d,h}: Cauchy product of c_{d,·} with itself.
double cauchy_coeff(double d, long h) {
  const double hh = static_cast<double>(h);
  return specfun::gamma_ratio(hh + 2.0 * d, hh + 1.0) / specfun::gamma(2.0 * d);
}

double sign_of(long h) { return h > 0 ? 1.0 : (h < 0 ? -1.0 : 0.0); }

void check_polynomial(std::span<const double> c, const char* name, bool ar) {
  // Φ(z) = 1 − Σ φ_i z^i, Θ(z) = 1 + Σ θ_i z^i
  std::vector<double> coeffs(c.size() + 1);
  coeffs[0] = 1.0;
  for (std::size_t i = 0; i < c.size(); ++i) coeffs[i + 1] = ar ? -c[i] : c[i];
  const double m = model::min_root_modulus(coeffs);
  if (!(m > 1.0 + 1e-8)) {
    throw InvalidPolynomial(std::string(name) + " polynomial has a root of modulus " + std::to_string(m) +
                            " (must exceed 1)");
  }
}

}  // namespace

void FrmodSpec::validate() const {
  mf.validate();
  if (q.q0 == 0.0 && q.q1 == 0.0) throw DomainError("(q0, q1) must not both vanish");
  if (!std::isfinite(q.q0) || !std::isfinite(q.q1)) throw DomainError("q0, q1 must be finite");
  check_polynomial(ar, "AR", true);
  check_polynomial(ma, "MA", false);
}

void AsymSpec::validate() const {
  MemoryFrequency{d_plus, lambda0}.validate();
  MemoryFrequency{d_minus, lambda0}.validate();
  if (q1_plus == 0.0 && q1_minus == 0.0) throw DomainError("q1_plus and q1_minus must not both vanish");
}

FrmodSpec AsymSpec::plus_component() const {
  return {{d_plus, lambda0}, {params::boundary_q0(d_plus, q1_plus, +1), q1_plus}, {}, {}};
}

FrmodSpec AsymSpec::minus_component() const {
  return {{d_minus, lambda0}, {params::boundary_q0(d_minus, q1_minus, -1), q1_minus}, {}, {}};
}

double AsymSpec::d_star() const { return std::max(d_plus, d_minus); }

void MultiFactorSpec::validate() const {
  if (components.empty()) throw DomainError("multifactor model needs at least one component");
  std::vector<double> freqs;
  for (const auto& c : components) {
    std::visit([](const auto& s) { s.validate(); }, c);
    freqs.push_back(std::visit(
        [](const auto& s) {
          if constexpr (std::is_same_v<std::decay_t<decltype(s)>, FrmodSpec>) {
            return s.mf.lambda0;
          } else {
            return s.lambda0;
          }
        },
        c));
  }
  std::sort(freqs.begin(), freqs.end());
  if (std::adjacent_find(freqs.begin(), freqs.end()) != freqs.end()) {
    throw DomainError("multifactor components must have distinct lambda0 values");
  }
}

void validate(const ModelSpec& model) {
  std::visit([](const auto& s) { s.validate(); }, model);
}

namespace model {

BivariateAcvf acvf_Y(double d, const QPair& q, long h) {
  specfun::require_memory_parameter(d);
  const long ah = h < 0 ? -h : h;
  const double f = farima_acvf(d, ah);
  // Both one-sided cross terms contribute at h = 0.
  const double c = cauchy_coeff(d, ah) * (ah == 0 ? 2.0 : 1.0);
  const double g11 = q.q0 * q.q0 * (2.0 * f + c) + q.q1 * q.q1 * (2.0 * f - c);
  const double g12 = sign_of(h) * 2.0 * q.q0 * q.q1 * cauchy_coeff(d, ah);
  return {g11, g12};
}

BivariateAcvf acvf_Y_boundary(double d, double q1, int sign, long h) {
  specfun::require_memory_parameter(d);
  const long ah = h < 0 ? -h : h;
  const double hh = static_cast<double>(ah);
  const double c = std::cos(pi * d);
  const double ratio = specfun::gamma_ratio(hh + d, hh + 1.0 - d);
  const double cross = specfun::gamma_ratio(2.0 * d + hh, 1.0 + hh) / specfun::gamma(2.0 * d);
  const double ind = ah == 0 ? 2.0 : 1.0;
  const double g11 = q1 * q1 *
                     (4.0 * specfun::gamma(1.0 - 2.0 * d) * std::sin(pi * d) / (1.0 + c) * ratio / pi -
                      2.0 * c / (1.0 + c) * cross * ind);
  const double g12 = sign * sign_of(h) * std::sqrt((1.0 - c) / (1.0 + c)) * 2.0 * q1 * q1 / specfun::gamma(2.0 * d) *
                     specfun::gamma_ratio(hh + 2.0 * d, 1.0 + hh);
  return {g11, g12};
}

double acvf_frmod0(const FrmodSpec& spec, long h) {
  const auto y = acvf_Y(spec.mf.d, spec.q, h);
  const double w = spec.mf.lambda0 * static_cast<double>(h);
  return std::cos(w) * y.gamma11 - std::sin(w) * y.gamma12;
}

ScalarAcvf acvf_frmod(const FrmodSpec& spec, std::size_t H, std::optional<std::size_t> K) {
  spec.validate();
  if (!spec.has_arma()) {
    ScalarAcvf out;
    out.values.resize(H + 1);
    for (std::size_t h = 0; h <= H; ++h) out.values[h] = acvf_frmod0(spec, static_cast<long>(h));
    return out;
  }

  std::size_t trunc = spec.ma.size();
  double rho = 0.0;
  if (!spec.ar.empty()) {
    std::vector<double> phi(spec.ar.size() + 1);
    phi[0] = 1.0;
    for (std::size_t i = 0; i < spec.ar.size(); ++i) phi[i + 1] = -spec.ar[i];
    rho = 1.0 / min_root_modulus(phi);
    if (K) {
      trunc = *K;
    } else {
      trunc = spec.ma.size() + static_cast<std::size_t>(std::ceil(std::log(1e-12) / std::log(rho))) + spec.ar.size();
    }
  }

  const std::size_t extra = spec.ar.empty() ? 0 : 2 * trunc + 64;
  const auto psi_all = psi_weights(spec.ar, spec.ma, trunc + extra);
  const std::vector<double> psi(psi_all.begin(), psi_all.begin() + static_cast<long>(trunc) + 1);

  // w(m) = Σ_j ψ_j ψ_{j+m}, so that γ(h) = Σ_m w(m) γ̃(h+m).
  const long T = static_cast<long>(trunc);
  std::vector<double> w(static_cast<std::size_t>(T) + 1, 0.0);
  for (long m = 0; m <= T; ++m) {
    double s = 0.0;
    for (long j = 0; j + m <= T; ++j) s += psi[static_cast<std::size_t>(j)] * psi[static_cast<std::size_t>(j + m)];
    w[static_cast<std::size_t>(m)] = s;
  }

  FrmodSpec base = spec;
  base.ar.clear();
  base.ma.clear();
  std::vector<double> base_acvf(H + trunc + 1);
  for (std::size_t h = 0; h < base_acvf.size(); ++h) base_acvf[h] = acvf_frmod0(base, static_cast<long>(h));
  auto base_at = [&](long h) { return base_acvf[static_cast<std::size_t>(h < 0 ? -h : h)]; };

  ScalarAcvf out;
  out.values.resize(H + 1);
  for (std::size_t h = 0; h <= H; ++h) {
    const long hh = static_cast<long>(h);
    double s = w[0] * base_at(hh);
    for (long m = 1; m <= T; ++m) s += w[static_cast<std::size_t>(m)] * (base_at(hh + m) + base_at(hh - m));
    out.values[h] = s;
  }

  if (!spec.ar.empty()) {
    double head = 0.0;
    for (double p : psi) head += std::abs(p);
    double tail = 0.0;
    for (std::size_t j = trunc + 1; j < psi_all.size(); ++j) tail += std::abs(psi_all[j]);
    // Geometric remainder beyond the computed weights.
    tail += std::abs(psi_all.back()) * rho / (1.0 - rho);
    out.tail_bound = base_acvf[0] * (2.0 * head * tail + tail * tail);
  }
  return out;
}

double acvf_asym(const AsymSpec& spec, long h) {
  const long ah = h < 0 ? -h : h;
  const double hh = static_cast<double>(ah);
  const double ind = ah == 0 ? 2.0 : 1.0;
  struct Terms {
    double abc;  // 𝔄 − 𝔅 − ℭ
    double dd;   // 𝔇
  };
  auto terms = [&](double d) {
    const double c = std::cos(pi * d);
    const double fa = 4.0 * specfun::gamma(1.0 - 2.0 * d) * std::sin(pi * d) / (1.0 + c) *
                      specfun::gamma_ratio(hh + d, hh + 1.0 - d) / pi;
    const double fb = 2.0 * c / (1.0 + c) * specfun::gamma_ratio(2.0 * d + hh, 1.0 + hh) / specfun::gamma(2.0 * d);
    const double fd = std::sqrt((1.0 - c) / (1.0 + c)) * 2.0 / specfun::gamma(2.0 * d) *
                      specfun::gamma_ratio(hh + 2.0 * d, 1.0 + hh);
    return Terms{fa - fb * ind, fd};
  };
  const Terms p = terms(spec.d_plus);
  const Terms m = terms(spec.d_minus);
  const double qp = spec.q1_plus * spec.q1_plus;
  const double qm = spec.q1_minus * spec.q1_minus;
  const double w = spec.lambda0 * static_cast<double>(h);
  return std::cos(w) * (qp * p.abc + qm * m.abc) - std::sin(w) * sign_of(h) * (qp * p.dd - qm * m.dd);
}

namespace {

double factor_acvf(const FactorSpec& c, long h) {
  if (const auto* f = std::get_if<FrmodSpec>(&c)) {
    if (!f->has_arma()) return acvf_frmod0(*f, h);
    const auto ah = static_cast<std::size_t>(h < 0 ? -h : h);
    return acvf_frmod(*f, ah).values[ah];
  }
  return acvf_asym(std::get<AsymSpec>(c), h);
}

}  // namespace

double acvf_multifactor(const MultiFactorSpec& spec, long h) {
  double s = 0.0;
  for (const auto& c : spec.components) s += factor_acvf(c, h);
  return s;
}

ScalarAcvf acvf(const ModelSpec& m, std::size_t H) {
  validate(m);
  if (const auto* f = std::get_if<FrmodSpec>(&m)) return acvf_frmod(*f, H);
  ScalarAcvf out;
  out.values.assign(H + 1, 0.0);
  auto add_factor = [&](const FactorSpec& c) {
    if (const auto* f = std::get_if<FrmodSpec>(&c)) {
      const auto part = acvf_frmod(*f, H);
      for (std::size_t h = 0; h <= H; ++h) out.values[h] += part.values[h];
      out.tail_bound += part.tail_bound;
    } else {
      const auto& a = std::get<AsymSpec>(c);
      for (std::size_t h = 0; h <= H; ++h) out.values[h] += acvf_asym(a, static_cast<long>(h));
    }
  };
  if (const auto* a = std::get_if<AsymSpec>(&m)) {
    add_factor(*a);
  } else {
    for (const auto& c : std::get<MultiFactorSpec>(m).components) add_factor(c);
  }
  return out;
}

LinearCoefficients linear_coefficients(double d, const QPair& q, std::size_t K) {
  const auto c = specfun::frac_coeff_seq(d, K);
  LinearCoefficients out;
  out.K = K;
  out.a0.resize(2 * K + 1);
  out.a1.resize(2 * K + 1);
  for (std::size_t k = 1; k <= K; ++k) {
    out.a0[K + k] = c.values[k] * q.q0;
    out.a0[K - k] = c.values[k] * q.q0;
    out.a1[K + k] = c.values[k] * q.q1;
    out.a1[K - k] = -c.values[k] * q.q1;
  }
  out.a0[K] = 2.0 * q.q0;
  out.a1[K] = 0.0;
  return out;
}

Matrix2 acvf_oracle_Y(const LinearCoefficients& coeffs, long h) {
  const long K = static_cast<long>(coeffs.K);
  const long lo = std::max(-K, -K - h);
  const long hi = std::min(K, K - h);
  double m11 = 0.0, m12 = 0.0, m21 = 0.0, m22 = 0.0;
  const double* a0 = coeffs.a0.data() + K;
  const double* a1 = coeffs.a1.data() + K;
  for (long l = lo; l <= hi; ++l) {
    // A_{l+h} A_lᵀ with A = [[a0, a1], [−a1, a0]]
    const double p0 = a0[l + h], p1 = a1[l + h];
    const double b0 = a0[l], b1 = a1[l];
    m11 += p0 * b0 + p1 * b1;
    m12 += -p0 * b1 + p1 * b0;
    m21 += -p1 * b0 + p0 * b1;
    m22 += p1 * b1 + p0 * b0;
  }
  return {m11, m12, m21, m22};
}

double acvf_oracle(double d, const QPair& q, double lambda0, long h, std::size_t K) {
  const long ah = h < 0 ? -h : h;
  if (K < static_cast<std::size_t>(ah) + 1) throw DomainError("acvf_oracle: truncation K must be at least |h| + 1");
  const auto coeffs = linear_coefficients(d, q, K);
  const auto g = acvf_oracle_Y(coeffs, h);
  const double w = lambda0 * static_cast<double>(h);
  return std::cos(w) * g[0] - std::sin(w) * g[1];
}

std::vector<double> acvf_oracle_batch(double d, const QPair& q, double lambda0, std::size_t H, std::size_t K) {
  if (K < H + 1) throw DomainError("acvf_oracle_batch: truncation K must be at least H + 1");
  const auto coeffs = linear_coefficients(d, q, K);
  std::vector<double> out(H + 1);
  for (std::size_t h = 0; h <= H; ++h) {
    const auto g = acvf_oracle_Y(coeffs, static_cast<long>(h));
    const double w = lambda0 * static_cast<double>(h);
    out[h] = std::cos(w) * g[0] - std::sin(w) * g[1];
  }
  return out;
}

double oracle_tail_scale(double d, std::size_t K) { return std::pow(static_cast<double>(K), 2.0 * d - 1.0); }

double asymptotic_envelope(double d, const TimeLimit& t, double lambda0, long h) {
  if (h < 1) throw DomainError("asymptotic_envelope: lag must be at least 1");
  const double hh = static_cast<double>(h);
  return t.c_gamma * std::cos(lambda0 * hh + t.phi) * std::pow(hh, 2.0 * d - 1.0);
}

double min_root_modulus(std::span<const double> coefficients) {
  std::size_t n = coefficients.size();
  while (n > 0 && coefficients[n - 1] == 0.0) --n;
  if (n <= 1) return std::numeric_limits<double>::infinity();
  const std::size_t deg = n - 1;
  // Companion matrix of the monic polynomial z^deg + … + c_0/c_deg.
  Eigen::MatrixXd companion = Eigen::MatrixXd::Zero(static_cast<long>(deg), static_cast<long>(deg));
  for (std::size_t i = 1; i < deg; ++i) companion(static_cast<long>(i), static_cast<long>(i - 1)) = 1.0;
  for (std::size_t i = 0; i < deg; ++i) {
    companion(static_cast<long>(i), static_cast<long>(deg - 1)) = -coefficients[i] / coefficients[deg];
  }
  const Eigen::VectorXcd roots = companion.eigenvalues();
  double m = std::numeric_limits<double>::infinity();
  for (long i = 0; i < roots.size(); ++i) m = std::min(m, std::abs(roots(i)));
  return m;
}

std::vector<double> psi_weights(std::span<const double> ar, std::span<const double> ma, std::size_t K) {
  std::vector<double> psi(K + 1, 0.0);
  psi[0] = 1.0;
  for (std::size_t j = 1; j <= K; ++j) {
    double s = j <= ma.size() ? ma[j - 1] : 0.0;
    for (std::size_t i = 1; i <= std::min(j, ar.size()); ++i) s += ar[i - 1] * psi[j - i];
    psi[j] = s;
  }
  return psi;
}

double toeplitz_min_eigenvalue(std::span<const double> gamma, std::size_t size) {
  if (gamma.size() < size) throw DomainError("toeplitz_min_eigenvalue: not enough lags");
  const long n = static_cast<long>(size);
  Eigen::MatrixXd t(n, n);
  for (long i = 0; i < n; ++i)
    for (long j = 0; j < n; ++j) t(i, j) = gamma[static_cast<std::size_t>(i > j ? i - j : j - i)];
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(t, Eigen::EigenvaluesOnly);
  return solver.eigenvalues().minCoeff();
}

}  // namespace model
}  // namespace frmod
