#pragma once

#include <array>
#include <cstddef>
#include <optional>
#include <span>
#include <variant>
#include <vector>

#include "frmod/params.hpp"

namespace frmod {

/// FRMod(p,d,q): an ARMA(p,q) filter applied to the random modulation of a
/// bivariate FARIMA(0,D,0) series.
struct FrmodSpec {
  MemoryFrequency mf;
  QPair q;
  std::vector<double> ar;  // φ_1..φ_p of Φ(z) = 1 − φ_1 z − … − φ_p z^p
  std::vector<double> ma;  // θ_1..θ_q of Θ(z) = 1 + θ_1 z + … + θ_q z^q

  bool has_arma() const { return !ar.empty() || !ma.empty(); }
  /// Throws DomainError / InvalidPolynomial on an invalid specification.
  void validate() const;
};

/// Sum of two uncorrelated boundary-case FRMod(0,d,0) series with memory d+
/// to the right of λ0 and d− to the left.
struct AsymSpec {
  double lambda0 = 0.0;
  double d_plus = 0.0;
  double d_minus = 0.0;
  double q1_plus = 0.0;
  double q1_minus = 0.0;

  void validate() const;
  /// Component diverging on the right of λ0 (q0 = +tan(πd+/2) q1+).
  FrmodSpec plus_component() const;
  /// Component diverging on the left of λ0 (q0 = −tan(πd−/2) q1−).
  FrmodSpec minus_component() const;
  double d_star() const;
};

using FactorSpec = std::variant<FrmodSpec, AsymSpec>;

struct MultiFactorSpec {
  std::vector<FactorSpec> components;
  void validate() const;
};

using ModelSpec = std::variant<FrmodSpec, AsymSpec, MultiFactorSpec>;

void validate(const ModelSpec& model);

/// γ(0..H) of a stationary scalar series.
struct ScalarAcvf {
  std::vector<double> values;
  /// Absolute bound on truncation error of values (0 when exact).
  double tail_bound = 0.0;

  std::size_t max_lag() const { return values.empty() ? 0 : values.size() - 1; }
  /// γ(h) for any |h| ≤ H by evenness.
  double operator()(long h) const { return values.at(static_cast<std::size_t>(h < 0 ? -h : h)); }
};

/// One diagonal and one off-diagonal entry of the bivariate ACVF γ_Y(h).
struct BivariateAcvf {
  double gamma11 = 0.0;
  double gamma12 = 0.0;
};

/// Full 2×2 γ_Y(h) = Σ_l A_{l+h} A_lᵀ (row-major).
using Matrix2 = std::array<double, 4>;

namespace model {

/// Closed-form γ_{Y,11}(h), γ_{Y,12}(h) of the bivariate FARIMA(0,D,0) series.
BivariateAcvf acvf_Y(double d, const QPair& q, long h);

/// Same quantities written in the boundary parameterisation q0 = sign·tan(πd/2)·q1.
BivariateAcvf acvf_Y_boundary(double d, double q1, int sign, long h);

/// γ_X(h) = cos(λ0 h) γ11(h) − sin(λ0 h) γ12(h) for p = q = 0.
double acvf_frmod0(const FrmodSpec& spec, long h);

/// γ(0..H) of FRMod(p,d,q). For p > 0 the ψ-weights of Θ/Φ are truncated
/// after K terms (chosen so that ρ^K < 1e-12 when K is not given).
ScalarAcvf acvf_frmod(const FrmodSpec& spec, std::size_t H, std::optional<std::size_t> K = std::nullopt);

/// Closed-form asymmetric-memory ACVF written with the 𝔄, 𝔅, ℭ, 𝔇 terms.
double acvf_asym(const AsymSpec& spec, long h);

double acvf_multifactor(const MultiFactorSpec& spec, long h);

/// γ(0..H) for any model kind.
ScalarAcvf acvf(const ModelSpec& model, std::size_t H);

/// a_{0,k}, a_{1,k} of the two-sided linear representation of Y.
struct LinearCoefficients {
  std::size_t K = 0;
  std::vector<double> a0;  // index k + K for k ∈ [−K, K]
  std::vector<double> a1;

  double a0_at(long k) const { return a0[static_cast<std::size_t>(k + static_cast<long>(K))]; }
  double a1_at(long k) const { return a1[static_cast<std::size_t>(k + static_cast<long>(K))]; }
};

LinearCoefficients linear_coefficients(double d, const QPair& q, std::size_t K);

/// Brute-force γ_Y(h) from the truncated coefficient sums.
Matrix2 acvf_oracle_Y(const LinearCoefficients& coeffs, long h);

/// Brute-force γ_X(h) with coefficients truncated at |l| ≤ K. Requires K ≥ |h| + 1.
double acvf_oracle(double d, const QPair& q, double lambda0, long h, std::size_t K);

/// Batch form of acvf_oracle for h = 0..H sharing one coefficient table.
std::vector<double> acvf_oracle_batch(double d, const QPair& q, double lambda0, std::size_t H, std::size_t K);

/// Order of magnitude of the oracle's truncation error, K^{2d−1}.
double oracle_tail_scale(double d, std::size_t K);

/// c_γ cos(λ0 h + φ) h^{2d−1}; h ≥ 1.
double asymptotic_envelope(double d, const TimeLimit& t, double lambda0, long h);

/// Smallest modulus among the roots of c_0 + c_1 z + … + c_n z^n (infinity for constants).
double min_root_modulus(std::span<const double> coefficients);

/// ψ_0..ψ_K of Θ(z)/Φ(z).
std::vector<double> psi_weights(std::span<const double> ar, std::span<const double> ma, std::size_t K);

/// Smallest eigenvalue of the size×size Toeplitz matrix built from γ(0..size−1).
double toeplitz_min_eigenvalue(std::span<const double> gamma, std::size_t size);

}  // namespace model
}  // namespace frmod
