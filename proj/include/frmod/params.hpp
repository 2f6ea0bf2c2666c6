#pragma once

#include <span>
#include <vector>

namespace frmod {

/// Memory parameter d ∈ (0, 1/2) paired with the cyclical frequency λ0 ∈ (0, π).
struct MemoryFrequency {
  double d = 0.0;
  double lambda0 = 0.0;

  /// Throws DomainError if either value lies outside its open interval.
  void validate() const;
};

/// Amplitudes of the bivariate FARIMA(0,D,0) generator matrix Q+.
struct QPair {
  double q0 = 0.0;
  double q1 = 0.0;
};

/// Entries of the limiting coefficient matrix A+ of the linear representation.
struct APair {
  double a0 = 0.0;
  double a1 = 0.0;
};

/// Limiting bivariate ACVF constants: R11 = r0, R12 = −r1.
struct RPair {
  double r0 = 0.0;
  double r1 = 0.0;
};

/// Limiting bivariate spectral constants: f11 ~ g0 λ^{−2d}, f12 ~ i g1 λ^{−2d}.
struct GPair {
  double g0 = 0.0;
  double g1 = 0.0;
};

/// γ_X(h) ≃ c_gamma cos(λ0 h + phi) h^{2d−1}.
struct TimeLimit {
  double c_gamma = 0.0;
  double phi = 0.0;
};

/// f_X(λ) ~ cf± |λ − λ0|^{−2d} as λ → λ0±.
struct SpecLimit {
  double cf_plus = 0.0;
  double cf_minus = 0.0;
};

struct Interval {
  double lo = 0.0;
  double hi = 0.0;
  bool contains(double x, double tol = 0.0) const { return x >= lo - tol && x <= hi + tol; }
};

enum class Branch { plus, minus };

namespace params {

/// Tolerance used for phase comparisons at the edges of I_d.
inline constexpr double kPhaseTolerance = 1e-9;

/// I_d = [(d − 1/2)π, (1/2 − d)π].
Interval admissible_interval(double d);

APair q_to_a(const QPair& q, double d);
RPair a_to_r(const APair& a, double d);

/// Inverts a_to_r. Throws InfeasibleLimit when r0² < tan²(πd) r1².
APair r_to_a(const RPair& r, double d, Branch branch = Branch::plus);

RPair q_to_r(const QPair& q, double d);
GPair r_to_g(const RPair& r, double d);
/// g0, g1 written directly in terms of q0, q1.
GPair q_to_g(const QPair& q, double d);

TimeLimit r_to_timelimit(const RPair& r);
RPair timelimit_to_r(const TimeLimit& t);

/// cf± = (c_γ/2π) Γ(2d) cos(πd ∓ φ). Throws InadmissiblePhase if φ ∉ I_d.
SpecLimit timelimit_to_speclimit(const TimeLimit& t, double d);
/// Inverse of timelimit_to_speclimit.
TimeLimit speclimit_to_timelimit(const SpecLimit& s, double d);

/// One QPair attaining the requested (c_γ, φ).
QPair target_phase_to_q(const TimeLimit& t, double d);

/// q0 placing the model on the boundary φ = sign·(1/2 − d)π; sign must be ±1.
double boundary_q0(double d, double q1, int sign);

struct PhiPoint {
  double q1 = 0.0;
  double phi = 0.0;
};

/// φ as a function of q1 for fixed (d, q0).
std::vector<PhiPoint> phi_curve(double d, double q0, std::span<const double> q1_grid);

/// Δ = r0² − tan²(πd) r1².
double discriminant(const RPair& r, double d);

}  // namespace params
}  // namespace frmod
