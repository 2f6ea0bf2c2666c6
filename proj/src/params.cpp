#include "frmod/params.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <string>

#include "frmod/errors.hpp"
#include "frmod/specfun.hpp"

namespace frmod {

void MemoryFrequency::validate() const {
  specfun::require_memory_parameter(d);
  if (!(lambda0 > 0.0 && lambda0 < std::numbers::pi)) {
    throw DomainError("cyclical frequency lambda0 must lie in (0, pi), got " + std::to_string(lambda0));
  }
}

namespace params {
namespace {

constexpr double pi = std::numbers::pi;

using specfun::require_memory_parameter;

// Γ²(d)/Γ(2d)
double gamma_sq_ratio(double d) { return std::exp(2.0 * specfun::log_gamma(d) - specfun::log_gamma(2.0 * d)); }

// α = Γ²(d)/Γ(2d) (1/cos(πd) − 1)
double alpha_coeff(double d) { return gamma_sq_ratio(d) * (1.0 / std::cos(pi * d) - 1.0); }

void require_admissible(double phi, double d) {
  const Interval id = admissible_interval(d);
  if (!id.contains(phi, kPhaseTolerance)) {
    throw InadmissiblePhase("phase " + std::to_string(phi) + " outside I_d = [" + std::to_string(id.lo) +
                            ", " + std::to_string(id.hi) + "]");
  }
}

double clamp_unit(double x) { return std::clamp(x, -1.0, 1.0); }

}  // namespace

Interval admissible_interval(double d) {
  require_memory_parameter(d);
  const double half_width = (0.5 - d) * pi;
  return {-half_width, half_width};
}

double discriminant(const RPair& r, double d) {
  const double t = std::tan(pi * d);
  return r.r0 * r.r0 - t * t * r.r1 * r.r1;
}

APair q_to_a(const QPair& q, double d) {
  require_memory_parameter(d);
  const double g = specfun::gamma(d);
  return {q.q0 / g, q.q1 / g};
}

RPair a_to_r(const APair& a, double d) {
  require_memory_parameter(d);
  if (a.a0 == 0.0 && a.a1 == 0.0) throw DomainError("a_to_r: (a0, a1) must not both vanish");
  const double k = gamma_sq_ratio(d);
  const double s0 = a.a0 * a.a0;
  const double s1 = a.a1 * a.a1;
  return {k * ((s0 + s1) / std::cos(pi * d) + (s0 - s1)), -2.0 * a.a0 * a.a1 * k};
}

APair r_to_a(const RPair& r, double d, Branch branch) {
  require_memory_parameter(d);
  if (!(r.r0 > 0.0)) throw DomainError("r_to_a: r0 must be positive");
  const double delta = discriminant(r, d);
  // Relative slack so that boundary constructions (Δ = 0 analytically) are not rejected.
  const double slack = 1e-12 * r.r0 * r.r0;
  if (delta < -slack) {
    throw InfeasibleLimit("r_to_a: discriminant r0^2 - tan^2(pi d) r1^2 = " + std::to_string(delta) +
                          " is negative");
  }
  const double root = std::sqrt(std::max(delta, 0.0));
  const double alpha = alpha_coeff(d);
  const double k = gamma_sq_ratio(d);
  const double nu = branch == Branch::plus ? (r.r0 + root) / (2.0 * alpha) : (r.r0 - root) / (2.0 * alpha);
  const double a1 = std::sqrt(std::max(nu, 0.0));
  if (a1 == 0.0) {
    // ν− = 0 only when r1 = 0; then r0 = k a0² (1/cos(πd) + 1).
    return {std::sqrt(r.r0 / (k * (1.0 / std::cos(pi * d) + 1.0))), 0.0};
  }
  return {-r.r1 / (2.0 * a1 * k), a1};
}

RPair q_to_r(const QPair& q, double d) {
  require_memory_parameter(d);
  const double g2d = specfun::gamma(2.0 * d);
  const double sec = 1.0 / std::cos(pi * d);
  return {(q.q0 * q.q0 * (sec + 1.0) + q.q1 * q.q1 * (sec - 1.0)) / g2d, -2.0 * q.q0 * q.q1 / g2d};
}

GPair r_to_g(const RPair& r, double d) {
  require_memory_parameter(d);
  const double g2d = specfun::gamma(2.0 * d);
  return {g2d * std::cos(pi * d) * r.r0 / pi, g2d * std::sin(pi * d) * r.r1 / pi};
}

GPair q_to_g(const QPair& q, double d) {
  require_memory_parameter(d);
  const double c = std::cos(pi * d);
  return {(q.q0 * q.q0 * (1.0 + c) + q.q1 * q.q1 * (1.0 - c)) / pi, -2.0 * std::sin(pi * d) / pi * q.q0 * q.q1};
}

TimeLimit r_to_timelimit(const RPair& r) {
  if (!(r.r0 > 0.0)) throw DomainError("r_to_timelimit: r0 must be positive");
  const double c = std::hypot(r.r0, r.r1);
  return {c, std::asin(clamp_unit(-r.r1 / c))};
}

RPair timelimit_to_r(const TimeLimit& t) { return {t.c_gamma * std::cos(t.phi), -t.c_gamma * std::sin(t.phi)}; }

SpecLimit timelimit_to_speclimit(const TimeLimit& t, double d) {
  require_memory_parameter(d);
  require_admissible(t.phi, d);
  const double k = t.c_gamma / (2.0 * pi) * specfun::gamma(2.0 * d);
  // Clip the O(tolerance) negative values produced by a phase a hair outside I_d.
  return {std::max(0.0, k * std::cos(pi * d - t.phi)), std::max(0.0, k * std::cos(pi * d + t.phi))};
}

TimeLimit speclimit_to_timelimit(const SpecLimit& s, double d) {
  require_memory_parameter(d);
  if (s.cf_plus < 0.0 || s.cf_minus < 0.0 || !(s.cf_plus + s.cf_minus > 0.0)) {
    throw DomainError("speclimit_to_timelimit: constants must be nonnegative with a positive sum");
  }
  const double p = s.cf_plus;
  const double m = s.cf_minus;
  const double norm = std::sqrt(p * p + m * m - 2.0 * p * m * std::cos(2.0 * pi * d));
  return {2.0 * specfun::gamma(1.0 - 2.0 * d) * norm, std::asin(clamp_unit((p - m) * std::cos(pi * d) / norm))};
}

QPair target_phase_to_q(const TimeLimit& t, double d) {
  require_memory_parameter(d);
  if (!(t.c_gamma > 0.0)) throw DomainError("target_phase_to_q: c_gamma must be positive");
  require_admissible(t.phi, d);
  const double sec_m1 = 1.0 / std::cos(pi * d) - 1.0;
  const double tan_d = std::tan(pi * d);
  const double cphi = std::cos(t.phi);
  const double sphi = std::sin(t.phi);
  const double inner = std::sqrt(std::max(0.0, cphi * cphi - tan_d * tan_d * sphi * sphi));
  const double a1 = std::sqrt(t.c_gamma * (cphi + inner) / (2.0 * gamma_sq_ratio(d) * sec_m1));
  const double a0 = std::sqrt(2.0 * t.c_gamma * specfun::gamma(2.0 * d) * sec_m1) * sphi /
                    (2.0 * specfun::gamma(d) * std::sqrt(cphi + inner));
  const double g = specfun::gamma(d);
  return {g * a0, g * a1};
}

double boundary_q0(double d, double q1, int sign) {
  require_memory_parameter(d);
  if (sign != 1 && sign != -1) throw DomainError("boundary_q0: sign must be +1 or -1");
  return sign * std::sin(pi * d) / (1.0 + std::cos(pi * d)) * q1;
}

std::vector<PhiPoint> phi_curve(double d, double q0, std::span<const double> q1_grid) {
  std::vector<PhiPoint> out;
  out.reserve(q1_grid.size());
  for (double q1 : q1_grid) {
    out.push_back({q1, r_to_timelimit(q_to_r({q0, q1}, d)).phi});
  }
  return out;
}

}  // namespace params
}  // namespace frmod
