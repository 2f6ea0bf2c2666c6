#pragma once

#include <cstddef>
#include <vector>

namespace frmod::specfun {

/// ln Γ(x) for x > 0. Throws DomainError otherwise.
double log_gamma(double x);

/// Γ(a)/Γ(b) evaluated as exp(ln Γ(a) − ln Γ(b)).
double gamma_ratio(double a, double b);

/// Γ(x) for moderate positive x (exp of log_gamma).
double gamma(double x);

/// Taylor coefficients of (1 − x)^{−d}: c_{d,k} = Γ(k+d)/(Γ(k+1)Γ(d)).
struct FracCoeffSeq {
  double d = 0.0;
  std::vector<double> values;  // values[0..K]

  std::size_t truncation() const { return values.empty() ? 0 : values.size() - 1; }
};

/// c_{d,0..K} by the recurrence c_k = c_{k−1}(k−1+d)/k. Requires d ∈ (0, 1/2).
FracCoeffSeq frac_coeff_seq(double d, std::size_t K);

/// Throws DomainError unless 0 < d < 1/2.
void require_memory_parameter(double d);

}  // namespace frmod::specfun
