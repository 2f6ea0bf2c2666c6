#pragma once

#include <cstddef>
#include <vector>

#include "frmod/model.hpp"

namespace frmod {

/// f_{Y,11}(λ) and the real g with f_{Y,12}(λ) = i·g(λ).
struct YSpectrum {
  double f11 = 0.0;
  double f12_imag = 0.0;
};

struct SpectrumValue {
  double lambda = 0.0;
  double f11 = 0.0;
  double f12_imag = 0.0;
  double fx = 0.0;
};

struct SpectrumGrid {
  std::vector<double> lambdas;
  std::vector<double> values;
  std::vector<double> singular_points;
};

struct BoundaryConstants {
  double cf_divergent = 0.0;
  double f_at_singularity_other_side = 0.0;
};

struct QuadratureResult {
  double value = 0.0;
  double error = 0.0;
};

namespace spectrum {

/// Maps any real λ into (−π, π].
double wrap(double lambda);

YSpectrum spec_Y(double d, const QPair& q, double lambda);

/// Univariate spectral density of FRMod(p,d,q).
double spec_X(const FrmodSpec& spec, double lambda);

/// All three components of the spectrum at λ (Y-parts taken at λ itself).
SpectrumValue evaluate(const FrmodSpec& spec, double lambda);

/// Limits of the boundary model q0 = sign·tan(πd/2)·q1 with cyclical frequency λ0.
BoundaryConstants spec_boundary_constants(double d, double q1, double lambda0, int sign);

double spec_asym(const AsymSpec& spec, double lambda);
double spec_multifactor(const MultiFactorSpec& spec, double lambda);
double spec(const ModelSpec& model, double lambda);

/// |Θ(e^{−iλ})|² / |Φ(e^{−iλ})|².
double arma_gain(const std::vector<double>& ar, const std::vector<double>& ma, double lambda);

/// Singular frequencies in [0, π], sorted.
std::vector<double> singular_points(const ModelSpec& model);

/// Largest memory parameter present in the model.
double max_memory(const ModelSpec& model);

/// `points` midpoints of a uniform partition of (0, π), minus those within
/// `exclusion` of a singular point.
SpectrumGrid make_grid(const ModelSpec& model, std::size_t points, double exclusion = 1e-4);

/// γ(h) = 2∫₀^π cos(hλ) f(λ) dλ. Throws QuadratureFailure if the error
/// estimate exceeds tol.
QuadratureResult acvf_from_spectrum(const ModelSpec& model, long h, double tol = 1e-8);

}  // namespace spectrum
}  // namespace frmod
