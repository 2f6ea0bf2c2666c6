#include "frmod/spectrum.hpp"

#include <algorithm>
#include <boost/math/quadrature/tanh_sinh.hpp>
#include <cmath>
#include <complex>
#include <numbers>
#include <sstream>

#include "frmod/errors.hpp"
#include "frmod/specfun.hpp"

namespace frmod::spectrum {
namespace {

constexpr double pi = std::numbers::pi;

// A frequency written as base + offset. Quadrature near a singularity keeps
// the (tiny) offset separate so that λ − λ0 does not lose it to rounding.
struct Freq {
  double base = 0.0;
  double offset = 0.0;
  double value() const { return base + offset; }
  double shifted(double by) const { return wrap((base + by) + offset); }
};

double spec_Y11_abs(double d, const QPair& q, double a) {
  const double s = std::pow(2.0 * std::sin(0.5 * a), -2.0 * d);
  return s * ((q.q0 * q.q0 - q.q1 * q.q1) * std::cos((a - pi) * d) + (q.q0 * q.q0 + q.q1 * q.q1)) / pi;
}

double spec_Y12_abs(double d, const QPair& q, double a) {
  const double s = std::pow(2.0 * std::sin(0.5 * a), -2.0 * d);
  return 2.0 * q.q0 * q.q1 * s * std::sin((a - pi) * d) / pi;
}

double frmod_at(const FrmodSpec& spec, const Freq& f) {
  const double lm = f.shifted(-spec.mf.lambda0);
  const double lp = f.shifted(spec.mf.lambda0);
  if (lm == 0.0 || lp == 0.0) {
    std::ostringstream os;
    os << "spectral density is singular at lambda = " << f.value();
    throw SingularityError(os.str());
  }
  const YSpectrum m = spec_Y(spec.mf.d, spec.q, lm);
  const YSpectrum p = spec_Y(spec.mf.d, spec.q, lp);
  double fx = 0.5 * (m.f11 + p.f11) - 0.5 * (m.f12_imag - p.f12_imag);
  if (spec.has_arma()) fx *= arma_gain(spec.ar, spec.ma, f.value());
  return fx;
}

double asym_at(const AsymSpec& spec, const Freq& f) {
  double s = 0.0;
  if (spec.q1_plus != 0.0) s += frmod_at(spec.plus_component(), f);
  if (spec.q1_minus != 0.0) s += frmod_at(spec.minus_component(), f);
  return s;
}

double model_at(const ModelSpec& model, const Freq& f) {
  if (const auto* s = std::get_if<FrmodSpec>(&model)) return frmod_at(*s, f);
  if (const auto* s = std::get_if<AsymSpec>(&model)) return asym_at(*s, f);
  double total = 0.0;
  for (const auto& c : std::get<MultiFactorSpec>(model).components) {
    total += std::visit(
        [&](const auto& s) {
          if constexpr (std::is_same_v<std::decay_t<decltype(s)>, FrmodSpec>) {
            return frmod_at(s, f);
          } else {
            return asym_at(s, f);
          }
        },
        c);
  }
  return total;
}

}  // namespace

double wrap(double lambda) {
  double r = std::remainder(lambda, 2.0 * pi);
  if (r <= -pi) r += 2.0 * pi;
  return r;
}

YSpectrum spec_Y(double d, const QPair& q, double lambda) {
  specfun::require_memory_parameter(d);
  const double l = wrap(lambda);
  if (l == 0.0) throw SingularityError("f_Y is singular at lambda = 0");
  const double a = std::abs(l);
  const double g = spec_Y12_abs(d, q, a);
  return {spec_Y11_abs(d, q, a), l > 0 ? g : -g};
}

double spec_X(const FrmodSpec& spec, double lambda) { return frmod_at(spec, {lambda, 0.0}); }

SpectrumValue evaluate(const FrmodSpec& spec, double lambda) {
  SpectrumValue v;
  v.lambda = wrap(lambda);
  if (v.lambda != 0.0) {
    const auto y = spec_Y(spec.mf.d, spec.q, v.lambda);
    v.f11 = y.f11;
    v.f12_imag = y.f12_imag;
  }
  v.fx = spec_X(spec, v.lambda);
  return v;
}

BoundaryConstants spec_boundary_constants(double d, double q1, double lambda0, int sign) {
  specfun::require_memory_parameter(d);
  if (sign != 1 && sign != -1) throw DomainError("boundary sign must be +1 or -1");
  const double den = pi * (1.0 + std::cos(pi * d));
  BoundaryConstants b;
  b.cf_divergent = q1 * q1 * (1.0 - std::cos(2.0 * pi * d)) / den;
  b.f_at_singularity_other_side = std::pow(2.0, -2.0 * d) * std::pow(std::sin(lambda0), -2.0 * d) *
                                  (1.0 - std::cos(2.0 * (sign > 0 ? lambda0 : pi - lambda0) * d)) * q1 * q1 / den;
  return b;
}

double spec_asym(const AsymSpec& spec, double lambda) { return asym_at(spec, {lambda, 0.0}); }

double spec_multifactor(const MultiFactorSpec& spec, double lambda) { return model_at(spec, {lambda, 0.0}); }

double spec(const ModelSpec& model, double lambda) { return model_at(model, {lambda, 0.0}); }

double arma_gain(const std::vector<double>& ar, const std::vector<double>& ma, double lambda) {
  const std::complex<double> z = std::polar(1.0, -lambda);
  std::complex<double> theta = 1.0, phi = 1.0, zk = 1.0;
  for (std::size_t k = 0; k < std::max(ar.size(), ma.size()); ++k) {
    zk *= z;
    if (k < ma.size()) theta += ma[k] * zk;
    if (k < ar.size()) phi -= ar[k] * zk;
  }
  return std::norm(theta) / std::norm(phi);
}

std::vector<double> singular_points(const ModelSpec& model) {
  std::vector<double> out;
  auto add = [&](const auto& s) {
    if constexpr (std::is_same_v<std::decay_t<decltype(s)>, FrmodSpec>) {
      out.push_back(s.mf.lambda0);
    } else {
      out.push_back(s.lambda0);
    }
  };
  if (const auto* m = std::get_if<MultiFactorSpec>(&model)) {
    for (const auto& c : m->components) std::visit(add, c);
  } else {
    std::visit([&](const auto& s) {
      if constexpr (!std::is_same_v<std::decay_t<decltype(s)>, MultiFactorSpec>) add(s);
    }, model);
  }
  std::sort(out.begin(), out.end());
  out.erase(std::unique(out.begin(), out.end()), out.end());
  return out;
}

double max_memory(const ModelSpec& model) {
  auto of = [](const auto& s) -> double {
    using T = std::decay_t<decltype(s)>;
    if constexpr (std::is_same_v<T, FrmodSpec>) {
      return s.mf.d;
    } else if constexpr (std::is_same_v<T, AsymSpec>) {
      return s.d_star();
    } else {
      return 0.0;
    }
  };
  if (const auto* m = std::get_if<MultiFactorSpec>(&model)) {
    double d = 0.0;
    for (const auto& c : m->components) d = std::max(d, std::visit(of, c));
    return d;
  }
  return std::visit(of, model);
}

SpectrumGrid make_grid(const ModelSpec& model, std::size_t points, double exclusion) {
  SpectrumGrid g;
  g.singular_points = singular_points(model);
  const double step = pi / static_cast<double>(points);
  for (std::size_t j = 0; j < points; ++j) {
    const double l = (static_cast<double>(j) + 0.5) * step;
    const bool near = std::any_of(g.singular_points.begin(), g.singular_points.end(), [&](double s) {
      return std::abs(l - s) <= std::max(exclusion, 1e-12);
    });
    if (near) continue;
    g.lambdas.push_back(l);
    g.values.push_back(spec(model, l));
  }
  return g;
}

QuadratureResult acvf_from_spectrum(const ModelSpec& model, long h, double tol) {
  validate(model);
  thread_local boost::math::quadrature::tanh_sinh<double> integrator(15);
  const auto sing = singular_points(model);
  const double p = 1.0 / (1.0 - 2.0 * max_memory(model));
  const double hh = static_cast<double>(h);

  // Each piece has at most one singular endpoint, at `anchor`; λ = anchor + dir·u^p.
  struct Piece {
    double anchor;
    double length;
    double dir;
    bool singular;
  };
  std::vector<Piece> pieces;
  std::vector<double> knots{0.0};
  for (double s : sing) knots.push_back(s);
  knots.push_back(pi);
  auto is_sing = [&](double x) { return std::find(sing.begin(), sing.end(), x) != sing.end(); };
  for (std::size_t i = 0; i + 1 < knots.size(); ++i) {
    const double a = knots[i], b = knots[i + 1];
    const bool sa = is_sing(a), sb = is_sing(b);
    if (sa && sb) {
      const double m = 0.5 * (a + b);
      pieces.push_back({a, m - a, 1.0, true});
      pieces.push_back({b, b - m, -1.0, true});
    } else if (sa) {
      pieces.push_back({a, b - a, 1.0, true});
    } else if (sb) {
      pieces.push_back({b, b - a, -1.0, true});
    } else {
      pieces.push_back({a, b - a, 1.0, false});
    }
  }

  QuadratureResult total;
  for (const auto& pc : pieces) {
    double err = 0.0;
    double v = 0.0;
    if (pc.singular) {
      auto integrand = [&](double u) -> double {
        const double delta = std::pow(u, p);
        // The integrand is bounded, so the region where δ underflows carries no weight.
        if (!(delta > 1e-200)) return 0.0;
        const Freq f{pc.anchor, pc.dir * delta};
        return std::cos(hh * f.value()) * model_at(model, f) * p * std::pow(u, p - 1.0);
      };
      v = integrator.integrate(integrand, 0.0, std::pow(pc.length, 1.0 / p), 1e-12, &err);
    } else {
      auto integrand = [&](double l) -> double { return std::cos(hh * l) * model_at(model, {l, 0.0}); };
      v = integrator.integrate(integrand, pc.anchor, pc.anchor + pc.length, 1e-12, &err);
    }
    total.value += 2.0 * v;
    total.error += 2.0 * err;
  }
  if (!(total.error <= tol) || !std::isfinite(total.value)) {
    std::ostringstream os;
    os << "quadrature for gamma(" << h << ") did not converge: error estimate " << total.error << " > " << tol;
    throw QuadratureFailure(os.str(), total.value, total.error);
  }
  return total;
}

}  // namespace frmod::spectrum
