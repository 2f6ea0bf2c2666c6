#include "frmod/simulate.hpp"

#include <Eigen/Cholesky>
#include <Eigen/Dense>
#include <algorithm>
#include <cmath>

#include "frmod/errors.hpp"
#include "frmod/fft.hpp"
#include "frmod/specfun.hpp"

namespace frmod {

std::string to_string(Method m) {
  switch (m) {
    case Method::exact_embedding: return "exact-embedding";
    case Method::cholesky: return "cholesky";
    case Method::truncated_linear: return "truncated-linear";
    case Method::modulated_linear: return "modulated-linear";
  }
  return "unknown";
}

namespace simulate {
namespace {

std::string kind_of(const ModelSpec& m) {
  switch (m.index()) {
    case 0: return "frmod";
    case 1: return "asym";
    default: return "multifactor";
  }
}

constexpr std::size_t kDenseCholeskyLimit = 2048;

std::size_t next_pow2(std::size_t x) {
  std::size_t m = 1;
  while (m < x) m <<= 1;
  return m;
}

}  // namespace

std::uint64_t derive_seed(std::uint64_t master, std::uint64_t stream) {
  std::uint64_t z = master + (stream + 1) * 0x9E3779B97F4A7C15ULL;
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
  return z ^ (z >> 31);
}

double NormalStream::uniform() {
  return static_cast<double>(engine_() >> 11) * 0x1.0p-53;
}

double NormalStream::operator()() {
  if (has_cached_) {
    has_cached_ = false;
    return cached_;
  }
  double u, v, s;
  do {
    u = 2.0 * uniform() - 1.0;
    v = 2.0 * uniform() - 1.0;
    s = u * u + v * v;
  } while (s >= 1.0 || s == 0.0);
  const double f = std::sqrt(-2.0 * std::log(s) / s);
  cached_ = v * f;
  has_cached_ = true;
  return u * f;
}

void NormalStream::fill(std::vector<double>& out) {
  for (auto& x : out) x = (*this)();
}

std::vector<std::vector<double>> gaussian_wn(std::uint64_t seed, std::size_t n, int streams) {
  if (streams != 1 && streams != 2) throw DomainError("gaussian_wn: streams must be 1 or 2");
  std::vector<std::vector<double>> out(static_cast<std::size_t>(streams), std::vector<double>(n));
  for (int s = 0; s < streams; ++s) {
    NormalStream g(derive_seed(seed, static_cast<std::uint64_t>(s)));
    g.fill(out[static_cast<std::size_t>(s)]);
  }
  return out;
}

ExactSampler::ExactSampler(const ModelSpec& model, std::size_t n, ExactOptions options)
    : n_(n), kind_(kind_of(model)) {
  if (n < 2) throw DomainError("simulate_exact: n must be at least 2");
  validate(model);
  const std::size_t m0 = next_pow2(2 * (n - 1));
  if (!options.force_cholesky) {
    acvf_ = model::acvf(model, m0 * options.max_growth / 2);
    for (std::size_t m = m0; m <= m0 * options.max_growth; m *= 2) {
      fft::cvec c(m);
      for (std::size_t k = 0; k <= m / 2; ++k) c[k] = acvf_.values[k];
      for (std::size_t k = m / 2 + 1; k < m; ++k) c[k] = acvf_.values[m - k];
      const auto eig = fft::dft(c);
      double emax = 0.0, emin = 0.0;
      for (const auto& e : eig) {
        emax = std::max(emax, e.real());
        emin = std::min(emin, e.real());
      }
      if (emin >= -1e-8 * emax) {
        m_ = m;
        clipped_ = emax > 0.0 ? -emin / emax : 0.0;
        sqrt_eig_.resize(m);
        for (std::size_t k = 0; k < m; ++k) sqrt_eig_[k] = std::sqrt(std::max(eig[k].real(), 0.0) / double(m));
        acvf_.values.resize(n);
        return;
      }
    }
    fallback_ = true;
  } else {
    acvf_ = model::acvf(model, n - 1);
  }

  cholesky_ = true;
  acvf_.values.resize(n);
  jittered_ = acvf_.values;
  jittered_[0] += 1e-10 * acvf_.values[0];
  if (n > kDenseCholeskyLimit) {
    // Durbin-Levinson yields the same triangular factor without n² storage;
    // one dry run here checks positive definiteness up front.
    std::vector<NormalStream> none;
    cholesky_paths(none);
    return;
  }
  const long nn = static_cast<long>(n);
  Eigen::MatrixXd t(nn, nn);
  for (long i = 0; i < nn; ++i)
    for (long j = 0; j < nn; ++j) t(i, j) = jittered_[static_cast<std::size_t>(std::abs(i - j))];
  Eigen::LLT<Eigen::MatrixXd> llt(t);
  if (llt.info() != Eigen::Success) {
    throw NotPositiveDefinite("Toeplitz covariance is not positive definite even after diagonal jitter");
  }
  const Eigen::MatrixXd l = llt.matrixL();
  chol_.resize(n * n);
  for (long i = 0; i < nn; ++i)
    for (long j = 0; j < nn; ++j) chol_[static_cast<std::size_t>(i * nn + j)] = l(i, j);
}

std::vector<std::vector<double>> ExactSampler::cholesky_paths(std::vector<NormalStream>& streams) const {
  std::vector<std::vector<double>> x(streams.size(), std::vector<double>(n_));
  if (!chol_.empty()) {
    std::vector<double> z(n_);
    for (std::size_t p = 0; p < streams.size(); ++p) {
      streams[p].fill(z);
      for (std::size_t i = 0; i < n_; ++i) {
        double acc = 0.0;
        for (std::size_t j = 0; j <= i; ++j) acc += chol_[i * n_ + j] * z[j];
        x[p][i] = acc;
      }
    }
    return x;
  }
  const auto& g = jittered_;
  std::vector<double> phi, prev;
  phi.reserve(n_);
  prev.reserve(n_);
  double v = g[0];
  for (std::size_t t = 0; t < n_; ++t) {
    if (t > 0) {
      double num = g[t];
      for (std::size_t k = 1; k < t; ++k) num -= prev[k - 1] * g[t - k];
      const double ptt = num / v;
      phi.assign(t, 0.0);
      for (std::size_t k = 1; k < t; ++k) phi[k - 1] = prev[k - 1] - ptt * prev[t - k - 1];
      phi[t - 1] = ptt;
      v *= (1.0 - ptt) * (1.0 + ptt);
      prev.swap(phi);
    }
    if (!(v > 0.0)) {
      throw NotPositiveDefinite("Toeplitz covariance is not positive definite even after diagonal jitter");
    }
    const double sd = std::sqrt(v);
    for (std::size_t p = 0; p < streams.size(); ++p) {
      const double* xs = x[p].data();
      double acc = 0.0;
      for (std::size_t k = 1; k <= t; ++k) acc += prev[k - 1] * xs[t - k];
      x[p][t] = acc + sd * streams[p]();
    }
  }
  return x;
}

SeriesSample ExactSampler::blank(std::uint64_t seed) const {
  SeriesSample s;
  s.seed = seed;
  s.method = cholesky_ ? Method::cholesky : Method::exact_embedding;
  s.model_kind = kind_;
  s.embedding_size = m_;
  s.cholesky_fallback = fallback_;
  s.clipped_eigenvalue = clipped_;
  s.values.resize(n_);
  return s;
}

std::array<SeriesSample, 2> ExactSampler::sample_pair(std::uint64_t seed) const {
  std::array<SeriesSample, 2> out{blank(seed), blank(seed)};
  NormalStream g(derive_seed(seed, 0));
  if (cholesky_) {
    // Both paths read consecutive normals from the one stream.
    std::vector<NormalStream> first{g};
    out[0].values = cholesky_paths(first)[0];
    std::vector<NormalStream> second{first[0]};
    out[1].values = cholesky_paths(second)[0];
    return out;
  }
  fft::cvec w(m_);
  for (std::size_t k = 0; k < m_; ++k) {
    const double re = g();
    const double im = g();
    w[k] = {sqrt_eig_[k] * re, sqrt_eig_[k] * im};
  }
  const auto x = fft::dft(w);
  for (std::size_t i = 0; i < n_; ++i) {
    out[0].values[i] = x[i].real();
    out[1].values[i] = x[i].imag();
  }
  return out;
}

SeriesSample ExactSampler::sample(std::uint64_t seed) const {
  if (cholesky_) return std::move(sample_many({seed})[0]);
  return std::move(sample_pair(seed)[0]);
}

std::vector<SeriesSample> ExactSampler::sample_many(const std::vector<std::uint64_t>& seeds) const {
  std::vector<SeriesSample> out;
  out.reserve(seeds.size());
  if (!cholesky_) {
    for (auto s : seeds) out.push_back(std::move(sample_pair(s)[0]));
    return out;
  }
  std::vector<NormalStream> streams;
  for (auto s : seeds) streams.emplace_back(derive_seed(s, 0));
  auto paths = cholesky_paths(streams);
  for (std::size_t i = 0; i < seeds.size(); ++i) {
    out.push_back(blank(seeds[i]));
    out.back().values = std::move(paths[i]);
  }
  return out;
}

SeriesSample simulate_exact(const ModelSpec& model, std::size_t n, std::uint64_t seed, ExactOptions options) {
  return ExactSampler(model, n, options).sample(seed);
}

namespace {

// Noise ε_k for k = −K .. n−1+K, stored at index k + K.
std::array<std::vector<double>, 2> path_noise(std::uint64_t seed, std::size_t n, std::size_t K) {
  auto wn = gaussian_wn(seed, n + 2 * K, 2);
  return {std::move(wn[0]), std::move(wn[1])};
}

void require_plain(const FrmodSpec& spec) {
  spec.validate();
  if (spec.has_arma()) throw DomainError("linear-representation simulation needs p = q = 0; use apply_arma afterwards");
}

}  // namespace

SeriesSample simulate_truncated(const FrmodSpec& spec, std::size_t n, std::uint64_t seed, std::size_t K) {
  require_plain(spec);
  if (K < 1) throw DomainError("simulate_truncated: K must be at least 1");
  const auto c = model::linear_coefficients(spec.mf.d, spec.q, K);
  const auto e = path_noise(seed, n, K);
  std::vector<double> neg_a1(c.a1.size());
  std::transform(c.a1.begin(), c.a1.end(), neg_a1.begin(), [](double v) { return -v; });

  // Y1 = a0 * ε1 + a1 * ε2, Y2 = −a1 * ε1 + a0 * ε2; output t sits at index t + 2K.
  const auto a0e1 = fft::linear_convolution(c.a0, e[0]);
  const auto a1e2 = fft::linear_convolution(c.a1, e[1]);
  const auto na1e1 = fft::linear_convolution(neg_a1, e[0]);
  const auto a0e2 = fft::linear_convolution(c.a0, e[1]);

  SeriesSample s;
  s.seed = seed;
  s.method = Method::truncated_linear;
  s.model_kind = "frmod";
  s.truncation = K;
  s.values.resize(n);
  for (std::size_t t = 0; t < n; ++t) {
    const std::size_t i = t + 2 * K;
    const double w = spec.mf.lambda0 * static_cast<double>(t);
    s.values[t] = std::cos(w) * (a0e1[i] + a1e2[i]) + std::sin(w) * (na1e1[i] + a0e2[i]);
  }
  return s;
}

std::array<double, 2> modulated_coefficients(const FrmodSpec& spec, long j) {
  const long aj = std::abs(j);
  double a0, a1;
  if (j == 0) {
    a0 = 2.0 * spec.q.q0;
    a1 = 0.0;
  } else {
    const double c = specfun::frac_coeff_seq(spec.mf.d, static_cast<std::size_t>(aj)).values.back();
    a0 = c * spec.q.q0;
    a1 = (j > 0 ? 1.0 : -1.0) * c * spec.q.q1;
  }
  const double w = spec.mf.lambda0 * static_cast<double>(j);
  return {std::cos(w) * a0 - std::sin(w) * a1, std::cos(w) * a1 + std::sin(w) * a0};
}

std::array<double, 4> rotation_power(double lambda0, long k) {
  const double w = lambda0 * static_cast<double>(k);
  const double c = std::cos(w), s = std::sin(w);
  return {c, s, -s, c};
}

std::array<std::vector<double>, 2> transform_noise(double lambda0, long first, const std::vector<double>& e1,
                                                   const std::vector<double>& e2) {
  if (e1.size() != e2.size()) throw DomainError("transform_noise: streams differ in length");
  std::array<std::vector<double>, 2> out{std::vector<double>(e1.size()), std::vector<double>(e1.size())};
  for (std::size_t i = 0; i < e1.size(); ++i) {
    const auto m = rotation_power(lambda0, first + static_cast<long>(i));
    out[0][i] = m[0] * e1[i] + m[1] * e2[i];
    out[1][i] = m[2] * e1[i] + m[3] * e2[i];
  }
  return out;
}

namespace {

std::array<std::vector<double>, 2> modulated_table(const FrmodSpec& spec, std::size_t K) {
  const auto c = model::linear_coefficients(spec.mf.d, spec.q, K);
  std::array<std::vector<double>, 2> t{std::vector<double>(2 * K + 1), std::vector<double>(2 * K + 1)};
  const long KK = static_cast<long>(K);
  for (long j = -KK; j <= KK; ++j) {
    const double w = spec.mf.lambda0 * static_cast<double>(j);
    const double a0 = c.a0_at(j), a1 = c.a1_at(j);
    t[0][static_cast<std::size_t>(j + KK)] = std::cos(w) * a0 - std::sin(w) * a1;
    t[1][static_cast<std::size_t>(j + KK)] = std::cos(w) * a1 + std::sin(w) * a0;
  }
  return t;
}

}  // namespace

SeriesSample simulate_modulated(const FrmodSpec& spec, std::size_t n, std::uint64_t seed, std::size_t K) {
  require_plain(spec);
  if (K < 1) throw DomainError("simulate_modulated: K must be at least 1");
  const auto e = path_noise(seed, n, K);
  const auto et = transform_noise(spec.mf.lambda0, -static_cast<long>(K), e[0], e[1]);
  const auto at = modulated_table(spec, K);
  const auto c1 = fft::linear_convolution(at[0], et[0]);
  const auto c2 = fft::linear_convolution(at[1], et[1]);
  SeriesSample s;
  s.seed = seed;
  s.method = Method::modulated_linear;
  s.model_kind = "frmod";
  s.truncation = K;
  s.values.resize(n);
  for (std::size_t t = 0; t < n; ++t) s.values[t] = c1[t + 2 * K] + c2[t + 2 * K];
  return s;
}

double modulated_partial_acvf(const FrmodSpec& spec, long h, std::size_t K) {
  const auto at = modulated_table(spec, K);
  const long KK = static_cast<long>(K);
  double s = 0.0;
  for (long j = std::max(-KK, -KK - h); j <= std::min(KK, KK - h); ++j) {
    const auto a = static_cast<std::size_t>(j + h + KK), b = static_cast<std::size_t>(j + KK);
    s += at[0][a] * at[0][b] + at[1][a] * at[1][b];
  }
  return s;
}

ArmaOutput apply_arma(const std::vector<double>& x, const std::vector<double>& ar, const std::vector<double>& ma) {
  FrmodSpec probe{{0.25, 1.0}, {1.0, 0.0}, ar, ma};
  probe.validate();
  ArmaOutput out;
  out.values.resize(x.size());
  for (std::size_t t = 0; t < x.size(); ++t) {
    double v = x[t];
    for (std::size_t k = 1; k <= ma.size() && k <= t; ++k) v += ma[k - 1] * x[t - k];
    for (std::size_t k = 1; k <= ar.size() && k <= t; ++k) v += ar[k - 1] * out.values[t - k];
    out.values[t] = v;
  }
  out.burn_in = ar.empty() ? 0 : std::max<std::size_t>(10 * ar.size(), 100);
  return out;
}

}  // namespace simulate
}  // namespace frmod
