#pragma once

#include <array>
#include <cstdint>
#include <random>
#include <string>
#include <vector>

#include "frmod/model.hpp"

namespace frmod {

enum class Method { exact_embedding, cholesky, truncated_linear, modulated_linear };

std::string to_string(Method m);

struct SeriesSample {
  std::vector<double> values;
  std::uint64_t seed = 0;
  Method method = Method::exact_embedding;
  std::string model_kind;
  // Circulant size actually used (0 unless method is exact_embedding or a fallback happened).
  std::size_t embedding_size = 0;
  bool cholesky_fallback = false;
  // Negative circulant eigenvalues that were clipped to zero, as a fraction of the largest.
  double clipped_eigenvalue = 0.0;
  std::size_t truncation = 0;
};

namespace simulate {

/// splitmix64 finaliser applied to `master + (stream + 1)·0x9E3779B97F4A7C15`.
/// Replicate r of a run seeded with s uses derive_seed(s, r); noise stream k
/// inside one path uses derive_seed(path_seed, k).
std::uint64_t derive_seed(std::uint64_t master, std::uint64_t stream);

/// Standard normal draws from mt19937_64 through the Marsaglia polar method.
/// Both are fully specified, so a seed gives the same numbers on every platform.
class NormalStream {
 public:
  explicit NormalStream(std::uint64_t seed) : engine_(seed) {}
  double operator()();
  void fill(std::vector<double>& out);

 private:
  double uniform();
  std::mt19937_64 engine_;
  double cached_ = 0.0;
  bool has_cached_ = false;
};

/// `streams` (1 or 2) independent i.i.d. N(0,1) sequences of length n.
std::vector<std::vector<double>> gaussian_wn(std::uint64_t seed, std::size_t n, int streams);

struct ExactOptions {
  bool force_cholesky = false;
  // The circulant may grow up to this factor over its initial size before falling back.
  std::size_t max_growth = 8;
};

/// Precomputed circulant (or Cholesky) factor for repeated exact sampling.
class ExactSampler {
 public:
  ExactSampler(const ModelSpec& model, std::size_t n, ExactOptions options = {});
  SeriesSample sample(std::uint64_t seed) const;
  /// The real and imaginary parts of one circulant draw are independent paths.
  std::array<SeriesSample, 2> sample_pair(std::uint64_t seed) const;
  /// One path per seed; same values as calling sample() for each seed.
  std::vector<SeriesSample> sample_many(const std::vector<std::uint64_t>& seeds) const;

  const ScalarAcvf& acvf() const { return acvf_; }
  bool uses_cholesky() const { return cholesky_; }
  std::size_t embedding_size() const { return m_; }

 private:
  SeriesSample blank(std::uint64_t seed) const;
  std::vector<std::vector<double>> cholesky_paths(std::vector<NormalStream>& streams) const;
  std::size_t n_;
  std::string kind_;
  ScalarAcvf acvf_;
  bool cholesky_ = false;
  bool fallback_ = false;
  std::size_t m_ = 0;
  double clipped_ = 0.0;
  std::vector<double> sqrt_eig_;  // sqrt(λ_k / m)
  std::vector<double> chol_;      // row-major lower factor, n×n (small n only)
  std::vector<double> jittered_;  // γ(0..n−1) with the diagonal jitter, for the recursive factor
};

SeriesSample simulate_exact(const ModelSpec& model, std::size_t n, std::uint64_t seed, ExactOptions options = {});

/// Two-sided linear representation of Y truncated at |l| ≤ K, then modulated.
SeriesSample simulate_truncated(const FrmodSpec& spec, std::size_t n, std::uint64_t seed, std::size_t K);

/// Ã_j = (cos(λ0 j) a_{0,j} − sin(λ0 j) a_{1,j}, cos(λ0 j) a_{1,j} + sin(λ0 j) a_{0,j}).
std::array<double, 2> modulated_coefficients(const FrmodSpec& spec, long j);

/// M^k = [[cos kλ0, sin kλ0], [−sin kλ0, cos kλ0]] (row-major), valid for every integer k.
std::array<double, 4> rotation_power(double lambda0, long k);

/// ε̃_k = M^k ε_k for k = first, first+1, … over the two noise streams.
std::array<std::vector<double>, 2> transform_noise(double lambda0, long first, const std::vector<double>& e1,
                                                   const std::vector<double>& e2);

/// X_n = Σ_{|j|≤K} Ã_j ε̃_{n−j} driven by the same ε as simulate_truncated with the same seed,
/// so the two routes agree path by path.
SeriesSample simulate_modulated(const FrmodSpec& spec, std::size_t n, std::uint64_t seed, std::size_t K);

/// Σ_{|j|≤K} Ã_{j+h}·Ã_j.
double modulated_partial_acvf(const FrmodSpec& spec, long h, std::size_t K);

struct ArmaOutput {
  std::vector<double> values;
  std::size_t burn_in = 0;
};

/// y = Φ(B)⁻¹ Θ(B) x with zero initial conditions. burn_in = max(10p, 100)
/// when p > 0 and 0 otherwise; callers discard that prefix when a stationary
/// path is wanted.
ArmaOutput apply_arma(const std::vector<double>& x, const std::vector<double>& ar, const std::vector<double>& ma);

}  // namespace simulate
}  // namespace frmod
