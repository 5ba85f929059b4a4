#pragma once

#include <cstddef>
#include <cstdint>
#include <random>
#include <vector>

#include "polarcs/types.hpp"

namespace polarcs {

/// Seedable generator with order-independent substreams: the stream for
/// (master, index) depends on nothing else, so trials can run in any order
/// or on any number of workers.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : engine_(seed) {}

  static Rng substream(std::uint64_t master, std::uint64_t index);

  double normal() { return normal_(engine_); }
  double uniform() { return uniform_(engine_); }
  bool bernoulli(double p) { return uniform() < p; }

  std::mt19937_64& engine() { return engine_; }

 private:
  std::mt19937_64 engine_;
  std::normal_distribution<double> normal_{0.0, 1.0};
  std::uniform_real_distribution<double> uniform_{0.0, 1.0};
};

/// SplitMix64 finalizer, used to derive substream seeds.
std::uint64_t mix64(std::uint64_t x);

/// Noise sparsity p (probability a coordinate is hit) and Gaussian noise
/// standard deviation sigma.
struct NoiseModel {
  double p = 0.0;
  double sigma = 1.0;

  /// Throws InvalidParameter unless 0 <= p <= 1 and sigma > 0.
  void validate() const;
};

struct SparseVector {
  Vector values;
  IndexSet support;  // ascending
};

/// Channel output with per-coordinate erasure flags (genie side information).
struct FlaggedOutput {
  Vector values;
  std::vector<bool> erased;
};

/// Each coordinate independently non-zero with probability p, value
/// sigma * N(0, 1).
SparseVector sample_sparse_noise(std::size_t length, const NoiseModel& model, Rng& rng);

/// round(sparsity * length); the support size for the fixed-cardinality sampler.
std::size_t fixed_support_size(double sparsity, std::size_t length);

/// Exactly fixed_support_size(sparsity, length) non-zero coordinates at
/// uniformly random positions, values sigma * N(0, 1).
SparseVector sample_sparse_noise_fixed(std::size_t length, double sparsity, double sigma, Rng& rng);

/// y_i = x_i + alpha_i n_i with alpha_i ~ Bernoulli(p), n_i ~ N(0, sigma^2).
Vector apply_sanc(const Vector& x, const NoiseModel& model, Rng& rng);

/// Each coordinate replaced by a fresh N(0, sigma^2) draw with probability p.
FlaggedOutput apply_saec(const Vector& x, const NoiseModel& model, Rng& rng);

/// i.i.d. standard normal vector.
Vector sample_signal(std::size_t length, Rng& rng);

/// Uniformly random permutation of [0, length).
std::vector<std::size_t> random_permutation(std::size_t length, Rng& rng);

}  // namespace polarcs
