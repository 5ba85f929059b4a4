#include "polarcs/channel_sim.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "polarcs/errors.hpp"

namespace polarcs {

std::uint64_t mix64(std::uint64_t x) {
  x += 0x9E3779B97F4A7C15ULL;
  x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ULL;
  x = (x ^ (x >> 27)) * 0x94D049BB133111EBULL;
  return x ^ (x >> 31);
}

Rng Rng::substream(std::uint64_t master, std::uint64_t index) {
  return Rng(mix64(mix64(master) ^ mix64(index + 0x632BE59BD9B4E019ULL)));
}

void NoiseModel::validate() const {
  if (!(p >= 0.0 && p <= 1.0)) throw InvalidParameter("noise sparsity must lie in [0, 1]");
  if (!(sigma > 0.0) || !std::isfinite(sigma)) {
    throw InvalidParameter("noise standard deviation must be positive");
  }
}

SparseVector sample_sparse_noise(std::size_t length, const NoiseModel& model, Rng& rng) {
  model.validate();
  SparseVector out{Vector::Zero(static_cast<Eigen::Index>(length)), {}};
  for (std::size_t i = 0; i < length; ++i) {
    if (rng.bernoulli(model.p)) {
      const double v = model.sigma * rng.normal();
      if (v != 0.0) {
        out.values[static_cast<Eigen::Index>(i)] = v;
        out.support.push_back(i);
      }
    }
  }
  return out;
}

std::size_t fixed_support_size(double sparsity, std::size_t length) {
  if (!(sparsity >= 0.0 && sparsity <= 1.0)) {
    throw InvalidParameter("noise sparsity must lie in [0, 1]");
  }
  return static_cast<std::size_t>(std::llround(sparsity * static_cast<double>(length)));
}

std::vector<std::size_t> random_permutation(std::size_t length, Rng& rng) {
  std::vector<std::size_t> perm(length);
  std::iota(perm.begin(), perm.end(), std::size_t{0});
  // Explicit Fisher-Yates so the sequence does not depend on the standard
  // library's shuffle implementation.
  for (std::size_t i = length; i > 1; --i) {
    const auto j = static_cast<std::size_t>(rng.engine()() % i);
    std::swap(perm[i - 1], perm[j]);
  }
  return perm;
}

SparseVector sample_sparse_noise_fixed(std::size_t length, double sparsity, double sigma, Rng& rng) {
  NoiseModel{sparsity, sigma}.validate();
  const std::size_t k = fixed_support_size(sparsity, length);
  const auto perm = random_permutation(length, rng);
  SparseVector out{Vector::Zero(static_cast<Eigen::Index>(length)), {}};
  out.support.assign(perm.begin(), perm.begin() + static_cast<std::ptrdiff_t>(k));
  // Values follow the permutation order, so the draw for k + 1 extends the
  // draw for k under the same stream.
  for (std::size_t i : out.support) {
    double v = 0.0;
    while (v == 0.0) v = sigma * rng.normal();
    out.values[static_cast<Eigen::Index>(i)] = v;
  }
  std::sort(out.support.begin(), out.support.end());
  return out;
}

Vector apply_sanc(const Vector& x, const NoiseModel& model, Rng& rng) {
  model.validate();
  Vector y = x;
  for (Eigen::Index i = 0; i < y.size(); ++i) {
    if (rng.bernoulli(model.p)) y[i] += model.sigma * rng.normal();
  }
  return y;
}

FlaggedOutput apply_saec(const Vector& x, const NoiseModel& model, Rng& rng) {
  model.validate();
  FlaggedOutput out{x, std::vector<bool>(static_cast<std::size_t>(x.size()), false)};
  for (Eigen::Index i = 0; i < x.size(); ++i) {
    if (rng.bernoulli(model.p)) {
      out.values[i] = model.sigma * rng.normal();
      out.erased[static_cast<std::size_t>(i)] = true;
    }
  }
  return out;
}

Vector sample_signal(std::size_t length, Rng& rng) {
  Vector x(static_cast<Eigen::Index>(length));
  for (Eigen::Index i = 0; i < x.size(); ++i) x[i] = rng.normal();
  return x;
}

}  // namespace polarcs
