#include "polarcs/infodim.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <string>

#include "polarcs/errors.hpp"

namespace polarcs {

SampleSet draw_samples(const Sampler& sampler, std::size_t dim, std::size_t n_samples,
                       std::uint64_t seed) {
  SampleSet out{dim, std::vector<double>(dim * n_samples)};
  Rng rng(seed);
  for (std::size_t i = 0; i < n_samples; ++i) {
    sampler(rng, std::span<double>(out.data.data() + i * dim, dim));
  }
  return out;
}

namespace {

double plug_in_entropy_bits(std::vector<std::uint64_t>& keys, std::size_t* occupied) {
  std::sort(keys.begin(), keys.end());
  std::vector<std::size_t> counts;
  for (std::size_t i = 0; i < keys.size();) {
    std::size_t j = i + 1;
    while (j < keys.size() && keys[j] == keys[i]) ++j;
    counts.push_back(j - i);
    i = j;
  }
  // Summing in count order makes the result independent of how cells were
  // labelled.
  std::sort(counts.begin(), counts.end());
  const double n = static_cast<double>(keys.size());
  double h = 0.0;
  for (std::size_t c : counts) {
    const double q = static_cast<double>(c) / n;
    h -= q * std::log2(q);
  }
  if (occupied) *occupied = counts.size();
  return h;
}

}  // namespace

QuantizedEntropyEstimate quantized_entropy(const SampleSet& samples,
                                           std::span<const std::size_t> coords, int levels,
                                           Box box) {
  if (levels < 2 || levels > (1 << 16)) throw InvalidParameter("levels must lie in [2, 65536]");
  if (!(box.hi > box.lo)) throw InvalidParameter("empty quantizer box");
  const int bits = std::bit_width(static_cast<unsigned>(levels - 1));
  if (coords.empty() || coords.size() * static_cast<std::size_t>(bits) > 63) {
    throw InvalidParameter("mesh dimension too large for the cell key");
  }
  for (std::size_t c : coords) {
    if (c >= samples.dim) throw InvalidParameter("coordinate out of range");
  }
  const std::size_t n = samples.size();
  if (n == 0) throw InvalidParameter("no samples");

  const double scale = static_cast<double>(levels) / (box.hi - box.lo);
  std::vector<std::uint64_t> keys(n);
  for (std::size_t i = 0; i < n; ++i) {
    std::uint64_t key = 0;
    for (std::size_t c : coords) {
      double cell = std::floor((samples.at(i, c) - box.lo) * scale);
      cell = std::clamp(cell, 0.0, static_cast<double>(levels - 1));
      key = (key << bits) | static_cast<std::uint64_t>(cell);
    }
    keys[i] = key;
  }
  QuantizedEntropyEstimate est;
  est.levels = levels;
  est.samples = n;
  est.mesh_dim = coords.size();
  est.entropy_bits = plug_in_entropy_bits(keys, &est.occupied_cells);
  est.dim_estimate = est.entropy_bits / std::log2(static_cast<double>(levels));
  est.wide_confidence = est.occupied_cells * 8 > n;
  return est;
}

QuantizedEntropyEstimate estimate_dim(const SampleSet& samples, int levels, Box box) {
  std::vector<std::size_t> coords(samples.dim);
  for (std::size_t i = 0; i < coords.size(); ++i) coords[i] = i;
  return quantized_entropy(samples, coords, levels, box);
}

QuantizedEntropyEstimate estimate_dim(const Sampler& sampler, std::size_t dim, int levels,
                                      std::size_t n_samples, std::uint64_t seed, Box box) {
  return estimate_dim(draw_samples(sampler, dim, n_samples, seed), levels, box);
}

MidEstimate estimate_mid(const SampleSet& joint, std::span<const std::size_t> x_coords,
                         std::span<const std::size_t> y_coords, int levels, Box box) {
  const auto hx = quantized_entropy(joint, x_coords, levels, box);
  const auto hy = quantized_entropy(joint, y_coords, levels, box);
  std::vector<std::size_t> both(x_coords.begin(), x_coords.end());
  both.insert(both.end(), y_coords.begin(), y_coords.end());
  const auto hxy = quantized_entropy(joint, both, levels, box);

  MidEstimate out;
  out.entropy_x = hx.entropy_bits;
  out.entropy_y = hy.entropy_bits;
  out.entropy_joint = hxy.entropy_bits;
  const double marginal = std::min(hx.entropy_bits, hy.entropy_bits) +
                          std::max(hx.entropy_bits, hy.entropy_bits);
  out.mid = (marginal - hxy.entropy_bits) / std::log2(static_cast<double>(levels));
  out.wide_confidence = hx.wide_confidence || hy.wide_confidence || hxy.wide_confidence;
  return out;
}

void MixtureSpec::validate() const {
  if (!(weight_continuous >= 0.0 && weight_continuous <= 1.0)) {
    throw InvalidParameter("continuous weight must lie in [0, 1]");
  }
  if (weight_continuous < 1.0) {
    double total = 0.0;
    for (const Atom& a : discrete_atoms) {
      if (!(a.probability >= 0.0)) throw InvalidParameter("negative atom probability");
      total += a.probability;
    }
    if (std::abs(total - 1.0) > 1e-12) throw InvalidParameter("atom probabilities must sum to 1");
  }
  if (continuous_law.kind == ContinuousLaw::Kind::normal ? !(continuous_law.b > 0.0)
                                                         : !(continuous_law.b > continuous_law.a)) {
    throw InvalidParameter("degenerate continuous law");
  }
}

Sampler mixture_sampler(const MixtureSpec& spec) {
  spec.validate();
  return [spec](Rng& rng, std::span<double> out) {
    const bool continuous = rng.uniform() < spec.weight_continuous;
    if (continuous) {
      const ContinuousLaw& law = spec.continuous_law;
      out[0] = law.kind == ContinuousLaw::Kind::normal ? law.a + law.b * rng.normal()
                                                       : law.a + (law.b - law.a) * rng.uniform();
      return;
    }
    double u = rng.uniform();
    for (const Atom& a : spec.discrete_atoms) {
      out[0] = a.value;
      if (u < a.probability) return;
      u -= a.probability;
    }
  };
}

Box mixture_box(const MixtureSpec& spec) {
  double lo = 0.0;
  double hi = 0.0;
  bool first = true;
  auto cover = [&](double a, double b) {
    lo = first ? a : std::min(lo, a);
    hi = first ? b : std::max(hi, b);
    first = false;
  };
  for (const Atom& a : spec.discrete_atoms) cover(a.value, a.value);
  const ContinuousLaw& law = spec.continuous_law;
  if (law.kind == ContinuousLaw::Kind::normal) {
    cover(law.a - 8.0 * law.b, law.a + 8.0 * law.b);
  } else {
    cover(law.a, law.b);
  }
  if (!(hi > lo)) hi = lo + 1.0;
  return Box{lo, hi};
}

MixtureSpec sparse_noise_mixture(double p, double sigma) {
  NoiseModel{p, sigma}.validate();
  return MixtureSpec{p, {Atom{0.0, 1.0}}, ContinuousLaw{ContinuousLaw::Kind::normal, 0.0, sigma}};
}

MidEstimate estimate_sanc_mid(double p, double sigma, int levels, std::size_t n_samples,
                              std::uint64_t seed) {
  const NoiseModel model{p, sigma};
  model.validate();
  const Sampler sampler = [model](Rng& rng, std::span<double> out) {
    const double x = rng.normal();
    out[0] = x;
    out[1] = rng.bernoulli(model.p) ? x + model.sigma * rng.normal() : x;
  };
  const SampleSet joint = draw_samples(sampler, 2, n_samples, seed);
  const double b = 8.0 * std::sqrt(1.0 + sigma * sigma);
  const std::size_t x[] = {0};
  const std::size_t y[] = {1};
  return estimate_mid(joint, x, y, levels, Box{-b, b});
}

std::pair<MidEstimate, MidEstimate> estimate_onestep_mids(double p, double sigma, int levels,
                                                          std::size_t n_samples,
                                                          std::uint64_t seed, double beta) {
  const NoiseModel model{p, sigma};
  model.validate();
  build_g0(beta);
  // Coordinates: y1, y2, x1, x2.
  const Sampler sampler = [model, beta](Rng& rng, std::span<double> out) {
    const double x1 = rng.normal();
    const double x2 = rng.normal();
    const double z1 = beta * (x1 + x2);
    const double z2 = x2;
    out[0] = rng.bernoulli(model.p) ? z1 + model.sigma * rng.normal() : z1;
    out[1] = rng.bernoulli(model.p) ? z2 + model.sigma * rng.normal() : z2;
    out[2] = x1;
    out[3] = x2;
  };
  const SampleSet joint = draw_samples(sampler, 4, n_samples, seed);
  const double spread = std::max(1.0, 2.0 * beta * beta);
  const double b = 8.0 * std::sqrt(spread + sigma * sigma);
  const Box box{-b, b};
  const std::size_t y12[] = {0, 1};
  const std::size_t x1[] = {2};
  const std::size_t y12x1[] = {0, 1, 2};
  const std::size_t x2[] = {3};
  return {estimate_mid(joint, y12, x1, levels, box), estimate_mid(joint, y12x1, x2, levels, box)};
}

}  // namespace polarcs
