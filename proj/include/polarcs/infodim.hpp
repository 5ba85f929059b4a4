#pragma once

#include <cstddef>
#include <cstdint>
#include <functional>
#include <span>
#include <utility>
#include <vector>

#include "polarcs/channel_sim.hpp"
#include "polarcs/polar_core.hpp"

namespace polarcs {

/// Quantizer range shared by every coordinate of a mesh. Samples outside
/// are clipped into the edge cells. A coordinate v falls in cell
/// floor(levels * (v - lo) / (hi - lo)), i.e. the box is mapped onto the
/// unit cube and meshed with cubes of side 1/levels.
struct Box {
  double lo = 0.0;
  double hi = 1.0;
};

/// n samples of a dim-dimensional vector, row-major.
struct SampleSet {
  std::size_t dim = 0;
  std::vector<double> data;

  std::size_t size() const { return dim == 0 ? 0 : data.size() / dim; }
  double at(std::size_t sample, std::size_t coord) const { return data[sample * dim + coord]; }
};

/// Fills one sample.
using Sampler = std::function<void(Rng&, std::span<double>)>;

SampleSet draw_samples(const Sampler& sampler, std::size_t dim, std::size_t n_samples,
                       std::uint64_t seed);

struct QuantizedEntropyEstimate {
  int levels = 0;
  std::size_t samples = 0;
  std::size_t mesh_dim = 0;
  std::size_t occupied_cells = 0;
  double entropy_bits = 0.0;
  /// entropy_bits / log2(levels); for vectors this is the joint dimension.
  double dim_estimate = 0.0;
  /// Set when occupied cells exceed an eighth of the sample count, where
  /// the plug-in entropy is visibly biased low.
  bool wide_confidence = false;
};

/// Plug-in entropy (bits) of the cell-occupancy histogram over the chosen
/// coordinates. levels must lie in [2, 2^16] and coords.size() * log2(levels)
/// must fit in 63 bits.
QuantizedEntropyEstimate quantized_entropy(const SampleSet& samples,
                                           std::span<const std::size_t> coords, int levels,
                                           Box box);

/// Information dimension estimate over all coordinates of the samples.
QuantizedEntropyEstimate estimate_dim(const SampleSet& samples, int levels, Box box);
QuantizedEntropyEstimate estimate_dim(const Sampler& sampler, std::size_t dim, int levels,
                                      std::size_t n_samples, std::uint64_t seed, Box box);

struct MidEstimate {
  double mid = 0.0;
  double entropy_x = 0.0;
  double entropy_y = 0.0;
  double entropy_joint = 0.0;
  bool wide_confidence = false;
};

/// [H(X_q) + H(Y_q) - H(X_q, Y_q)] / log2(levels), with X and Y given as
/// coordinate subsets of the joint samples. Symmetric in X and Y bit for bit.
MidEstimate estimate_mid(const SampleSet& joint, std::span<const std::size_t> x_coords,
                         std::span<const std::size_t> y_coords, int levels, Box box);

struct Atom {
  double value = 0.0;
  double probability = 0.0;
};

struct ContinuousLaw {
  enum class Kind { normal, uniform };
  Kind kind = Kind::normal;
  double a = 0.0;  // mean, or lower end
  double b = 1.0;  // standard deviation, or upper end
};

/// (1 - w) * discrete + w * continuous.
struct MixtureSpec {
  double weight_continuous = 0.0;
  std::vector<Atom> discrete_atoms;
  ContinuousLaw continuous_law;

  /// Throws InvalidParameter when weights are out of range or the atom
  /// probabilities do not sum to 1 (when the discrete part has weight).
  void validate() const;
};

Sampler mixture_sampler(const MixtureSpec& spec);

/// Box covering the atoms and the continuous law: 8 standard deviations
/// around a normal, the exact range of a uniform.
Box mixture_box(const MixtureSpec& spec);

/// Atom at 0 with weight 1 - p plus p * N(0, sigma^2): the conditional law
/// of the sparse additive noisy channel output at input 0.
MixtureSpec sparse_noise_mixture(double p, double sigma);

/// MID of the sparse additive noisy channel y = x + alpha n with
/// x ~ N(0, 1), over the box [-8 s, 8 s] with s = sqrt(1 + sigma^2).
MidEstimate estimate_sanc_mid(double p, double sigma, int levels, std::size_t n_samples,
                              std::uint64_t seed);

/// One-step polarization over the sparse additive noisy channel:
/// z1 = beta (x1 + x2), z2 = x2 with x1, x2 ~ N(0, 1), each z through an
/// independent channel. Returns (d(Y1, Y2; X1), d(Y1, Y2, X1; X2)).
std::pair<MidEstimate, MidEstimate> estimate_onestep_mids(double p, double sigma, int levels,
                                                          std::size_t n_samples,
                                                          std::uint64_t seed,
                                                          double beta = kDefaultBeta);

}  // namespace polarcs
