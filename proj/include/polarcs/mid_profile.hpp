#pragma once

#include <cstddef>
#include <vector>

#include "polarcs/types.hpp"

namespace polarcs {

/// Per-subchannel mutual information dimension of the polarized sparse
/// noisy channel, in natural order: mids[i] belongs to input x_{i+1}.
struct MidProfile {
  double p = 0.0;
  int n = 0;
  std::vector<double> mids;

  std::size_t size() const { return mids.size(); }
};

/// Starts from [1 - p] and n times expands every value v into the adjacent
/// pair (v^2, 2v - v^2). Throws InvalidParameter for p outside [0, 1] or
/// n outside [0, kMaxStages].
MidProfile mid_recursion(double p, int n);

struct ChannelSplit {
  IndexSet good;
  IndexSet bad;
};

/// Indices ordered by (mid descending, index ascending).
IndexSet ranked_indices(const MidProfile& profile);

/// The N highest-MID indices are good; ties resolve toward the lower index.
/// Both sets are returned ascending. Throws InvalidParameter for N > M.
ChannelSplit select_channels(const MidProfile& profile, std::size_t n_good);

struct PolarizationStats {
  double frac_good = 0.0;
  double frac_bad = 0.0;
  double frac_unpolarized = 0.0;
};

/// Fractions with mid >= 1 - delta (good), mid <= delta (bad) and the rest.
/// Throws InvalidParameter unless 0 < delta < 0.5.
PolarizationStats polarization_stats(const MidProfile& profile, double delta);

/// N = ceil(rate * M), with a 1e-9 guard against representation error in rate.
std::size_t dimension_for_rate(double rate, std::size_t block_size);

}  // namespace polarcs
