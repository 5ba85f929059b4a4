#include "polarcs/mid_profile.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <string>

#include "polarcs/errors.hpp"
#include "polarcs/polar_core.hpp"

namespace polarcs {

MidProfile mid_recursion(double p, int n) {
  if (!(p >= 0.0 && p <= 1.0)) {
    throw InvalidParameter("noise sparsity must lie in [0, 1]");
  }
  if (n < 0 || n > kMaxStages) {
    throw InvalidParameter("stage count out of range: " + std::to_string(n));
  }
  // The complement 1 - mid is carried alongside so that both children are
  // formed as a square or as one minus a square of an exactly held value.
  std::vector<double> cur{1.0 - p};
  std::vector<double> comp{p};
  std::vector<double> next;
  std::vector<double> next_comp;
  for (int s = 0; s < n; ++s) {
    next.resize(cur.size() * 2);
    next_comp.resize(cur.size() * 2);
    for (std::size_t i = 0; i < cur.size(); ++i) {
      const double v = cur[i];
      const double z = comp[i];
      next[2 * i] = v * v;
      next_comp[2 * i] = 1.0 - v * v;
      next[2 * i + 1] = 1.0 - z * z;
      next_comp[2 * i + 1] = z * z;
    }
    cur.swap(next);
    comp.swap(next_comp);
  }
  return MidProfile{p, n, std::move(cur)};
}

IndexSet ranked_indices(const MidProfile& profile) {
  IndexSet order(profile.size());
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
    return profile.mids[a] > profile.mids[b];
  });
  return order;
}

ChannelSplit select_channels(const MidProfile& profile, std::size_t n_good) {
  const std::size_t m = profile.size();
  if (n_good > m) {
    throw InvalidParameter("requested " + std::to_string(n_good) + " good channels out of " +
                           std::to_string(m));
  }
  const IndexSet order = ranked_indices(profile);
  ChannelSplit split;
  split.good.assign(order.begin(), order.begin() + static_cast<std::ptrdiff_t>(n_good));
  split.bad.assign(order.begin() + static_cast<std::ptrdiff_t>(n_good), order.end());
  std::sort(split.good.begin(), split.good.end());
  std::sort(split.bad.begin(), split.bad.end());
  return split;
}

PolarizationStats polarization_stats(const MidProfile& profile, double delta) {
  if (!(delta > 0.0 && delta < 0.5)) {
    throw InvalidParameter("delta must lie in (0, 0.5)");
  }
  std::size_t good = 0;
  std::size_t bad = 0;
  for (double v : profile.mids) {
    if (v >= 1.0 - delta) {
      ++good;
    } else if (v <= delta) {
      ++bad;
    }
  }
  const double m = static_cast<double>(profile.size());
  PolarizationStats stats;
  stats.frac_good = static_cast<double>(good) / m;
  stats.frac_bad = static_cast<double>(bad) / m;
  stats.frac_unpolarized = static_cast<double>(profile.size() - good - bad) / m;
  return stats;
}

std::size_t dimension_for_rate(double rate, std::size_t block_size) {
  if (!(rate >= 0.0 && rate <= 1.0)) {
    throw InvalidParameter("rate must lie in [0, 1]");
  }
  const double scaled = rate * static_cast<double>(block_size);
  return static_cast<std::size_t>(std::ceil(scaled - 1e-9));
}

}  // namespace polarcs
