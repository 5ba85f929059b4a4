// Acceptance checks. Each criterion prints one PASS/FAIL line with the
// measured quantities; `--criterion k` runs one of them, no argument runs all.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <numeric>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "oracles.hpp"
#include "polarcs/channel_sim.hpp"
#include "polarcs/decoders.hpp"
#include "polarcs/errors.hpp"
#include "polarcs/experiment.hpp"
#include "polarcs/infodim.hpp"
#include "polarcs/mid_profile.hpp"
#include "polarcs/polar_core.hpp"
#include "polarcs/sensing_matrix.hpp"

using namespace polarcs;

namespace {

struct Outcome {
  bool pass = true;
  std::string detail;
};

class Stopwatch {
 public:
  double seconds() const {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - start_).count();
  }

 private:
  std::chrono::steady_clock::time_point start_ = std::chrono::steady_clock::now();
};

std::string fmt(const char* f, auto... args) {
  char buf[512];
  std::snprintf(buf, sizeof buf, f, args...);
  return buf;
}

Vector gather(const Vector& v, const IndexSet& idx) {
  Vector out(static_cast<Eigen::Index>(idx.size()));
  for (std::size_t i = 0; i < idx.size(); ++i) out[static_cast<Eigen::Index>(i)] = v[static_cast<Eigen::Index>(idx[i])];
  return out;
}

std::vector<double> p_grid() {
  std::vector<double> ps;
  for (int k = 0; k <= 20; ++k) ps.push_back(k / 20.0);
  return ps;
}

double nonzero_normal(Rng& rng) {
  double v = 0.0;
  while (std::abs(v) < 1e-3) v = rng.normal();
  return v;
}

IndexSet random_support(std::size_t size, std::size_t k, Rng& rng) {
  auto perm = random_permutation(size, rng);
  perm.resize(k);
  std::sort(perm.begin(), perm.end());
  return perm;
}

// Combinations of {0..n-1} of size k in lexicographic order.
void for_each_subset(std::size_t n, std::size_t k, const std::function<void(const IndexSet&)>& f) {
  IndexSet c(k);
  std::iota(c.begin(), c.end(), std::size_t{0});
  while (true) {
    f(c);
    std::size_t i = k;
    while (i > 0 && c[i - 1] == n - k + i - 1) --i;
    if (i == 0) return;
    ++c[i - 1];
    for (std::size_t j = i; j < k; ++j) c[j] = c[j - 1] + 1;
  }
}

Outcome mid_conservation() {
  Stopwatch sw;
  double worst = 0.0;
  for (double p : p_grid()) {
    for (int n = 0; n <= 16; ++n) {
      const auto prof = mid_recursion(p, n);
      const double sum = std::accumulate(prof.mids.begin(), prof.mids.end(), 0.0);
      worst = std::max(worst, std::abs(sum - std::ldexp(1.0 - p, n)));
    }
  }
  const double t = sw.seconds();
  return {worst <= 1e-9 && t < 1.0, fmt("max |sum - 2^n(1-p)| = %.3g over 21 p x n 0..16, %.3f s", worst, t)};
}

Outcome closed_form_one_step() {
  int exact = 0;
  for (double p : p_grid()) {
    const auto prof = mid_recursion(p, 1);
    if (prof.mids[0] == (1.0 - p) * (1.0 - p) && prof.mids[1] == 1.0 - p * p) ++exact;
  }
  return {exact == 21, fmt("%d of 21 values of p match [(1-p)^2, 1-p^2] bit for bit", exact)};
}

Outcome polarization_profile() {
  Stopwatch sw;
  // Recorded from the recursion at p = 0.1.
  struct Golden {
    int n;
    double unpolarized;
    double good;
  };
  const Golden golden[] = {{8, 0.12109375, 0.83203125},
                           {10, 0.0888671875, 0.8505859375},
                           {12, 0.061279296875, 0.8671875},
                           {14, 0.041015625, 0.87841796875}};
  bool ok = true;
  double prev_unpol = 2.0;
  double prev_dist = 2.0;
  double oracle_dev = 0.0;
  double golden_dev = 0.0;
  std::string values;
  for (const auto& g : golden) {
    const auto prof = mid_recursion(0.1, g.n);
    const auto bec = oracle::bec_erasures(0.1, g.n);
    for (std::size_t i = 0; i < bec.size(); ++i) {
      oracle_dev = std::max(oracle_dev, std::abs(prof.mids[i] - (1.0 - bec[i])));
    }
    const auto stats = polarization_stats(prof, 0.05);
    const double dist = std::abs(stats.frac_good - 0.9);
    ok = ok && stats.frac_unpolarized < prev_unpol && dist < prev_dist;
    golden_dev = std::max({golden_dev, std::abs(stats.frac_unpolarized - g.unpolarized),
                           std::abs(stats.frac_good - g.good)});
    prev_unpol = stats.frac_unpolarized;
    prev_dist = dist;
    values += fmt(" n=%d:(%.6f, %.6f)", g.n, stats.frac_unpolarized, stats.frac_good);
  }
  const double t = sw.seconds();
  ok = ok && oracle_dev <= 1e-12 && golden_dev <= 1e-12 && t < 5.0;
  return {ok, fmt("(unpolarized, good)%s; BEC oracle dev %.2g, golden dev %.2g, %.2f s", values.c_str(),
                  oracle_dev, golden_dev, t)};
}

Outcome construction_soundness() {
  Stopwatch sw;
  double fa = 0.0;
  double orth = 0.0;
  for (double p : {0.05, 0.1, 0.2}) {
    for (int n = 1; n <= 10; ++n) {
      const std::size_t m = std::size_t{1} << n;
      const auto n_good = static_cast<std::size_t>(std::ceil((1.0 - p) * static_cast<double>(m)));
      const auto s = build_polar_system(n, p, n_good);
      if (s.F.rows() == 0) continue;
      fa = std::max(fa, (s.F * s.A).cwiseAbs().maxCoeff());
      const Matrix g = s.F * s.F.transpose();
      orth = std::max(orth, (g - Matrix::Identity(g.rows(), g.cols())).cwiseAbs().maxCoeff());
    }
  }
  // The printed n = 3 transform, as powers of beta (-1 marks a zero).
  const int powers[8][8] = {{3, 3, 3, 3, 3, 3, 3, 3},     {-1, -1, -1, -1, 2, 2, 2, 2},
                            {-1, -1, 2, 2, -1, -1, 2, 2}, {-1, -1, -1, -1, -1, -1, 1, 1},
                            {-1, 2, -1, 2, -1, 2, -1, 2}, {-1, -1, -1, -1, -1, 1, -1, 1},
                            {-1, -1, -1, 1, -1, -1, -1, 1}, {-1, -1, -1, -1, -1, -1, -1, 0}};
  const auto t3 = PolarTransform::build(3);
  const double beta = t3.beta();
  int mismatches = 0;
  for (int r = 0; r < 8; ++r) {
    for (int c = 0; c < 8; ++c) {
      const double want = powers[r][c] < 0 ? 0.0 : std::pow(beta, powers[r][c]);
      if (t3.matrix()(r, c) != want) ++mismatches;
    }
  }
  const double t = sw.seconds();
  return {fa <= 1e-10 && orth <= 1e-10 && mismatches == 0 && t < 10.0,
          fmt("max|FA| = %.3g, max|FF^T - I| = %.3g, 8x8 mismatches %d, %.2f s", fa, orth, mismatches, t)};
}

Outcome l0_round_trip() {
  Stopwatch sw;
  const auto s = build_polar_system(4, 0.5, 8);
  const auto spark = spark_bruteforce(s.F);
  const std::size_t max_k = (spark.value - 1) / 2;
  Rng rng(5);
  std::size_t cases = 0;
  std::size_t failures = 0;
  double worst = 0.0;
  for (std::size_t k = 1; k <= max_k; ++k) {
    for_each_subset(s.M, k, [&](const IndexSet& support) {
      for (int fill = 0; fill < 3; ++fill) {
        Vector e = Vector::Zero(static_cast<Eigen::Index>(s.M));
        for (std::size_t i : support) e[static_cast<Eigen::Index>(i)] = nonzero_normal(rng);
        const auto r = recover_sparse(s, s.F * e, RecoveryMethod::l0_oracle);
        ++cases;
        if (!r.ok()) {
          ++failures;
          continue;
        }
        const double err = (r.estimate - e).cwiseAbs().maxCoeff();
        worst = std::max(worst, err);
        if (err > 1e-8) ++failures;
      }
    });
  }
  return {failures == 0 && cases > 0,
          fmt("spark(F) = %zu, supports up to %zu, %zu cases, %zu failures, max error %.3g, %.2f s",
              spark.value, max_k, cases, failures, worst, sw.seconds())};
}

// x is the unique basis pursuit optimum for y = F x when F restricted to
// supp(x) has full column rank and the least-norm dual vector with F_T^T l = sign(x_T) is
// strictly below 1 in magnitude off the support.
bool unique_l1_optimum(const Matrix& F, const Vector& x) {
  const double scale = std::max(1.0, x.cwiseAbs().maxCoeff());
  IndexSet on;
  IndexSet off;
  for (Eigen::Index i = 0; i < x.size(); ++i) {
    (std::abs(x[i]) > 1e-9 * scale ? on : off).push_back(static_cast<std::size_t>(i));
  }
  if (on.empty()) return true;
  Matrix ft(F.rows(), static_cast<Eigen::Index>(on.size()));
  Vector sign(static_cast<Eigen::Index>(on.size()));
  for (std::size_t c = 0; c < on.size(); ++c) {
    ft.col(static_cast<Eigen::Index>(c)) = F.col(static_cast<Eigen::Index>(on[c]));
    sign[static_cast<Eigen::Index>(c)] = x[static_cast<Eigen::Index>(on[c])] > 0 ? 1.0 : -1.0;
  }
  if (numerical_rank(ft) < on.size()) return false;
  const Vector lambda = ft * (ft.transpose() * ft).ldlt().solve(sign);
  for (std::size_t i : off) {
    if (std::abs(F.col(static_cast<Eigen::Index>(i)).dot(lambda)) >= 1.0 - 1e-9) return false;
  }
  return true;
}

Outcome l1_l0_equivalence() {
  Stopwatch sw;
  Rng rng(6);
  std::size_t accepted = 0;
  std::size_t rejected = 0;
  std::size_t mismatches = 0;
  double worst = 0.0;
  while (accepted < 200) {
    const std::size_t cols = 6 + rng.engine()() % 11;
    const std::size_t rows = 2 + rng.engine()() % (cols - 2);
    const Matrix F = gaussian_matrix({rows, cols, rng.engine()()});
    const std::size_t max_k = (spark_bruteforce(F).value - 1) / 2;
    if (max_k == 0) continue;
    const std::size_t k = 1 + rng.engine()() % max_k;
    Vector e = Vector::Zero(static_cast<Eigen::Index>(cols));
    for (std::size_t i : random_support(cols, k, rng)) e[static_cast<Eigen::Index>(i)] = nonzero_normal(rng);
    if (!unique_l1_optimum(F, e)) {
      ++rejected;
      continue;
    }
    const Vector yp = F * e;
    const auto bp = basis_pursuit(F, yp);
    if (!bp.ok()) {
      ++rejected;
      continue;
    }
    ++accepted;
    const auto l0 = l0_oracle(F, yp, max_k);
    if (!l0.ok()) {
      ++mismatches;
      continue;
    }
    const double diff = (bp.estimate - l0.estimate).cwiseAbs().maxCoeff();
    worst = std::max(worst, diff);
    if (diff > 1e-7) ++mismatches;
  }
  const double t = sw.seconds();
  return {mismatches == 0 && t < 60.0,
          fmt("200 certified instances (%zu rejected), %zu mismatches, max |bp - l0| = %.3g, %.2f s", rejected,
              mismatches, worst, t)};
}

Outcome duality_pipeline() {
  Stopwatch sw;
  Rng rng(7);
  std::size_t failures = 0;
  double worst = 0.0;
  for (int inst = 0; inst < 100; ++inst) {
    const std::size_t n_good = 8 + rng.engine()() % 41;
    const double design_p = 1.0 - static_cast<double>(n_good) / 64.0;
    const auto s = build_polar_system(6, design_p, n_good);
    const std::size_t k = 1 + rng.engine()() % 20;
    Vector e = Vector::Zero(64);
    for (std::size_t i : random_support(64, k, rng)) e[static_cast<Eigen::Index>(i)] = rng.normal();
    const Vector yp = s.F * e;
    const auto rec = recover_sparse(s, yp, RecoveryMethod::l1);
    const auto bp = basis_pursuit(s.F, yp);
    if (!rec.ok() || !bp.ok()) {
      ++failures;
      continue;
    }
    const double diff = std::abs(rec.estimate.cwiseAbs().sum() - bp.estimate.cwiseAbs().sum());
    worst = std::max(worst, diff);
    if (diff > 1e-7) ++failures;
  }
  const double t = sw.seconds();
  return {failures == 0 && t < 60.0,
          fmt("100 instances at M = 64, %zu failures, max objective gap %.3g, %.2f s", failures, worst, t)};
}

std::vector<ResultRow> sweep(MatrixKind kind, SweepKind which) {
  ExperimentConfig c;
  c.m = 256;
  c.rate = 0.25;
  c.sparsity = 0.2;
  c.matrix_kind = kind;
  c.sweep = which;
  c.grid = parse_grid(which == SweepKind::sparsity ? "0:0.6:0.05" : "0.05:0.65:0.05");
  c.trials = 500;
  c.seed = 1;
  return run_sweep(c);
}

std::string rates(const std::vector<ResultRow>& rows) {
  std::string s;
  for (const auto& r : rows) s += fmt("%s%zu", s.empty() ? "" : ",", r.errors);
  return s;
}

bool non_decreasing(const std::vector<ResultRow>& rows) {
  for (std::size_t i = 1; i < rows.size(); ++i) {
    if (rows[i].error_rate < rows[i - 1].error_rate) return false;
  }
  return true;
}

// Gaussian may exceed polar by at most two combined binomial standard errors
// wherever the polar error rate is at most one half.
std::size_t ordering_violations(const std::vector<ResultRow>& polar, const std::vector<ResultRow>& gauss) {
  std::size_t bad = 0;
  for (std::size_t i = 0; i < polar.size(); ++i) {
    const double pp = polar[i].error_rate;
    const double pg = gauss[i].error_rate;
    if (pp > 0.5) continue;
    const double n = static_cast<double>(polar[i].trials);
    const double se = std::sqrt(pp * (1 - pp) / n + pg * (1 - pg) / n);
    if (pg > pp + 2.0 * se) ++bad;
  }
  return bad;
}

Outcome sweep_shapes() {
  Stopwatch sw;
  const auto ps = sweep(MatrixKind::polar, SweepKind::sparsity);
  const auto gs = sweep(MatrixKind::gaussian, SweepKind::sparsity);
  const auto pr = sweep(MatrixKind::polar, SweepKind::rate);
  const auto gr = sweep(MatrixKind::gaussian, SweepKind::rate);
  bool ok = true;
  for (const auto* rows : {&ps, &gs}) {
    ok = ok && rows->front().error_rate == 0.0 && non_decreasing(*rows) && rows->back().error_rate >= 0.99;
  }
  ok = ok && non_decreasing(pr) && non_decreasing(gr);
  const std::size_t bad = ordering_violations(ps, gs) + ordering_violations(pr, gr);
  ok = ok && bad == 0;
  return {ok, fmt("errors/500 sparsity polar [%s] gaussian [%s]; rate polar [%s] gaussian [%s]; "
                  "ordering violations %zu, %.0f s",
                  rates(ps).c_str(), rates(gs).c_str(), rates(pr).c_str(), rates(gr).c_str(), bad,
                  sw.seconds())};
}

double sc_failure_rate(int n, std::size_t trials) {
  const auto t = PolarTransform::build(n);
  const std::size_t m = t.size();
  const auto n_good = static_cast<std::size_t>(std::ceil(0.85 * static_cast<double>(m)));
  const auto split = select_channels(mid_recursion(0.05, n), n_good);
  std::size_t failures = 0;
  for (std::size_t trial = 0; trial < trials; ++trial) {
    Rng rng = Rng::substream(9, trial);
    const Vector x0 = sample_signal(m, rng);
    const auto obs = apply_saec(t.apply(x0), NoiseModel{0.05, 1.0}, rng);
    if (!sc_erasure_decode(t, obs, gather(x0, split.bad), split.good).ok()) ++failures;
  }
  return static_cast<double>(failures) / static_cast<double>(trials);
}

Outcome sc_decoder() {
  Stopwatch sw;
  Rng rng(9);
  std::size_t successes = 0;
  std::size_t inexact = 0;
  for (int n = 0; n <= 4; ++n) {
    const auto t = PolarTransform::build(n);
    const std::size_t m = t.size();
    const Vector x0 = sample_signal(m, rng);
    const Vector z = t.apply(x0);
    for (std::size_t n_good = 0; n_good <= m; ++n_good) {
      const auto split = select_channels(mid_recursion(0.5, n), n_good);
      const Vector frozen = gather(x0, split.bad);
      for (std::size_t mask = 0; mask < (std::size_t{1} << m); ++mask) {
        FlaggedOutput obs{z, std::vector<bool>(m, false)};
        for (std::size_t i = 0; i < m; ++i) {
          obs.erased[i] = (mask >> i) & 1u;
          if (obs.erased[i]) obs.values[static_cast<Eigen::Index>(i)] = 1e6;
        }
        const auto r = sc_erasure_decode(t, obs, frozen, split.good);
        if (!r.ok()) continue;
        ++successes;
        if ((r.estimate - x0).cwiseAbs().maxCoeff() > 1e-9) ++inexact;
      }
    }
  }
  const double f8 = sc_failure_rate(8, 2000);
  const double f12 = sc_failure_rate(12, 2000);
  const double t = sw.seconds();
  return {inexact == 0 && f12 < f8 && t < 300.0,
          fmt("exhaustive n <= 4: %zu successes, %zu inexact; failure rate n=8 %.4f, n=12 %.4f, %.1f s",
              successes, inexact, f8, f12, t)};
}

Outcome information_dimension() {
  Stopwatch sw;
  bool ok = true;
  std::string s;
  for (int levels : {1024, 4096}) {
    for (double p : {0.1, 0.3}) {
      const auto spec = sparse_noise_mixture(p, 1.0);
      const double mix =
          estimate_dim(mixture_sampler(spec), 1, levels, 1000000, 10, mixture_box(spec)).dim_estimate;
      const double sanc = estimate_sanc_mid(p, 1.0, levels, 1000000, 10).mid;
      const auto [d1, d2] = estimate_onestep_mids(p, 1.0, levels, 1000000, 10);
      const bool here = std::abs(mix - p) <= 0.05 && std::abs(sanc - (1 - p)) <= 0.1 &&
                        std::abs(d1.mid - (1 - p) * (1 - p)) <= 0.1 && std::abs(d2.mid - (1 - p * p)) <= 0.1;
      ok = ok && here;
      s += fmt(" m=%d p=%.1f: mix %.4f sanc %.4f onestep (%.4f, %.4f) want (%.2f, %.2f, %.4f, %.4f)%s;", levels,
               p, mix, sanc, d1.mid, d2.mid, p, 1 - p, (1 - p) * (1 - p), 1 - p * p, here ? "" : " out");
    }
  }
  const double t = sw.seconds();
  ok = ok && t < 300.0;
  return {ok, fmt("%s %.1f s", s.c_str(), t)};
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Acceptance checks"};
  int only = 0;
  app.add_option("--criterion", only, "run a single criterion (1-10)")->check(CLI::Range(1, 10));
  CLI11_PARSE(app, argc, argv);

  const std::vector<std::pair<const char*, Outcome (*)()>> criteria = {
      {"MID conservation", mid_conservation},
      {"closed-form one-step recursion", closed_form_one_step},
      {"polarization profile", polarization_profile},
      {"construction soundness", construction_soundness},
      {"l0 duality round trip", l0_round_trip},
      {"l1/l0 oracle equivalence", l1_l0_equivalence},
      {"duality pipeline identity", duality_pipeline},
      {"sweep shapes", sweep_shapes},
      {"SC erasure decoder", sc_decoder},
      {"information dimension estimates", information_dimension},
  };
  bool all = true;
  for (std::size_t k = 1; k <= criteria.size(); ++k) {
    if (only != 0 && static_cast<std::size_t>(only) != k) continue;
    Outcome o;
    try {
      o = criteria[k - 1].second();
    } catch (const std::exception& ex) {
      o = {false, std::string("exception: ") + ex.what()};
    }
    std::printf("%s %zu %s: %s\n", o.pass ? "PASS" : "FAIL", k, criteria[k - 1].first, o.detail.c_str());
    std::fflush(stdout);
    all = all && o.pass;
  }
  return all ? 0 : 1;
}
