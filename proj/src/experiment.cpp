#include "polarcs/experiment.hpp"

#include <atomic>
#include <charconv>
#include <chrono>
#include <cmath>
#include <limits>
#include <map>
#include <mutex>
#include <ostream>
#include <thread>

#include "polarcs/channel_sim.hpp"
#include "polarcs/errors.hpp"
#include "polarcs/mid_profile.hpp"
#include "polarcs/sensing_matrix.hpp"

namespace polarcs {

namespace {

double parse_real(const std::string& s) {
  double v = 0.0;
  const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec != std::errc() || ptr != s.data() + s.size() || !std::isfinite(v)) {
    throw InvalidParameter("bad number in grid: '" + s + "'");
  }
  return v;
}

double round12(double v) {
  const double r = std::round(v * 1e12) / 1e12;
  return r == 0.0 ? 0.0 : r;
}

enum Stream : std::uint64_t { kSignal = 1, kNoise = 2, kMatrix = 3 };

Rng trial_stream(std::uint64_t seed, std::size_t trial, Stream which) {
  return Rng::substream(mix64(seed) ^ mix64(trial), which);
}

int log2_exact(std::size_t m) {
  int n = 0;
  while ((std::size_t{1} << n) < m) ++n;
  if ((std::size_t{1} << n) != m) throw InvalidParameter("polar codes need a power-of-two length");
  return n;
}

}  // namespace

std::vector<double> parse_grid(const std::string& spec) {
  std::vector<std::string> parts;
  std::size_t start = 0;
  for (;;) {
    const auto pos = spec.find(':', start);
    parts.push_back(spec.substr(start, pos - start));
    if (pos == std::string::npos) break;
    start = pos + 1;
  }
  if (parts.size() == 1) return {parse_real(parts[0])};
  if (parts.size() != 3) throw InvalidParameter("grid must be a:b:step");
  const double a = parse_real(parts[0]);
  const double b = parse_real(parts[1]);
  const double step = parse_real(parts[2]);
  if (!(step > 0.0)) throw InvalidParameter("grid step must be positive");
  if (!(b >= a)) throw InvalidParameter("grid end must not precede its start");
  const auto count = static_cast<std::size_t>(std::floor((b - a) / step + 1e-9)) + 1;
  if (count > 1000000) throw InvalidParameter("grid too large");
  std::vector<double> out;
  for (std::size_t k = 0; k < count; ++k) out.push_back(round12(a + static_cast<double>(k) * step));
  return out;
}

void ExperimentConfig::validate() const {
  if (m < 2) throw InvalidParameter("codeword length must be at least 2");
  if (matrix_kind == MatrixKind::polar) log2_exact(m);
  if (grid.empty()) throw InvalidParameter("empty grid");
  for (std::size_t i = 1; i < grid.size(); ++i) {
    if (!(grid[i] > grid[i - 1])) throw InvalidParameter("grid must be increasing");
  }
  auto check_rate = [&](double r) {
    if (!(r > 0.0 && r <= 1.0)) throw InvalidParameter("rate must lie in (0, 1]");
  };
  auto check_sparsity = [](double s) {
    if (!(s >= 0.0 && s <= 1.0)) throw InvalidParameter("sparsity must lie in [0, 1]");
  };
  if (sweep == SweepKind::sparsity) {
    for (double v : grid) check_sparsity(v);
    if (n_good) {
      if (*n_good == 0 || *n_good > m) throw InvalidParameter("N must lie in [1, m]");
    } else {
      check_rate(rate);
    }
  } else {
    for (double v : grid) check_rate(v);
    check_sparsity(sparsity);
  }
  if (trials < 1) throw InvalidParameter("trials must be at least 1");
  if (!(sigma > 0.0) || !std::isfinite(sigma)) throw InvalidParameter("sigma must be positive");
  if (!(error_threshold > 0.0)) throw InvalidParameter("error threshold must be positive");
  if (design_p && !(*design_p >= 0.0 && *design_p <= 1.0)) {
    throw InvalidParameter("design noise sparsity must lie in [0, 1]");
  }
  build_g0(beta);
  if (threads < 1) throw InvalidParameter("threads must be at least 1");
}

namespace {

struct PointSetup {
  std::size_t n_good = 0;
  double sparsity = 0.0;
  Matrix A;  // polar, or a pinned Gaussian draw; empty for per-trial draws
};

PointSetup setup_point(const ExperimentConfig& c, double value) {
  PointSetup s;
  if (c.sweep == SweepKind::sparsity) {
    s.sparsity = value;
    s.n_good = c.n_good ? *c.n_good : dimension_for_rate(c.rate, c.m);
  } else {
    s.sparsity = c.sparsity;
    s.n_good = dimension_for_rate(value, c.m);
  }
  if (c.matrix_kind == MatrixKind::polar) {
    const double r = static_cast<double>(s.n_good) / static_cast<double>(c.m);
    const double p = c.design_p ? *c.design_p : 1.0 - r;
    s.A = build_polar_system(log2_exact(c.m), p, s.n_good, c.beta).A;
  } else if (c.fixed_matrix) {
    Rng rng = Rng::substream(mix64(c.seed), kMatrix);
    s.A = gaussian_matrix({c.m, c.m, rng.engine()()}).leftCols(static_cast<Eigen::Index>(s.n_good));
  }
  return s;
}

TrialOutcome trial_at(const ExperimentConfig& c, const PointSetup& s, std::size_t trial) {
  const auto N = static_cast<Eigen::Index>(s.n_good);

  Rng signal_rng = trial_stream(c.seed, trial, kSignal);
  const Vector x = sample_signal(c.m, signal_rng).head(N);
  Rng noise_rng = trial_stream(c.seed, trial, kNoise);
  const SparseVector e = sample_sparse_noise_fixed(c.m, s.sparsity, c.sigma, noise_rng);

  Matrix fresh;
  if (s.A.size() == 0) {
    Rng matrix_rng = trial_stream(c.seed, trial, kMatrix);
    fresh = gaussian_matrix({c.m, c.m, matrix_rng.engine()()}).leftCols(N);
  }
  const Matrix& A = s.A.size() ? s.A : fresh;

  const Vector y = A * x + e.values;
  TrialOutcome out;
  try {
    const DecodeResult r = l1_decode(A, y, c.l1);
    if (!r.ok()) {
      out.solver_failure = true;
      out.error = true;
      out.mean_abs_error = std::numeric_limits<double>::infinity();
      return out;
    }
    out.mean_abs_error = (r.estimate - x).cwiseAbs().sum() / static_cast<double>(N);
  } catch (const DegenerateInput&) {
    out.solver_failure = true;
    out.error = true;
    out.mean_abs_error = std::numeric_limits<double>::infinity();
    return out;
  }
  out.error = !(out.mean_abs_error <= c.error_threshold);
  return out;
}

}  // namespace

TrialOutcome run_trial(const ExperimentConfig& config, double sweep_value, std::size_t trial) {
  config.validate();
  return trial_at(config, setup_point(config, sweep_value), trial);
}

std::vector<ResultRow> run_sweep(const ExperimentConfig& config) {
  config.validate();
  std::vector<ResultRow> rows;
  for (double value : config.grid) {
    const auto t0 = std::chrono::steady_clock::now();
    const PointSetup setup = setup_point(config, value);
    std::vector<TrialOutcome> outcomes(config.trials);
    std::atomic<std::size_t> next{0};
    std::exception_ptr failure;
    std::mutex failure_mutex;
    auto worker = [&] {
      for (;;) {
        const std::size_t t = next.fetch_add(1);
        if (t >= config.trials) return;
        try {
          outcomes[t] = trial_at(config, setup, t);
        } catch (...) {
          std::lock_guard lock(failure_mutex);
          if (!failure) failure = std::current_exception();
          next = config.trials;
          return;
        }
      }
    };
    const unsigned workers =
        static_cast<unsigned>(std::min<std::size_t>(config.threads, config.trials));
    if (workers <= 1) {
      worker();
    } else {
      std::vector<std::thread> pool;
      for (unsigned w = 0; w < workers; ++w) pool.emplace_back(worker);
      for (auto& th : pool) th.join();
    }
    if (failure) std::rethrow_exception(failure);

    ResultRow row;
    row.sweep_value = value;
    row.trials = config.trials;
    for (const TrialOutcome& o : outcomes) {
      row.errors += o.error ? 1 : 0;
      row.solver_failures += o.solver_failure ? 1 : 0;
    }
    row.error_rate = static_cast<double>(row.errors) / static_cast<double>(row.trials);
    if (config.timing) {
      row.wall_time_seconds =
          std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    }
    rows.push_back(row);
  }
  return rows;
}

std::string format_shortest(double v) {
  char buf[64];
  const auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, v);
  if (ec != std::errc()) throw InvalidParameter("cannot format number");
  return std::string(buf, ptr);
}

void write_results_csv(std::ostream& out, const std::vector<ResultRow>& rows) {
  out << kResultsHeader << '\n';
  for (const ResultRow& r : rows) {
    out << format_shortest(r.sweep_value) << ',' << r.trials << ',' << r.errors << ','
        << format_shortest(r.error_rate) << ',' << r.solver_failures << ','
        << format_shortest(r.wall_time_seconds) << '\n';
  }
}

}  // namespace polarcs
