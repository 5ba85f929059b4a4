#pragma once

#include <cstddef>
#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "polarcs/decoders.hpp"
#include "polarcs/polar_core.hpp"

namespace polarcs {

enum class MatrixKind { polar, gaussian };
enum class SweepKind { sparsity, rate };

/// "a:b:step" with a <= b and step > 0, endpoints inclusive. Points are
/// a + k * step rounded to 12 decimals so that 0.05-steps print cleanly.
/// A single number gives a one-point grid.
std::vector<double> parse_grid(const std::string& spec);

struct ExperimentConfig {
  std::size_t m = 256;
  double rate = 0.25;                 // fixed rate for sparsity sweeps
  std::optional<std::size_t> n_good;  // overrides rate for sparsity sweeps
  double sparsity = 0.2;              // fixed sparsity for rate sweeps
  MatrixKind matrix_kind = MatrixKind::polar;
  SweepKind sweep = SweepKind::sparsity;
  std::vector<double> grid;
  std::size_t trials = 500;
  std::uint64_t seed = 0;
  double sigma = 1.0;
  double error_threshold = 1e-4;
  /// Noise sparsity the polar code is designed for; 1 - rate when unset.
  std::optional<double> design_p;
  double beta = kDefaultBeta;
  /// One Gaussian draw for the whole sweep instead of one per trial.
  bool fixed_matrix = false;
  unsigned threads = 1;
  bool timing = false;  // wall_time_s is reported as 0 unless set
  L1Options l1;

  /// Throws InvalidParameter.
  void validate() const;
};

struct ResultRow {
  double sweep_value = 0.0;
  std::size_t trials = 0;
  std::size_t errors = 0;
  double error_rate = 0.0;
  std::size_t solver_failures = 0;
  double wall_time_seconds = 0.0;
};

/// Trial t draws its signal, noise and (Gaussian) matrix from substreams of
/// (seed, t) alone. Every grid point reuses the same trial streams, so the
/// noise supports are nested along a sparsity grid and the signals are
/// nested along a rate grid. Results do not depend on `threads`.
std::vector<ResultRow> run_sweep(const ExperimentConfig& config);

/// Outcome of a single trial at a single grid point.
struct TrialOutcome {
  bool error = false;
  bool solver_failure = false;
  double mean_abs_error = 0.0;
};
TrialOutcome run_trial(const ExperimentConfig& config, double sweep_value, std::size_t trial);

inline constexpr const char* kResultsHeader =
    "sweep_value,trials,errors,error_rate,solver_failures,wall_time_s";

/// Shortest round-trip decimal form.
std::string format_shortest(double v);

void write_results_csv(std::ostream& out, const std::vector<ResultRow>& rows);

}  // namespace polarcs
