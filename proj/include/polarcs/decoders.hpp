#pragma once

#include <cstddef>
#include <optional>
#include <string_view>

#include "polarcs/channel_sim.hpp"
#include "polarcs/polar_core.hpp"
#include "polarcs/sensing_matrix.hpp"
#include "polarcs/types.hpp"

namespace polarcs {

enum class DecodeStatus { success, infeasible, erasure_failure, not_converged };

std::string_view to_string(DecodeStatus status);

/// Optimality and feasibility diagnostics. For the l1 programs the dual
/// objective is a lower bound on the optimum (up to dual_residual), so
/// relative_gap bounds the suboptimality of the estimate.
struct Certificate {
  double primal_objective = 0.0;
  double dual_objective = 0.0;
  double relative_gap = 0.0;     // (primal - dual) / (1 + |primal|)
  double primal_residual = 0.0;  // relative equality-constraint residual
  double dual_residual = 0.0;    // dual constraint violation
  int iterations = 0;
  bool polished = false;  // estimate came from the basic-solution crossover
};

struct DecodeResult {
  Vector estimate;
  DecodeStatus status = DecodeStatus::success;
  Certificate certificate;

  bool ok() const { return status == DecodeStatus::success; }
};

struct L1Options {
  double tolerance = 1e-9;              // relative duality gap
  double feasibility_tolerance = 1e-8;  // primal / dual residuals
  int max_iterations = 0;               // 0: 10 * (rows + cols)
};

/// minimize ||y - A x||_1.
///
/// Solved through its dual, max y^T u s.t. A^T u = 0, |u| <= 1, with the
/// interior point LP solver; x is read off the equality multipliers. The
/// interior solution is then polished by fitting x exactly on the
/// zero-residual rows and re-deriving a dual certificate on them.
/// Throws DimensionError on size mismatch and DegenerateInput when A is
/// rank deficient or wider than tall.
DecodeResult l1_decode(const Matrix& A, const Vector& y, const L1Options& options = {});

/// minimize ||e||_1 s.t. F e = y', as the standard-form LP over
/// (e+, e-) >= 0, followed by a support-restricted least-squares polish.
/// Throws DegenerateInput unless F has full row rank.
DecodeResult basis_pursuit(const Matrix& F, const Vector& y_prime, const L1Options& options = {});

/// Sparsest e with F e = y', searching supports of size 0..max_sparsity in
/// increasing size and lexicographic order within a size; the first
/// support whose least-squares residual is <= 1e-9 (1 + ||y'||) wins.
/// Status infeasible when none qualifies. Refuses (SizeLimitError) more
/// than 24 columns or max_sparsity > columns.
DecodeResult l0_oracle(const Matrix& F, const Vector& y_prime, std::size_t max_sparsity);

/// Successive cancellation over the polar recursion for erasure-flagged
/// observations z = H x0. `frozen` holds the values of the bad inputs in
/// ascending index order. Known values propagate exactly; a good input
/// that stays unresolved gives status erasure_failure, with unresolved
/// coordinates set to NaN.
DecodeResult sc_erasure_decode(const PolarTransform& t, const FlaggedOutput& observation,
                               const Vector& frozen, const IndexSet& good);

enum class RecoveryMethod { l1, l0_oracle };

struct RecoveryOptions {
  L1Options l1;
  /// Support-size cap for the l0 search; the measurement count when unset.
  std::optional<std::size_t> l0_max_sparsity;
};

/// Recovers the sparse e behind y' = F e:
///   1. y = cs_to_analog(y')
///   2. y0 = y + A_b x_b, with the frozen vector x_b = 0
///   3. decode x from y0 against A (l1), or find e directly on F (l0)
///   4. e = y - A x
/// The certificate's primal_residual reports ||F e - y'|| / (1 + ||y'||).
DecodeResult recover_sparse(const SensingSystem& system, const Vector& y_prime,
                            RecoveryMethod method, const RecoveryOptions& options = {});

}  // namespace polarcs
