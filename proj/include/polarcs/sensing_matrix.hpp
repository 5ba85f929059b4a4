#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>

#include "polarcs/polar_core.hpp"
#include "polarcs/types.hpp"

namespace polarcs {

/// Polar coding matrices and the derived noiseless-CS measurement matrix.
///
/// Invariants: F * A == 0, F * F^T == I (both to ~1e-10), and interleaving
/// the columns of A (at `good`) and A_b (at `bad`) reproduces H.
struct SensingSystem {
  std::size_t M = 0;
  std::size_t N = 0;
  IndexSet good;
  IndexSet bad;
  Matrix H;    // M x M
  Matrix A;    // M x N, good columns of H
  Matrix A_b;  // M x (M - N), bad columns of H
  Matrix F;    // (M - N) x M, orthonormal rows spanning col(A)^perp
};

struct ColumnSplit {
  Matrix A;
  Matrix A_b;
};

/// Splits H into the columns at `good` and the remaining columns, both in
/// ascending index order. Throws InvalidParameter for out-of-range or
/// repeated indices.
ColumnSplit split_columns(const PolarTransform& t, const IndexSet& good);

/// Rows form an orthonormal basis of the orthogonal complement of col(A),
/// taken from a Householder QR of A. Throws DegenerateInput when A is
/// numerically rank deficient.
Matrix annihilator(const Matrix& A);

/// Minimum-norm y with F y = y'. Throws DimensionError on size mismatch
/// and DegenerateInput when F lacks full row rank.
Vector min_norm_preimage(const Matrix& F, const Vector& y_prime);

/// Analog-side observation for CS measurements y'. Any particular solution
/// would do because the implicit information vector is immaterial; the
/// minimum-norm one keeps the conversion deterministic.
Vector cs_to_analog(const SensingSystem& system, const Vector& y_prime);

/// Builds the system from an explicit good-index set.
SensingSystem build_sensing_system(const PolarTransform& t, const IndexSet& good);

/// Builds the system for block size 2^n, choosing the N highest-MID
/// channels of the noise-sparsity-p profile.
SensingSystem build_polar_system(int n, double p, std::size_t n_good, double beta = kDefaultBeta);

/// Number of singular values above kRankTolerance times the largest.
std::size_t numerical_rank(const Matrix& m, double rel_tol = kRankTolerance);

struct SparkResult {
  std::size_t value = 0;
  /// True when no dependent column subset of size <= cap exists, in which
  /// case the spark is at least `value` (= cap + 1).
  bool lower_bound = false;
};

/// Smallest number of linearly dependent columns, by exhaustive search over
/// subsets of increasing size. Without a cap the whole range is searched,
/// which is refused (SizeLimitError) for more than 24 columns.
SparkResult spark_bruteforce(const Matrix& F, std::optional<std::size_t> cap = std::nullopt);

struct GaussianMatrixSpec {
  std::size_t rows = 0;
  std::size_t cols = 0;
  std::uint64_t seed = 0;
};

/// i.i.d. standard normal entries (no column normalization), filled row by
/// row from Rng(seed).
Matrix gaussian_matrix(const GaussianMatrixSpec& spec);

}  // namespace polarcs
