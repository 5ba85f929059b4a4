#pragma once

#include <cstddef>
#include <vector>

#include <Eigen/Dense>

#include "polarcs/types.hpp"

namespace polarcs {

/// 1/sqrt(2): keeps the one-step kernel's first row at unit norm.
inline constexpr double kDefaultBeta = 0.70710678118654752440;

/// Stage limit for every construction (M <= 2^20).
inline constexpr int kMaxStages = 20;

/// Largest stage count for which the dense M x M matrix is materialized.
inline constexpr int kDefaultDenseCap = 13;

/// One-step kernel [[beta, beta], [0, 1]]. Throws InvalidParameter for beta == 0.
Eigen::Matrix2d build_g0(double beta);

/// Reverses the low `bits` bits of `i`.
std::size_t bit_reverse(std::size_t i, int bits);

/// perm[i] = bit_reverse(i, n) for i in [0, 2^n).
std::vector<std::size_t> bit_reversal_permutation(int n);

/// The real channel-polarizing transform H = kron^n(G0) * B_{2^n}, where B
/// permutes columns into bit-reversed order.
///
/// Entry (r, j) of H is beta^{zeros(r)} when every bit set in r is also set
/// in bit_reverse(j), and 0 otherwise; zeros(r) counts the zero bits of the
/// n-bit row index. Row norms therefore scale like beta^n for the top rows,
/// and conditioning degrades as cond(G0)^n for deep transforms.
///
/// Applying H factors as one pairing step (a_i = beta (x_{2i} + x_{2i+1}),
/// b_i = x_{2i+1}) followed by two independent half-size transforms on a
/// and b, which gives the O(M log M) butterfly used by apply() and solve().
///
/// Immutable after construction.
class PolarTransform {
 public:
  /// Throws InvalidParameter for beta == 0 or n outside [0, kMaxStages].
  /// The dense matrix is only built when n <= dense_cap.
  static PolarTransform build(int n, double beta = kDefaultBeta,
                              int dense_cap = kDefaultDenseCap);

  int stages() const { return n_; }
  double beta() const { return beta_; }
  std::size_t size() const { return std::size_t{1} << n_; }

  bool has_dense() const { return h_.size() > 0; }
  /// Throws std::logic_error when the dense matrix was not materialized.
  const Matrix& matrix() const;

  /// z = H x0 via the butterfly recursion.
  Vector apply(const Vector& x0) const;
  /// z = H x0 by dense multiplication (requires has_dense()).
  Vector apply_dense(const Vector& x0) const;
  /// x0 = H^{-1} z via the inverted butterfly.
  Vector solve(const Vector& z) const;

  /// Column j of H.
  Vector column(std::size_t j) const;

 private:
  PolarTransform(int n, double beta, Matrix h) : n_(n), beta_(beta), h_(std::move(h)) {}
  void check_length(const Vector& v) const;

  int n_;
  double beta_;
  Matrix h_;
};

PolarTransform build_transform(int n, double beta = kDefaultBeta);
Vector apply(const PolarTransform& t, const Vector& x0);

}  // namespace polarcs
