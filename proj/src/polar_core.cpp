#include "polarcs/polar_core.hpp"

#include <bit>
#include <cmath>
#include <stdexcept>
#include <string>

#include "polarcs/errors.hpp"

namespace polarcs {

Eigen::Matrix2d build_g0(double beta) {
  if (beta == 0.0 || !std::isfinite(beta)) {
    throw InvalidParameter("beta must be finite and non-zero (singular kernel)");
  }
  Eigen::Matrix2d g;
  g << beta, beta, 0.0, 1.0;
  return g;
}

std::size_t bit_reverse(std::size_t i, int bits) {
  std::size_t r = 0;
  for (int b = 0; b < bits; ++b) {
    r = (r << 1) | ((i >> b) & 1U);
  }
  return r;
}

std::vector<std::size_t> bit_reversal_permutation(int n) {
  if (n < 0 || n > kMaxStages) {
    throw InvalidParameter("stage count out of range: " + std::to_string(n));
  }
  const std::size_t m = std::size_t{1} << n;
  std::vector<std::size_t> perm(m);
  for (std::size_t i = 0; i < m; ++i) perm[i] = bit_reverse(i, n);
  return perm;
}

PolarTransform PolarTransform::build(int n, double beta, int dense_cap) {
  build_g0(beta);
  if (n < 0 || n > kMaxStages) {
    throw InvalidParameter("stage count out of range: " + std::to_string(n));
  }
  Matrix h;
  if (n <= dense_cap) {
    const std::size_t m = std::size_t{1} << n;
    const std::size_t mask = m - 1;
    // beta^k for k zero bits in the row index.
    std::vector<double> powers(static_cast<std::size_t>(n) + 1, 1.0);
    for (int k = 1; k <= n; ++k) powers[k] = powers[k - 1] * beta;
    h = Matrix::Zero(static_cast<Eigen::Index>(m), static_cast<Eigen::Index>(m));
    for (std::size_t j = 0; j < m; ++j) {
      const std::size_t c = bit_reverse(j, n);
      for (std::size_t r = 0; r < m; ++r) {
        if ((r & ~c & mask) == 0) {
          const int zeros = n - std::popcount(r);
          h(static_cast<Eigen::Index>(r), static_cast<Eigen::Index>(j)) = powers[zeros];
        }
      }
    }
  }
  return PolarTransform(n, beta, std::move(h));
}

const Matrix& PolarTransform::matrix() const {
  if (!has_dense()) {
    throw std::logic_error("dense transform not materialized for n = " + std::to_string(n_));
  }
  return h_;
}

void PolarTransform::check_length(const Vector& v) const {
  if (static_cast<std::size_t>(v.size()) != size()) {
    throw DimensionError("vector length " + std::to_string(v.size()) +
                         " does not match transform size " + std::to_string(size()));
  }
}

Vector PolarTransform::apply(const Vector& x0) const {
  check_length(x0);
  const Eigen::Index m = x0.size();
  Vector cur = x0;
  Vector next(m);
  for (int s = 0; s < n_; ++s) {
    const Eigen::Index block = m >> s;
    const Eigen::Index half = block / 2;
    for (Eigen::Index off = 0; off < m; off += block) {
      for (Eigen::Index i = 0; i < half; ++i) {
        const double a = cur[off + 2 * i];
        const double b = cur[off + 2 * i + 1];
        next[off + i] = beta_ * (a + b);
        next[off + half + i] = b;
      }
    }
    cur.swap(next);
  }
  return cur;
}

Vector PolarTransform::apply_dense(const Vector& x0) const {
  check_length(x0);
  return matrix() * x0;
}

Vector PolarTransform::solve(const Vector& z) const {
  check_length(z);
  const Eigen::Index m = z.size();
  Vector cur = z;
  Vector next(m);
  for (int s = n_ - 1; s >= 0; --s) {
    const Eigen::Index block = m >> s;
    const Eigen::Index half = block / 2;
    for (Eigen::Index off = 0; off < m; off += block) {
      for (Eigen::Index i = 0; i < half; ++i) {
        const double b = cur[off + half + i];
        next[off + 2 * i + 1] = b;
        next[off + 2 * i] = cur[off + i] / beta_ - b;
      }
    }
    cur.swap(next);
  }
  return cur;
}

Vector PolarTransform::column(std::size_t j) const {
  if (j >= size()) throw InvalidParameter("column index out of range");
  if (has_dense()) return h_.col(static_cast<Eigen::Index>(j));
  Vector e = Vector::Zero(static_cast<Eigen::Index>(size()));
  e[static_cast<Eigen::Index>(j)] = 1.0;
  return apply(e);
}

PolarTransform build_transform(int n, double beta) { return PolarTransform::build(n, beta); }

Vector apply(const PolarTransform& t, const Vector& x0) { return t.apply(x0); }

}  // namespace polarcs
