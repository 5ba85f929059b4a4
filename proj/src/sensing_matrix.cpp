#include "polarcs/sensing_matrix.hpp"

#include <algorithm>
#include <numeric>
#include <string>

#include "polarcs/channel_sim.hpp"
#include "polarcs/errors.hpp"
#include "polarcs/mid_profile.hpp"

namespace polarcs {

namespace {

Eigen::Index idx(std::size_t i) { return static_cast<Eigen::Index>(i); }

double binomial(std::size_t n, std::size_t k) {
  double r = 1.0;
  for (std::size_t i = 1; i <= k; ++i) {
    r = r * static_cast<double>(n - k + i) / static_cast<double>(i);
  }
  return r;
}

// Advances `comb` (sorted, values < n) to the next k-combination in
// lexicographic order.
bool next_combination(std::vector<std::size_t>& comb, std::size_t n) {
  const std::size_t k = comb.size();
  for (std::size_t i = k; i-- > 0;) {
    if (comb[i] < n - k + i) {
      ++comb[i];
      for (std::size_t j = i + 1; j < k; ++j) comb[j] = comb[j - 1] + 1;
      return true;
    }
  }
  return false;
}

}  // namespace

std::size_t numerical_rank(const Matrix& m, double rel_tol) {
  if (m.size() == 0) return 0;
  Eigen::BDCSVD<Matrix> svd(m);
  const auto& sv = svd.singularValues();
  if (sv.size() == 0 || sv[0] == 0.0) return 0;
  const double cut = rel_tol * sv[0];
  std::size_t r = 0;
  for (Eigen::Index i = 0; i < sv.size(); ++i) {
    if (sv[i] > cut) ++r;
  }
  return r;
}

ColumnSplit split_columns(const PolarTransform& t, const IndexSet& good) {
  const std::size_t m = t.size();
  std::vector<bool> is_good(m, false);
  for (std::size_t g : good) {
    if (g >= m) throw InvalidParameter("good index " + std::to_string(g) + " out of range");
    if (is_good[g]) throw InvalidParameter("repeated good index " + std::to_string(g));
    is_good[g] = true;
  }
  const Matrix& h = t.matrix();
  ColumnSplit out{Matrix(idx(m), idx(good.size())), Matrix(idx(m), idx(m - good.size()))};
  Eigen::Index ga = 0;
  Eigen::Index ba = 0;
  for (std::size_t j = 0; j < m; ++j) {
    if (is_good[j]) {
      out.A.col(ga++) = h.col(idx(j));
    } else {
      out.A_b.col(ba++) = h.col(idx(j));
    }
  }
  return out;
}

Matrix annihilator(const Matrix& A) {
  const Eigen::Index m = A.rows();
  const Eigen::Index n = A.cols();
  if (n > m) throw DegenerateInput("more columns than rows: no full column rank");
  if (n == 0) return Matrix::Identity(m, m);
  if (numerical_rank(A) < static_cast<std::size_t>(n)) {
    throw DegenerateInput("matrix is numerically rank deficient");
  }
  Eigen::HouseholderQR<Matrix> qr(A);
  const Matrix q = qr.householderQ() * Matrix::Identity(m, m);
  return q.rightCols(m - n).transpose();
}

Vector min_norm_preimage(const Matrix& F, const Vector& y_prime) {
  if (F.rows() != y_prime.size()) {
    throw DimensionError("measurement length " + std::to_string(y_prime.size()) +
                         " does not match " + std::to_string(F.rows()) + " rows");
  }
  if (F.rows() == 0) return Vector::Zero(F.cols());
  if (F.rows() > F.cols() || numerical_rank(F) < static_cast<std::size_t>(F.rows())) {
    throw DegenerateInput("measurement matrix lacks full row rank");
  }
  // F^T = Q R  =>  y = Q R^{-T} y'.
  Eigen::HouseholderQR<Matrix> qr(F.transpose());
  const Eigen::Index r = F.rows();
  const auto R = qr.matrixQR().topLeftCorner(r, r).triangularView<Eigen::Upper>();
  const Vector t = R.transpose().solve(y_prime);
  Vector padded = Vector::Zero(F.cols());
  padded.head(r) = t;
  return qr.householderQ() * padded;
}

Vector cs_to_analog(const SensingSystem& system, const Vector& y_prime) {
  return min_norm_preimage(system.F, y_prime);
}

SensingSystem build_sensing_system(const PolarTransform& t, const IndexSet& good_in) {
  IndexSet good = good_in;
  std::sort(good.begin(), good.end());
  ColumnSplit split = split_columns(t, good);
  SensingSystem s;
  s.M = t.size();
  s.N = good.size();
  s.good = good;
  std::vector<bool> is_good(s.M, false);
  for (std::size_t g : good) is_good[g] = true;
  for (std::size_t j = 0; j < s.M; ++j) {
    if (!is_good[j]) s.bad.push_back(j);
  }
  s.H = t.matrix();
  s.A = std::move(split.A);
  s.A_b = std::move(split.A_b);
  s.F = annihilator(s.A);
  return s;
}

SensingSystem build_polar_system(int n, double p, std::size_t n_good, double beta) {
  const PolarTransform t = PolarTransform::build(n, beta);
  const ChannelSplit split = select_channels(mid_recursion(p, n), n_good);
  return build_sensing_system(t, split.good);
}

SparkResult spark_bruteforce(const Matrix& F, std::optional<std::size_t> cap) {
  const auto cols = static_cast<std::size_t>(F.cols());
  if (!cap) {
    if (cols > 24) {
      throw SizeLimitError("exhaustive spark search refused for " + std::to_string(cols) +
                           " columns; pass a cap");
    }
    cap = cols;
  }
  const std::size_t limit = std::min(*cap, cols);
  // Any rank(F) + 1 columns are dependent, so the search ends there.
  const std::size_t ceiling = numerical_rank(F) + 1;
  double work = 0.0;
  for (std::size_t k = 1; k <= std::min(limit, ceiling - 1); ++k) work += binomial(cols, k);
  if (work > 1e8) {
    throw SizeLimitError("spark search would enumerate " + std::to_string(work) + " subsets");
  }

  for (std::size_t k = 1; k <= limit; ++k) {
    if (k >= ceiling) return SparkResult{k, false};
    std::vector<std::size_t> comb(k);
    std::iota(comb.begin(), comb.end(), std::size_t{0});
    Matrix sub(F.rows(), idx(k));
    do {
      for (std::size_t c = 0; c < k; ++c) sub.col(idx(c)) = F.col(idx(comb[c]));
      if (numerical_rank(sub) < k) return SparkResult{k, false};
    } while (next_combination(comb, cols));
  }
  return SparkResult{limit + 1, true};
}

Matrix gaussian_matrix(const GaussianMatrixSpec& spec) {
  Rng rng(spec.seed);
  Matrix g(idx(spec.rows), idx(spec.cols));
  for (Eigen::Index r = 0; r < g.rows(); ++r) {
    for (Eigen::Index c = 0; c < g.cols(); ++c) g(r, c) = rng.normal();
  }
  return g;
}

}  // namespace polarcs
