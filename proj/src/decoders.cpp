#include "polarcs/decoders.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <string>

#include "polarcs/errors.hpp"
#include "polarcs/lp_solver.hpp"

namespace polarcs {

std::string_view to_string(DecodeStatus status) {
  switch (status) {
    case DecodeStatus::success:
      return "success";
    case DecodeStatus::infeasible:
      return "infeasible";
    case DecodeStatus::erasure_failure:
      return "erasure_failure";
    case DecodeStatus::not_converged:
      return "not_converged";
  }
  return "unknown";
}

namespace {

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

Eigen::Index idx(std::size_t i) { return static_cast<Eigen::Index>(i); }

double sign(double v) { return v > 0.0 ? 1.0 : (v < 0.0 ? -1.0 : 0.0); }

double max_abs(const Vector& v) { return v.size() ? v.cwiseAbs().maxCoeff() : 0.0; }

Matrix gather_rows(const Matrix& a, const IndexSet& rows) {
  Matrix out(idx(rows.size()), a.cols());
  for (std::size_t i = 0; i < rows.size(); ++i) out.row(idx(i)) = a.row(idx(rows[i]));
  return out;
}

Matrix gather_cols(const Matrix& a, const IndexSet& cols) {
  Matrix out(a.rows(), idx(cols.size()));
  for (std::size_t i = 0; i < cols.size(); ++i) out.col(idx(i)) = a.col(idx(cols[i]));
  return out;
}

// Minimum-norm correction v0 + B (B^T B)^{-1} (t - B^T v0) so that B^T v = t.
// B must have full column rank.
Vector project_onto_constraint(const Matrix& b, const Vector& v0, const Vector& t) {
  Eigen::HouseholderQR<Matrix> qr(b);
  const Eigen::Index k = b.cols();
  const auto R = qr.matrixQR().topLeftCorner(k, k).triangularView<Eigen::Upper>();
  Vector padded = Vector::Zero(b.rows());
  padded.head(k) = R.transpose().solve(t - b.transpose() * v0);
  return v0 + qr.householderQ() * padded;
}

int iteration_cap(const L1Options& o, Eigen::Index rows, Eigen::Index cols) {
  return o.max_iterations > 0 ? o.max_iterations : static_cast<int>(10 * (rows + cols));
}

struct L1Candidate {
  Vector x;
  Vector u;
  bool dual_from_polish = false;
};

Certificate l1_certificate(const Matrix& A, const Vector& y, const Vector& x, const Vector& u) {
  Certificate c;
  c.primal_objective = (y - A * x).lpNorm<1>();
  c.dual_objective = y.dot(u);
  c.relative_gap = (c.primal_objective - c.dual_objective) / (1.0 + std::abs(c.primal_objective));
  const double box = std::max(0.0, max_abs(u) - 1.0);
  c.dual_residual = std::max(box, max_abs(A.transpose() * u));
  return c;
}

bool l1_certified(const Certificate& c, const L1Options& o) {
  return c.relative_gap <= o.tolerance && c.dual_residual <= o.feasibility_tolerance;
}

}  // namespace

DecodeResult l1_decode(const Matrix& A, const Vector& y, const L1Options& options) {
  const Eigen::Index m = A.rows();
  const Eigen::Index n = A.cols();
  if (y.size() != m) {
    throw DimensionError("observation length " + std::to_string(y.size()) + " does not match " +
                         std::to_string(m) + " rows");
  }
  if (n > m) throw DegenerateInput("coding matrix is wider than tall");
  if (n > 0 && numerical_rank(A) < static_cast<std::size_t>(n)) {
    throw DegenerateInput("coding matrix is rank deficient");
  }

  DecodeResult result;
  const double y_scale = max_abs(y);
  if (n == 0 || y_scale == 0.0) {
    result.estimate = Vector::Zero(n);
    Vector u = y.unaryExpr([](double v) { return sign(v); });
    if (n > 0) u.setZero();
    result.certificate = l1_certificate(A, y, result.estimate, u);
    return result;
  }
  if (n == m) {
    result.estimate = A.partialPivLu().solve(y);
    result.certificate = l1_certificate(A, y, result.estimate, Vector::Zero(m));
    result.status = l1_certified(result.certificate, options) ? DecodeStatus::success
                                                             : DecodeStatus::not_converged;
    return result;
  }

  // Dual LP in w = (u + 1) / 2 in [0, 1]:  min -y^T w  s.t.  A^T w = A^T 1 / 2.
  const Vector ys = y / y_scale;
  LpProblem lp;
  lp.A = A.transpose();
  lp.b = 0.5 * (A.transpose() * Vector::Ones(m));
  lp.c = -ys;
  lp.upper = Vector::Ones(m);
  LpOptions lopt;
  lopt.gap_tolerance = std::min(1e-12, options.tolerance * 1e-3);
  lopt.feasibility_tolerance = std::min(1e-12, options.feasibility_tolerance * 1e-3);
  lopt.max_iterations = iteration_cap(options, m, n);
  const LpSolution sol = solve_lp(lp, lopt);

  L1Candidate ipm{-sol.y * y_scale, 2.0 * sol.x - Vector::Ones(m), false};
  Certificate best_cert = l1_certificate(A, y, ipm.x, ipm.u);
  L1Candidate best = ipm;

  // The interior dual only satisfies A^T u = 0 to the solver's tolerance;
  // its projection onto that subspace is a tighter certificate for the
  // same estimate. This matters on degenerate optima, where too few
  // residuals vanish for the row refit below.
  {
    Eigen::HouseholderQR<Matrix> qr(A);
    const Matrix q = qr.householderQ() * Matrix::Identity(m, n);
    L1Candidate projected = ipm;
    for (int sweep = 0; sweep < 20; ++sweep) {
      projected.u -= q * (q.transpose() * projected.u);
      const Certificate c = l1_certificate(A, y, projected.x, projected.u);
      if (std::max(c.relative_gap, c.dual_residual) <
          std::max(best_cert.relative_gap, best_cert.dual_residual)) {
        best = projected;
        best_cert = c;
      }
      if (c.dual_residual <= 1e-14) break;
      projected.u = projected.u.cwiseMax(-1.0).cwiseMin(1.0);
    }
  }

  // Crossover: refit on the zero-residual rows and rebuild the dual there.
  const Vector r = y - A * ipm.x;
  const double zero_tol = 1e-7 * (1.0 + y_scale);
  IndexSet zero_rows;
  for (Eigen::Index i = 0; i < m; ++i) {
    if (std::abs(r[i]) <= zero_tol) zero_rows.push_back(static_cast<std::size_t>(i));
  }
  bool polished = false;
  if (zero_rows.size() >= static_cast<std::size_t>(n)) {
    const Matrix az = gather_rows(A, zero_rows);
    Eigen::ColPivHouseholderQR<Matrix> qr(az);
    qr.setThreshold(kRankTolerance);
    if (qr.rank() == n) {
      L1Candidate pol;
      pol.x = qr.solve(gather_rows(y, zero_rows));
      const Vector rp = y - A * pol.x;
      double fit = 0.0;
      for (std::size_t i : zero_rows) fit = std::max(fit, std::abs(rp[idx(i)]));
      if (fit <= 1e-9 * (1.0 + y_scale)) {
        pol.u = ipm.u;
        std::vector<bool> in_zero(static_cast<std::size_t>(m), false);
        for (std::size_t i : zero_rows) in_zero[i] = true;
        Vector t = Vector::Zero(n);
        for (Eigen::Index i = 0; i < m; ++i) {
          if (!in_zero[static_cast<std::size_t>(i)]) {
            pol.u[i] = sign(rp[i]);
            t -= pol.u[i] * A.row(i).transpose();
          }
        }
        Vector u0(idx(zero_rows.size()));
        for (std::size_t k = 0; k < zero_rows.size(); ++k) u0[idx(k)] = ipm.u[idx(zero_rows[k])];
        const Vector uz = project_onto_constraint(az, u0, t);
        for (std::size_t k = 0; k < zero_rows.size(); ++k) pol.u[idx(zero_rows[k])] = uz[idx(k)];
        pol.dual_from_polish = true;
        Certificate c = l1_certificate(A, y, pol.x, pol.u);
        if (!l1_certified(c, options)) {
          // The rebuilt dual left the box; keep the earlier one.
          pol.u = best.u;
          pol.dual_from_polish = false;
          c = l1_certificate(A, y, pol.x, pol.u);
        }
        if (c.primal_objective <= best_cert.primal_objective + 1e-12 * (1.0 + y_scale) ||
            c.relative_gap < best_cert.relative_gap) {
          best = pol;
          best_cert = c;
          polished = true;
        }
      }
    }
  }

  result.estimate = best.x;
  result.certificate = best_cert;
  result.certificate.iterations = sol.iterations;
  result.certificate.polished = polished;
  result.status = l1_certified(best_cert, options) ? DecodeStatus::success
                                                   : DecodeStatus::not_converged;
  return result;
}

namespace {

Certificate bp_certificate(const Matrix& F, const Vector& yp, const Vector& e, const Vector& lambda) {
  Certificate c;
  c.primal_objective = e.lpNorm<1>();
  c.dual_objective = yp.dot(lambda);
  c.relative_gap = (c.primal_objective - c.dual_objective) / (1.0 + std::abs(c.primal_objective));
  const double ypn = yp.norm();
  c.primal_residual = (F * e - yp).norm() / (ypn > 0.0 ? ypn : 1.0);
  c.dual_residual = std::max(0.0, max_abs(F.transpose() * lambda) - 1.0);
  return c;
}

bool bp_certified(const Certificate& c, const L1Options& o) {
  return c.relative_gap <= o.tolerance && c.primal_residual <= std::min(1e-9, o.feasibility_tolerance) &&
         c.dual_residual <= o.feasibility_tolerance;
}

}  // namespace

DecodeResult basis_pursuit(const Matrix& F, const Vector& y_prime, const L1Options& options) {
  const Eigen::Index r = F.rows();
  const Eigen::Index c = F.cols();
  if (y_prime.size() != r) {
    throw DimensionError("measurement length " + std::to_string(y_prime.size()) +
                         " does not match " + std::to_string(r) + " rows");
  }
  if (r > c || numerical_rank(F) < static_cast<std::size_t>(r)) {
    throw DegenerateInput("measurement matrix lacks full row rank");
  }
  DecodeResult result;
  const double scale = max_abs(y_prime);
  if (scale == 0.0) {
    result.estimate = Vector::Zero(c);
    result.certificate = bp_certificate(F, y_prime, result.estimate, Vector::Zero(r));
    return result;
  }

  LpProblem lp;
  lp.A.resize(r, 2 * c);
  lp.A << F, -F;
  lp.b = y_prime / scale;
  lp.c = Vector::Ones(2 * c);
  lp.upper = Vector::Constant(2 * c, std::numeric_limits<double>::infinity());
  LpOptions lopt;
  lopt.gap_tolerance = std::min(1e-12, options.tolerance * 1e-3);
  lopt.feasibility_tolerance = std::min(1e-12, options.feasibility_tolerance * 1e-3);
  lopt.max_iterations = iteration_cap(options, r, c);
  const LpSolution sol = solve_lp(lp, lopt);

  const Vector e_ipm = (sol.x.head(c) - sol.x.tail(c)) * scale;
  const Vector lambda_ipm = sol.y;
  Vector best_e = e_ipm;
  Vector best_lambda = lambda_ipm;
  Certificate best_cert = bp_certificate(F, y_prime, e_ipm, lambda_ipm);
  bool polished = false;

  // Crossover: least squares on the detected support, dual re-derived so
  // that F_T^T lambda = sign(e_T).
  const double emax = max_abs(e_ipm);
  IndexSet support;
  for (Eigen::Index i = 0; i < c; ++i) {
    if (std::abs(e_ipm[i]) > 1e-7 * (1.0 + emax)) support.push_back(static_cast<std::size_t>(i));
  }
  if (!support.empty() && support.size() <= static_cast<std::size_t>(r)) {
    const Matrix ft = gather_cols(F, support);
    Eigen::ColPivHouseholderQR<Matrix> qr(ft);
    qr.setThreshold(kRankTolerance);
    if (qr.rank() == static_cast<Eigen::Index>(support.size())) {
      const Vector et = qr.solve(y_prime);
      Vector e = Vector::Zero(c);
      Vector s(idx(support.size()));
      for (std::size_t k = 0; k < support.size(); ++k) {
        e[idx(support[k])] = et[idx(k)];
        s[idx(k)] = sign(et[idx(k)]);
      }
      Vector lambda = project_onto_constraint(ft, lambda_ipm, s);
      Certificate cert = bp_certificate(F, y_prime, e, lambda);
      if (!bp_certified(cert, options)) {
        lambda = lambda_ipm;
        cert = bp_certificate(F, y_prime, e, lambda);
      }
      if (cert.primal_residual <= 1e-10 &&
          (cert.primal_objective <= best_cert.primal_objective + 1e-12 * (1.0 + scale) ||
           cert.relative_gap < best_cert.relative_gap)) {
        best_e = e;
        best_lambda = lambda;
        best_cert = cert;
        polished = true;
      }
    }
  }

  result.estimate = best_e;
  result.certificate = best_cert;
  result.certificate.iterations = sol.iterations;
  result.certificate.polished = polished;
  result.status = bp_certified(best_cert, options) ? DecodeStatus::success
                                                   : DecodeStatus::not_converged;
  return result;
}

DecodeResult l0_oracle(const Matrix& F, const Vector& y_prime, std::size_t max_sparsity) {
  const auto cols = static_cast<std::size_t>(F.cols());
  if (y_prime.size() != F.rows()) throw DimensionError("measurement length does not match F");
  if (cols > 24) throw SizeLimitError("l0 search refused for more than 24 columns");
  if (max_sparsity > cols) throw SizeLimitError("l0 search cap exceeds the column count");

  DecodeResult result;
  const double threshold = 1e-9 * (1.0 + y_prime.norm());
  auto accept = [&](const Vector& e) {
    result.estimate = e;
    result.status = DecodeStatus::success;
    result.certificate.primal_objective = e.lpNorm<1>();
    result.certificate.primal_residual = (F * e - y_prime).norm() / (1.0 + y_prime.norm());
    return result;
  };
  if (y_prime.norm() <= threshold) return accept(Vector::Zero(F.cols()));

  for (std::size_t k = 1; k <= max_sparsity; ++k) {
    IndexSet support(k);
    std::iota(support.begin(), support.end(), std::size_t{0});
    Matrix sub(F.rows(), idx(k));
    while (true) {
      for (std::size_t j = 0; j < k; ++j) sub.col(idx(j)) = F.col(idx(support[j]));
      const Vector et = sub.colPivHouseholderQr().solve(y_prime);
      if ((sub * et - y_prime).norm() <= threshold) {
        Vector e = Vector::Zero(F.cols());
        for (std::size_t j = 0; j < k; ++j) e[idx(support[j])] = et[idx(j)];
        return accept(e);
      }
      // Next combination in lexicographic order.
      std::size_t i = k;
      while (i > 0 && support[i - 1] == cols - k + i - 1) --i;
      if (i == 0) break;
      ++support[i - 1];
      for (std::size_t j = i; j < k; ++j) support[j] = support[j - 1] + 1;
    }
  }
  result.estimate = Vector::Zero(F.cols());
  result.status = DecodeStatus::infeasible;
  return result;
}

namespace {

struct Partial {
  std::vector<double> value;
  std::vector<char> known;
};

class ScErasureDecoder {
 public:
  ScErasureDecoder(double beta, const std::vector<char>& frozen, const std::vector<double>& frozen_value)
      : beta_(beta), frozen_(frozen), frozen_value_(frozen_value),
        x_(frozen.size(), kNaN), x_known_(frozen.size(), 0) {}

  // Decodes the inputs [offset, offset + obs.size()) from observations of
  // kron^k(G0) x restricted to that block; returns the re-encoded block.
  Partial decode(const Partial& obs, std::size_t offset) {
    const std::size_t len = obs.value.size();
    if (len == 1) {
      Partial out{{kNaN}, {0}};
      if (frozen_[offset]) {
        out.value[0] = frozen_value_[offset];
        out.known[0] = 1;
      } else if (obs.known[0]) {
        out.value[0] = obs.value[0];
        out.known[0] = 1;
      }
      x_[offset] = out.value[0];
      x_known_[offset] = out.known[0];
      return out;
    }
    const std::size_t half = len / 2;
    // Upper half: kron(x_top) = w_top / beta - w_bot.
    Partial up{std::vector<double>(half, kNaN), std::vector<char>(half, 0)};
    for (std::size_t i = 0; i < half; ++i) {
      if (obs.known[i] && obs.known[half + i]) {
        up.value[i] = obs.value[i] / beta_ - obs.value[half + i];
        up.known[i] = 1;
      }
    }
    const Partial top = decode(up, offset);
    // Lower half: kron(x_bot) = w_bot, or w_top / beta - kron(x_top).
    Partial low{std::vector<double>(half, kNaN), std::vector<char>(half, 0)};
    for (std::size_t i = 0; i < half; ++i) {
      if (obs.known[half + i]) {
        low.value[i] = obs.value[half + i];
        low.known[i] = 1;
      } else if (obs.known[i] && top.known[i]) {
        low.value[i] = obs.value[i] / beta_ - top.value[i];
        low.known[i] = 1;
      }
    }
    const Partial bottom = decode(low, offset + half);
    Partial out{std::vector<double>(len, kNaN), std::vector<char>(len, 0)};
    for (std::size_t i = 0; i < half; ++i) {
      if (top.known[i] && bottom.known[i]) {
        out.value[i] = beta_ * (top.value[i] + bottom.value[i]);
        out.known[i] = 1;
      }
      out.value[half + i] = bottom.value[i];
      out.known[half + i] = bottom.known[i];
    }
    return out;
  }

  const std::vector<double>& estimate() const { return x_; }
  const std::vector<char>& known() const { return x_known_; }

 private:
  double beta_;
  const std::vector<char>& frozen_;
  const std::vector<double>& frozen_value_;
  std::vector<double> x_;
  std::vector<char> x_known_;
};

}  // namespace

DecodeResult sc_erasure_decode(const PolarTransform& t, const FlaggedOutput& observation,
                               const Vector& frozen, const IndexSet& good) {
  const std::size_t m = t.size();
  if (static_cast<std::size_t>(observation.values.size()) != m || observation.erased.size() != m) {
    throw DimensionError("observation length does not match the transform size");
  }
  std::vector<char> is_good(m, 0);
  for (std::size_t g : good) {
    if (g >= m) throw InvalidParameter("good index out of range");
    if (is_good[g]) throw InvalidParameter("repeated good index");
    is_good[g] = 1;
  }
  if (static_cast<std::size_t>(frozen.size()) != m - good.size()) {
    throw DimensionError("frozen vector must hold one value per bad index");
  }
  std::vector<char> is_frozen(m, 0);
  std::vector<double> frozen_value(m, 0.0);
  for (std::size_t j = 0, k = 0; j < m; ++j) {
    if (!is_good[j]) {
      is_frozen[j] = 1;
      frozen_value[j] = frozen[idx(k++)];
    }
  }

  // H = B kron^n(G0) as well, so the bit-reversed observation vector is
  // kron^n(G0) x0 and inputs decode in natural order.
  const int n = t.stages();
  Partial obs{std::vector<double>(m), std::vector<char>(m)};
  for (std::size_t i = 0; i < m; ++i) {
    const std::size_t src = bit_reverse(i, n);
    obs.value[i] = observation.values[idx(src)];
    obs.known[i] = observation.erased[src] ? 0 : 1;
  }
  ScErasureDecoder dec(t.beta(), is_frozen, frozen_value);
  dec.decode(obs, 0);

  DecodeResult result;
  result.estimate = Eigen::Map<const Vector>(dec.estimate().data(), idx(m));
  result.status = DecodeStatus::success;
  for (std::size_t g : good) {
    if (!dec.known()[g]) {
      result.status = DecodeStatus::erasure_failure;
      break;
    }
  }
  return result;
}

DecodeResult recover_sparse(const SensingSystem& system, const Vector& y_prime,
                            RecoveryMethod method, const RecoveryOptions& options) {
  if (static_cast<std::size_t>(y_prime.size()) != system.M - system.N) {
    throw DimensionError("measurement length must equal M - N");
  }
  // 1. analog-side observation, 2. frozen contribution (x_b = 0).
  const Vector y = cs_to_analog(system, y_prime);
  const Vector x_b = Vector::Zero(idx(system.M - system.N));
  const Vector y0 = y + system.A_b * x_b;

  DecodeResult inner;
  Vector x_hat;
  if (method == RecoveryMethod::l1) {
    // 3. analog l1 decoding against the good columns.
    inner = l1_decode(system.A, y0, options.l1);
    x_hat = inner.estimate;
  } else {
    // 3. sparsest error directly on F; the information vector follows from
    // the consistent system A x = y - e.
    const std::size_t cap =
        options.l0_max_sparsity.value_or(static_cast<std::size_t>(system.F.rows()));
    inner = l0_oracle(system.F, y_prime, std::min<std::size_t>(cap, system.M));
    if (!inner.ok()) return inner;
    x_hat = system.N > 0 ? Vector(system.A.colPivHouseholderQr().solve(y0 - inner.estimate))
                         : Vector::Zero(0);
  }

  // 4. e = y - A x.
  DecodeResult out;
  out.estimate = y - system.A * x_hat;
  out.status = inner.status;
  out.certificate = inner.certificate;
  out.certificate.primal_objective = out.estimate.lpNorm<1>();
  out.certificate.primal_residual =
      (system.F * out.estimate - y_prime).norm() / (1.0 + y_prime.norm());
  return out;
}

}  // namespace polarcs
