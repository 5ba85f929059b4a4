#include "polarcs/lp_solver.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "polarcs/errors.hpp"

namespace polarcs {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

struct Direction {
  Vector dx, dy, dz, ds, dw;
};

// Largest alpha in (0, 1] keeping v + alpha * dv >= 0.
double max_step(const Vector& v, const Vector& dv) {
  double alpha = 1.0;
  for (Eigen::Index i = 0; i < v.size(); ++i) {
    if (dv[i] < 0.0) alpha = std::min(alpha, -v[i] / dv[i]);
  }
  return alpha;
}

class NormalEquations {
 public:
  explicit NormalEquations(const Matrix& a) : a_(a) {}

  // K = A D A^T through a QR factorization of (A D^{1/2})^T, which avoids
  // forming K and squaring its condition number in the factor.
  void factor(const Vector& d) {
    ok_ = true;
    const Eigen::Index m = a_.rows();
    scaled_t_ = d.cwiseSqrt().asDiagonal() * a_.transpose();
    qr_.compute(scaled_t_);
    r_ = qr_.matrixQR().topLeftCorner(m, m).triangularView<Eigen::Upper>();
    const double big = r_.diagonal().cwiseAbs().maxCoeff();
    const double small = r_.diagonal().cwiseAbs().minCoeff();
    if (!(small > 1e-15 * big)) {
      // Rank deficient in floating point: regularize.
      for (Eigen::Index i = 0; i < m; ++i) {
        r_(i, i) += std::copysign(1e-15 * big, r_(i, i));
      }
    }
    if (!std::isfinite(big) || big == 0.0) ok_ = false;
  }

  bool ok() const { return ok_; }
  Vector solve(const Vector& rhs) const {
    const auto R = r_.triangularView<Eigen::Upper>();
    return R.solve(R.transpose().solve(rhs));
  }

 private:
  const Matrix& a_;
  Matrix scaled_t_;
  Eigen::HouseholderQR<Matrix> qr_;
  Matrix r_;
  bool ok_ = true;
};

}  // namespace

LpSolution solve_lp(const LpProblem& pr, const LpOptions& opt) {
  const Matrix& A = pr.A;
  const Eigen::Index m = A.rows();
  const Eigen::Index n = A.cols();
  if (pr.b.size() != m || pr.c.size() != n || pr.upper.size() != n) {
    throw DimensionError("inconsistent LP dimensions");
  }

  Eigen::Array<bool, Eigen::Dynamic, 1> bounded(n);
  for (Eigen::Index i = 0; i < n; ++i) bounded[i] = std::isfinite(pr.upper[i]);
  const Eigen::Index n_bounded = bounded.count();
  const Vector u = bounded.select(pr.upper, Vector::Zero(n));
  const Vector mask = bounded.cast<double>().matrix();

  // Starting point: least-squares primal/dual estimates, shifted inside the
  // positive orthant; bounded variables start at mid-range.
  Vector x(n), y(m), z(n), s(n), w(n);
  {
    Eigen::LLT<Matrix> aat(A * A.transpose());
    if (aat.info() != Eigen::Success) throw DegenerateInput("constraint matrix lacks full row rank");
    const Vector xt = A.transpose() * aat.solve(pr.b);
    y = aat.solve(A * pr.c);
    const Vector zt = pr.c - A.transpose() * y;
    double min_x = kInf;
    for (Eigen::Index i = 0; i < n; ++i) {
      if (!bounded[i]) min_x = std::min(min_x, xt[i]);
    }
    const double dx = std::max(-1.5 * (std::isfinite(min_x) ? min_x : 0.0), 0.0);
    const double dz = std::max(-1.5 * zt.minCoeff(), 0.0);
    const double zscale = std::max(1.0, zt.cwiseAbs().maxCoeff());
    for (Eigen::Index i = 0; i < n; ++i) {
      if (bounded[i]) {
        x[i] = 0.5 * u[i];
        s[i] = 0.5 * u[i];
        z[i] = std::max(zt[i], 0.0) + 0.1 * zscale;
        w[i] = std::max(-zt[i], 0.0) + 0.1 * zscale;
      } else {
        x[i] = xt[i] + dx;
        z[i] = zt[i] + dz;
        s[i] = 0.0;
        w[i] = 0.0;
      }
    }
    // Balance complementarity for the unbounded block.
    double xz = 0.0, sx = 0.0, sz = 0.0;
    for (Eigen::Index i = 0; i < n; ++i) {
      if (!bounded[i]) {
        xz += x[i] * z[i];
        sx += x[i];
        sz += z[i];
      }
    }
    const double bump_x = (sz > 0.0) ? 0.5 * xz / sz : 0.0;
    const double bump_z = (sx > 0.0) ? 0.5 * xz / sx : 0.0;
    for (Eigen::Index i = 0; i < n; ++i) {
      if (!bounded[i]) {
        x[i] = std::max(x[i] + bump_x, 1e-2);
        z[i] = std::max(z[i] + bump_z, 1e-2);
      }
    }
  }

  const double norm_b = pr.b.norm();
  const double norm_c = pr.c.norm();
  const double norm_u = u.norm();
  const double n_comp = static_cast<double>(n + n_bounded);

  NormalEquations normal(A);
  LpSolution best;
  double best_merit = kInf;

  auto record = [&](int iter, double pobj, double dobj, double gap, double pinf, double dinf) {
    const double merit = std::max({gap, pinf, dinf});
    if (merit < best_merit) {
      best_merit = merit;
      best.x = x;
      best.y = y;
      best.z = z;
      best.w = w;
      best.primal_objective = pobj;
      best.dual_objective = dobj;
      best.relative_gap = gap;
      best.primal_infeasibility = pinf;
      best.dual_infeasibility = dinf;
      best.iterations = iter;
    }
  };

  for (int iter = 0; iter <= opt.max_iterations; ++iter) {
    const Vector rb = pr.b - A * x;
    const Vector rc = pr.c - A.transpose() * y - z + w;
    const Vector ru = (u - x - s).cwiseProduct(mask);

    const double pobj = pr.c.dot(x);
    const double dobj = pr.b.dot(y) - u.dot(w);
    const double gap = std::abs(pobj - dobj) / (1.0 + std::abs(pobj));
    const double pinf = rb.norm() / (1.0 + norm_b) + ru.norm() / (1.0 + norm_u);
    const double dinf = rc.norm() / (1.0 + norm_c);
    record(iter, pobj, dobj, gap, pinf, dinf);
    if (gap <= opt.gap_tolerance && pinf <= opt.feasibility_tolerance &&
        dinf <= opt.feasibility_tolerance) {
      best.converged = true;
      return best;
    }
    if (iter == opt.max_iterations) break;

    const double mu = (x.dot(z) + s.dot(w)) / n_comp;

    // D^{-1} = Z/X + W/S.
    Vector dinv = z.cwiseQuotient(x);
    for (Eigen::Index i = 0; i < n; ++i) {
      if (bounded[i]) dinv[i] += w[i] / s[i];
    }
    const Vector d = dinv.cwiseInverse();
    normal.factor(d);
    if (!normal.ok()) break;

    auto direction = [&](const Vector& rxz, const Vector& rsw) {
      Direction dir;
      Vector rt = rc - rxz.cwiseQuotient(x);
      for (Eigen::Index i = 0; i < n; ++i) {
        if (bounded[i]) rt[i] += (rsw[i] - w[i] * ru[i]) / s[i];
      }
      dir.dy = normal.solve(rb + A * d.cwiseProduct(rt));
      dir.dx = d.cwiseProduct(A.transpose() * dir.dy - rt);
      dir.dz = (rxz - z.cwiseProduct(dir.dx)).cwiseQuotient(x);
      dir.ds = Vector::Zero(n);
      dir.dw = Vector::Zero(n);
      for (Eigen::Index i = 0; i < n; ++i) {
        if (bounded[i]) {
          dir.ds[i] = ru[i] - dir.dx[i];
          dir.dw[i] = (rsw[i] - w[i] * dir.ds[i]) / s[i];
        }
      }
      return dir;
    };
    auto steps = [&](const Direction& dir) {
      double ap = max_step(x, dir.dx);
      double ad = max_step(z, dir.dz);
      for (Eigen::Index i = 0; i < n; ++i) {
        if (!bounded[i]) continue;
        if (dir.ds[i] < 0.0) ap = std::min(ap, -s[i] / dir.ds[i]);
        if (dir.dw[i] < 0.0) ad = std::min(ad, -w[i] / dir.dw[i]);
      }
      return std::pair{ap, ad};
    };

    // Predictor.
    const Vector rxz_aff = -x.cwiseProduct(z);
    const Vector rsw_aff = -s.cwiseProduct(w).cwiseProduct(mask);
    const Direction aff = direction(rxz_aff, rsw_aff);
    const auto [ap_aff, ad_aff] = steps(aff);
    const double mu_aff = ((x + ap_aff * aff.dx).dot(z + ad_aff * aff.dz) +
                           (s + ap_aff * aff.ds).dot(w + ad_aff * aff.dw)) /
                          n_comp;
    const double sigma = std::pow(std::clamp(mu_aff / mu, 0.0, 1.0), 3);

    // Corrector.
    const Vector rxz = (Vector::Constant(n, sigma * mu) - x.cwiseProduct(z) -
                        aff.dx.cwiseProduct(aff.dz));
    const Vector rsw = (Vector::Constant(n, sigma * mu) - s.cwiseProduct(w) -
                        aff.ds.cwiseProduct(aff.dw))
                           .cwiseProduct(mask);
    const Direction dir = direction(rxz, rsw);
    auto [ap, ad] = steps(dir);
    const double eta = std::max(0.9, 1.0 - 10.0 * mu / (1.0 + std::abs(pobj)));
    ap = std::min(1.0, eta * ap);
    ad = std::min(1.0, eta * ad);

    x += ap * dir.dx;
    s += ap * dir.ds;
    y += ad * dir.dy;
    z += ad * dir.dz;
    w += ad * dir.dw;
    // Guard against underflow to exact zero in the positive orthant.
    x = x.cwiseMax(1e-300);
    z = z.cwiseMax(1e-300);
    for (Eigen::Index i = 0; i < n; ++i) {
      if (bounded[i]) {
        s[i] = std::max(s[i], 1e-300);
        w[i] = std::max(w[i], 1e-300);
      }
    }
  }
  best.converged = false;
  return best;
}

}  // namespace polarcs
