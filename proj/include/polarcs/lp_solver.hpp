#pragma once

#include "polarcs/types.hpp"

namespace polarcs {

/// Dense linear program
///
///   minimize c^T x  subject to  A x = b,  0 <= x <= upper
///
/// where upper[i] may be +infinity. The dual is
///
///   maximize b^T y - upper^T w  subject to  A^T y + z - w = c,  z, w >= 0
///
/// with w only present for finite upper bounds.
struct LpProblem {
  Matrix A;
  Vector b;
  Vector c;
  Vector upper;
};

struct LpOptions {
  /// Stop once the relative duality gap and both relative infeasibilities
  /// fall below these.
  double gap_tolerance = 1e-12;
  double feasibility_tolerance = 1e-12;
  int max_iterations = 200;
};

struct LpSolution {
  Vector x;
  Vector y;  // equality multipliers
  Vector z;  // lower-bound multipliers
  Vector w;  // upper-bound multipliers (0 where unbounded)
  double primal_objective = 0.0;
  double dual_objective = 0.0;
  double relative_gap = 0.0;
  double primal_infeasibility = 0.0;
  double dual_infeasibility = 0.0;
  int iterations = 0;
  bool converged = false;
};

/// Mehrotra predictor-corrector primal-dual interior point method on the
/// dense normal equations A D A^T. Infeasible start; A must have full row
/// rank. When no iterate reaches the tolerances the best iterate seen is
/// returned with converged = false.
LpSolution solve_lp(const LpProblem& problem, const LpOptions& options = {});

}  // namespace polarcs
