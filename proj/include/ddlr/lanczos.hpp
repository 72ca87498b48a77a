#pragma once

#include "ddlr/sparse.hpp"

#include <functional>

namespace ddlr {

/// Abstract symmetric linear operator. Symmetry is spot-checked
/// probabilistically before a Lanczos run.
struct LinearOperator {
  Index dim = 0;
  std::function<Vector(const Vector&)> apply;
};

LinearOperator matrix_op(const SparseMat& A);
LinearOperator identity_op(Index n);

struct LanczosOptions {
  double eps = 1e-4;       // trace-based convergence tolerance
  Index max_steps = -1;    // -1 = five times the requested count
  Index check_every = 10;  // convergence test cadence
  std::uint64_t seed = 0;  // 0 = normalized all-ones start
  const Matrix* deflate = nullptr;  // orthonormal columns to deflate against
};

struct EigenBundle {
  Matrix U;        // dim x k, orthonormal
  Vector lambda;   // k Ritz values, descending
  double lambda_next = 0.0;  // (k+1)-th Ritz value at termination
  bool lambda_next_available = false;
  Index steps_used = 0;
  bool converged = false;
  Vector resid_bounds;  // beta_m * |last tridiagonal eigenvector component|
  std::vector<double> top_ritz_history;  // top Ritz value at each check
};

/// True iff |sigma_cur - sigma_prev| / sigma_prev < eps; false when the
/// previous sum vanishes.
bool converge_check(double sigma_prev, double sigma_cur, double eps);

/// Symmetric Lanczos with full (two-pass) reorthogonalization. Convergence is
/// judged every check_every steps on the relative change of the sum of the
/// top-k Ritz values. A lucky breakdown truncates the run; fewer than k pairs
/// may be returned.
EigenBundle lanczos_topk(const LinearOperator& op, Index k, const LanczosOptions& opt = {});

}  // namespace ddlr
