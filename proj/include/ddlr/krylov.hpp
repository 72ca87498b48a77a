#pragma once

#include "ddlr/lanczos.hpp"

#include <map>
#include <string>

namespace ddlr {

struct SolveReport {
  Index iterations = 0;
  bool converged = false;
  std::vector<double> residual_history;  // true residual norms, entry 0 = initial
  double build_time = 0.0;  // seconds
  double apply_time = 0.0;  // seconds
  double fill_ratio = 0.0;  // preconditioner storage / nnz(A)
  std::map<std::string, double> comm_tallies;
};

/// Preconditioned conjugate gradient. Stops when ||r_j|| / ||r_0|| < tol or
/// at maxit. Throws "operator not SPD" when p^T A p <= 0.
std::pair<Vector, SolveReport> pcg(const LinearOperator& A, const LinearOperator& M, const Vector& b,
                                   double tol = 1e-6, Index maxit = 500);

/// Right-preconditioned restarted GMRES; the stopping rule matches pcg so the
/// histories compare directly. An Arnoldi breakdown means the exact solution
/// was reached.
std::pair<Vector, SolveReport> gmres(const LinearOperator& A, const LinearOperator& M, const Vector& b,
                                     Index restart = 40, double tol = 1e-6, Index maxit = 500);

}  // namespace ddlr
