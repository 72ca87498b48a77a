#pragma once

#include "ddlr/ildl.hpp"
#include "ddlr/partition.hpp"

namespace ddlr {

/// Block-Jacobi operator over the interface: the diagonal blocks C_i + a^2 I
/// of C_alpha, factored exactly.
struct BlockJacobi {
  Index s = 0;
  Index p = 0;
  std::vector<Index> offset;  // block starts, size p+1
  std::vector<TriFactor> fac;
  SparseMat D;  // the block-diagonal matrix itself

  Vector solve(const Vector& b) const;
  Vector apply(const Vector& v) const;
  Index nnz() const;
};

BlockJacobi build_block_jacobi(const DistributedMatrix& dist, double alpha);

enum class CSolveMode { Direct, Chebyshev, Ainv };

struct ChebParams {
  double a = 1.0;       // interval lower bound
  double b = 1.0;       // interval upper bound
  Index iters = 5;      // iterations per solve
  double safeguard = 0.0;
};

/// Estimates the generalized spectrum of (C_alpha, D_alpha) by a few Lanczos
/// steps in the D inner product and widens the interval by the residual-bound
/// safeguard: a <- max(a - r, a/2), b <- b + r.
ChebParams cheb_setup(const SparseMat& Calpha, const BlockJacobi& D, Index probe_steps);

/// Fixed-iteration D-preconditioned Chebyshev from a zero initial guess; the
/// iteration loop contains no inner products.
Vector cheb_solve(const SparseMat& Calpha, const BlockJacobi& D, const ChebParams& params, const Vector& b);

/// Self-preconditioned global MR iterations with dropping, started from the
/// inverse of diag(C_alpha). The iterate is symmetrized after each update.
SparseMat mr_ainv(const SparseMat& Calpha, double droptol, Index max_nnz_col, Index steps);

struct A0Options {
  double alpha = 1.0;
  double droptol = 0.0;  // local B_{i,alpha} factors
  Index maxfill = -1;    // -1 = unlimited
  CSolveMode c_mode = CSolveMode::Direct;
  Index cheb_iters = 5;
  Index cheb_probe_steps = 10;
  double ainv_droptol = 1e-3;
  Index ainv_maxnnz = 10;
  Index ainv_steps = 5;
};

/// The decoupled operator A_0 = blkdiag(B_{1,alpha}..B_{p,alpha}, C_alpha)
/// with factored local blocks and one of three interface solvers.
struct A0Operator {
  const DistributedMatrix* dist = nullptr;
  double alpha = 1.0;
  std::vector<SparseMat> Balpha;  // corrected blocks B_i + alpha^-2 E_i E_i^T
  std::vector<TriFactor> Bfac;
  SparseMat Calpha;  // C + alpha^2 I
  CSolveMode c_mode = CSolveMode::Direct;
  TriFactor Cfac;     // direct mode
  SparseMat X;        // ainv mode
  ChebParams cheb;    // chebyshev mode
  BlockJacobi Dalpha;  // built for the chebyshev mode
  Index fill_nnz = 0;
};

A0Operator build_a0(const DistributedMatrix& dist, const A0Options& opt);

/// Solves A_0 z = rhs in the (u, y) ordering: independent local solves for
/// the u-part, the configured interface solver for the y-part.
Vector a0_solve(const A0Operator& op, const Vector& rhs);

/// Reassembles A_0 as an n x n sparse matrix (verification helper).
SparseMat assemble_a0(const A0Operator& op);

}  // namespace ddlr
