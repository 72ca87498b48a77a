#pragma once

#include "ddlr/sparse.hpp"

namespace ddlr {

/// LDL^T factors of a permuted symmetric matrix: P A P^T ~ L D L^T with L unit
/// lower triangular (strict lower part stored column-wise) and D diagonal.
struct TriFactor {
  Index n = 0;
  std::vector<Index> col_ptr;   // size n+1
  std::vector<Index> row_idx;   // strict lower entries of L
  std::vector<double> values;
  Vector d;                     // diagonal of D
  std::vector<Index> perm;      // perm[new] = old
  double shift = 0.0;           // relative diagonal shift applied on breakdown

  Index nnz() const { return static_cast<Index>(row_idx.size()) + n; }
  Vector solve(const Vector& b) const;
};

/// Incomplete LDL^T under dual-threshold dropping: an eliminated entry is
/// dropped when its magnitude falls below droptol times the 2-norm of the
/// original column, and at most maxfill off-diagonal entries (largest
/// magnitudes) are kept per column. droptol = 0 with maxfill >= n is exact.
/// Zero pivots trigger diagonal shift escalation (beta * diag(A), beta
/// doubling from 1e-4, 8 retries) before failing with "factorization
/// breakdown".
TriFactor ildl_factor(const SparseMat& A, double droptol, Index maxfill, const std::vector<Index>& perm);

/// Approximate minimum degree ordering of the matrix graph. Diagonal
/// matrices map to the identity permutation.
std::vector<Index> fill_reducing_order(const SparseMat& A);

}  // namespace ddlr
