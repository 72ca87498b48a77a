#pragma once

#include <Eigen/Dense>
#include <Eigen/Sparse>

#include <cstdint>
#include <string>
#include <vector>

namespace ddlr {

using Index = int;

/// Symmetric sparse matrix in compressed row form. Both triangles are stored;
/// inner indices are sorted within each row once the matrix is compressed.
using SparseMat = Eigen::SparseMatrix<double, Eigen::RowMajor, Index>;
using SparseMatCol = Eigen::SparseMatrix<double, Eigen::ColMajor, Index>;
using Vector = Eigen::VectorXd;
using Matrix = Eigen::MatrixXd;
using Triplet = Eigen::Triplet<double, Index>;

SparseMat from_triplets(Index rows, Index cols, const std::vector<Triplet>& ts);

/// y = A x. Throws on dimension mismatch.
Vector spmv(const SparseMat& A, const Vector& x);

/// True iff (i,j) stored implies (j,i) stored with equal value (within tol).
bool pattern_is_symmetric(const SparseMat& A, double tol = 0.0);

void require_square_symmetric(const SparseMat& A, const std::string& who);

/// B(i,j) = A(perm[i], perm[j]); perm maps new position -> old index.
SparseMat permute_sym(const SparseMat& A, const std::vector<Index>& perm);

std::vector<Index> identity_perm(Index n);
std::vector<Index> invert_perm(const std::vector<Index>& perm);

SparseMat sparse_identity(Index n);

double max_abs_diff(const SparseMat& A, const SparseMat& B);

}  // namespace ddlr
