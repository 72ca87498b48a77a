#include "ddlr/sparse.hpp"

#include <cmath>
#include <stdexcept>

namespace ddlr {

SparseMat from_triplets(Index rows, Index cols, const std::vector<Triplet>& ts) {
  SparseMat A(rows, cols);
  A.setFromTriplets(ts.begin(), ts.end());
  A.makeCompressed();
  return A;
}

Vector spmv(const SparseMat& A, const Vector& x) {
  if (x.size() != A.cols())
    throw std::invalid_argument("spmv: length mismatch, expected " + std::to_string(A.cols()) +
                                " got " + std::to_string(x.size()));
  return A * x;
}

bool pattern_is_symmetric(const SparseMat& A, double tol) {
  if (A.rows() != A.cols()) return false;
  SparseMat At = SparseMat(A.transpose());
  if (At.nonZeros() != A.nonZeros()) return false;
  for (Index r = 0; r < A.outerSize(); ++r) {
    SparseMat::InnerIterator ia(A, r), it(At, r);
    for (; ia && it; ++ia, ++it) {
      if (ia.col() != it.col()) return false;
      if (std::abs(ia.value() - it.value()) > tol) return false;
    }
    if (ia || it) return false;
  }
  return true;
}

void require_square_symmetric(const SparseMat& A, const std::string& who) {
  if (A.rows() != A.cols()) throw std::invalid_argument(who + ": matrix not square");
  if (!pattern_is_symmetric(A)) throw std::invalid_argument(who + ": matrix not symmetric");
}

SparseMat permute_sym(const SparseMat& A, const std::vector<Index>& perm) {
  const Index n = static_cast<Index>(A.rows());
  if (static_cast<Index>(perm.size()) != n)
    throw std::invalid_argument("permute_sym: permutation length mismatch");
  std::vector<Index> inv = invert_perm(perm);
  std::vector<Triplet> ts;
  ts.reserve(static_cast<std::size_t>(A.nonZeros()));
  for (Index r = 0; r < A.outerSize(); ++r)
    for (SparseMat::InnerIterator it(A, r); it; ++it)
      ts.emplace_back(inv[r], inv[it.col()], it.value());
  return from_triplets(n, n, ts);
}

std::vector<Index> identity_perm(Index n) {
  std::vector<Index> p(static_cast<std::size_t>(n));
  for (Index i = 0; i < n; ++i) p[static_cast<std::size_t>(i)] = i;
  return p;
}

std::vector<Index> invert_perm(const std::vector<Index>& perm) {
  std::vector<Index> inv(perm.size());
  for (std::size_t i = 0; i < perm.size(); ++i) inv[static_cast<std::size_t>(perm[i])] = static_cast<Index>(i);
  return inv;
}

SparseMat sparse_identity(Index n) {
  SparseMat I(n, n);
  I.setIdentity();
  return I;
}

double max_abs_diff(const SparseMat& A, const SparseMat& B) {
  SparseMat D = A - B;
  double m = 0.0;
  for (Index r = 0; r < D.outerSize(); ++r)
    for (SparseMat::InnerIterator it(D, r); it; ++it) m = std::max(m, std::abs(it.value()));
  return m;
}

}  // namespace ddlr
