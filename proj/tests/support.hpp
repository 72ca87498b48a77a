#pragma once

#include "ddlr/a0.hpp"
#include "ddlr/ildl.hpp"
#include "ddlr/partition.hpp"

#include <random>

namespace ddlr::testing {

inline SparseMat tridiag(Index n, double off = -1.0, double diag = 2.0) {
  std::vector<Triplet> ts;
  for (Index i = 0; i < n; ++i) {
    ts.emplace_back(i, i, diag);
    if (i + 1 < n) {
      ts.emplace_back(i, i + 1, off);
      ts.emplace_back(i + 1, i, off);
    }
  }
  return from_triplets(n, n, ts);
}

// Random sparse symmetric diagonally dominant (hence SPD) matrix.
inline SparseMat random_spd(Index n, double density, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> val(-1.0, 1.0);
  std::uniform_real_distribution<double> pick(0.0, 1.0);
  std::vector<Triplet> ts;
  Vector rowsum = Vector::Zero(n);
  for (Index i = 0; i < n; ++i)
    for (Index j = i + 1; j < n; ++j) {
      if (pick(rng) >= density) continue;
      const double v = val(rng);
      ts.emplace_back(i, j, v);
      ts.emplace_back(j, i, v);
      rowsum[i] += std::abs(v);
      rowsum[j] += std::abs(v);
    }
  for (Index i = 0; i < n; ++i) ts.emplace_back(i, i, rowsum[i] + 1.0);
  return from_triplets(n, n, ts);
}

inline Vector random_vector(Index n, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> val(-1.0, 1.0);
  Vector v(n);
  for (Index i = 0; i < n; ++i) v[i] = val(rng);
  return v;
}

inline Matrix dense_L(const TriFactor& F) {
  Matrix L = Matrix::Identity(F.n, F.n);
  for (Index k = 0; k < F.n; ++k)
    for (Index t = F.col_ptr[static_cast<std::size_t>(k)]; t < F.col_ptr[static_cast<std::size_t>(k) + 1]; ++t)
      L(F.row_idx[static_cast<std::size_t>(t)], k) = F.values[static_cast<std::size_t>(t)];
  return L;
}

// ||P A P^T - L D L^T||_F / ||A||_F
inline double factor_residual(const SparseMat& A, const TriFactor& F) {
  Matrix Ap = Matrix(permute_sym(A, F.perm));
  if (F.shift != 0.0)
    for (Index i = 0; i < F.n; ++i) Ap(i, i) *= 1.0 + F.shift;
  Matrix L = dense_L(F);
  return (L * F.d.asDiagonal() * L.transpose() - Ap).norm() / Ap.norm();
}

// Exact fill of LDL^T after applying perm: count of strict-lower entries of L
// that are absent from the permuted pattern. Simulated elimination oracle.
inline Index symbolic_fill(const SparseMat& A, const std::vector<Index>& perm) {
  const Index n = static_cast<Index>(A.rows());
  Matrix P = Matrix(permute_sym(A, perm));
  std::vector<std::vector<bool>> pat(static_cast<std::size_t>(n), std::vector<bool>(static_cast<std::size_t>(n)));
  for (Index i = 0; i < n; ++i)
    for (Index j = 0; j < n; ++j) pat[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)] = P(i, j) != 0.0;
  Index fill = 0;
  for (Index k = 0; k < n; ++k)
    for (Index i = k + 1; i < n; ++i) {
      if (!pat[static_cast<std::size_t>(i)][static_cast<std::size_t>(k)]) continue;
      for (Index j = k + 1; j <= i; ++j) {
        if (!pat[static_cast<std::size_t>(j)][static_cast<std::size_t>(k)]) continue;
        if (!pat[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)]) {
          pat[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)] = true;
          pat[static_cast<std::size_t>(j)][static_cast<std::size_t>(i)] = true;
          ++fill;
        }
      }
    }
  return fill;
}

// E = [alpha^-1 E_hat; -alpha I] assembled explicitly (n x s).
inline SparseMat assemble_E(const DistributedMatrix& dist, double alpha) {
  std::vector<Triplet> ts;
  for (Index i = 0; i < dist.p; ++i) {
    const SparseMat& Ei = dist.E[static_cast<std::size_t>(i)];
    for (Index r = 0; r < Ei.outerSize(); ++r)
      for (SparseMat::InnerIterator it(Ei, r); it; ++it)
        ts.emplace_back(dist.u_off[static_cast<std::size_t>(i)] + r,
                        dist.y_off[static_cast<std::size_t>(i)] + it.col(), it.value() / alpha);
  }
  for (Index t = 0; t < dist.s; ++t) ts.emplace_back(dist.m + t, t, -alpha);
  return from_triplets(dist.n, dist.s, ts);
}

// E_hat (m x s): interior-to-interface couplings in the permuted ordering.
inline SparseMat assemble_Ehat(const DistributedMatrix& dist) {
  std::vector<Triplet> ts;
  for (Index i = 0; i < dist.p; ++i) {
    const SparseMat& Ei = dist.E[static_cast<std::size_t>(i)];
    for (Index r = 0; r < Ei.outerSize(); ++r)
      for (SparseMat::InnerIterator it(Ei, r); it; ++it)
        ts.emplace_back(dist.u_off[static_cast<std::size_t>(i)] + r,
                        dist.y_off[static_cast<std::size_t>(i)] + it.col(), it.value());
  }
  return from_triplets(dist.m, dist.s, ts);
}

}  // namespace ddlr::testing
