#include "ddlr/ildl.hpp"

#include <Eigen/OrderingMethods>

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>

namespace ddlr {

namespace {

struct Breakdown {
  Index column;
};

// Left-looking column LDL^T with dynamic column lists. Ap is the permuted
// matrix; colnorm holds the 2-norm of each original column used by the drop
// test. Throws Breakdown on a vanishing pivot.
TriFactor factor_once(const SparseMat& Ap, double droptol, Index maxfill, double diag_scale) {
  const Index n = static_cast<Index>(Ap.rows());
  TriFactor F;
  F.n = n;
  F.col_ptr.assign(static_cast<std::size_t>(n) + 1, 0);
  F.d.resize(n);

  Vector colnorm(n);
  for (Index r = 0; r < n; ++r) colnorm[r] = Ap.row(r).norm();

  // Column entries of L kept as (row, value), sorted by row.
  std::vector<std::vector<Index>> lrow(static_cast<std::size_t>(n));
  std::vector<std::vector<double>> lval(static_cast<std::size_t>(n));
  // bucket[r]: columns whose next unconsumed entry sits in row r.
  std::vector<std::vector<Index>> bucket(static_cast<std::size_t>(n));
  std::vector<Index> cursor(static_cast<std::size_t>(n), 0);

  std::vector<double> w(static_cast<std::size_t>(n), 0.0);
  std::vector<char> mark(static_cast<std::size_t>(n), 0);
  std::vector<Index> touched;
  touched.reserve(64);

  const double pivot_floor = 1e-13 * std::max(1.0, diag_scale);

  for (Index k = 0; k < n; ++k) {
    touched.clear();
    double diag = 0.0;
    for (SparseMat::InnerIterator it(Ap, k); it; ++it) {
      const Index c = it.col();
      if (c == k) {
        diag = it.value();
      } else if (c > k) {
        w[static_cast<std::size_t>(c)] = it.value();
        mark[static_cast<std::size_t>(c)] = 1;
        touched.push_back(c);
      }
    }

    for (Index j : bucket[static_cast<std::size_t>(k)]) {
      const auto& rj = lrow[static_cast<std::size_t>(j)];
      const auto& vj = lval[static_cast<std::size_t>(j)];
      Index pos = cursor[static_cast<std::size_t>(j)];
      const double ljk_d = vj[static_cast<std::size_t>(pos)] * F.d[j];
      diag -= vj[static_cast<std::size_t>(pos)] * ljk_d;
      for (std::size_t t = static_cast<std::size_t>(pos) + 1; t < rj.size(); ++t) {
        const Index i = rj[t];
        if (!mark[static_cast<std::size_t>(i)]) {
          mark[static_cast<std::size_t>(i)] = 1;
          w[static_cast<std::size_t>(i)] = 0.0;
          touched.push_back(i);
        }
        w[static_cast<std::size_t>(i)] -= vj[t] * ljk_d;
      }
      ++cursor[static_cast<std::size_t>(j)];
      if (static_cast<std::size_t>(cursor[static_cast<std::size_t>(j)]) < rj.size())
        bucket[static_cast<std::size_t>(rj[static_cast<std::size_t>(cursor[static_cast<std::size_t>(j)])])].push_back(j);
    }
    bucket[static_cast<std::size_t>(k)].clear();
    bucket[static_cast<std::size_t>(k)].shrink_to_fit();

    if (std::abs(diag) < pivot_floor) throw Breakdown{k};
    F.d[k] = diag;

    const double tau = droptol * colnorm[k];
    std::vector<std::pair<Index, double>> kept;
    kept.reserve(touched.size());
    for (Index i : touched) {
      const double ev = w[static_cast<std::size_t>(i)];
      mark[static_cast<std::size_t>(i)] = 0;
      if (std::abs(ev) >= tau && ev != 0.0) kept.emplace_back(i, ev / diag);
    }
    if (static_cast<Index>(kept.size()) > maxfill) {
      std::nth_element(kept.begin(), kept.begin() + maxfill, kept.end(),
                       [](const auto& a, const auto& b) { return std::abs(a.second) > std::abs(b.second); });
      kept.resize(static_cast<std::size_t>(maxfill));
    }
    std::sort(kept.begin(), kept.end());

    auto& rk = lrow[static_cast<std::size_t>(k)];
    auto& vk = lval[static_cast<std::size_t>(k)];
    rk.reserve(kept.size());
    vk.reserve(kept.size());
    for (const auto& [i, v] : kept) {
      rk.push_back(i);
      vk.push_back(v);
    }
    F.col_ptr[static_cast<std::size_t>(k) + 1] = F.col_ptr[static_cast<std::size_t>(k)] + static_cast<Index>(rk.size());
    if (!rk.empty()) bucket[static_cast<std::size_t>(rk[0])].push_back(k);
  }

  const std::size_t total = static_cast<std::size_t>(F.col_ptr[static_cast<std::size_t>(n)]);
  F.row_idx.reserve(total);
  F.values.reserve(total);
  for (Index k = 0; k < n; ++k) {
    F.row_idx.insert(F.row_idx.end(), lrow[static_cast<std::size_t>(k)].begin(), lrow[static_cast<std::size_t>(k)].end());
    F.values.insert(F.values.end(), lval[static_cast<std::size_t>(k)].begin(), lval[static_cast<std::size_t>(k)].end());
  }
  return F;
}

}  // namespace

TriFactor ildl_factor(const SparseMat& A, double droptol, Index maxfill, const std::vector<Index>& perm) {
  if (A.rows() != A.cols()) throw std::invalid_argument("ildl_factor: matrix not square");
  if (droptol < 0.0) throw std::invalid_argument("ildl_factor: droptol must be nonnegative");
  const Index n = static_cast<Index>(A.rows());
  if (maxfill < 0) maxfill = n;

  SparseMat Ap = permute_sym(A, perm);
  double diag_scale = 0.0;
  for (Index i = 0; i < n; ++i) diag_scale = std::max(diag_scale, std::abs(Ap.coeff(i, i)));

  double beta = 0.0;
  for (int attempt = 0; attempt <= 8; ++attempt) {
    SparseMat As = Ap;
    if (beta > 0.0) {
      for (Index i = 0; i < n; ++i) As.coeffRef(i, i) = Ap.coeff(i, i) * (1.0 + beta);
    }
    try {
      TriFactor F = factor_once(As, droptol, maxfill, diag_scale);
      F.perm = perm;
      F.shift = beta;
      return F;
    } catch (const Breakdown&) {
      beta = (beta == 0.0) ? 1e-4 : 2.0 * beta;
    }
  }
  throw std::runtime_error("ildl_factor: factorization breakdown");
}

Vector TriFactor::solve(const Vector& b) const {
  if (b.size() != n) throw std::invalid_argument("TriFactor::solve: length mismatch");
  Vector y(n);
  for (Index i = 0; i < n; ++i) y[i] = b[perm[static_cast<std::size_t>(i)]];
  // forward: L z = y (column-oriented, unit diagonal)
  for (Index k = 0; k < n; ++k) {
    const double yk = y[k];
    if (yk == 0.0) continue;
    for (Index t = col_ptr[static_cast<std::size_t>(k)]; t < col_ptr[static_cast<std::size_t>(k) + 1]; ++t)
      y[row_idx[static_cast<std::size_t>(t)]] -= values[static_cast<std::size_t>(t)] * yk;
  }
  y.array() /= d.array();
  // backward: L^T x = z
  for (Index k = n - 1; k >= 0; --k) {
    double acc = y[k];
    for (Index t = col_ptr[static_cast<std::size_t>(k)]; t < col_ptr[static_cast<std::size_t>(k) + 1]; ++t)
      acc -= values[static_cast<std::size_t>(t)] * y[row_idx[static_cast<std::size_t>(t)]];
    y[k] = acc;
  }
  Vector x(n);
  for (Index i = 0; i < n; ++i) x[perm[static_cast<std::size_t>(i)]] = y[i];
  return x;
}

std::vector<Index> fill_reducing_order(const SparseMat& A) {
  require_square_symmetric(A, "fill_reducing_order");
  const Index n = static_cast<Index>(A.rows());
  bool has_offdiag = false;
  for (Index r = 0; r < n && !has_offdiag; ++r)
    for (SparseMat::InnerIterator it(A, r); it; ++it)
      if (it.col() != r) {
        has_offdiag = true;
        break;
      }
  if (!has_offdiag) return identity_perm(n);

  SparseMatCol C(A);
  Eigen::AMDOrdering<Index> amd;
  Eigen::PermutationMatrix<Eigen::Dynamic, Eigen::Dynamic, Index> P;
  amd(C, P);
  // CSparse-style output: indices()[k] is the node eliminated at step k,
  // which is exactly the perm[new] = old convention used throughout.
  std::vector<Index> perm(static_cast<std::size_t>(n));
  for (Index i = 0; i < n; ++i) perm[static_cast<std::size_t>(i)] = P.indices()[i];
  return perm;
}

}  // namespace ddlr
