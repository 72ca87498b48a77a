#include "ddlr/a0.hpp"

#include <Eigen/Eigenvalues>

#include <algorithm>
#include <cmath>
#include <random>
#include <stdexcept>

namespace ddlr {

Vector BlockJacobi::solve(const Vector& b) const {
  if (b.size() != s) throw std::invalid_argument("BlockJacobi::solve: length mismatch");
  Vector x(s);
  for (Index i = 0; i < p; ++i) {
    const Index o = offset[static_cast<std::size_t>(i)];
    const Index len = offset[static_cast<std::size_t>(i) + 1] - o;
    if (len == 0) continue;
    x.segment(o, len) = fac[static_cast<std::size_t>(i)].solve(b.segment(o, len));
  }
  return x;
}

Vector BlockJacobi::apply(const Vector& v) const { return D * v; }

Index BlockJacobi::nnz() const {
  Index t = 0;
  for (const auto& f : fac) t += f.nnz();
  return t;
}

BlockJacobi build_block_jacobi(const DistributedMatrix& dist, double alpha) {
  BlockJacobi bj;
  bj.s = dist.s;
  bj.p = dist.p;
  bj.offset.resize(static_cast<std::size_t>(dist.p) + 1);
  std::vector<Triplet> ts;
  for (Index i = 0; i < dist.p; ++i) {
    bj.offset[static_cast<std::size_t>(i)] = dist.y_off[static_cast<std::size_t>(i)];
    SparseMat Ci = dist.C[static_cast<std::size_t>(i)];
    Ci += alpha * alpha * sparse_identity(dist.si[static_cast<std::size_t>(i)]);
    for (Index r = 0; r < Ci.outerSize(); ++r)
      for (SparseMat::InnerIterator it(Ci, r); it; ++it)
        ts.emplace_back(dist.y_off[static_cast<std::size_t>(i)] + r,
                        dist.y_off[static_cast<std::size_t>(i)] + it.col(), it.value());
    bj.fac.push_back(ildl_factor(Ci, 0.0, -1, identity_perm(dist.si[static_cast<std::size_t>(i)])));
  }
  bj.offset[static_cast<std::size_t>(dist.p)] = dist.s;
  bj.D = from_triplets(dist.s, dist.s, ts);
  return bj;
}

ChebParams cheb_setup(const SparseMat& Calpha, const BlockJacobi& D, Index probe_steps) {
  const Index s = static_cast<Index>(Calpha.rows());
  ChebParams params;
  if (s == 0) return params;
  const Index msteps = std::min<Index>(std::max<Index>(probe_steps, 1), s);

  // Lanczos on the pencil (C, D) in the D inner product. The start vector is
  // pseudo-random: structured starts (e.g. all ones) can coincide with an
  // eigenvector of Laplacian-type pencils and hide one end of the spectrum.
  std::vector<double> alphas, betas;
  Matrix V(s, msteps);
  std::mt19937_64 rng(0x5eedc0de);
  std::uniform_real_distribution<double> unif(-1.0, 1.0);
  Vector v(s);
  for (Index i = 0; i < s; ++i) v[i] = unif(rng);
  Vector Dv = D.apply(v);
  v /= std::sqrt(v.dot(Dv));
  Vector vprev = Vector::Zero(s);
  double beta_prev = 0.0;
  Index m = 0;
  for (Index j = 0; j < msteps; ++j) {
    V.col(j) = v;
    Vector t = Calpha * v;
    const double alpha_j = v.dot(t);
    Vector w = D.solve(t);
    w -= alpha_j * v + beta_prev * vprev;
    // one reorthogonalization pass in the D inner product
    Vector Dw = D.apply(w);
    w -= V.leftCols(j + 1) * (V.leftCols(j + 1).transpose() * Dw);
    alphas.push_back(alpha_j);
    ++m;
    Dw = D.apply(w);
    const double beta_j = std::sqrt(std::max(0.0, w.dot(Dw)));
    if (beta_j <= 1e-12 * std::max(1.0, std::abs(alpha_j))) break;
    betas.push_back(beta_j);
    vprev = v;
    v = w / beta_j;
    beta_prev = beta_j;
  }

  Matrix T = Matrix::Zero(m, m);
  for (Index j = 0; j < m; ++j) {
    T(j, j) = alphas[static_cast<std::size_t>(j)];
    if (j + 1 < m) T(j, j + 1) = T(j + 1, j) = betas[static_cast<std::size_t>(j)];
  }
  Eigen::SelfAdjointEigenSolver<Matrix> es(T);
  const double theta_min = es.eigenvalues()(0);
  const double theta_max = es.eigenvalues()(m - 1);
  const double beta_last = (static_cast<Index>(betas.size()) >= m) ? betas[static_cast<std::size_t>(m) - 1] : 0.0;
  const double r_low = beta_last * std::abs(es.eigenvectors()(m - 1, 0));
  const double r_high = beta_last * std::abs(es.eigenvectors()(m - 1, m - 1));

  params.a = std::max(theta_min - r_low, theta_min / 2.0);
  params.b = theta_max + r_high;
  params.safeguard = std::max(r_low, r_high);
  if (params.a <= 0.0 || params.b < params.a)
    throw std::runtime_error("cheb_setup: indefinite interface matrix");
  return params;
}

Vector cheb_solve(const SparseMat& Calpha, const BlockJacobi& D, const ChebParams& params, const Vector& b) {
  const Index s = static_cast<Index>(Calpha.rows());
  if (b.size() != s) throw std::invalid_argument("cheb_solve: length mismatch");
  if (s == 0) return Vector();
  const double center = 0.5 * (params.a + params.b);
  const double half = 0.5 * (params.b - params.a);

  Vector x = Vector::Zero(s);
  Vector r = b;
  Vector z = D.solve(r);
  if (half <= 1e-14 * center) {
    // single-point spectrum: preconditioned Richardson with step 1/center
    for (Index it = 0; it < params.iters; ++it) {
      x += z / center;
      r = b - Calpha * x;
      z = D.solve(r);
    }
    return x;
  }
  const double sigma1 = center / half;
  double rho = 1.0 / sigma1;
  Vector dvec = z / center;
  for (Index it = 0; it < params.iters; ++it) {
    x += dvec;
    r -= Calpha * dvec;
    z = D.solve(r);
    const double rho_next = 1.0 / (2.0 * sigma1 - rho);
    dvec = rho_next * rho * dvec + (2.0 * rho_next / half) * z;
    rho = rho_next;
  }
  return x;
}

namespace {

// Dual-threshold dropping per column: entries below droptol times the column
// 2-norm go, then only the max_nnz_col largest magnitudes stay.
void drop_columns(SparseMatCol& Z, double droptol, Index max_nnz_col) {
  const Index n = static_cast<Index>(Z.cols());
  std::vector<Eigen::Triplet<double, Index>> kept;
  kept.reserve(static_cast<std::size_t>(Z.nonZeros()));
  for (Index c = 0; c < n; ++c) {
    std::vector<std::pair<Index, double>> col;
    double nrm2 = 0.0;
    for (SparseMatCol::InnerIterator it(Z, c); it; ++it) {
      col.emplace_back(it.row(), it.value());
      nrm2 += it.value() * it.value();
    }
    const double tau = droptol * std::sqrt(nrm2);
    std::erase_if(col, [tau](const auto& e) { return std::abs(e.second) < tau || e.second == 0.0; });
    if (static_cast<Index>(col.size()) > max_nnz_col) {
      std::nth_element(col.begin(), col.begin() + max_nnz_col, col.end(),
                       [](const auto& a, const auto& b) { return std::abs(a.second) > std::abs(b.second); });
      col.resize(static_cast<std::size_t>(max_nnz_col));
    }
    for (const auto& [r, v] : col) kept.emplace_back(r, c, v);
  }
  Z.setZero();
  Z.setFromTriplets(kept.begin(), kept.end());
}

double frob_inner(const SparseMat& A, const SparseMat& B) {
  return SparseMat(A.cwiseProduct(B)).sum();
}

}  // namespace

SparseMat mr_ainv(const SparseMat& Calpha, double droptol, Index max_nnz_col, Index steps) {
  const Index s = static_cast<Index>(Calpha.rows());
  if (s == 0) return SparseMat(0, 0);
  if (max_nnz_col < 0) max_nnz_col = s;

  std::vector<Triplet> ts;
  for (Index i = 0; i < s; ++i) {
    const double di = Calpha.coeff(i, i);
    if (di == 0.0) throw std::invalid_argument("mr_ainv: zero diagonal in C_alpha");
    ts.emplace_back(i, i, 1.0 / di);
  }
  SparseMat X = from_triplets(s, s, ts);
  const SparseMat I = sparse_identity(s);
  const bool dropping = droptol > 0.0 || max_nnz_col < s;

  for (Index step = 0; step < steps; ++step) {
    SparseMat R = I - SparseMat(Calpha * X);
    SparseMat Z = X * R;
    if (dropping) {
      SparseMatCol Zc(Z);
      drop_columns(Zc, droptol, max_nnz_col);
      Z = SparseMat(Zc);
    }
    SparseMat W = Calpha * Z;
    const double denom = frob_inner(W, W);
    if (denom == 0.0) return X;
    const double beta = frob_inner(R, W) / denom;
    X = X + beta * Z;
    X = 0.5 * (X + SparseMat(X.transpose()));
    X.makeCompressed();
  }
  return X;
}

A0Operator build_a0(const DistributedMatrix& dist, const A0Options& opt) {
  if (opt.alpha <= 0.0) throw std::invalid_argument("build_a0: alpha must be positive");
  A0Operator op;
  op.dist = &dist;
  op.alpha = opt.alpha;
  op.c_mode = opt.c_mode;

  const double inv_a2 = 1.0 / (opt.alpha * opt.alpha);
  for (Index i = 0; i < dist.p; ++i) {
    const SparseMat& Bi = dist.B[static_cast<std::size_t>(i)];
    const SparseMat& Ei = dist.E[static_cast<std::size_t>(i)];
    SparseMat Bia = Bi + SparseMat(inv_a2 * (Ei * SparseMat(Ei.transpose())));
    Bia.makeCompressed();
    try {
      op.Bfac.push_back(ildl_factor(Bia, opt.droptol, opt.maxfill, fill_reducing_order(Bia)));
    } catch (const std::exception& e) {
      throw std::runtime_error("build_a0: subdomain " + std::to_string(i) + ": " + e.what());
    }
    op.Balpha.push_back(std::move(Bia));
    op.fill_nnz += op.Bfac.back().nnz();
  }

  op.Calpha = dist.Cglob + SparseMat(opt.alpha * opt.alpha * sparse_identity(dist.s));
  op.Calpha.makeCompressed();
  if (dist.s > 0) {
    switch (opt.c_mode) {
      case CSolveMode::Direct:
        op.Cfac = ildl_factor(op.Calpha, 0.0, -1, fill_reducing_order(op.Calpha));
        op.fill_nnz += op.Cfac.nnz();
        break;
      case CSolveMode::Chebyshev:
        op.Dalpha = build_block_jacobi(dist, opt.alpha);
        op.cheb = cheb_setup(op.Calpha, op.Dalpha, opt.cheb_probe_steps);
        op.cheb.iters = opt.cheb_iters;
        op.fill_nnz += op.Dalpha.nnz();
        break;
      case CSolveMode::Ainv:
        op.X = mr_ainv(op.Calpha, opt.ainv_droptol, opt.ainv_maxnnz, opt.ainv_steps);
        op.fill_nnz += static_cast<Index>(op.X.nonZeros());
        break;
    }
  }
  return op;
}

Vector a0_solve(const A0Operator& op, const Vector& rhs) {
  const DistributedMatrix& dist = *op.dist;
  if (rhs.size() != dist.n) throw std::invalid_argument("a0_solve: length mismatch");
  Vector x(dist.n);
  for (Index i = 0; i < dist.p; ++i) {
    const Index u0 = dist.u_off[static_cast<std::size_t>(i)];
    const Index di = dist.d[static_cast<std::size_t>(i)];
    if (di == 0) continue;
    x.segment(u0, di) = op.Bfac[static_cast<std::size_t>(i)].solve(rhs.segment(u0, di));
  }
  if (dist.s > 0) {
    const Vector y = rhs.segment(dist.m, dist.s);
    switch (op.c_mode) {
      case CSolveMode::Direct:
        x.segment(dist.m, dist.s) = op.Cfac.solve(y);
        break;
      case CSolveMode::Chebyshev:
        x.segment(dist.m, dist.s) = cheb_solve(op.Calpha, op.Dalpha, op.cheb, y);
        break;
      case CSolveMode::Ainv:
        x.segment(dist.m, dist.s) = op.X * y;
        break;
    }
  }
  return x;
}

SparseMat assemble_a0(const A0Operator& op) {
  const DistributedMatrix& dist = *op.dist;
  std::vector<Triplet> ts;
  for (Index i = 0; i < dist.p; ++i) {
    const Index u0 = dist.u_off[static_cast<std::size_t>(i)];
    const SparseMat& Bia = op.Balpha[static_cast<std::size_t>(i)];
    for (Index r = 0; r < Bia.outerSize(); ++r)
      for (SparseMat::InnerIterator it(Bia, r); it; ++it) ts.emplace_back(u0 + r, u0 + it.col(), it.value());
  }
  for (Index r = 0; r < op.Calpha.outerSize(); ++r)
    for (SparseMat::InnerIterator it(op.Calpha, r); it; ++it)
      ts.emplace_back(dist.m + r, dist.m + it.col(), it.value());
  return from_triplets(dist.n, dist.n, ts);
}

}  // namespace ddlr
