#include "ddlr/lanczos.hpp"

#include <Eigen/Eigenvalues>

#include <cmath>
#include <random>
#include <stdexcept>

namespace ddlr {

LinearOperator matrix_op(const SparseMat& A) {
  if (A.rows() != A.cols()) throw std::invalid_argument("matrix_op: matrix not square");
  return {static_cast<Index>(A.rows()), [A](const Vector& x) -> Vector { return A * x; }};
}

LinearOperator identity_op(Index n) {
  return {n, [](const Vector& x) -> Vector { return x; }};
}

bool converge_check(double sigma_prev, double sigma_cur, double eps) {
  if (sigma_prev == 0.0) return false;
  return std::abs((sigma_cur - sigma_prev) / sigma_prev) < eps;
}

namespace {

Vector start_vector(Index n, std::uint64_t seed) {
  if (seed == 0) return Vector::Ones(n) / std::sqrt(static_cast<double>(n));
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> dist(0.0, 1.0);
  Vector v(n);
  for (Index i = 0; i < n; ++i) v[i] = dist(rng);
  v.normalize();
  return v;
}

void check_symmetry(const LinearOperator& op, std::uint64_t seed) {
  std::mt19937_64 rng(seed ^ 0x9e3779b97f4a7c15ull);
  std::uniform_real_distribution<double> dist(-1.0, 1.0);
  Vector x(op.dim), y(op.dim);
  for (Index i = 0; i < op.dim; ++i) x[i] = dist(rng);
  for (Index i = 0; i < op.dim; ++i) y[i] = dist(rng);
  const double lhs = x.dot(op.apply(y));
  const double rhs = y.dot(op.apply(x));
  if (std::abs(lhs - rhs) > 1e-6 * x.norm() * y.norm())
    throw std::runtime_error("lanczos_topk: operator failed the symmetry probe");
}

struct TridiagEig {
  Vector values;   // ascending
  Matrix vectors;
};

TridiagEig eig_tridiag(const std::vector<double>& alpha, const std::vector<double>& beta, Index m) {
  Matrix T = Matrix::Zero(m, m);
  for (Index j = 0; j < m; ++j) {
    T(j, j) = alpha[static_cast<std::size_t>(j)];
    if (j + 1 < m) T(j, j + 1) = T(j + 1, j) = beta[static_cast<std::size_t>(j)];
  }
  Eigen::SelfAdjointEigenSolver<Matrix> es(T);
  return {es.eigenvalues(), es.eigenvectors()};
}

}  // namespace

EigenBundle lanczos_topk(const LinearOperator& op, Index k, const LanczosOptions& opt) {
  const Index n = op.dim;
  if (k < 1 || k > n) throw std::invalid_argument("lanczos_topk: need 1 <= k <= dim");
  const Index ndefl = opt.deflate ? static_cast<Index>(opt.deflate->cols()) : 0;
  const Index free_dim = n - ndefl;
  if (free_dim < 1) throw std::invalid_argument("lanczos_topk: deflation space exhausts the operator");
  const Index cap = opt.max_steps > 0 ? std::min(opt.max_steps, free_dim) : std::min(5 * k, free_dim);

  check_symmetry(op, opt.seed);

  Matrix V(n, cap);
  std::vector<double> alphas, betas;
  alphas.reserve(static_cast<std::size_t>(cap));

  auto deflect = [&](Vector& w) {
    if (ndefl > 0) w -= (*opt.deflate) * (opt.deflate->transpose() * w);
  };

  Vector v = start_vector(n, opt.seed);
  deflect(v);
  for (Index e = 0; v.norm() < 1e-8 && e < n; ++e) {
    v = Vector::Unit(n, e);
    deflect(v);
  }
  v.normalize();

  EigenBundle out;
  double scale = 1e-300;
  double sigma_prev = 0.0;
  bool have_sigma = false;
  double beta_last = 0.0;
  Index m = 0;
  bool broke_down = false;

  while (m < cap) {
    V.col(m) = v;
    Vector w = op.apply(v);
    deflect(w);
    const double alpha_j = v.dot(w);
    w -= alpha_j * v;
    if (m > 0) w -= beta_last * V.col(m - 1);
    // two-pass classical Gram-Schmidt against the whole basis
    for (int pass = 0; pass < 2; ++pass) {
      w -= V.leftCols(m + 1) * (V.leftCols(m + 1).transpose() * w);
      deflect(w);
    }
    alphas.push_back(alpha_j);
    ++m;
    scale = std::max({scale, std::abs(alpha_j), beta_last});

    const double beta_j = w.norm();
    broke_down = beta_j <= 1e-12 * scale;

    bool at_cap = m == cap;
    bool check_now = broke_down || at_cap || (m % opt.check_every == 0 && m > k);
    if (check_now && m > 0) {
      TridiagEig te = eig_tridiag(alphas, betas, m);
      const Index kk = std::min(k, m);
      double sigma = 0.0;
      for (Index j = 0; j < kk; ++j) sigma += te.values(m - 1 - j);
      out.top_ritz_history.push_back(te.values(m - 1));
      if (!broke_down && !at_cap && have_sigma && m > k && converge_check(sigma_prev, sigma, opt.eps)) {
        out.converged = true;
      }
      sigma_prev = sigma;
      have_sigma = true;
    }
    if (out.converged || broke_down || at_cap) {
      beta_last = broke_down ? 0.0 : beta_j;
      break;
    }

    betas.push_back(beta_j);
    v = w / beta_j;
    beta_last = beta_j;
  }

  out.steps_used = m;
  if (broke_down) out.converged = true;

  TridiagEig te = eig_tridiag(alphas, betas, m);
  const Index kk = std::min(k, m);
  out.lambda.resize(kk);
  out.resid_bounds.resize(kk);
  Matrix Y(m, kk);
  for (Index j = 0; j < kk; ++j) {
    out.lambda[j] = te.values(m - 1 - j);
    Y.col(j) = te.vectors.col(m - 1 - j);
    out.resid_bounds[j] = beta_last * std::abs(te.vectors(m - 1, m - 1 - j));
  }
  out.U = V.leftCols(m) * Y;
  if (m > kk) {
    out.lambda_next = te.values(m - 1 - kk);
    out.lambda_next_available = true;
  }
  return out;
}

}  // namespace ddlr
