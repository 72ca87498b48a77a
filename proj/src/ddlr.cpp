#include "ddlr/ddlr.hpp"

#include <Eigen/Cholesky>
#include <Eigen/Eigenvalues>
#include <Eigen/LU>

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>

namespace ddlr {

Vector e_mul(const EOperator& E, const Vector& w) {
  const DistributedMatrix& dist = *E.dist;
  if (w.size() != dist.s) throw std::invalid_argument("e_mul: length mismatch");
  Vector z = Vector::Zero(dist.n);
  for (Index i = 0; i < dist.p; ++i) {
    const Index di = dist.d[static_cast<std::size_t>(i)];
    const Index siz = dist.si[static_cast<std::size_t>(i)];
    if (di == 0 || siz == 0) continue;
    z.segment(dist.u_off[static_cast<std::size_t>(i)], di) =
        (1.0 / E.alpha) * (dist.E[static_cast<std::size_t>(i)] * w.segment(dist.y_off[static_cast<std::size_t>(i)], siz));
  }
  z.segment(dist.m, dist.s) = -E.alpha * w;
  return z;
}

Vector et_mul(const EOperator& E, const Vector& z) {
  const DistributedMatrix& dist = *E.dist;
  if (z.size() != dist.n) throw std::invalid_argument("et_mul: length mismatch");
  Vector w = -E.alpha * z.segment(dist.m, dist.s);
  for (Index i = 0; i < dist.p; ++i) {
    const Index di = dist.d[static_cast<std::size_t>(i)];
    const Index siz = dist.si[static_cast<std::size_t>(i)];
    if (di == 0 || siz == 0) continue;
    w.segment(dist.y_off[static_cast<std::size_t>(i)], siz) +=
        (1.0 / E.alpha) *
        (dist.E[static_cast<std::size_t>(i)].transpose() * z.segment(dist.u_off[static_cast<std::size_t>(i)], di));
  }
  return w;
}

LinearOperator h_operator(const A0Operator& a0) {
  const EOperator E{a0.dist, a0.alpha};
  const A0Operator* op = &a0;
  return {a0.dist->s, [E, op](const Vector& v) -> Vector { return et_mul(E, a0_solve(*op, e_mul(E, v))); }};
}

LinearOperator h2_operator(const A0Operator& a0) {
  const EOperator E{a0.dist, a0.alpha};
  const A0Operator* op = &a0;
  return {a0.dist->s,
          [E, op](const Vector& v) -> Vector { return et_mul(E, a0_solve(*op, a0_solve(*op, e_mul(E, v)))); }};
}

namespace {

constexpr Index kMaxRank = 512;

bool all_below_one(const Vector& lambda) {
  for (Index i = 0; i < lambda.size(); ++i)
    if (lambda[i] >= 1.0 - 1e-8) return false;
  return true;
}

}  // namespace

DDLR1 build_ddlr1(const A0Operator& a0, const DDLR1Options& opt) {
  if (opt.k < 0 || opt.k > kMaxRank) throw std::invalid_argument("build_ddlr1: rank out of range (0..512)");
  if (opt.theta_mode == ThetaMode::Fixed && opt.theta_fixed >= 1.0)
    throw std::invalid_argument("build_ddlr1: fixed theta must be < 1");

  DDLR1 P;
  P.a0 = &a0;
  P.E = EOperator{a0.dist, a0.alpha};
  P.opts = opt;
  const Index s = a0.dist->s;

  if (s == 0) {
    P.theta = opt.theta_mode == ThetaMode::Fixed ? opt.theta_fixed : 0.0;
    P.spd_certified = true;
    return P;
  }

  const Index k = std::min(opt.k, s);
  if (k == 0) {
    switch (opt.theta_mode) {
      case ThetaMode::Zero:
        P.theta = 0.0;
        break;
      case ThetaMode::Fixed:
        P.theta = opt.theta_fixed;
        break;
      case ThetaMode::LambdaNext: {
        // theta = lambda_1: probe the top eigenvalue only
        EigenBundle top = lanczos_topk(h_operator(a0), 1, opt.lanczos);
        P.theta = top.lambda[0];
        break;
      }
    }
    P.spd_certified = P.theta < 1.0;
    P.U.resize(s, 0);
    P.lambda.resize(0);
    return P;
  }

  EigenBundle eb = lanczos_topk(h_operator(a0), k, opt.lanczos);
  P.U = std::move(eb.U);
  P.lambda = std::move(eb.lambda);
  P.lambda_next = eb.lambda_next;
  P.lambda_next_available = eb.lambda_next_available;

  switch (opt.theta_mode) {
    case ThetaMode::Zero:
      P.theta = 0.0;
      break;
    case ThetaMode::Fixed:
      P.theta = opt.theta_fixed;
      break;
    case ThetaMode::LambdaNext:
      P.theta = eb.lambda_next_available ? eb.lambda_next : P.lambda[P.lambda.size() - 1];
      break;
  }
  P.spd_certified = all_below_one(P.lambda) && P.theta < 1.0;
  return P;
}

Vector apply_gktheta(const Matrix& U, const Vector& lambda, double theta, const Vector& y) {
  if (theta >= 1.0) throw std::invalid_argument("apply_gktheta: theta must be < 1");
  const double it = 1.0 / (1.0 - theta);
  if (U.cols() == 0) return it * y;
  Vector c = U.transpose() * y;
  for (Index j = 0; j < c.size(); ++j) {
    const double gap = 1.0 - lambda[j];
    if (std::abs(gap) < 1e-14) throw std::runtime_error("apply_gktheta: eigenvalue equal to one");
    c[j] *= 1.0 / gap - it;
  }
  return it * y + U * c;
}

Vector apply_ddlr1(const DDLR1& P, const Vector& x) {
  const A0Operator& a0 = *P.a0;
  if (a0.dist->s == 0) return a0_solve(a0, x);
  Vector z = a0_solve(a0, x);
  Vector y = et_mul(P.E, z);
  Vector w = apply_gktheta(P.U, P.lambda, P.theta, y);
  Vector v = e_mul(P.E, w);
  return a0_solve(a0, x + v);
}

DDLR1 extend_rank(const DDLR1& P, Index extra) {
  if (extra < 0) throw std::invalid_argument("extend_rank: extra must be nonnegative");
  if (extra == 0) return P;
  const Index s = P.a0->dist->s;
  if (P.rank() + extra >= s) throw std::invalid_argument("extend_rank: k + extra must stay below s");

  LanczosOptions lopt = P.opts.lanczos;
  lopt.deflate = &P.U;
  EigenBundle eb = lanczos_topk(h_operator(*P.a0), extra, lopt);

  DDLR1 Q;
  Q.a0 = P.a0;
  Q.E = P.E;
  Q.opts = P.opts;
  Q.opts.k = P.rank() + static_cast<Index>(eb.lambda.size());

  const Index kc = P.rank() + static_cast<Index>(eb.lambda.size());
  Matrix U(s, kc);
  Vector lam(kc);
  U.leftCols(P.rank()) = P.U;
  lam.head(P.rank()) = P.lambda;
  U.rightCols(eb.lambda.size()) = eb.U;
  lam.tail(eb.lambda.size()) = eb.lambda;

  // enforce the descending invariant across the seam
  std::vector<Index> ord(static_cast<std::size_t>(kc));
  std::iota(ord.begin(), ord.end(), 0);
  std::stable_sort(ord.begin(), ord.end(), [&lam](Index a, Index b) { return lam[a] > lam[b]; });
  Q.U.resize(s, kc);
  Q.lambda.resize(kc);
  for (Index j = 0; j < kc; ++j) {
    Q.U.col(j) = U.col(ord[static_cast<std::size_t>(j)]);
    Q.lambda[j] = lam[ord[static_cast<std::size_t>(j)]];
  }

  Q.lambda_next = eb.lambda_next;
  Q.lambda_next_available = eb.lambda_next_available;
  switch (P.opts.theta_mode) {
    case ThetaMode::Zero:
      Q.theta = 0.0;
      break;
    case ThetaMode::Fixed:
      Q.theta = P.opts.theta_fixed;
      break;
    case ThetaMode::LambdaNext:
      Q.theta = eb.lambda_next_available ? eb.lambda_next : Q.lambda[kc - 1];
      break;
  }
  Q.spd_certified = all_below_one(Q.lambda) && Q.theta < 1.0;
  return Q;
}

DDLR2 build_ddlr2(const A0Operator& a0, const DDLR2Options& opt) {
  if (opt.k < 0 || opt.k > kMaxRank) throw std::invalid_argument("build_ddlr2: rank out of range (0..512)");
  DDLR2 P;
  P.a0 = &a0;
  const Index n = a0.dist->n;
  const Index s = a0.dist->s;
  const Index k = std::min(opt.k, s);

  if (k == 0) {
    P.U.resize(n, 0);
    P.Hk.resize(0, 0);
    P.spd_certified = true;
    return P;
  }

  EigenBundle eb = lanczos_topk(h2_operator(a0), k, opt.lanczos);
  const Index kk = static_cast<Index>(eb.lambda.size());
  const EOperator E{a0.dist, a0.alpha};

  Matrix EV(n, kk);
  P.U.resize(n, kk);
  for (Index j = 0; j < kk; ++j) {
    EV.col(j) = e_mul(E, eb.U.col(j));
    P.U.col(j) = a0_solve(a0, EV.col(j));
  }

  Matrix T = P.U.transpose() * EV;
  T = 0.5 * (T + T.transpose()).eval();
  Eigen::SelfAdjointEigenSolver<Matrix> tes(T);
  P.rho = std::max(std::abs(tes.eigenvalues()(0)), std::abs(tes.eigenvalues()(kk - 1)));

  Matrix K = Matrix::Identity(kk, kk) - T;
  Eigen::LLT<Matrix> llt(K);
  if (llt.info() == Eigen::Success && P.rho < 1.0) {
    P.Hk = llt.solve(Matrix::Identity(kk, kk));
    P.spd_certified = true;
  } else {
    Eigen::FullPivLU<Matrix> lu(K);
    if (!lu.isInvertible()) throw std::runtime_error("build_ddlr2: G_k singular");
    P.Hk = lu.solve(Matrix::Identity(kk, kk));
    P.spd_certified = false;
  }
  P.Hk = 0.5 * (P.Hk + P.Hk.transpose()).eval();
  return P;
}

Vector apply_ddlr2(const DDLR2& P, const Vector& x) {
  Vector z = a0_solve(*P.a0, x);
  if (P.U.cols() == 0) return z;
  return z + P.U * (P.Hk * (P.U.transpose() * x));
}

}  // namespace ddlr
