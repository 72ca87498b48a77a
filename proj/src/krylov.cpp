#include "ddlr/krylov.hpp"

#include <cmath>
#include <stdexcept>

namespace ddlr {

std::pair<Vector, SolveReport> pcg(const LinearOperator& A, const LinearOperator& M, const Vector& b,
                                   double tol, Index maxit) {
  if (b.size() != A.dim) throw std::invalid_argument("pcg: length mismatch");
  SolveReport rep;
  Vector x = Vector::Zero(A.dim);
  Vector r = b;
  const double r0 = r.norm();
  rep.residual_history.push_back(r0);
  if (r0 == 0.0) {
    rep.converged = true;
    return {x, rep};
  }
  Vector z = M.apply(r);
  Vector p = z;
  double rz = r.dot(z);
  for (Index it = 1; it <= maxit; ++it) {
    Vector q = A.apply(p);
    const double pq = p.dot(q);
    if (pq <= 0.0) throw std::runtime_error("pcg: operator not SPD");
    const double alpha = rz / pq;
    x += alpha * p;
    r -= alpha * q;
    const double nr = r.norm();
    rep.residual_history.push_back(nr);
    rep.iterations = it;
    if (nr / r0 < tol) {
      rep.converged = true;
      break;
    }
    z = M.apply(r);
    const double rz_next = r.dot(z);
    p = z + (rz_next / rz) * p;
    rz = rz_next;
  }
  return {x, rep};
}

std::pair<Vector, SolveReport> gmres(const LinearOperator& A, const LinearOperator& M, const Vector& b,
                                     Index restart, double tol, Index maxit) {
  if (b.size() != A.dim) throw std::invalid_argument("gmres: length mismatch");
  if (restart < 1) throw std::invalid_argument("gmres: restart must be >= 1");
  const Index n = A.dim;
  SolveReport rep;
  Vector x = Vector::Zero(n);
  const double b0 = b.norm();
  rep.residual_history.push_back(b0);
  if (b0 == 0.0) {
    rep.converged = true;
    return {x, rep};
  }

  Index total = 0;
  bool done = false;
  while (!done && total < maxit) {
    Vector r = b - A.apply(x);
    double beta = r.norm();
    if (beta / b0 < tol) break;

    const Index mdim = std::min(restart, maxit - total);
    Matrix V(n, mdim + 1);
    Matrix H = Matrix::Zero(mdim + 1, mdim);
    Vector g = Vector::Zero(mdim + 1);
    Vector cs = Vector::Zero(mdim), sn = Vector::Zero(mdim);
    V.col(0) = r / beta;
    g(0) = beta;

    Index j = 0;
    for (; j < mdim; ++j) {
      ++total;
      Vector w = A.apply(M.apply(V.col(j)));
      for (Index i = 0; i <= j; ++i) {
        H(i, j) = V.col(i).dot(w);
        w -= H(i, j) * V.col(i);
      }
      H(j + 1, j) = w.norm();
      const bool breakdown = H(j + 1, j) <= 1e-14 * beta;
      if (!breakdown) V.col(j + 1) = w / H(j + 1, j);

      for (Index i = 0; i < j; ++i) {
        const double t = cs(i) * H(i, j) + sn(i) * H(i + 1, j);
        H(i + 1, j) = -sn(i) * H(i, j) + cs(i) * H(i + 1, j);
        H(i, j) = t;
      }
      const double denom = std::hypot(H(j, j), H(j + 1, j));
      cs(j) = denom == 0.0 ? 1.0 : H(j, j) / denom;
      sn(j) = denom == 0.0 ? 0.0 : H(j + 1, j) / denom;
      H(j, j) = denom;
      H(j + 1, j) = 0.0;
      g(j + 1) = -sn(j) * g(j);
      g(j) = cs(j) * g(j);

      rep.residual_history.push_back(std::abs(g(j + 1)));
      rep.iterations = total;
      if (std::abs(g(j + 1)) / b0 < tol || breakdown || total >= maxit) {
        ++j;
        done = std::abs(g(j)) / b0 < tol || breakdown;
        break;
      }
    }

    if (j > 0) {
      Vector y = H.topLeftCorner(j, j).triangularView<Eigen::Upper>().solve(g.head(j));
      x += M.apply(V.leftCols(j) * y);
    }
  }

  const double final_res = (b - A.apply(x)).norm();
  rep.residual_history.back() = final_res;
  rep.converged = final_res / b0 < tol;
  return {x, rep};
}

}  // namespace ddlr
