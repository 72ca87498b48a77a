#include "ddlr/dense_eigs.hpp"

#include <Eigen/Eigenvalues>

#include <stdexcept>

namespace ddlr {

DenseSpectrum dense_eigs_sym(const Matrix& A, bool want_vectors) {
  if (A.rows() != A.cols()) throw std::invalid_argument("dense_eigs_sym: matrix not square");
  if (A.rows() > 4096) throw std::invalid_argument("dense_eigs_sym: order exceeds 4096 cap");
  Eigen::SelfAdjointEigenSolver<Matrix> es(A, want_vectors ? Eigen::ComputeEigenvectors : Eigen::EigenvaluesOnly);
  if (es.info() != Eigen::Success) throw std::runtime_error("dense_eigs_sym: eigensolver failed to converge");
  DenseSpectrum sp;
  sp.values = es.eigenvalues();
  if (want_vectors) {
    sp.vectors = es.eigenvectors();
    sp.has_vectors = true;
  }
  return sp;
}

}  // namespace ddlr
