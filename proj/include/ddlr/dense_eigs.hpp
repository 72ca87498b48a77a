#pragma once

#include "ddlr/sparse.hpp"

namespace ddlr {

struct DenseSpectrum {
  Vector values;   // ascending
  Matrix vectors;  // columns, empty unless requested
  bool has_vectors = false;
};

/// All eigenvalues (ascending) of a dense symmetric matrix, order <= 4096.
/// Verification-scale oracle used by the spectrum checks.
DenseSpectrum dense_eigs_sym(const Matrix& A, bool want_vectors = false);

}  // namespace ddlr
