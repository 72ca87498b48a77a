#pragma once

#include "ddlr/sparse.hpp"

#include <string>

namespace ddlr {

/// Reads a Matrix Market coordinate file (real, symmetric or general) into a
/// full-pattern symmetric matrix. Symmetric files list the lower triangle,
/// which is mirrored; general files must contain symmetric content.
/// Throws std::runtime_error carrying the offending line number.
SparseMat mm_read(const std::string& path);

/// Writes the lower triangle in Matrix Market symmetric coordinate format.
void mm_write(const std::string& path, const SparseMat& A);

}  // namespace ddlr
