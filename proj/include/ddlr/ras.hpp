#pragma once

#include "ddlr/ildl.hpp"
#include "ddlr/partition.hpp"

namespace ddlr {

/// Restricted additive Schwarz: overlapped local solves whose outputs are
/// restricted to the owning subdomain, so every component is written exactly
/// once. overlap = 0 degenerates to block Jacobi.
struct RASPrecond {
  Index n = 0;
  Index p = 0;
  Index overlap = 0;
  std::vector<std::vector<Index>> ov;  // sorted overlapped index sets
  std::vector<std::vector<char>> owned;
  std::vector<TriFactor> fac;
  Index fill_nnz = 0;
};

RASPrecond build_ras(const SparseMat& A, const Partition& part, Index overlap, double droptol, Index maxfill);

Vector apply_ras(const RASPrecond& P, const Vector& x);

}  // namespace ddlr
