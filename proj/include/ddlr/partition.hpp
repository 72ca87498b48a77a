#pragma once

#include "ddlr/sparse.hpp"

#include <map>
#include <utility>

namespace ddlr {

struct Partition {
  Index p = 0;
  std::vector<Index> assign;  // vertex -> subdomain id
  std::uint64_t seed = 0;
};

/// Edge-separator partition into p nonempty parts by recursive bisection of
/// BFS level sets grown from a pseudo-peripheral vertex. Deterministic for a
/// fixed (A, p, seed); the seed picks the BFS start among the
/// pseudo-peripheral candidates. Disconnected graphs are handled by
/// restarting the sweep at the lowest-index unvisited vertex.
Partition partition_graph(const SparseMat& A, Index p, std::uint64_t seed);

/// Partitioned and reordered matrix: interiors of every subdomain first
/// (u_1..u_p), then all interface unknowns (y_1..y_p).
struct DistributedMatrix {
  Index p = 0;
  Index n = 0;  // total
  Index m = 0;  // interior count
  Index s = 0;  // interface count
  std::vector<Index> d;      // interior size per subdomain
  std::vector<Index> si;     // interface size per subdomain
  std::vector<Index> u_off;  // start of u_i within [0, m)
  std::vector<Index> y_off;  // start of y_i within [0, s)
  std::vector<Index> perm;   // perm[new] = old
  std::vector<Index> iperm;  // old -> new

  std::vector<SparseMat> B;  // d_i x d_i
  std::vector<SparseMat> E;  // d_i x s_i
  std::vector<SparseMat> C;  // s_i x s_i
  std::map<std::pair<Index, Index>, SparseMat> Eij;  // interface couplings, i != j

  SparseMat Aperm;  // P A P^T
  SparseMat Cglob;  // trailing s x s block of Aperm

  std::vector<Index> y_owner;  // owning subdomain of each interface position
  Partition part;
};

/// Classifies interiors/interfaces, builds the global reordering and extracts
/// all blocks. A subdomain may have d_i = 0 or s_i = 0.
DistributedMatrix build_distributed(const SparseMat& A, const Partition& part);

enum class PermDir { Forward, Inverse };

Vector permute_vector(const DistributedMatrix& dist, const Vector& x, PermDir dir);

/// Extracts A(rows r0..r0+nr, cols c0..c0+nc) as its own sparse matrix.
SparseMat extract_block(const SparseMat& A, Index r0, Index nr, Index c0, Index nc);

}  // namespace ddlr
