#include "ddlr/partition.hpp"

#include <algorithm>
#include <deque>
#include <stdexcept>

namespace ddlr {

namespace {

// BFS over the subgraph induced by in_set, neighbors visited in sorted
// adjacency order. Returns visit order and fills level numbers.
std::vector<Index> bfs_levels(const SparseMat& A, const std::vector<char>& in_set, Index start,
                              std::vector<Index>& level) {
  std::vector<Index> order;
  std::deque<Index> q;
  q.push_back(start);
  level[static_cast<std::size_t>(start)] = 0;
  while (!q.empty()) {
    const Index v = q.front();
    q.pop_front();
    order.push_back(v);
    for (SparseMat::InnerIterator it(A, v); it; ++it) {
      const Index w = it.col();
      if (w == v || !in_set[static_cast<std::size_t>(w)]) continue;
      if (level[static_cast<std::size_t>(w)] >= 0) continue;
      level[static_cast<std::size_t>(w)] = level[static_cast<std::size_t>(v)] + 1;
      q.push_back(w);
    }
  }
  return order;
}

// George-Liu sweep from the lowest-index vertex of the component containing
// `root`; returns the farthest level set of the final sweep, sorted.
std::vector<Index> pseudo_peripheral_candidates(const SparseMat& A, const std::vector<char>& in_set,
                                                Index root) {
  const Index n = static_cast<Index>(A.rows());
  Index start = root;
  Index ecc = -1;
  std::vector<Index> last_level;
  for (;;) {
    std::vector<Index> level(static_cast<std::size_t>(n), -1);
    std::vector<Index> order = bfs_levels(A, in_set, start, level);
    const Index e = level[static_cast<std::size_t>(order.back())];
    last_level.clear();
    for (Index v : order)
      if (level[static_cast<std::size_t>(v)] == e) last_level.push_back(v);
    std::sort(last_level.begin(), last_level.end());
    if (e <= ecc) break;
    ecc = e;
    start = last_level.front();
  }
  return last_level;
}

// Global BFS visit order of the induced subgraph, restarting at the lowest
// unvisited vertex when a component is exhausted.
std::vector<Index> bfs_order(const SparseMat& A, const std::vector<Index>& verts, std::uint64_t seed) {
  const Index n = static_cast<Index>(A.rows());
  std::vector<char> in_set(static_cast<std::size_t>(n), 0);
  for (Index v : verts) in_set[static_cast<std::size_t>(v)] = 1;

  std::vector<Index> cand = pseudo_peripheral_candidates(A, in_set, verts.front());
  const Index start = cand[static_cast<std::size_t>(seed % cand.size())];

  std::vector<Index> level(static_cast<std::size_t>(n), -1);
  std::vector<Index> order = bfs_levels(A, in_set, start, level);
  while (order.size() < verts.size()) {
    for (Index v : verts) {
      if (level[static_cast<std::size_t>(v)] < 0) {
        std::vector<Index> more = bfs_levels(A, in_set, v, level);
        order.insert(order.end(), more.begin(), more.end());
        break;
      }
    }
  }
  return order;
}

void bisect(const SparseMat& A, const std::vector<Index>& verts, Index parts, Index id_base,
            std::uint64_t seed, std::vector<Index>& assign) {
  if (parts == 1) {
    for (Index v : verts) assign[static_cast<std::size_t>(v)] = id_base;
    return;
  }
  const Index p_left = parts - parts / 2;
  const Index p_right = parts / 2;
  const auto sz = static_cast<Index>(verts.size());
  Index target = static_cast<Index>((static_cast<long long>(sz) * p_left + parts / 2) / parts);
  target = std::clamp(target, p_left, sz - p_right);

  std::vector<Index> order = bfs_order(A, verts, seed);
  std::vector<Index> left(order.begin(), order.begin() + target);
  std::vector<Index> right(order.begin() + target, order.end());
  std::sort(left.begin(), left.end());
  std::sort(right.begin(), right.end());
  bisect(A, left, p_left, id_base, seed, assign);
  bisect(A, right, p_right, id_base + p_left, seed, assign);
}

}  // namespace

Partition partition_graph(const SparseMat& A, Index p, std::uint64_t seed) {
  require_square_symmetric(A, "partition_graph");
  const Index n = static_cast<Index>(A.rows());
  if (p < 1) throw std::invalid_argument("partition_graph: p must be >= 1");
  if (p > n) throw std::invalid_argument("partition_graph: p exceeds matrix order");

  Partition part;
  part.p = p;
  part.seed = seed;
  part.assign.assign(static_cast<std::size_t>(n), -1);
  bisect(A, identity_perm(n), p, 0, seed, part.assign);
  return part;
}

SparseMat extract_block(const SparseMat& A, Index r0, Index nr, Index c0, Index nc) {
  std::vector<Triplet> ts;
  for (Index r = r0; r < r0 + nr; ++r)
    for (SparseMat::InnerIterator it(A, r); it; ++it)
      if (it.col() >= c0 && it.col() < c0 + nc) ts.emplace_back(r - r0, it.col() - c0, it.value());
  return from_triplets(nr, nc, ts);
}

DistributedMatrix build_distributed(const SparseMat& A, const Partition& part) {
  require_square_symmetric(A, "build_distributed");
  const Index n = static_cast<Index>(A.rows());
  if (static_cast<Index>(part.assign.size()) != n)
    throw std::invalid_argument("build_distributed: partition length mismatch");

  DistributedMatrix dist;
  dist.p = part.p;
  dist.n = n;
  dist.part = part;

  std::vector<char> interface_flag(static_cast<std::size_t>(n), 0);
  for (Index v = 0; v < n; ++v)
    for (SparseMat::InnerIterator it(A, v); it; ++it)
      if (it.col() != v && part.assign[static_cast<std::size_t>(it.col())] != part.assign[static_cast<std::size_t>(v)]) {
        interface_flag[static_cast<std::size_t>(v)] = 1;
        break;
      }

  std::vector<std::vector<Index>> interiors(static_cast<std::size_t>(part.p));
  std::vector<std::vector<Index>> interfaces(static_cast<std::size_t>(part.p));
  for (Index v = 0; v < n; ++v) {
    const auto dom = static_cast<std::size_t>(part.assign[static_cast<std::size_t>(v)]);
    (interface_flag[static_cast<std::size_t>(v)] ? interfaces[dom] : interiors[dom]).push_back(v);
  }

  dist.d.resize(static_cast<std::size_t>(part.p));
  dist.si.resize(static_cast<std::size_t>(part.p));
  dist.u_off.resize(static_cast<std::size_t>(part.p));
  dist.y_off.resize(static_cast<std::size_t>(part.p));
  dist.perm.reserve(static_cast<std::size_t>(n));
  for (Index i = 0; i < part.p; ++i) {
    dist.u_off[static_cast<std::size_t>(i)] = static_cast<Index>(dist.perm.size());
    dist.d[static_cast<std::size_t>(i)] = static_cast<Index>(interiors[static_cast<std::size_t>(i)].size());
    dist.perm.insert(dist.perm.end(), interiors[static_cast<std::size_t>(i)].begin(), interiors[static_cast<std::size_t>(i)].end());
  }
  dist.m = static_cast<Index>(dist.perm.size());
  for (Index i = 0; i < part.p; ++i) {
    dist.y_off[static_cast<std::size_t>(i)] = static_cast<Index>(dist.perm.size()) - dist.m;
    dist.si[static_cast<std::size_t>(i)] = static_cast<Index>(interfaces[static_cast<std::size_t>(i)].size());
    dist.perm.insert(dist.perm.end(), interfaces[static_cast<std::size_t>(i)].begin(), interfaces[static_cast<std::size_t>(i)].end());
    for (Index t = 0; t < dist.si[static_cast<std::size_t>(i)]; ++t) dist.y_owner.push_back(i);
  }
  dist.s = n - dist.m;
  dist.iperm = invert_perm(dist.perm);
  dist.Aperm = permute_sym(A, dist.perm);
  dist.Cglob = extract_block(dist.Aperm, dist.m, dist.s, dist.m, dist.s);

  for (Index i = 0; i < part.p; ++i) {
    const Index u0 = dist.u_off[static_cast<std::size_t>(i)];
    const Index di = dist.d[static_cast<std::size_t>(i)];
    const Index y0 = dist.m + dist.y_off[static_cast<std::size_t>(i)];
    const Index siz = dist.si[static_cast<std::size_t>(i)];
    dist.B.push_back(extract_block(dist.Aperm, u0, di, u0, di));
    dist.E.push_back(extract_block(dist.Aperm, u0, di, y0, siz));
    dist.C.push_back(extract_block(dist.Aperm, y0, siz, y0, siz));
    for (Index j = 0; j < part.p; ++j) {
      if (j == i) continue;
      SparseMat Eij = extract_block(dist.Aperm, y0, siz, dist.m + dist.y_off[static_cast<std::size_t>(j)],
                                    dist.si[static_cast<std::size_t>(j)]);
      if (Eij.nonZeros() > 0) dist.Eij.emplace(std::make_pair(i, j), std::move(Eij));
    }
  }
  return dist;
}

Vector permute_vector(const DistributedMatrix& dist, const Vector& x, PermDir dir) {
  if (x.size() != dist.n) throw std::invalid_argument("permute_vector: length mismatch");
  Vector y(dist.n);
  if (dir == PermDir::Forward) {
    for (Index i = 0; i < dist.n; ++i) y[i] = x[dist.perm[static_cast<std::size_t>(i)]];
  } else {
    for (Index i = 0; i < dist.n; ++i) y[dist.perm[static_cast<std::size_t>(i)]] = x[i];
  }
  return y;
}

}  // namespace ddlr
