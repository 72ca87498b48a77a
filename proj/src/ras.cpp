#include "ddlr/ras.hpp"

#include <stdexcept>

namespace ddlr {

RASPrecond build_ras(const SparseMat& A, const Partition& part, Index overlap, double droptol, Index maxfill) {
  require_square_symmetric(A, "build_ras");
  if (overlap < 0) throw std::invalid_argument("build_ras: overlap must be >= 0");
  const Index n = static_cast<Index>(A.rows());
  RASPrecond P;
  P.n = n;
  P.p = part.p;
  P.overlap = overlap;

  for (Index i = 0; i < part.p; ++i) {
    std::vector<char> in(static_cast<std::size_t>(n), 0);
    for (Index v = 0; v < n; ++v)
      if (part.assign[static_cast<std::size_t>(v)] == i) in[static_cast<std::size_t>(v)] = 1;
    for (Index layer = 0; layer < overlap; ++layer) {
      std::vector<char> grown = in;
      for (Index v = 0; v < n; ++v) {
        if (!in[static_cast<std::size_t>(v)]) continue;
        for (SparseMat::InnerIterator it(A, v); it; ++it) grown[static_cast<std::size_t>(it.col())] = 1;
      }
      in.swap(grown);
    }
    std::vector<Index> set;
    for (Index v = 0; v < n; ++v)
      if (in[static_cast<std::size_t>(v)]) set.push_back(v);

    std::vector<Index> glob2loc(static_cast<std::size_t>(n), -1);
    for (std::size_t t = 0; t < set.size(); ++t) glob2loc[static_cast<std::size_t>(set[t])] = static_cast<Index>(t);
    std::vector<Triplet> ts;
    for (Index v : set)
      for (SparseMat::InnerIterator it(A, v); it; ++it)
        if (glob2loc[static_cast<std::size_t>(it.col())] >= 0)
          ts.emplace_back(glob2loc[static_cast<std::size_t>(v)], glob2loc[static_cast<std::size_t>(it.col())], it.value());
    SparseMat local = from_triplets(static_cast<Index>(set.size()), static_cast<Index>(set.size()), ts);

    try {
      P.fac.push_back(ildl_factor(local, droptol, maxfill, fill_reducing_order(local)));
    } catch (const std::exception& e) {
      throw std::runtime_error("build_ras: subdomain " + std::to_string(i) + ": " + e.what());
    }
    P.fill_nnz += P.fac.back().nnz();

    std::vector<char> own(set.size());
    for (std::size_t t = 0; t < set.size(); ++t)
      own[t] = part.assign[static_cast<std::size_t>(set[t])] == i ? 1 : 0;
    P.ov.push_back(std::move(set));
    P.owned.push_back(std::move(own));
  }
  return P;
}

Vector apply_ras(const RASPrecond& P, const Vector& x) {
  if (x.size() != P.n) throw std::invalid_argument("apply_ras: length mismatch");
  Vector out = Vector::Zero(P.n);
  for (Index i = 0; i < P.p; ++i) {
    const auto& set = P.ov[static_cast<std::size_t>(i)];
    Vector xs(static_cast<Index>(set.size()));
    for (std::size_t t = 0; t < set.size(); ++t) xs[static_cast<Index>(t)] = x[set[t]];
    Vector ys = P.fac[static_cast<std::size_t>(i)].solve(xs);
    for (std::size_t t = 0; t < set.size(); ++t)
      if (P.owned[static_cast<std::size_t>(i)][t]) out[set[t]] = ys[static_cast<Index>(t)];
  }
  return out;
}

}  // namespace ddlr
