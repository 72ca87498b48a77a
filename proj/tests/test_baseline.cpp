#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "ddlr/harness.hpp"
#include "ddlr/krylov.hpp"
#include "ddlr/ras.hpp"
#include "support.hpp"

using namespace ddlr;
using namespace ddlr::testing;

namespace {

Partition whole(Index n) {
  Partition part;
  part.p = 1;
  part.assign.assign(static_cast<std::size_t>(n), 0);
  return part;
}

}  // namespace

TEST_CASE("single-domain RAS with exact fill is the exact inverse") {
  SparseMat A = random_spd(40, 0.1, 1);
  RASPrecond P = build_ras(A, whole(40), 0, 0.0, -1);
  Vector b = random_vector(40, 2);
  CHECK((spmv(A, apply_ras(P, b)) - b).norm() / b.norm() < 1e-10);

  auto [x, rep] = pcg(matrix_op(A), {40, [&P](const Vector& v) { return apply_ras(P, v); }}, b);
  CHECK(rep.converged);
  CHECK(rep.iterations == 1);
}

TEST_CASE("path overlap sets expand by adjacency") {
  SparseMat A = tridiag(4);
  Partition part;
  part.p = 2;
  part.assign = {0, 0, 1, 1};
  RASPrecond P = build_ras(A, part, 1, 0.0, -1);
  CHECK(P.ov[0] == std::vector<Index>{0, 1, 2});
  CHECK(P.ov[1] == std::vector<Index>{1, 2, 3});
  CHECK(P.owned[0] == std::vector<char>{1, 1, 0});
  CHECK(P.owned[1] == std::vector<char>{0, 1, 1});
}

TEST_CASE("every output index is owned exactly once") {
  SparseMat A = random_spd(60, 0.08, 3);
  Partition part = partition_graph(A, 4, 0);
  RASPrecond P = build_ras(A, part, 2, 0.0, -1);
  std::vector<int> hits(60, 0);
  for (Index i = 0; i < P.p; ++i)
    for (std::size_t t = 0; t < P.ov[static_cast<std::size_t>(i)].size(); ++t)
      if (P.owned[static_cast<std::size_t>(i)][t]) ++hits[static_cast<std::size_t>(P.ov[static_cast<std::size_t>(i)][t])];
  for (int h : hits) CHECK(h == 1);
}

TEST_CASE("zero overlap equals block Jacobi") {
  SparseMat A = random_spd(30, 0.15, 4);
  Partition part = partition_graph(A, 3, 0);
  RASPrecond P = build_ras(A, part, 0, 0.0, -1);
  Vector x = random_vector(30, 5);
  Vector y = apply_ras(P, x);

  // manual block-Jacobi: solve each diagonal block independently
  for (Index i = 0; i < 3; ++i) {
    std::vector<Index> set;
    for (Index v = 0; v < 30; ++v)
      if (part.assign[static_cast<std::size_t>(v)] == i) set.push_back(v);
    Matrix blk(set.size(), set.size());
    for (std::size_t a = 0; a < set.size(); ++a)
      for (std::size_t b = 0; b < set.size(); ++b) blk(a, b) = A.coeff(set[a], set[b]);
    Vector xb(set.size());
    for (std::size_t a = 0; a < set.size(); ++a) xb[static_cast<Index>(a)] = x[set[a]];
    Vector yb = blk.ldlt().solve(xb);
    for (std::size_t a = 0; a < set.size(); ++a) CHECK(y[set[a]] == doctest::Approx(yb[static_cast<Index>(a)]).epsilon(1e-10));
  }
}

TEST_CASE("block-diagonal matrix aligned with the partition is solved exactly") {
  // two decoupled tridiagonal blocks
  std::vector<Triplet> ts;
  for (Index i = 0; i < 10; ++i) ts.emplace_back(i, i, 2.5);
  for (Index i = 0; i + 1 < 5; ++i) {
    ts.emplace_back(i, i + 1, -1.0);
    ts.emplace_back(i + 1, i, -1.0);
  }
  for (Index i = 5; i + 1 < 10; ++i) {
    ts.emplace_back(i, i + 1, -1.0);
    ts.emplace_back(i + 1, i, -1.0);
  }
  SparseMat A = from_triplets(10, 10, ts);
  Partition part;
  part.p = 2;
  part.assign = {0, 0, 0, 0, 0, 1, 1, 1, 1, 1};
  RASPrecond P = build_ras(A, part, 1, 0.0, -1);
  Vector b = random_vector(10, 6);
  CHECK((spmv(A, apply_ras(P, b)) - b).norm() / b.norm() < 1e-12);
}

TEST_CASE("overlapping RAS is nonsymmetric") {
  SparseMat A = tridiag(8);
  Partition part = partition_graph(A, 2, 0);
  RASPrecond P = build_ras(A, part, 1, 0.0, -1);
  bool witness = false;
  for (int t = 0; t < 10 && !witness; ++t) {
    Vector x = random_vector(8, 20 + t);
    Vector y = random_vector(8, 40 + t);
    const double a = x.dot(apply_ras(P, y));
    const double b = y.dot(apply_ras(P, x));
    if (std::abs(a - b) > 1e-10 * x.norm() * y.norm()) witness = true;
  }
  CHECK(witness);
}

TEST_CASE("zero-overlap application is symmetric with exact local solves") {
  SparseMat A = random_spd(40, 0.1, 7);
  Partition part = partition_graph(A, 4, 0);
  RASPrecond P = build_ras(A, part, 0, 0.0, -1);
  for (int t = 0; t < 5; ++t) {
    Vector x = random_vector(40, 50 + t);
    Vector y = random_vector(40, 60 + t);
    CHECK(std::abs(x.dot(apply_ras(P, y)) - y.dot(apply_ras(P, x))) < 1e-11 * x.norm() * y.norm());
  }
}

TEST_CASE("RAS-preconditioned GMRES converges on a grid problem") {
  SparseMat A = gen_laplacian({32, 32}, 0.0);
  Partition part = partition_graph(A, 2, 0);
  RASPrecond P = build_ras(A, part, 1, 0.0, -1);
  Vector b = spmv(A, random_vector(static_cast<Index>(A.rows()), 8));
  auto [x, rep] = gmres(matrix_op(A),
                        {static_cast<Index>(A.rows()), [&P](const Vector& v) { return apply_ras(P, v); }}, b,
                        40, 1e-6, 200);
  CHECK(rep.converged);
  CHECK((spmv(A, x) - b).norm() / b.norm() < 1e-5);
}
