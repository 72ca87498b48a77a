#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "ddlr/harness.hpp"
#include "ddlr/mmio.hpp"
#include "support.hpp"

#include <json.hpp>

#include <cstdio>
#include <fstream>

using namespace ddlr;
using namespace ddlr::testing;

TEST_CASE("gen_laplacian stencils") {
  SUBCASE("degenerate 1x1 grid") {
    SparseMat A = gen_laplacian({1, 1}, 0.0);
    CHECK(A.rows() == 1);
    CHECK(A.coeff(0, 0) == 4.0);
  }
  SUBCASE("3x3 grid center row") {
    SparseMat A = gen_laplacian({3, 3}, 0.0);
    CHECK(A.rows() == 9);
    CHECK(A.coeff(4, 4) == 4.0);
    for (Index nb : {1, 3, 5, 7}) CHECK(A.coeff(4, nb) == -1.0);
  }
  SUBCASE("30x30 grid matches the reference size") {
    SparseMat A = gen_laplacian({30, 30}, 0.0);
    CHECK(A.rows() == 900);
    CHECK(pattern_is_symmetric(A));
  }
  SUBCASE("3-D stencil diagonal") {
    SparseMat A = gen_laplacian({2, 2, 2}, 0.0);
    CHECK(A.rows() == 8);
    CHECK(A.coeff(0, 0) == 6.0);
  }
  SUBCASE("sigma shifts the diagonal") {
    SparseMat A = gen_laplacian({3, 3}, 0.25);
    CHECK(A.coeff(4, 4) == 3.75);
  }
  SUBCASE("unshifted operator is diagonally dominant hence SPD") {
    SparseMat A = gen_laplacian({8, 8}, 0.0);
    bool strict_somewhere = false;
    for (Index r = 0; r < A.outerSize(); ++r) {
      double diag = 0.0, off = 0.0;
      for (SparseMat::InnerIterator it(A, r); it; ++it)
        (it.col() == r ? diag : off) += std::abs(it.value());
      CHECK(diag >= off);
      if (diag > off) strict_somewhere = true;
    }
    CHECK(strict_somewhere);
  }
}

TEST_CASE("run_experiment on the identity matrix converges immediately") {
  const std::string path = std::string(std::tmpnam(nullptr)) + ".mtx";
  {
    std::ofstream out(path);
    out << "%%MatrixMarket matrix coordinate real symmetric\n3 3 3\n1 1 1.0\n2 2 1.0\n3 3 1.0\n";
  }
  ExperimentConfig cfg;
  cfg.matrix_path = path;
  cfg.np = 1;
  cfg.prec = PrecKind::DDLR1;
  cfg.rank = 0;
  ExperimentResult res = run_experiment(cfg);
  std::remove(path.c_str());
  CHECK(res.report.converged);
  CHECK(res.report.iterations == 1);
  CHECK(res.krylov_used == "cg");
}

TEST_CASE("run_experiment full pipeline on a grid") {
  ExperimentConfig cfg;
  cfg.gen_dims = {24, 24};
  cfg.np = 3;
  cfg.prec = PrecKind::DDLR1;
  cfg.rank = 6;
  ExperimentResult res = run_experiment(cfg);
  CHECK(res.report.converged);
  CHECK(res.spd_certified);
  CHECK(res.report.fill_ratio > 0.0);
  CHECK(res.n == 576);
  CHECK(res.comm.has_value());

  const std::string csv = to_csv(res);
  CHECK(csv.find("lap2d:24,24") != std::string::npos);
  CHECK(csv.find("ddlr1") != std::string::npos);

  // the CSV prints F for non-convergence
  ExperimentConfig hard = cfg;
  hard.maxit = 1;
  hard.tol = 1e-14;
  ExperimentResult bad = run_experiment(hard);
  CHECK_FALSE(bad.report.converged);
  CHECK(to_csv(bad).find(",F,") != std::string::npos);
}

TEST_CASE("run_experiment falls back to gmres when certification fails") {
  ExperimentConfig cfg;
  cfg.gen_dims = {16, 16};
  cfg.sigma = 0.08;  // indefinite shift
  cfg.np = 2;
  cfg.prec = PrecKind::DDLR1;
  cfg.rank = 12;
  cfg.krylov = KrylovKind::CG;
  ExperimentResult res = run_experiment(cfg);
  CHECK_FALSE(res.spd_certified);
  CHECK(res.krylov_used == "gmres");
  CHECK(res.report.converged);
}

TEST_CASE("run_experiment stage errors are tagged") {
  ExperimentConfig cfg;
  cfg.matrix_path = "/nonexistent/file.mtx";
  CHECK_THROWS_WITH_AS(run_experiment(cfg), doctest::Contains("[load]"), std::runtime_error);

  ExperimentConfig bad;
  bad.gen_dims = {4, 4};
  bad.np = 99;
  CHECK_THROWS_WITH_AS(run_experiment(bad), doctest::Contains("[partition]"), std::runtime_error);
}

TEST_CASE("determinism of reports modulo timing fields") {
  ExperimentConfig cfg;
  cfg.gen_dims = {20, 20};
  cfg.np = 4;
  cfg.prec = PrecKind::DDLR2;
  cfg.rank = 5;
  cfg.seed = 9;
  ExperimentResult a = run_experiment(cfg);
  ExperimentResult b = run_experiment(cfg);
  auto ja = nlohmann::ordered_json::parse(to_json(a));
  auto jb = nlohmann::ordered_json::parse(to_json(b));
  for (auto* j : {&ja, &jb}) {
    (*j)["result"].erase("build_time_s");
    (*j)["result"].erase("solve_time_s");
  }
  CHECK(ja.dump() == jb.dump());
}

TEST_CASE("mapping_cost") {
  SparseMat A = gen_laplacian({20, 20}, 0.0);
  Partition part = partition_graph(A, 4, 0);
  DistributedMatrix dist = build_distributed(A, part);

  SUBCASE("single processor moves nothing") {
    Partition p1 = partition_graph(A, 1, 0);
    DistributedMatrix d1 = build_distributed(A, p1);
    MappingCostReport r = mapping_cost(d1, PrecKind::DDLR1, MappingKind::Standard, 0, 8);
    CHECK(r.p2p_messages == 0);
    CHECK(r.allreduce == 0);
    CHECK(r.scatter_gather_pairs == 0);
  }
  SUBCASE("standard mapping has no scatter/gather and one reduction") {
    MappingCostReport r = mapping_cost(dist, PrecKind::DDLR2, MappingKind::Standard, 0, 8);
    CHECK(r.scatter_gather_pairs == 0);
    CHECK(r.allreduce == 1);
    CHECK(r.p2p_messages > 0);
  }
  SUBCASE("unbalanced q=1 with distributed U_k") {
    MappingCostReport r = mapping_cost(dist, PrecKind::DDLR1, MappingKind::Unbalanced, 1, 8,
                                       UkPlacement::SubdomainProcs);
    CHECK(r.p2p_messages == 0);
    CHECK(r.scatter_gather_pairs == 1);
  }
  SUBCASE("unbalanced with U_k on the interface processors") {
    MappingCostReport r = mapping_cost(dist, PrecKind::DDLR1, MappingKind::Unbalanced, 1, 8,
                                       UkPlacement::InterfaceProcs);
    CHECK(r.scatter_gather_pairs == 2);
    CHECK(r.allreduce == 0);
  }
  SUBCASE("chebyshev inner iterations scale the exchanges") {
    MappingCostReport direct = mapping_cost(dist, PrecKind::DDLR1, MappingKind::Standard, 0, 8,
                                            UkPlacement::SubdomainProcs, CSolveMode::Direct, 5);
    MappingCostReport cheb = mapping_cost(dist, PrecKind::DDLR1, MappingKind::Standard, 0, 8,
                                          UkPlacement::SubdomainProcs, CSolveMode::Chebyshev, 5);
    CHECK(cheb.p2p_messages == 5 * direct.p2p_messages);
  }
  SUBCASE("q beyond p is rejected") {
    CHECK_THROWS_AS(mapping_cost(dist, PrecKind::DDLR1, MappingKind::Unbalanced, 5, 8), std::invalid_argument);
  }
}

TEST_CASE("verify_spectrum smoke on a small grid") {
  ExperimentConfig cfg;
  cfg.gen_dims = {12, 12};
  cfg.np = 2;
  cfg.prec = PrecKind::DDLR1;
  cfg.rank = 3;
  SpectrumReport rep = verify_spectrum(cfg);
  CHECK(rep.all_pass());
  CHECK(rep.rho <= 0.25 + 1e-12);

  cfg.prec = PrecKind::DDLR2;
  SpectrumReport rep2 = verify_spectrum(cfg);
  CHECK(rep2.all_pass());
}

TEST_CASE("verify_spectrum enforces the size cap") {
  ExperimentConfig cfg;
  cfg.gen_dims = {50, 50};  // 2500 > 2000
  cfg.np = 2;
  CHECK_THROWS_AS(verify_spectrum(cfg), std::invalid_argument);
}

TEST_CASE("json report carries the full config echo") {
  ExperimentConfig cfg;
  cfg.gen_dims = {10, 10};
  cfg.np = 2;
  cfg.prec = PrecKind::RAS;
  cfg.krylov = KrylovKind::GMRES;
  ExperimentResult res = run_experiment(cfg);
  auto j = nlohmann::ordered_json::parse(to_json(res));
  CHECK(j["config"]["prec"] == "ras");
  CHECK(j["config"]["np"] == 2);
  CHECK(j["result"].contains("iterations"));
  CHECK(j["result"].contains("residual_history"));
}
