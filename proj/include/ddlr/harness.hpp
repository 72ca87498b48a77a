#pragma once

#include "ddlr/ddlr.hpp"
#include "ddlr/krylov.hpp"
#include "ddlr/ras.hpp"

#include <optional>
#include <string>

namespace ddlr {

/// Dirichlet 5-point (2-D) or 7-point (3-D) negative-Laplacian stencil with
/// sigma subtracted from the diagonal; SPD for sigma = 0.
SparseMat gen_laplacian(const std::vector<Index>& dims, double sigma);

enum class PrecKind { DDLR1, DDLR2, RAS, BlockJacobi, None };
enum class KrylovKind { CG, GMRES };
enum class MappingKind { Standard, Unbalanced };
enum class UkPlacement { SubdomainProcs, InterfaceProcs };

struct ExperimentConfig {
  std::string matrix_path;       // empty = use the generator
  std::vector<Index> gen_dims;   // 2 or 3 extents
  double sigma = 0.0;

  Index np = 1;
  PrecKind prec = PrecKind::DDLR1;
  Index rank = 8;
  double alpha = 1.0;
  ThetaMode theta_mode = ThetaMode::LambdaNext;
  double theta_fixed = 0.0;

  CSolveMode c_mode = CSolveMode::Direct;
  Index cheb_iters = 5;
  double ainv_droptol = 1e-3;
  Index ainv_maxnnz = 10;
  Index ainv_steps = 5;

  double droptol = 0.0;  // local factors (B blocks, RAS blocks)
  Index maxfill = -1;
  Index overlap = 1;  // RAS only

  KrylovKind krylov = KrylovKind::CG;
  bool force_krylov = false;  // keep the requested accelerator even when uncertified
  Index restart = 40;
  double tol = 1e-6;
  Index maxit = 500;

  std::uint64_t seed = 0;
  double lanczos_eps = 1e-4;
  Index lanczos_max_steps = -1;  // -1 = 5k

  bool verify = false;
  MappingKind mapping = MappingKind::Standard;
  Index q = 0;
  UkPlacement uk_placement = UkPlacement::SubdomainProcs;

  std::string report_format = "json";  // json | csv
  std::string out_path;

  std::string problem_label() const;
};

struct MappingCostReport {
  MappingKind mapping = MappingKind::Standard;
  Index q = 0;
  Index p2p_messages = 0;  // C_alpha-solve neighbor exchanges per application
  Index p2p_volume = 0;    // values moved per application
  Index allreduce = 0;     // inner-product reductions per application
  Index scatter_gather_pairs = 0;
  Index c_solves_per_apply = 0;
  Index c_ops_per_solve = 0;
};

/// Analytical communication tallies for one preconditioner application under
/// the chosen mapping of interface unknowns to processors.
MappingCostReport mapping_cost(const DistributedMatrix& dist, PrecKind prec, MappingKind mapping, Index q,
                               Index k, UkPlacement placement = UkPlacement::SubdomainProcs,
                               CSolveMode c_mode = CSolveMode::Direct, Index cheb_iters = 5);

struct ClaimResult {
  std::string name;
  bool pass = false;
  std::string detail;
};

struct SpectrumReport {
  std::vector<ClaimResult> claims;
  Index n = 0, s = 0, m = 0, k = 0;
  double alpha = 1.0;
  double theta = 0.0;
  double rho = 0.0;    // max eigenvalue of H - H^2
  double bound = 0.0;  // 1 + rho / (1 - theta)
  double eta_min = 0.0, eta_max = 0.0;
  Index mult_one = 0;
  double h_min = 0.0, h_max = 0.0;
  double max_ritz_err = 0.0;
  bool all_pass() const;
};

/// Desk-scale check of the spectral claims: dense H and dense A M^-1 spectra
/// with exact A_0 solves forced, one pass/fail entry per claim.
SpectrumReport verify_spectrum(const ExperimentConfig& cfg);

/// Eigenvalues (ascending) of A W for symmetric A and symmetric positive
/// semidefinite W, via the similar symmetric product W^1/2 A W^1/2.
Vector spd_product_spectrum(const Matrix& A, const Matrix& W);

struct ExperimentResult {
  ExperimentConfig cfg;
  Index n = 0, nnz = 0, s = 0;
  SolveReport report;
  double final_relres = 0.0;
  std::string krylov_used;
  bool spd_certified = true;
  std::optional<MappingCostReport> comm;
  std::optional<SpectrumReport> spectrum;
};

/// Full pipeline: generate/load, partition, build, solve, report.
/// Errors carry a [stage] tag in the exception message.
ExperimentResult run_experiment(const ExperimentConfig& cfg);

std::string to_json(const ExperimentResult& res);
std::string to_csv(const ExperimentResult& res);

}  // namespace ddlr
