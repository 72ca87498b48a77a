#include "ddlr/harness.hpp"

#include "ddlr/dense_eigs.hpp"
#include "ddlr/mmio.hpp"

#include <json.hpp>

#include <Eigen/Eigenvalues>

#include <chrono>
#include <cmath>
#include <fstream>
#include <random>
#include <set>
#include <sstream>
#include <stdexcept>

namespace ddlr {

namespace {

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point t0) {
  return std::chrono::duration<double>(Clock::now() - t0).count();
}

[[noreturn]] void stage_error(const std::string& stage, const std::string& msg) {
  throw std::runtime_error("[" + stage + "] " + msg);
}

std::string prec_name(PrecKind p) {
  switch (p) {
    case PrecKind::DDLR1: return "ddlr1";
    case PrecKind::DDLR2: return "ddlr2";
    case PrecKind::RAS: return "ras";
    case PrecKind::BlockJacobi: return "bj";
    case PrecKind::None: return "none";
  }
  return "?";
}

std::string cmode_name(CSolveMode m) {
  switch (m) {
    case CSolveMode::Direct: return "direct";
    case CSolveMode::Chebyshev: return "cheb";
    case CSolveMode::Ainv: return "ainv";
  }
  return "?";
}

std::string theta_name(ThetaMode m) {
  switch (m) {
    case ThetaMode::Zero: return "zero";
    case ThetaMode::LambdaNext: return "next";
    case ThetaMode::Fixed: return "fixed";
  }
  return "?";
}

Vector seeded_vector(Index n, std::uint64_t seed) {
  std::mt19937_64 rng(seed + 1);
  std::uniform_real_distribution<double> dist(0.0, 1.0);
  Vector e(n);
  for (Index i = 0; i < n; ++i) e[i] = dist(rng);
  return e;
}

Matrix dense_from_apply(Index n, const std::function<Vector(const Vector&)>& apply) {
  Matrix W(n, n);
  Vector e = Vector::Zero(n);
  for (Index j = 0; j < n; ++j) {
    e[j] = 1.0;
    W.col(j) = apply(e);
    e[j] = 0.0;
  }
  return W;
}

}  // namespace

SparseMat gen_laplacian(const std::vector<Index>& dims, double sigma) {
  if (dims.size() != 2 && dims.size() != 3) throw std::invalid_argument("gen_laplacian: need 2 or 3 extents");
  for (Index d : dims)
    if (d < 1) throw std::invalid_argument("gen_laplacian: extents must be positive");
  const Index nx = dims[0];
  const Index ny = dims[1];
  const Index nz = dims.size() == 3 ? dims[2] : 1;
  const double diag = (dims.size() == 3 ? 6.0 : 4.0) - sigma;
  const Index n = nx * ny * nz;
  auto idx = [nx, ny](Index x, Index y, Index z) { return x + nx * (y + ny * z); };

  std::vector<Triplet> ts;
  ts.reserve(static_cast<std::size_t>(7 * n));
  for (Index z = 0; z < nz; ++z)
    for (Index y = 0; y < ny; ++y)
      for (Index x = 0; x < nx; ++x) {
        const Index v = idx(x, y, z);
        ts.emplace_back(v, v, diag);
        if (x > 0) ts.emplace_back(v, idx(x - 1, y, z), -1.0);
        if (x + 1 < nx) ts.emplace_back(v, idx(x + 1, y, z), -1.0);
        if (y > 0) ts.emplace_back(v, idx(x, y - 1, z), -1.0);
        if (y + 1 < ny) ts.emplace_back(v, idx(x, y + 1, z), -1.0);
        if (z > 0) ts.emplace_back(v, idx(x, y, z - 1), -1.0);
        if (z + 1 < nz) ts.emplace_back(v, idx(x, y, z + 1), -1.0);
      }
  return from_triplets(n, n, ts);
}

std::string ExperimentConfig::problem_label() const {
  if (!matrix_path.empty()) {
    const auto slash = matrix_path.find_last_of('/');
    return slash == std::string::npos ? matrix_path : matrix_path.substr(slash + 1);
  }
  std::ostringstream os;
  os << (gen_dims.size() == 3 ? "lap3d:" : "lap2d:");
  for (std::size_t i = 0; i < gen_dims.size(); ++i) os << (i ? "," : "") << gen_dims[i];
  return os.str();
}

MappingCostReport mapping_cost(const DistributedMatrix& dist, PrecKind prec, MappingKind mapping, Index q,
                               Index k, UkPlacement placement, CSolveMode c_mode, Index cheb_iters) {
  if (q < 0) throw std::invalid_argument("mapping_cost: q must be >= 0");
  if (q > dist.p) throw std::invalid_argument("mapping_cost: q exceeds the processor count");
  if (mapping == MappingKind::Unbalanced && q < 1)
    throw std::invalid_argument("mapping_cost: unbalanced mapping needs q >= 1");

  MappingCostReport rep;
  rep.mapping = mapping;
  rep.q = mapping == MappingKind::Unbalanced ? q : 0;
  if (dist.p <= 1) return rep;  // single processor: nothing moves

  const bool lowrank = prec == PrecKind::DDLR1 || prec == PrecKind::DDLR2;
  if (!lowrank) return rep;

  rep.c_solves_per_apply = prec == PrecKind::DDLR1 ? 2 : 1;
  rep.c_ops_per_solve = c_mode == CSolveMode::Chebyshev ? cheb_iters : 1;

  std::vector<Index> owner(static_cast<std::size_t>(dist.s));
  if (mapping == MappingKind::Standard) {
    owner = dist.y_owner;
  } else {
    for (Index t = 0; t < dist.s; ++t)
      owner[static_cast<std::size_t>(t)] = static_cast<Index>((static_cast<long long>(t) * q) / std::max<Index>(dist.s, 1));
  }

  std::set<std::pair<Index, Index>> pairs;
  std::set<std::pair<std::pair<Index, Index>, Index>> volume;
  for (Index r = 0; r < dist.Cglob.outerSize(); ++r)
    for (SparseMat::InnerIterator it(dist.Cglob, r); it; ++it) {
      const Index a = owner[static_cast<std::size_t>(it.col())];
      const Index b = owner[static_cast<std::size_t>(r)];
      if (a == b) continue;
      pairs.emplace(a, b);
      volume.emplace(std::make_pair(a, b), it.col());
    }
  const Index per_op_msgs = static_cast<Index>(pairs.size());
  const Index per_op_vol = static_cast<Index>(volume.size());
  rep.p2p_messages = per_op_msgs * rep.c_ops_per_solve * rep.c_solves_per_apply;
  rep.p2p_volume = per_op_vol * rep.c_ops_per_solve * rep.c_solves_per_apply;

  if (k > 0) {
    rep.allreduce = 1;
    if (prec == PrecKind::DDLR1 && mapping == MappingKind::Unbalanced &&
        placement == UkPlacement::InterfaceProcs && q == 1)
      rep.allreduce = 0;  // the low-rank correction is entirely local then
  }

  if (mapping == MappingKind::Unbalanced) {
    if (prec == PrecKind::DDLR1)
      rep.scatter_gather_pairs = placement == UkPlacement::InterfaceProcs ? 2 : 1;
    else
      rep.scatter_gather_pairs = 1;
  }
  return rep;
}

bool SpectrumReport::all_pass() const {
  for (const auto& c : claims)
    if (!c.pass) return false;
  return true;
}

Vector spd_product_spectrum(const Matrix& A, const Matrix& W) {
  DenseSpectrum ws = dense_eigs_sym(0.5 * (W + W.transpose()), true);
  Vector sq = ws.values.cwiseMax(0.0).cwiseSqrt();
  Matrix Whalf = ws.vectors * sq.asDiagonal() * ws.vectors.transpose();
  Matrix S = Whalf * A * Whalf;
  return dense_eigs_sym(0.5 * (S + S.transpose())).values;
}

namespace {

SparseMat load_problem(const ExperimentConfig& cfg) {
  if (!cfg.matrix_path.empty()) {
    try {
      return mm_read(cfg.matrix_path);
    } catch (const std::exception& e) {
      stage_error("load", e.what());
    }
  }
  try {
    return gen_laplacian(cfg.gen_dims, cfg.sigma);
  } catch (const std::exception& e) {
    stage_error("generate", e.what());
  }
}

struct BuiltPrec {
  std::optional<A0Operator> a0;
  std::optional<DDLR1> p1;
  std::optional<DDLR2> p2;
  std::optional<RASPrecond> ras;
  LinearOperator M;
  Index fill_nnz = 0;
  bool spd_certified = true;
  bool permuted_space = false;
};

// Builds in place: the preconditioner objects hold pointers into `out`, so
// `out` must already live in its final storage.
void build_preconditioner(const ExperimentConfig& cfg, const SparseMat& A, const DistributedMatrix& dist,
                          BuiltPrec& out) {
  const Index n = static_cast<Index>(A.rows());
  switch (cfg.prec) {
    case PrecKind::DDLR1:
    case PrecKind::DDLR2: {
      A0Options a0opt;
      a0opt.alpha = cfg.alpha;
      a0opt.droptol = cfg.droptol;
      a0opt.maxfill = cfg.maxfill;
      a0opt.c_mode = cfg.c_mode;
      a0opt.cheb_iters = cfg.cheb_iters;
      a0opt.ainv_droptol = cfg.ainv_droptol;
      a0opt.ainv_maxnnz = cfg.ainv_maxnnz;
      a0opt.ainv_steps = cfg.ainv_steps;
      out.a0.emplace(build_a0(dist, a0opt));
      LanczosOptions lopt;
      lopt.eps = cfg.lanczos_eps;
      lopt.max_steps = cfg.lanczos_max_steps;
      lopt.seed = cfg.seed;
      if (cfg.prec == PrecKind::DDLR1) {
        DDLR1Options opt;
        opt.k = cfg.rank;
        opt.theta_mode = cfg.theta_mode;
        opt.theta_fixed = cfg.theta_fixed;
        opt.lanczos = lopt;
        out.p1.emplace(build_ddlr1(*out.a0, opt));
        out.spd_certified = out.p1->spd_certified;
        out.fill_nnz = out.a0->fill_nnz + dist.s * out.p1->rank() + out.p1->rank();
        const DDLR1* P = &*out.p1;
        out.M = {n, [P](const Vector& v) { return apply_ddlr1(*P, v); }};
      } else {
        DDLR2Options opt;
        opt.k = cfg.rank;
        opt.lanczos = lopt;
        out.p2.emplace(build_ddlr2(*out.a0, opt));
        out.spd_certified = out.p2->spd_certified;
        const Index k = static_cast<Index>(out.p2->U.cols());
        out.fill_nnz = out.a0->fill_nnz + n * k + k * k;
        const DDLR2* P = &*out.p2;
        out.M = {n, [P](const Vector& v) { return apply_ddlr2(*P, v); }};
      }
      out.permuted_space = true;
      break;
    }
    case PrecKind::RAS:
    case PrecKind::BlockJacobi: {
      const Index overlap = cfg.prec == PrecKind::BlockJacobi ? 0 : cfg.overlap;
      out.ras.emplace(build_ras(A, dist.part, overlap, cfg.droptol, cfg.maxfill));
      out.fill_nnz = out.ras->fill_nnz;
      out.spd_certified = overlap == 0;  // the restricted variant loses symmetry with overlap
      const RASPrecond* P = &*out.ras;
      out.M = {n, [P](const Vector& v) { return apply_ras(*P, v); }};
      break;
    }
    case PrecKind::None:
      out.M = identity_op(n);
      break;
  }
}

}  // namespace

ExperimentResult run_experiment(const ExperimentConfig& cfg) {
  ExperimentResult res;
  res.cfg = cfg;

  SparseMat A = load_problem(cfg);
  res.n = static_cast<Index>(A.rows());
  res.nnz = static_cast<Index>(A.nonZeros());

  const auto t_build = Clock::now();
  Partition part;
  try {
    part = partition_graph(A, cfg.np, cfg.seed);
  } catch (const std::exception& e) {
    stage_error("partition", e.what());
  }
  DistributedMatrix dist;
  try {
    dist = build_distributed(A, part);
  } catch (const std::exception& e) {
    stage_error("distribute", e.what());
  }
  res.s = dist.s;

  BuiltPrec prec;
  try {
    build_preconditioner(cfg, A, dist, prec);
  } catch (const std::exception& e) {
    stage_error("build", e.what());
  }
  res.report.build_time = seconds_since(t_build);
  res.spd_certified = prec.spd_certified;
  res.report.fill_ratio = res.nnz > 0 ? static_cast<double>(prec.fill_nnz) / static_cast<double>(res.nnz) : 0.0;

  // right-hand side b = A e with a seeded random e
  Vector b = A * seeded_vector(res.n, cfg.seed);

  KrylovKind kk = cfg.krylov;
  if (kk == KrylovKind::CG && !prec.spd_certified && !cfg.force_krylov) kk = KrylovKind::GMRES;
  res.krylov_used = kk == KrylovKind::CG ? "cg" : "gmres";

  LinearOperator Aop = prec.permuted_space ? matrix_op(dist.Aperm) : matrix_op(A);
  Vector rhs = prec.permuted_space ? permute_vector(dist, b, PermDir::Forward) : b;

  const auto t_solve = Clock::now();
  std::pair<Vector, SolveReport> sol;
  try {
    if (kk == KrylovKind::CG)
      sol = pcg(Aop, prec.M, rhs, cfg.tol, cfg.maxit);
    else
      sol = gmres(Aop, prec.M, rhs, cfg.restart, cfg.tol, cfg.maxit);
  } catch (const std::exception& e) {
    stage_error("solve", e.what());
  }
  const double solve_time = seconds_since(t_solve);

  res.report.iterations = sol.second.iterations;
  res.report.converged = sol.second.converged;
  res.report.residual_history = std::move(sol.second.residual_history);
  res.report.apply_time = solve_time;
  res.final_relres = res.report.residual_history.empty()
                         ? 0.0
                         : res.report.residual_history.back() / std::max(res.report.residual_history.front(), 1e-300);

  if (cfg.prec == PrecKind::DDLR1 || cfg.prec == PrecKind::DDLR2) {
    MappingCostReport comm = mapping_cost(dist, cfg.prec, cfg.mapping, cfg.q, cfg.rank, cfg.uk_placement,
                                          cfg.c_mode, cfg.cheb_iters);
    res.report.comm_tallies["p2p_messages"] = comm.p2p_messages;
    res.report.comm_tallies["p2p_volume"] = comm.p2p_volume;
    res.report.comm_tallies["allreduce"] = comm.allreduce;
    res.report.comm_tallies["scatter_gather_pairs"] = comm.scatter_gather_pairs;
    res.comm = comm;
  }

  if (cfg.verify) {
    try {
      res.spectrum = verify_spectrum(cfg);
    } catch (const std::exception& e) {
      stage_error("verify", e.what());
    }
  }
  return res;
}

SpectrumReport verify_spectrum(const ExperimentConfig& cfg) {
  SparseMat A = load_problem(cfg);
  const Index n = static_cast<Index>(A.rows());
  if (n > 2000) throw std::invalid_argument("verify_spectrum: order exceeds the 2000 cap");
  if (cfg.prec != PrecKind::DDLR1 && cfg.prec != PrecKind::DDLR2)
    throw std::invalid_argument("verify_spectrum: only the low-rank preconditioners have spectral claims");

  Partition part = partition_graph(A, cfg.np, cfg.seed);
  DistributedMatrix dist = build_distributed(A, part);
  const Index s = dist.s;
  const Index m = dist.m;

  A0Options a0opt;  // exact solves forced
  a0opt.alpha = cfg.alpha;
  a0opt.droptol = 0.0;
  a0opt.maxfill = -1;
  a0opt.c_mode = CSolveMode::Direct;
  A0Operator a0 = build_a0(dist, a0opt);

  SpectrumReport rep;
  rep.n = n;
  rep.s = s;
  rep.m = m;
  rep.alpha = cfg.alpha;

  // dense H = E^T A_0^-1 E and its spectrum
  LinearOperator Hop = h_operator(a0);
  Matrix Hd = dense_from_apply(s, Hop.apply);
  Hd = 0.5 * (Hd + Hd.transpose()).eval();
  DenseSpectrum hs = dense_eigs_sym(Hd);
  rep.h_min = s > 0 ? hs.values(0) : 0.0;
  rep.h_max = s > 0 ? hs.values(s - 1) : 0.0;
  rep.rho = 0.0;
  for (Index i = 0; i < s; ++i) rep.rho = std::max(rep.rho, hs.values(i) - hs.values(i) * hs.values(i));
  rep.claims.push_back({"h-eigenvalues-in-[0,1)", s == 0 || (rep.h_min >= 0.0 && rep.h_max <= 1.0 - 1e-10),
                        "min " + std::to_string(rep.h_min) + " max " + std::to_string(rep.h_max)});

  LanczosOptions lopt;
  lopt.eps = 0.0;  // run to the step cap so the Ritz pairs are fully resolved
  lopt.max_steps = s;
  lopt.seed = cfg.seed;

  std::function<Vector(const Vector&)> Minv;
  bool theta_is_zero = false;
  std::optional<DDLR1> p1;
  std::optional<DDLR2> p2;
  if (cfg.prec == PrecKind::DDLR1) {
    DDLR1Options opt;
    opt.k = cfg.rank;
    opt.theta_mode = cfg.theta_mode;
    opt.theta_fixed = cfg.theta_fixed;
    opt.lanczos = lopt;
    if (cfg.theta_mode == ThetaMode::LambdaNext && cfg.rank < s) {
      // the claims are stated for theta = lambda_{k+1} exactly; take it from
      // the dense oracle, and let the Ritz-match claim judge the estimate
      opt.theta_mode = ThetaMode::Fixed;
      opt.theta_fixed = hs.values(s - 1 - cfg.rank);
    }
    p1.emplace(build_ddlr1(a0, opt));
    rep.k = p1->rank();
    rep.theta = p1->theta;
    theta_is_zero = cfg.theta_mode == ThetaMode::Zero;
    const DDLR1* P = &*p1;
    Minv = [P](const Vector& v) { return apply_ddlr1(*P, v); };
    rep.max_ritz_err = 0.0;
    for (Index j = 0; j < rep.k; ++j)
      rep.max_ritz_err = std::max(rep.max_ritz_err, std::abs(p1->lambda[j] - hs.values(s - 1 - j)));
    rep.claims.push_back({"ritz-matches-dense", rep.max_ritz_err < 1e-6,
                          "max deviation " + std::to_string(rep.max_ritz_err)});
  } else {
    DDLR2Options opt;
    opt.k = cfg.rank;
    opt.lanczos = lopt;
    p2.emplace(build_ddlr2(a0, opt));
    rep.k = static_cast<Index>(p2->U.cols());
    const DDLR2* P = &*p2;
    Minv = [P](const Vector& v) { return apply_ddlr2(*P, v); };
  }

  // dense A M^-1 spectrum through the symmetric similarity W^1/2 A W^1/2
  Matrix W = dense_from_apply(n, Minv);
  Vector etas = spd_product_spectrum(Matrix(dist.Aperm), W);
  rep.eta_min = etas(0);
  rep.eta_max = etas(n - 1);
  rep.mult_one = 0;
  for (Index i = 0; i < n; ++i)
    if (std::abs(etas(i) - 1.0) <= 1e-8) ++rep.mult_one;

  if (cfg.prec == PrecKind::DDLR1 && !theta_is_zero) {
    rep.bound = 1.0 + rep.rho / (1.0 - rep.theta);
    rep.claims.push_back({"rho-at-most-quarter", rep.rho <= 0.25 + 1e-12, "rho " + std::to_string(rep.rho)});
    rep.claims.push_back({"preconditioned-eigenvalues-lower", rep.eta_min >= 1.0 - 1e-8,
                          "min " + std::to_string(rep.eta_min)});
    rep.claims.push_back({"preconditioned-eigenvalues-upper", rep.eta_max <= rep.bound + 1e-6,
                          "max " + std::to_string(rep.eta_max) + " bound " + std::to_string(rep.bound)});
  } else if (cfg.prec == PrecKind::DDLR1) {
    bool interval_ok = rep.eta_min > 1e-12;
    for (Index i = 0; i < n; ++i) {
      const double eta = etas(i);
      if (std::abs(eta - 1.0) > 1e-8 && eta >= 1.0) interval_ok = false;
    }
    rep.claims.push_back({"unit-eigenvalue-multiplicity", rep.mult_one == m + rep.k,
                          "count " + std::to_string(rep.mult_one) + " expected " + std::to_string(m + rep.k)});
    rep.claims.push_back({"remaining-eigenvalues-in-(0,1)", interval_ok,
                          "min " + std::to_string(rep.eta_min)});
  } else {
    rep.claims.push_back({"eigenvalues-in-(0,1]",
                          rep.eta_min > 1e-12 && rep.eta_max <= 1.0 + 1e-8,
                          "min " + std::to_string(rep.eta_min) + " max " + std::to_string(rep.eta_max)});
    rep.claims.push_back({"unit-eigenvalue-multiplicity",
                          rep.mult_one >= n - s + rep.k,
                          "count " + std::to_string(rep.mult_one) + " needs >= " + std::to_string(n - s + rep.k)});
  }
  return rep;
}

namespace {

nlohmann::ordered_json config_json(const ExperimentConfig& cfg) {
  nlohmann::ordered_json j;
  j["problem"] = cfg.problem_label();
  j["matrix_path"] = cfg.matrix_path;
  j["gen_dims"] = cfg.gen_dims;
  j["sigma"] = cfg.sigma;
  j["np"] = cfg.np;
  j["prec"] = prec_name(cfg.prec);
  j["rank"] = cfg.rank;
  j["alpha"] = cfg.alpha;
  j["theta_mode"] = theta_name(cfg.theta_mode);
  j["theta_fixed"] = cfg.theta_fixed;
  j["csolve"] = cmode_name(cfg.c_mode);
  j["cheb_iters"] = cfg.cheb_iters;
  j["ainv_droptol"] = cfg.ainv_droptol;
  j["ainv_maxnnz"] = cfg.ainv_maxnnz;
  j["ainv_steps"] = cfg.ainv_steps;
  j["droptol"] = cfg.droptol;
  j["maxfill"] = cfg.maxfill;
  j["overlap"] = cfg.overlap;
  j["krylov"] = cfg.krylov == KrylovKind::CG ? "cg" : "gmres";
  j["restart"] = cfg.restart;
  j["tol"] = cfg.tol;
  j["maxit"] = cfg.maxit;
  j["seed"] = cfg.seed;
  j["mapping"] = cfg.mapping == MappingKind::Standard ? "standard" : "unbalanced";
  j["q"] = cfg.q;
  return j;
}

}  // namespace

std::string to_json(const ExperimentResult& res) {
  nlohmann::ordered_json j;
  j["config"] = config_json(res.cfg);
  j["n"] = res.n;
  j["nnz"] = res.nnz;
  j["interface_size"] = res.s;

  nlohmann::ordered_json r;
  r["krylov_used"] = res.krylov_used;
  r["spd_certified"] = res.spd_certified;
  r["iterations"] = res.report.iterations;
  r["converged"] = res.report.converged;
  r["final_relres"] = res.final_relres;
  r["fill_ratio"] = res.report.fill_ratio;
  r["build_time_s"] = res.report.build_time;
  r["solve_time_s"] = res.report.apply_time;
  r["residual_history"] = res.report.residual_history;
  j["result"] = r;

  if (res.comm) {
    nlohmann::ordered_json c;
    c["mapping"] = res.comm->mapping == MappingKind::Standard ? "standard" : "unbalanced";
    c["q"] = res.comm->q;
    c["p2p_messages"] = res.comm->p2p_messages;
    c["p2p_volume"] = res.comm->p2p_volume;
    c["allreduce"] = res.comm->allreduce;
    c["scatter_gather_pairs"] = res.comm->scatter_gather_pairs;
    c["c_solves_per_apply"] = res.comm->c_solves_per_apply;
    c["c_ops_per_solve"] = res.comm->c_ops_per_solve;
    j["comm"] = c;
  }

  if (res.spectrum) {
    nlohmann::ordered_json sp;
    sp["k"] = res.spectrum->k;
    sp["theta"] = res.spectrum->theta;
    sp["rho"] = res.spectrum->rho;
    sp["bound"] = res.spectrum->bound;
    sp["eta_min"] = res.spectrum->eta_min;
    sp["eta_max"] = res.spectrum->eta_max;
    sp["mult_one"] = res.spectrum->mult_one;
    sp["h_min"] = res.spectrum->h_min;
    sp["h_max"] = res.spectrum->h_max;
    nlohmann::ordered_json cl = nlohmann::ordered_json::array();
    for (const auto& c : res.spectrum->claims) {
      nlohmann::ordered_json e;
      e["name"] = c.name;
      e["pass"] = c.pass;
      e["detail"] = c.detail;
      cl.push_back(e);
    }
    sp["claims"] = cl;
    j["spectrum"] = sp;
  }
  return j.dump(2) + "\n";
}

std::string to_csv(const ExperimentResult& res) {
  std::ostringstream os;
  os << "problem,np,prec,rk,nz,its,p-t,i-t\n";
  os << res.cfg.problem_label() << "," << res.cfg.np << "," << prec_name(res.cfg.prec) << ","
     << res.cfg.rank << ",";
  os.precision(3);
  os << std::fixed << res.report.fill_ratio << ",";
  if (res.report.converged)
    os << res.report.iterations;
  else
    os << "F";
  os.unsetf(std::ios_base::floatfield);
  os.precision(4);
  os << "," << res.report.build_time << "," << res.report.apply_time << "\n";
  return os.str();
}

}  // namespace ddlr
