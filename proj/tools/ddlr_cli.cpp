#include "ddlr/harness.hpp"

#include <CLI11.hpp>

#include <fstream>
#include <iostream>

namespace {

using ddlr::ExperimentConfig;
using ddlr::Index;

bool parse_gen(const std::string& spec, ExperimentConfig& cfg) {
  std::string dims;
  if (spec.rfind("lap2d:", 0) == 0)
    dims = spec.substr(6);
  else if (spec.rfind("lap3d:", 0) == 0)
    dims = spec.substr(6);
  else
    return false;
  cfg.gen_dims.clear();
  std::size_t pos = 0;
  while (pos <= dims.size()) {
    const std::size_t comma = dims.find(',', pos);
    const std::string tok = dims.substr(pos, comma == std::string::npos ? std::string::npos : comma - pos);
    if (tok.empty()) return false;
    cfg.gen_dims.push_back(static_cast<Index>(std::stol(tok)));
    if (comma == std::string::npos) break;
    pos = comma + 1;
  }
  const std::size_t want = spec.rfind("lap3d:", 0) == 0 ? 3 : 2;
  return cfg.gen_dims.size() == want;
}

bool parse_csolve(const std::string& spec, ExperimentConfig& cfg) {
  if (spec == "direct") {
    cfg.c_mode = ddlr::CSolveMode::Direct;
    return true;
  }
  if (spec.rfind("cheb:", 0) == 0) {
    cfg.c_mode = ddlr::CSolveMode::Chebyshev;
    cfg.cheb_iters = static_cast<Index>(std::stol(spec.substr(5)));
    return cfg.cheb_iters > 0;
  }
  if (spec.rfind("ainv:", 0) == 0) {
    cfg.c_mode = ddlr::CSolveMode::Ainv;
    const std::string rest = spec.substr(5);
    const std::size_t c1 = rest.find(',');
    const std::size_t c2 = rest.find(',', c1 + 1);
    if (c1 == std::string::npos || c2 == std::string::npos) return false;
    cfg.ainv_droptol = std::stod(rest.substr(0, c1));
    cfg.ainv_maxnnz = static_cast<Index>(std::stol(rest.substr(c1 + 1, c2 - c1 - 1)));
    cfg.ainv_steps = static_cast<Index>(std::stol(rest.substr(c2 + 1)));
    return true;
  }
  return false;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Domain-decomposition low-rank preconditioner toolkit"};

  ExperimentConfig cfg;
  std::string gen_spec, prec = "ddlr1", theta = "next", csolve = "direct", krylov = "cg",
              mapping = "standard", uk_place = "subdomain";

  app.add_option("--matrix", cfg.matrix_path, "Matrix Market file to load");
  app.add_option("--gen", gen_spec, "Problem generator, lap2d:NX,NY or lap3d:NX,NY,NZ");
  app.add_option("--sigma", cfg.sigma, "Diagonal shift subtracted from the generated operator");
  app.add_option("--np", cfg.np, "Number of subdomains");
  app.add_option("--prec", prec, "Preconditioner: ddlr1|ddlr2|ras|bj|none");
  app.add_option("--rank", cfg.rank, "Low-rank correction size k");
  app.add_option("--alpha", cfg.alpha, "Splitting scale alpha");
  app.add_option("--theta", theta, "DDLR-1 theta: zero|next|<value>");
  app.add_option("--csolve", csolve, "Interface solver: direct|cheb:ITERS|ainv:DROPTOL,MAXNNZ,STEPS");
  app.add_option("--droptol", cfg.droptol, "Drop tolerance of the local factors");
  app.add_option("--maxfill", cfg.maxfill, "Max kept entries per factor column (-1 = unlimited)");
  app.add_option("--overlap", cfg.overlap, "RAS overlap layers");
  app.add_option("--krylov", krylov, "Accelerator: cg|gmres");
  app.add_flag("--force-krylov", cfg.force_krylov, "Keep the requested accelerator even when uncertified");
  app.add_option("--restart", cfg.restart, "GMRES restart dimension");
  app.add_option("--tol", cfg.tol, "Relative residual tolerance");
  app.add_option("--maxit", cfg.maxit, "Iteration cap");
  app.add_option("--seed", cfg.seed, "Seed for partitioning, Lanczos start and right-hand side");
  app.add_option("--lanczos-eps", cfg.lanczos_eps, "Lanczos trace-convergence tolerance");
  app.add_option("--lanczos-steps", cfg.lanczos_max_steps, "Lanczos step cap (-1 = 5k)");
  bool verify = false;
  app.add_flag("--verify-spectrum", verify, "Check the spectral claims against dense eigensolves");
  app.add_option("--mapping", mapping, "Processor mapping model: standard|unbalanced");
  app.add_option("--q", cfg.q, "Interface processors in the unbalanced mapping");
  app.add_option("--uk", uk_place, "U_k placement for the mapping model: subdomain|interface");
  app.add_option("--report", cfg.report_format, "Report format: json|csv");
  app.add_option("--out", cfg.out_path, "Write the report to this path instead of stdout");

  CLI11_PARSE(app, argc, argv);

  try {
    if (cfg.matrix_path.empty()) {
      if (gen_spec.empty()) {
        std::cerr << "error: either --matrix or --gen is required\n";
        return 2;
      }
      if (!parse_gen(gen_spec, cfg)) {
        std::cerr << "error: bad --gen spec '" << gen_spec << "'\n";
        return 2;
      }
    }
    if (prec == "ddlr1")
      cfg.prec = ddlr::PrecKind::DDLR1;
    else if (prec == "ddlr2")
      cfg.prec = ddlr::PrecKind::DDLR2;
    else if (prec == "ras")
      cfg.prec = ddlr::PrecKind::RAS;
    else if (prec == "bj")
      cfg.prec = ddlr::PrecKind::BlockJacobi;
    else if (prec == "none")
      cfg.prec = ddlr::PrecKind::None;
    else {
      std::cerr << "error: unknown --prec '" << prec << "'\n";
      return 2;
    }
    if (theta == "zero")
      cfg.theta_mode = ddlr::ThetaMode::Zero;
    else if (theta == "next")
      cfg.theta_mode = ddlr::ThetaMode::LambdaNext;
    else {
      cfg.theta_mode = ddlr::ThetaMode::Fixed;
      cfg.theta_fixed = std::stod(theta);
    }
    if (!parse_csolve(csolve, cfg)) {
      std::cerr << "error: bad --csolve spec '" << csolve << "'\n";
      return 2;
    }
    if (krylov == "cg")
      cfg.krylov = ddlr::KrylovKind::CG;
    else if (krylov == "gmres")
      cfg.krylov = ddlr::KrylovKind::GMRES;
    else {
      std::cerr << "error: unknown --krylov '" << krylov << "'\n";
      return 2;
    }
    cfg.mapping = mapping == "unbalanced" ? ddlr::MappingKind::Unbalanced : ddlr::MappingKind::Standard;
    cfg.uk_placement = uk_place == "interface" ? ddlr::UkPlacement::InterfaceProcs
                                               : ddlr::UkPlacement::SubdomainProcs;
    cfg.verify = verify;

    ddlr::ExperimentResult res = ddlr::run_experiment(cfg);

    const std::string payload = cfg.report_format == "csv" ? ddlr::to_csv(res) : ddlr::to_json(res);
    if (cfg.out_path.empty()) {
      std::cout << payload;
    } else {
      std::ofstream out(cfg.out_path);
      if (!out) {
        std::cerr << "error: cannot write " << cfg.out_path << "\n";
        return 2;
      }
      out << payload;
    }

    bool ok = res.report.converged;
    if (res.spectrum) {
      for (const auto& c : res.spectrum->claims)
        std::cerr << (c.pass ? "PASS " : "FAIL ") << c.name << " (" << c.detail << ")\n";
      ok = ok && res.spectrum->all_pass();
    }
    return ok ? 0 : 1;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }
}
