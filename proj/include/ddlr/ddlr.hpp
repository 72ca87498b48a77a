#pragma once

#include "ddlr/a0.hpp"
#include "ddlr/lanczos.hpp"

namespace ddlr {

/// The n x s coupling operator E = [alpha^-1 E_hat; -alpha I], applied
/// implicitly through the per-subdomain E_i blocks.
struct EOperator {
  const DistributedMatrix* dist = nullptr;
  double alpha = 1.0;
};

Vector e_mul(const EOperator& E, const Vector& w);   // s -> n
Vector et_mul(const EOperator& E, const Vector& z);  // n -> s

enum class ThetaMode { Zero, LambdaNext, Fixed };

struct DDLR1Options {
  Index k = 0;
  ThetaMode theta_mode = ThetaMode::LambdaNext;
  double theta_fixed = 0.0;
  LanczosOptions lanczos;
};

/// One-sided preconditioner: M^-1 = A_0^-1 (I + E G_{k,theta}^-1 E^T A_0^-1),
/// with G_{k,theta}^-1 built from the top-k eigenpairs of H = E^T A_0^-1 E.
struct DDLR1 {
  const A0Operator* a0 = nullptr;
  EOperator E;
  Matrix U;       // s x k
  Vector lambda;  // descending, in [0,1) when certified
  double theta = 0.0;
  bool spd_certified = false;
  double lambda_next = 0.0;
  bool lambda_next_available = false;
  DDLR1Options opts;  // retained so the rank can be extended

  Index rank() const { return static_cast<Index>(U.cols()); }
};

DDLR1 build_ddlr1(const A0Operator& a0, const DDLR1Options& opt);

/// G_{k,theta}^-1 y = (1-theta)^-1 y + U [(I-Lambda)^-1 - (1-theta)^-1 I] U^T y.
Vector apply_gktheta(const Matrix& U, const Vector& lambda, double theta, const Vector& y);

/// Exactly two A_0 solves per application.
Vector apply_ddlr1(const DDLR1& P, const Vector& x);

/// Adds `extra` eigenpairs by a Lanczos restart deflated against the retained
/// Ritz vectors; theta is refreshed per the stored mode.
DDLR1 extend_rank(const DDLR1& P, Index extra);

struct DDLR2Options {
  Index k = 0;
  LanczosOptions lanczos;
};

/// Two-sided preconditioner: M^-1 = A_0^-1 + U_k H_k U_k^T with
/// U_k = A_0^-1 E V_k and H_k = (I - U_k^T E V_k)^-1.
struct DDLR2 {
  const A0Operator* a0 = nullptr;
  Matrix U;   // n x k
  Matrix Hk;  // k x k symmetric
  bool spd_certified = false;
  double rho = 0.0;  // spectral radius of U_k^T E V_k
};

DDLR2 build_ddlr2(const A0Operator& a0, const DDLR2Options& opt);

/// Exactly one A_0 solve per application.
Vector apply_ddlr2(const DDLR2& P, const Vector& x);

/// v -> E^T A_0^-1 E v, the DDLR-1 Lanczos operator.
LinearOperator h_operator(const A0Operator& a0);

/// v -> E^T A_0^-2 E v, the DDLR-2 Lanczos operator.
LinearOperator h2_operator(const A0Operator& a0);

}  // namespace ddlr
