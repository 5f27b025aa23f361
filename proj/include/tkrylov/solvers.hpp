#pragma once

#include <Eigen/Dense>
#include <chrono>
#include <cmath>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "krylov.hpp"
#include "operators.hpp"
#include "regularization.hpp"
#include "small_matrix.hpp"
#include "tensor.hpp"

namespace tkrylov {

struct GmresConfig {
  std::size_t m = 10;
  std::size_t iter_max = 10;
  double tol = 1e-8;
  /// Empty: a fresh GCV minimization picks mu each restart. Set: that value
  /// is used verbatim (mu = 0 gives the unregularized solver).
  std::optional<double> fixed_mu;
};

struct GgkbConfig {
  double epsilon = 0.0;
  double eta = 1.1;
  std::size_t m_max = 200;
};

struct SolveReport {
  Tensor3 x;
  std::vector<double> mu;
  std::size_t m_used = 0;
  std::vector<double> residual_history;
  std::vector<double> gamma_check;
  double final_residual = 0.0;
  double wall_seconds = 0.0;
  std::vector<std::string> warnings;
};

/// Residual norm of the projected least-squares problem read off the
/// Hessenberg QR: |gamma_{m+1}|, the last component of beta Q^T e1. The
/// passed vector must be the unregularized minimizer; the identity is
/// checked against its explicit residual and a mismatch throws.
inline double gmres_residual_norm(const ArnoldiDecomposition& d,
                                  const Eigen::VectorXd& y_unreg) {
  if (y_unreg.size() != d.h_tilde.cols())
    throw std::invalid_argument("gmres_residual_norm: coefficient length mismatch");
  const HessenbergQr qr = qr_hessenberg(d.h_tilde);
  const double gamma = d.beta * qr.q(0, d.h_tilde.rows() - 1);
  Eigen::VectorXd r = -d.h_tilde * y_unreg;
  r[0] += d.beta;
  if (std::abs(std::abs(gamma) - r.norm()) > 1e-8 * d.beta)
    throw std::invalid_argument(
        "gmres_residual_norm: vector is not the unregularized minimizer");
  return std::abs(gamma);
}

/// Restarted T-global GMRES with per-restart Tikhonov stabilization of the
/// projected problem. Each restart runs m Arnoldi steps from the current
/// residual, picks mu (GCV unless fixed), solves the stacked projected
/// system, updates X, and recomputes the true residual explicitly. Stops
/// on tol, restart exhaustion, or Arnoldi breakdown (the truncated basis
/// still yields the best update available in the exhausted space).
inline SolveReport gmres_restarted(const TensorLinearOperator& op,
                                   const Tensor3& c, const Tensor3& x0,
                                   const GmresConfig& cfg) {
  if (cfg.m == 0 || cfg.iter_max == 0 || !(cfg.tol > 0.0))
    throw std::invalid_argument("gmres_restarted: invalid configuration");
  const auto start = std::chrono::steady_clock::now();

  SolveReport rep;
  rep.x = x0;
  std::optional<double> warm = cfg.fixed_mu;
  for (std::size_t k = 0; k < cfg.iter_max; ++k) {
    Tensor3 r0 = c - op.apply(rep.x);
    const double beta = frob_norm(r0);
    if (!std::isfinite(beta))
      throw std::runtime_error("gmres_restarted: non-finite residual");
    if (beta < cfg.tol) {
      rep.residual_history.push_back(beta);
      break;
    }

    const ArnoldiDecomposition arn = t_global_arnoldi(op, r0, cfg.m);
    rep.m_used += arn.m;

    double mu;
    if (cfg.fixed_mu) {
      mu = *cfg.fixed_mu;
    } else {
      const GcvContext ctx(arn.h_tilde, beta);
      mu = gcv_minimize(ctx, warm);
    }
    const Eigen::VectorXd y = solve_projected_tikhonov(arn.h_tilde, beta, mu);

    const HessenbergQr qr = qr_hessenberg(arn.h_tilde);
    rep.gamma_check.push_back(
        std::abs(beta * qr.q(0, arn.h_tilde.rows() - 1)));

    Eigen::VectorXd yp = Eigen::VectorXd::Zero(arn.v.count());
    yp.head(y.size()) = y;
    rep.x += stack_combine(arn.v, yp);

    const double res = frob_norm(c - op.apply(rep.x));
    if (!std::isfinite(res))
      throw std::runtime_error("gmres_restarted: non-finite residual");
    rep.mu.push_back(mu);
    rep.residual_history.push_back(res);
    warm = mu;
    if (res < cfg.tol || arn.breakdown) break;
  }

  rep.final_residual = rep.residual_history.empty()
                           ? frob_norm(c - op.apply(rep.x))
                           : rep.residual_history.back();
  rep.wall_seconds =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - start)
          .count();
  return rep;
}

/// Golub-Kahan pipeline with quadrature-bounded discrepancy selection of
/// mu. Extends the bidiagonalization one step at a time from m = 2,
/// solving the Gauss-rule equation for mu by Newton and accepting as soon
/// as the Gauss-Radau upper bound drops under eta^2 epsilon^2; breakdown
/// forces acceptance at the current step with a warning.
inline SolveReport ggkb_tikhonov(const TensorLinearOperator& op,
                                 const Tensor3& c, const GgkbConfig& cfg) {
  if (!(cfg.epsilon > 0.0) || cfg.eta < 1.0 || cfg.m_max < 2)
    throw std::invalid_argument("ggkb_tikhonov: invalid configuration");
  if (cfg.epsilon >= frob_norm(c))
    throw std::invalid_argument("ggkb_tikhonov: epsilon must be below the data norm");
  const auto start = std::chrono::steady_clock::now();

  SolveReport rep;
  GolubKahanStepper stepper(op, c);
  double mu_final = 0.0;
  while (true) {
    const bool forced = stepper.breakdown().has_value();
    if (forced || stepper.m() >= 2) {
      const QuadratureContext ctx(stepper.c_tilde(), stepper.beta1(),
                                  cfg.epsilon, cfg.eta);
      const auto sol = newton_discrepancy(ctx);
      if (!sol)
        throw std::runtime_error("ggkb_tikhonov: data norm inside the noise bound");
      mu_final = sol->mu;
      rep.mu.push_back(mu_final);
      rep.residual_history.push_back(std::sqrt(gauss_radau_rule(ctx, mu_final)));
      if (forced) {
        rep.warnings.push_back(
            "bidiagonalization broke down before discrepancy acceptance at m = " +
            std::to_string(stepper.m()));
        break;
      }
      if (discrepancy_accept(ctx, mu_final)) break;
    }
    if (stepper.m() >= cfg.m_max)
      throw std::runtime_error("ggkb_tikhonov: no acceptance within m_max steps");
    stepper.advance();
  }

  const Eigen::VectorXd y =
      solve_ggkb_tikhonov_projected(stepper.c_tilde(), stepper.beta1(), mu_final);
  rep.x = stack_combine(stepper.u(), y);
  rep.m_used = stepper.m();
  rep.final_residual = frob_norm(c - op.apply(rep.x));
  rep.wall_seconds =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - start)
          .count();
  return rep;
}

}  // namespace tkrylov
