#pragma once

#include <Eigen/Cholesky>
#include <Eigen/Dense>
#include <cmath>
#include <optional>
#include <stdexcept>

#include "small_matrix.hpp"

namespace tkrylov {

/// SVD view of a projected Hessenberg system, the data every GCV
/// evaluation needs: full left factor of H_tilde, singular values in
/// descending order, and g_tilde = beta * U^T e1.
struct GcvContext {
  Eigen::MatrixXd u;
  Eigen::VectorXd sigma;
  Eigen::MatrixXd v;
  Eigen::VectorXd g_tilde;
  std::size_t m = 0;

  GcvContext(const Eigen::MatrixXd& h_tilde, double beta) {
    if (h_tilde.rows() != h_tilde.cols() + 1)
      throw std::invalid_argument("GcvContext: expected an (m+1) x m matrix");
    const SvdSmall svd = svd_small(h_tilde);
    u = svd.u;
    sigma = svd.s;
    v = svd.v;
    g_tilde = beta * u.row(0).transpose();
    m = static_cast<std::size_t>(h_tilde.cols());
  }
};

/// GCV objective in its SVD form: the sums run over the m singular values
/// of the projected matrix.
inline double gcv_value(const GcvContext& ctx, double mu) {
  if (mu < 0.0) throw std::invalid_argument("gcv_value: mu must be >= 0");
  const double mu2 = mu * mu;
  double num = 0.0, den = 0.0;
  for (std::size_t i = 0; i < ctx.m; ++i) {
    const double d = ctx.sigma[i] * ctx.sigma[i] + mu2;
    const double t = ctx.g_tilde[i] / d;
    num += t * t;
    den += 1.0 / d;
  }
  return num / (den * den);
}

/// GCV objective under the square-extension convention: the sums include
/// an (m+1)-th term with sigma = 0, written in a form stable at mu = 0.
/// This variant equals the residual/trace quotient over the full
/// (m+1)-dimensional space.
inline double gcv_value_extended(const GcvContext& ctx, double mu) {
  if (mu < 0.0) throw std::invalid_argument("gcv_value_extended: mu must be >= 0");
  const double mu2 = mu * mu;
  double num = 0.0, den = 0.0;
  for (std::size_t i = 0; i < ctx.m; ++i) {
    const double d = ctx.sigma[i] * ctx.sigma[i] + mu2;
    const double t = mu2 * ctx.g_tilde[i] / d;
    num += t * t;
    den += mu2 / d;
  }
  const double tail = ctx.g_tilde[ctx.m];
  num += tail * tail;
  den += 1.0;
  return num / (den * den);
}

/// Deterministic GCV minimizer: a 200-point log grid over
/// [1e-12, 1e2] * sigma_1 locates the basin (an optional warm-start
/// candidate joins the scan), then golden-section refines the bracket to
/// 1e-3 relative width.
inline double gcv_minimize(const GcvContext& ctx,
                           std::optional<double> warm_start = std::nullopt) {
  const double sigma1 = ctx.sigma.size() ? ctx.sigma[0] : 0.0;
  if (!(sigma1 > 0.0))
    throw std::runtime_error("gcv_minimize: projected matrix is zero");

  const double lo = 1e-12 * sigma1;
  const double hi = 1e2 * sigma1;
  const int grid_n = 200;
  const double log_lo = std::log(lo);
  const double log_hi = std::log(hi);
  const double step = (log_hi - log_lo) / (grid_n - 1);

  double best_mu = lo;
  double best_val = gcv_value(ctx, lo);
  for (int k = 1; k < grid_n; ++k) {
    const double mu = std::exp(log_lo + k * step);
    const double val = gcv_value(ctx, mu);
    if (val < best_val) {
      best_val = val;
      best_mu = mu;
    }
  }
  if (warm_start && *warm_start > 0.0) {
    const double val = gcv_value(ctx, *warm_start);
    if (val < best_val) {
      best_val = val;
      best_mu = *warm_start;
    }
  }

  double a = std::log(best_mu) - step;
  double b = std::log(best_mu) + step;
  const double gr = (std::sqrt(5.0) - 1.0) / 2.0;
  double x1 = b - gr * (b - a);
  double x2 = a + gr * (b - a);
  double f1 = gcv_value(ctx, std::exp(x1));
  double f2 = gcv_value(ctx, std::exp(x2));
  while (b - a > 1e-3) {
    if (f1 < f2) {
      b = x2;
      x2 = x1;
      f2 = f1;
      x1 = b - gr * (b - a);
      f1 = gcv_value(ctx, std::exp(x1));
    } else {
      a = x1;
      x1 = x2;
      f1 = f2;
      x2 = a + gr * (b - a);
      f2 = gcv_value(ctx, std::exp(x2));
    }
  }
  const double refined = std::exp(0.5 * (a + b));
  return gcv_value(ctx, refined) <= best_val ? refined : best_mu;
}

/// Projected Tikhonov solve in stacked least-squares form:
/// min || [H_tilde; mu I] y - [beta e1; 0] ||. At mu = 0 this degenerates
/// to the plain projected least-squares problem and throws when H_tilde is
/// rank deficient.
inline Eigen::VectorXd solve_projected_tikhonov(const Eigen::MatrixXd& h_tilde,
                                                double beta, double mu) {
  if (mu < 0.0)
    throw std::invalid_argument("solve_projected_tikhonov: mu must be >= 0");
  const Eigen::Index rows = h_tilde.rows();
  const Eigen::Index m = h_tilde.cols();
  Eigen::MatrixXd a = Eigen::MatrixXd::Zero(rows + m, m);
  a.topRows(rows) = h_tilde;
  a.bottomRows(m) = mu * Eigen::MatrixXd::Identity(m, m);
  Eigen::VectorXd rhs = Eigen::VectorXd::Zero(rows + m);
  rhs[0] = beta;
  return lsq_tall(a, rhs);
}

/// Bidiagonal projection data for the quadrature bounds: the square and
/// rectangular projected matrices, the data norm beta1, the noise bound
/// epsilon, and the discrepancy safety factor eta.
struct QuadratureContext {
  Eigen::MatrixXd c_m;
  Eigen::MatrixXd c_tilde;
  double beta1 = 0.0;
  double epsilon = 0.0;
  double eta = 1.0;

  QuadratureContext(const Eigen::MatrixXd& c_tilde_in, double beta1_in,
                    double epsilon_in, double eta_in)
      : c_tilde(c_tilde_in), beta1(beta1_in), epsilon(epsilon_in), eta(eta_in) {
    if (c_tilde.rows() != c_tilde.cols() + 1)
      throw std::invalid_argument("QuadratureContext: expected an (m+1) x m matrix");
    if (!(beta1 > 0.0))
      throw std::invalid_argument("QuadratureContext: beta1 must be positive");
    if (!(epsilon > 0.0))
      throw std::invalid_argument("QuadratureContext: epsilon must be positive");
    if (eta < 1.0)
      throw std::invalid_argument("QuadratureContext: eta must be >= 1");
    for (Eigen::Index j = 0; j < c_tilde.cols(); ++j)
      for (Eigen::Index i = 0; i < c_tilde.rows(); ++i)
        if (i != j && i != j + 1 && c_tilde(i, j) != 0.0)
          throw std::invalid_argument("QuadratureContext: matrix is not lower bidiagonal");
    c_m = c_tilde.topRows(c_tilde.cols());
  }
};

namespace detail {

/// beta1^2 * || (mu B B^T + I)^{-1} e1 ||^2 via one Cholesky solve.
inline double resolvent_quadratic(const Eigen::MatrixXd& b, double beta1,
                                  double mu) {
  const Eigen::Index n = b.rows();
  Eigen::MatrixXd a = mu * (b * b.transpose());
  a.diagonal().array() += 1.0;
  Eigen::VectorXd e1 = Eigen::VectorXd::Zero(n);
  e1[0] = 1.0;
  const Eigen::VectorXd z = Eigen::LLT<Eigen::MatrixXd>(a).solve(e1);
  return beta1 * beta1 * z.squaredNorm();
}

}  // namespace detail

/// Gauss quadrature lower bound G_m f_mu.
inline double gauss_rule(const QuadratureContext& ctx, double mu) {
  if (mu < 0.0) throw std::invalid_argument("gauss_rule: mu must be >= 0");
  return detail::resolvent_quadratic(ctx.c_m, ctx.beta1, mu);
}

/// Gauss-Radau quadrature upper bound R_{m+1} f_mu.
inline double gauss_radau_rule(const QuadratureContext& ctx, double mu) {
  if (mu < 0.0) throw std::invalid_argument("gauss_radau_rule: mu must be >= 0");
  return detail::resolvent_quadratic(ctx.c_tilde, ctx.beta1, mu);
}

/// Analytic derivative of the Gauss bound:
/// dG/dmu = -2 beta1^2 e1^T (mu B + I)^{-3} B e1 with B = C_m C_m^T.
inline double gauss_rule_derivative(const QuadratureContext& ctx, double mu) {
  if (mu < 0.0)
    throw std::invalid_argument("gauss_rule_derivative: mu must be >= 0");
  const Eigen::Index n = ctx.c_m.rows();
  const Eigen::MatrixXd b = ctx.c_m * ctx.c_m.transpose();
  Eigen::MatrixXd a = mu * b;
  a.diagonal().array() += 1.0;
  Eigen::LLT<Eigen::MatrixXd> llt(a);
  Eigen::VectorXd e1 = Eigen::VectorXd::Zero(n);
  e1[0] = 1.0;
  const Eigen::VectorXd z1 = llt.solve(e1);
  const Eigen::VectorXd z2 = llt.solve(z1);
  return -2.0 * ctx.beta1 * ctx.beta1 * z2.dot(b * z1);
}

struct DiscrepancyResult {
  double mu = 0.0;
  std::size_t iterations = 0;
};

/// Solves G_m f_mu = epsilon^2 for mu by safeguarded Newton iteration.
/// Returns nullopt when beta1^2 <= epsilon^2 (no regularization needed:
/// the data norm is already inside the noise bound).
///
/// Newton runs on h(mu) = G(mu)^{-1/2} - 1/epsilon, which is exactly
/// linear for m = 1 and nearly linear otherwise, so convergence is fast
/// from mu = 0. Iterates are confined to a bracket [lo, hi] with
/// G(hi) < epsilon^2, falling back to bisection whenever a step leaves it.
inline std::optional<DiscrepancyResult> newton_discrepancy(
    const QuadratureContext& ctx) {
  const double target = ctx.epsilon * ctx.epsilon;
  if (ctx.beta1 * ctx.beta1 <= target) return std::nullopt;

  double hi = 1.0;
  for (int k = 0; gauss_rule(ctx, hi) >= target; ++k) {
    if (k > 2000) throw std::runtime_error("newton_discrepancy: cannot bracket the root");
    hi *= 2.0;
  }
  double lo = 0.0;
  double mu = 0.0;

  for (std::size_t it = 0; it <= 100; ++it) {
    const double g = gauss_rule(ctx, mu);
    if (std::abs(g - target) <= 1e-8 * target) return DiscrepancyResult{mu, it};
    if (g > target)
      lo = mu;
    else
      hi = mu;
    const double gp = gauss_rule_derivative(ctx, mu);
    const double h = 1.0 / std::sqrt(g) - 1.0 / ctx.epsilon;
    const double hp = -gp / (2.0 * g * std::sqrt(g));
    double next = mu - h / hp;
    if (!std::isfinite(next) || next <= lo || next >= hi)
      next = 0.5 * (lo + hi);
    mu = next;
  }
  throw std::runtime_error("newton_discrepancy: no convergence within 100 iterations");
}

/// Discrepancy acceptance test: the Gauss-Radau upper bound at mu_m must
/// not exceed eta^2 epsilon^2.
inline bool discrepancy_accept(const QuadratureContext& ctx, double mu_m) {
  return gauss_radau_rule(ctx, mu_m) <= ctx.eta * ctx.eta * ctx.epsilon * ctx.epsilon;
}

/// Projected Tikhonov solve for the bidiagonal branch, in the stacked form
/// min || [sqrt(mu) C_tilde; I] y - beta1 sqrt(mu) e1 ||, equivalent to
/// (C_tilde^T C_tilde + mu^{-1} I) y = beta1 C_tilde^T e1.
inline Eigen::VectorXd solve_ggkb_tikhonov_projected(
    const Eigen::MatrixXd& c_tilde, double beta1, double mu) {
  if (!(mu > 0.0))
    throw std::invalid_argument("solve_ggkb_tikhonov_projected: mu must be positive");
  const Eigen::Index rows = c_tilde.rows();
  const Eigen::Index m = c_tilde.cols();
  const double root = std::sqrt(mu);
  Eigen::MatrixXd a = Eigen::MatrixXd::Zero(rows + m, m);
  a.topRows(rows) = root * c_tilde;
  a.bottomRows(m) = Eigen::MatrixXd::Identity(m, m);
  Eigen::VectorXd rhs = Eigen::VectorXd::Zero(rows + m);
  rhs[0] = beta1 * root;
  return lsq_tall(a, rhs);
}

}  // namespace tkrylov
