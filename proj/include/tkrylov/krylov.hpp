#pragma once

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <optional>
#include <stdexcept>

#include "operators.hpp"
#include "tensor.hpp"

namespace tkrylov {

namespace detail {
constexpr double kBreakdownRel = 1e-13;
}

/// Output of the T-global Arnoldi process. v holds m orthonormal blocks
/// plus the (m+1)-th continuation block when no breakdown occurred;
/// h_tilde is (m+1) x m upper Hessenberg with a zero last row exactly when
/// breakdown truncated the run. The relation M(v_j) = sum_i h_ij v_i holds
/// column by column.
struct ArnoldiDecomposition {
  SliceStack v;
  Eigen::MatrixXd h_tilde;
  double beta = 0.0;
  std::size_t m = 0;
  std::optional<std::size_t> breakdown;
};

/// Runs m steps of global Arnoldi on op from the given seed. Modified
/// Gram-Schmidt in the algorithm's loop order, with one reorthogonalization
/// pass whenever cancellation ate more than 30% of the block norm.
/// Subdiagonal entries below 1e-13 of the running operator-norm estimate
/// count as breakdown and end the run early.
inline ArnoldiDecomposition t_global_arnoldi(const TensorLinearOperator& op,
                                             const Tensor3& seed,
                                             std::size_t m) {
  if (!(op.domain() == op.codomain()))
    throw std::invalid_argument("t_global_arnoldi: operator must be an endomorphism");
  if (seed.n1() != op.domain().n1 || seed.n2() != op.domain().n2 ||
      seed.n3() != op.domain().n3)
    throw std::invalid_argument("t_global_arnoldi: seed shape mismatch");
  if (m == 0) throw std::invalid_argument("t_global_arnoldi: m must be >= 1");

  ArnoldiDecomposition d;
  d.beta = frob_norm(seed);
  if (d.beta == 0.0) throw std::invalid_argument("t_global_arnoldi: zero seed");
  d.v.push_back(seed * (1.0 / d.beta));

  Eigen::MatrixXd h = Eigen::MatrixXd::Zero(m + 1, m);
  double op_norm_est = 0.0;
  std::size_t steps = 0;
  for (std::size_t j = 0; j < m; ++j) {
    Tensor3 w = op.apply(d.v[j]);
    const double pre = frob_norm(w);
    if (!std::isfinite(pre))
      throw std::runtime_error("t_global_arnoldi: non-finite iterate");
    op_norm_est = std::max(op_norm_est, pre);
    for (std::size_t i = 0; i <= j; ++i) {
      const double hij = inner(d.v[i], w);
      h(i, j) = hij;
      w.flat() -= hij * d.v[i].flat();
    }
    if (frob_norm(w) < 0.7 * pre) {
      for (std::size_t i = 0; i <= j; ++i) {
        const double delta = inner(d.v[i], w);
        h(i, j) += delta;
        w.flat() -= delta * d.v[i].flat();
      }
    }
    const double hnext = frob_norm(w);
    steps = j + 1;
    if (hnext <= detail::kBreakdownRel * op_norm_est) {
      d.breakdown = steps;
      break;
    }
    h(j + 1, j) = hnext;
    d.v.push_back(w * (1.0 / hnext));
  }
  d.m = steps;
  d.h_tilde = h.topLeftCorner(steps + 1, steps);
  return d;
}

/// Incremental T-global Golub-Kahan bidiagonalization. After construction
/// the state is m = 1; each successful advance() adds one block to u and v
/// and one (alpha, beta) pair. With m steps done, u holds m blocks, v
/// holds m+1 (one fewer when the final beta vanished), and c_tilde() is
/// the (m+1) x m lower bidiagonal projection with diagonal alpha_1..alpha_m
/// and subdiagonal beta_2..beta_{m+1}.
///
/// Both recurrences get a full reorthogonalization pass by default; the
/// extra projections are exact-arithmetic zeros, so the bidiagonal
/// bookkeeping is unchanged while orthogonality stays at machine level.
class GolubKahanStepper {
 public:
  GolubKahanStepper(const TensorLinearOperator& op, const Tensor3& c,
                    bool reorthogonalize = true)
      : op_(&op), reorth_(reorthogonalize) {
    const auto& cod = op.codomain();
    if (c.n1() != cod.n1 || c.n2() != cod.n2 || c.n3() != cod.n3)
      throw std::invalid_argument("GolubKahanStepper: data shape mismatch");
    beta1_ = frob_norm(c);
    if (beta1_ == 0.0)
      throw std::invalid_argument("GolubKahanStepper: zero data tensor");
    v_.push_back(c * (1.0 / beta1_));

    Tensor3 u = op.apply_transpose(v_[0]);
    const double a1 = track_norm(frob_norm(u));
    if (a1 <= tol())
      throw std::runtime_error("GolubKahanStepper: operator transpose annihilates the data");
    alphas_.push_back(a1);
    u_.push_back(u * (1.0 / a1));
    extend_v();
  }

  std::size_t m() const { return alphas_.size(); }
  double beta1() const { return beta1_; }
  const SliceStack& u() const { return u_; }
  const SliceStack& v() const { return v_; }
  std::optional<std::size_t> breakdown() const { return breakdown_; }

  /// Advances m by one. Returns false when an alpha-breakdown blocks the
  /// extension (state unchanged); a beta-breakdown still counts as an
  /// advance but flags breakdown() so callers stop extending.
  bool advance() {
    if (breakdown_) return false;
    const std::size_t j = m();
    Tensor3 ut = op_->apply_transpose(v_[j]);
    track_norm(frob_norm(ut));
    ut.flat() -= betas_[j - 1] * u_[j - 1].flat();
    if (reorth_)
      for (std::size_t i = 0; i < u_.count(); ++i)
        ut.flat() -= inner(u_[i], ut) * u_[i].flat();
    const double a = frob_norm(ut);
    if (!std::isfinite(a))
      throw std::runtime_error("GolubKahanStepper: non-finite iterate");
    if (a <= tol()) {
      breakdown_ = j + 1;
      return false;
    }
    alphas_.push_back(a);
    u_.push_back(ut * (1.0 / a));
    extend_v();
    return true;
  }

  /// (m+1) x m lower bidiagonal projection matrix.
  Eigen::MatrixXd c_tilde() const {
    const std::size_t k = m();
    Eigen::MatrixXd c = Eigen::MatrixXd::Zero(k + 1, k);
    for (std::size_t i = 0; i < k; ++i) {
      c(i, i) = alphas_[i];
      c(i + 1, i) = betas_[i];
    }
    return c;
  }

  /// Leading m x m block of c_tilde.
  Eigen::MatrixXd c_square() const {
    const Eigen::MatrixXd c = c_tilde();
    return c.topRows(c.cols());
  }

 private:
  double tol() const { return detail::kBreakdownRel * norm_est_; }

  double track_norm(double n) {
    if (!std::isfinite(n))
      throw std::runtime_error("GolubKahanStepper: non-finite iterate");
    norm_est_ = std::max(norm_est_, n);
    return n;
  }

  /// Produces v_{m+1} from u_m; a vanished beta is recorded as a zero
  /// subdiagonal entry with no new block.
  void extend_v() {
    const std::size_t j = m();
    Tensor3 vt = op_->apply(u_[j - 1]);
    track_norm(frob_norm(vt));
    vt.flat() -= alphas_[j - 1] * v_[j - 1].flat();
    if (reorth_)
      for (std::size_t i = 0; i < v_.count(); ++i)
        vt.flat() -= inner(v_[i], vt) * v_[i].flat();
    const double b = frob_norm(vt);
    if (!std::isfinite(b))
      throw std::runtime_error("GolubKahanStepper: non-finite iterate");
    if (b <= tol()) {
      betas_.push_back(0.0);
      breakdown_ = j;
      return;
    }
    betas_.push_back(b);
    v_.push_back(vt * (1.0 / b));
  }

  const TensorLinearOperator* op_;
  bool reorth_;
  double beta1_ = 0.0;
  double norm_est_ = 0.0;
  SliceStack u_, v_;
  std::vector<double> alphas_, betas_;
  std::optional<std::size_t> breakdown_;
};

/// Frozen result of a Golub-Kahan run; see GolubKahanStepper for the shape
/// contract between u, v, and c_tilde.
struct GolubKahanDecomposition {
  SliceStack u;
  SliceStack v;
  Eigen::MatrixXd c_tilde;
  double beta1 = 0.0;
  std::size_t m = 0;
  std::optional<std::size_t> breakdown;
};

inline GolubKahanDecomposition t_global_golub_kahan(
    const TensorLinearOperator& op, const Tensor3& c, std::size_t m,
    bool reorthogonalize = true) {
  if (m == 0) throw std::invalid_argument("t_global_golub_kahan: m must be >= 1");
  GolubKahanStepper s(op, c, reorthogonalize);
  while (s.m() < m && !s.breakdown() && s.advance()) {
  }
  return {s.u(), s.v(), s.c_tilde(), s.beta1(), s.m(), s.breakdown()};
}

}  // namespace tkrylov
