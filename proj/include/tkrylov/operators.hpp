#pragma once

#include <Eigen/Dense>
#include <cmath>
#include <optional>
#include <stdexcept>
#include <utility>

#include "tensor.hpp"
#include "tproduct.hpp"

namespace tkrylov {

struct OperatorShape {
  std::size_t n1 = 0, n2 = 0, n3 = 0;
  bool operator==(const OperatorShape&) const = default;
};

/// Linear map on third-order tensors, either one-sided M(X) = A * X or
/// two-sided M(X) = A * X * B (t-products). Spectra of the factors and
/// their transposes are cached at construction, so one apply costs a
/// forward and an inverse mode-3 FFT of the operand plus slice-wise
/// matrix products. Immutable after construction; apply is const and
/// safe to call concurrently.
class TensorLinearOperator {
 public:
  /// M(X) = a * X for X of shape a.n2() x domain_cols x a.n3().
  static TensorLinearOperator one_sided(const Tensor3& a,
                                        std::size_t domain_cols) {
    TensorLinearOperator op;
    op.domain_ = {a.n2(), domain_cols, a.n3()};
    op.codomain_ = {a.n1(), domain_cols, a.n3()};
    op.a_hat_ = dft_mode3(a);
    op.at_hat_ = dft_mode3(t_transpose(a));
    return op;
  }

  /// M(X) = a * X * b for X of shape a.n2() x b.n1() x n3.
  static TensorLinearOperator two_sided(const Tensor3& a, const Tensor3& b) {
    if (a.n3() != b.n3())
      throw std::invalid_argument("TensorLinearOperator: factor n3 mismatch");
    TensorLinearOperator op;
    op.domain_ = {a.n2(), b.n1(), a.n3()};
    op.codomain_ = {a.n1(), b.n2(), a.n3()};
    op.a_hat_ = dft_mode3(a);
    op.at_hat_ = dft_mode3(t_transpose(a));
    op.b_hat_ = dft_mode3(b);
    op.bt_hat_ = dft_mode3(t_transpose(b));
    return op;
  }

  bool is_two_sided() const { return b_hat_.has_value(); }
  const OperatorShape& domain() const { return domain_; }
  const OperatorShape& codomain() const { return codomain_; }

  Tensor3 apply(const Tensor3& x) const {
    require_shape(x, domain_, "apply");
    SpectralTensor3 yh = spectral_product(a_hat_, dft_mode3(x));
    if (b_hat_) yh = spectral_product(yh, *b_hat_);
    return idft_mode3(yh);
  }

  Tensor3 apply_transpose(const Tensor3& y) const {
    require_shape(y, codomain_, "apply_transpose");
    SpectralTensor3 xh = spectral_product(at_hat_, dft_mode3(y));
    if (bt_hat_) xh = spectral_product(xh, *bt_hat_);
    return idft_mode3(xh);
  }

 private:
  TensorLinearOperator() = default;

  static void require_shape(const Tensor3& t, const OperatorShape& s,
                            const char* who) {
    if (t.n1() != s.n1 || t.n2() != s.n2 || t.n3() != s.n3)
      throw std::invalid_argument(std::string(who) + ": operand shape mismatch");
  }

  OperatorShape domain_, codomain_;
  SpectralTensor3 a_hat_, at_hat_;
  std::optional<SpectralTensor3> b_hat_, bt_hat_;
};

inline Tensor3 apply(const TensorLinearOperator& op, const Tensor3& x) {
  return op.apply(x);
}
inline Tensor3 apply_transpose(const TensorLinearOperator& op, const Tensor3& y) {
  return op.apply_transpose(y);
}

/// Banded Gaussian point-spread matrix: a_{kl} = exp(-(k-l)^2 / (2 sigma^2))
/// / (sigma sqrt(2 pi)) inside band radius r, zero outside. Rows are not
/// normalized.
inline Eigen::MatrixXd gaussian_band_matrix(std::size_t n, double sigma,
                                            std::size_t r) {
  if (n == 0) throw std::invalid_argument("gaussian_band_matrix: n must be positive");
  if (!(sigma > 0.0))
    throw std::invalid_argument("gaussian_band_matrix: sigma must be positive");
  if (r >= n) throw std::invalid_argument("gaussian_band_matrix: r must be < n");
  const double scale = 1.0 / (sigma * std::sqrt(2.0 * M_PI));
  Eigen::MatrixXd a = Eigen::MatrixXd::Zero(n, n);
  for (std::size_t k = 0; k < n; ++k) {
    const std::size_t lo = k >= r ? k - r : 0;
    const std::size_t hi = std::min(n - 1, k + r);
    for (std::size_t l = lo; l <= hi; ++l) {
      const double d = static_cast<double>(k) - static_cast<double>(l);
      a(k, l) = scale * std::exp(-d * d / (2.0 * sigma * sigma));
    }
  }
  return a;
}

/// Cross-channel Gaussian blur model: within-channel band matrices plus a
/// circulant 3x3 channel-mixing matrix with first column (alpha, beta,
/// gamma) and rows summing to one.
struct BlurModel {
  std::size_t n = 0;
  double sigma = 0.0;
  std::size_t r = 0;
  Eigen::MatrixXd a1, a2;
  Eigen::Matrix3d acolor;
  double alpha = 0.0, beta = 0.0, gamma = 0.0;
};

inline BlurModel blur_model(std::size_t n, double sigma, std::size_t r,
                            double alpha, double beta, double gamma) {
  if (std::abs(alpha + beta + gamma - 1.0) > 1e-12)
    throw std::invalid_argument("blur_model: channel weights must sum to 1");
  BlurModel m;
  m.n = n;
  m.sigma = sigma;
  m.r = r;
  m.a1 = gaussian_band_matrix(n, sigma, r);
  m.a2 = m.a1;
  m.alpha = alpha;
  m.beta = beta;
  m.gamma = gamma;
  m.acolor << alpha, gamma, beta,
              beta, alpha, gamma,
              gamma, beta, alpha;
  return m;
}

namespace detail {

inline void require_circulant_color(const BlurModel& m) {
  Eigen::Matrix3d c;
  c << m.alpha, m.gamma, m.beta,
       m.beta, m.alpha, m.gamma,
       m.gamma, m.beta, m.alpha;
  if ((m.acolor - c).cwiseAbs().maxCoeff() > 1e-14)
    throw std::invalid_argument("cross-channel matrix is not circulant");
  for (int row = 0; row < 3; ++row)
    if (std::abs(m.acolor.row(row).sum() - 1.0) > 1e-12)
      throw std::invalid_argument("cross-channel matrix rows must sum to 1");
}

}  // namespace detail

/// Tensorized cross-channel blur on n x n x 3 images: the left factor
/// stacks (alpha, beta, gamma)-scaled copies of the vertical blur, the
/// right factor carries the transposed horizontal blur in its first slice.
inline TensorLinearOperator build_cross_channel_blur(const BlurModel& m) {
  detail::require_circulant_color(m);
  Tensor3 a(m.n, m.n, 3);
  a.slice(0) = m.alpha * m.a2;
  a.slice(1) = m.beta * m.a2;
  a.slice(2) = m.gamma * m.a2;
  Tensor3 b(m.n, m.n, 3);
  b.slice(0) = m.a1.transpose();
  return TensorLinearOperator::two_sided(a, b);
}

/// Frame-wise blur for video stacks: identical two-sided Gaussian blur on
/// every frontal slice of an n x n x (3*frames) tensor, no cross-slice
/// mixing.
inline TensorLinearOperator build_within_channel_video_blur(std::size_t n,
                                                            std::size_t frames,
                                                            double sigma,
                                                            std::size_t r) {
  if (frames == 0)
    throw std::invalid_argument("build_within_channel_video_blur: frames must be positive");
  const Eigen::MatrixXd band = gaussian_band_matrix(n, sigma, r);
  const std::size_t n3 = 3 * frames;
  Tensor3 a(n, n, n3);
  a.slice(0) = band;
  Tensor3 b(n, n, n3);
  b.slice(0) = band.transpose();
  return TensorLinearOperator::two_sided(a, b);
}

inline Eigen::MatrixXd kron(const Eigen::MatrixXd& a, const Eigen::MatrixXd& b) {
  Eigen::MatrixXd out(a.rows() * b.rows(), a.cols() * b.cols());
  for (Eigen::Index i = 0; i < a.rows(); ++i)
    for (Eigen::Index j = 0; j < a.cols(); ++j)
      out.block(i * b.rows(), j * b.cols(), b.rows(), b.cols()) = a(i, j) * b;
  return out;
}

/// Reference implementation of the blur as one explicit Kronecker matrix
/// acting on the channel-major vec of X. Deliberately materializes the
/// 3n^2 x 3n^2 matrix, hence the size guard; exists to cross-check the
/// tensorized operator, never to run in solver paths.
inline Tensor3 kron_oracle_apply(const BlurModel& m, const Tensor3& x) {
  if (m.n > 32)
    throw std::invalid_argument("kron_oracle_apply: size guard exceeded (n <= 32)");
  if (x.n1() != m.n || x.n2() != m.n || x.n3() != 3)
    throw std::invalid_argument("kron_oracle_apply: operand shape mismatch");
  detail::require_circulant_color(m);
  const Eigen::MatrixXd big = kron(m.acolor, kron(m.a1, m.a2));
  const Eigen::VectorXd xv = x.flat().matrix();
  const Eigen::VectorXd cv = big * xv;
  Tensor3 c(m.n, m.n, 3);
  c.flat() = cv.array();
  return c;
}

/// Materializes the matrix of op in the flat tensor basis, one apply per
/// basis element. Test oracle with the same guard discipline as bcirc.
inline Eigen::MatrixXd dense_matrix(const TensorLinearOperator& op,
                                    bool force = false) {
  const auto& d = op.domain();
  const auto& c = op.codomain();
  const std::size_t in_size = d.n1 * d.n2 * d.n3;
  const std::size_t out_size = c.n1 * c.n2 * c.n3;
  if (static_cast<double>(in_size) * static_cast<double>(out_size) > 1e7 && !force)
    throw std::invalid_argument("dense_matrix: size guard exceeded (pass force to override)");
  Eigen::MatrixXd mat(out_size, in_size);
  Tensor3 e(d.n1, d.n2, d.n3);
  for (std::size_t idx = 0; idx < in_size; ++idx) {
    e.data()[idx] = 1.0;
    mat.col(static_cast<Eigen::Index>(idx)) = op.apply(e).flat().matrix();
    e.data()[idx] = 0.0;
  }
  return mat;
}

}  // namespace tkrylov
