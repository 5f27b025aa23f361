#pragma once

#include <tkrylov/tkrylov.hpp>

#include <Eigen/Dense>
#include <complex>
#include <random>

// Brute-force reference implementations used to cross-check the library.
// Everything here favors obviousness over speed: explicit matrices,
// explicit inverses, textbook formulas.
namespace oracles {

inline tkrylov::Tensor3 random_tensor(std::size_t n1, std::size_t n2,
                                      std::size_t n3, std::mt19937_64& g) {
  std::normal_distribution<double> d(0.0, 1.0);
  tkrylov::Tensor3 t(n1, n2, n3);
  for (std::size_t i = 0; i < t.size(); ++i) t.data()[i] = d(g);
  return t;
}

inline Eigen::MatrixXd random_matrix(Eigen::Index rows, Eigen::Index cols,
                                     std::mt19937_64& g) {
  std::normal_distribution<double> d(0.0, 1.0);
  Eigen::MatrixXd m(rows, cols);
  for (Eigen::Index j = 0; j < cols; ++j)
    for (Eigen::Index i = 0; i < rows; ++i) m(i, j) = d(g);
  return m;
}

inline Eigen::VectorXd random_vector(Eigen::Index n, std::mt19937_64& g) {
  std::normal_distribution<double> d(0.0, 1.0);
  Eigen::VectorXd v(n);
  for (Eigen::Index i = 0; i < n; ++i) v[i] = d(g);
  return v;
}

/// Random upper Hessenberg (m+1) x m with positive subdiagonal.
inline Eigen::MatrixXd random_hessenberg(Eigen::Index m, std::mt19937_64& g) {
  Eigen::MatrixXd h = Eigen::MatrixXd::Zero(m + 1, m);
  std::normal_distribution<double> d(0.0, 1.0);
  std::uniform_real_distribution<double> pos(0.1, 2.0);
  for (Eigen::Index j = 0; j < m; ++j) {
    for (Eigen::Index i = 0; i <= j; ++i) h(i, j) = d(g);
    h(j + 1, j) = pos(g);
  }
  return h;
}

inline tkrylov::Tensor3 t_product_oracle(const tkrylov::Tensor3& a,
                                         const tkrylov::Tensor3& b) {
  return tkrylov::fold(tkrylov::bcirc(a) * tkrylov::unfold(b), a.n3());
}

/// DFT matrix with the kernel omega = e^{-2 pi i / n}, entry (j,k) = omega^{jk}.
inline Eigen::MatrixXcd dft_matrix(std::size_t n) {
  Eigen::MatrixXcd f(n, n);
  const std::complex<double> omega =
      std::exp(std::complex<double>(0.0, -2.0 * M_PI / static_cast<double>(n)));
  for (std::size_t j = 0; j < n; ++j)
    for (std::size_t k = 0; k < n; ++k)
      f(j, k) = std::pow(omega, static_cast<double>(j * k));
  return f;
}

inline Eigen::MatrixXcd kron_c(const Eigen::MatrixXcd& a,
                               const Eigen::MatrixXcd& b) {
  Eigen::MatrixXcd out(a.rows() * b.rows(), a.cols() * b.cols());
  for (Eigen::Index i = 0; i < a.rows(); ++i)
    for (Eigen::Index j = 0; j < a.cols(); ++j)
      out.block(i * b.rows(), j * b.cols(), b.rows(), b.cols()) = a(i, j) * b;
  return out;
}

/// GCV in its residual/trace form over the (m+1)-dimensional space,
/// with explicit inverses.
inline double gcv_trace_oracle(const Eigen::MatrixXd& h_tilde, double beta,
                               double mu) {
  const Eigen::Index m = h_tilde.cols();
  const Eigen::MatrixXd hmu = h_tilde.transpose() * h_tilde +
                              mu * mu * Eigen::MatrixXd::Identity(m, m);
  const Eigen::MatrixXd p =
      Eigen::MatrixXd::Identity(m + 1, m + 1) -
      h_tilde * hmu.inverse() * h_tilde.transpose();
  Eigen::VectorXd be1 = Eigen::VectorXd::Zero(m + 1);
  be1[0] = beta;
  const double tr = p.trace();
  return (p * be1).squaredNorm() / (tr * tr);
}

/// Tikhonov solve in the mu^2 convention: (K^T K + mu^2 I) x = K^T c.
inline Eigen::VectorXd tikhonov_mu2_oracle(const Eigen::MatrixXd& k,
                                           const Eigen::VectorXd& c,
                                           double mu) {
  const Eigen::MatrixXd a =
      k.transpose() * k +
      mu * mu * Eigen::MatrixXd::Identity(k.cols(), k.cols());
  return a.ldlt().solve(k.transpose() * c);
}

/// Tikhonov solve in the mu^{-1} convention: (K^T K + mu^{-1} I) x = K^T c.
inline Eigen::VectorXd tikhonov_inv_mu_oracle(const Eigen::MatrixXd& k,
                                              const Eigen::VectorXd& c,
                                              double mu) {
  const Eigen::MatrixXd a =
      k.transpose() * k +
      (1.0 / mu) * Eigen::MatrixXd::Identity(k.cols(), k.cols());
  return a.ldlt().solve(k.transpose() * c);
}

/// Squared residual of the dense mu^{-1}-Tikhonov solve, the quantity the
/// quadrature rules bracket.
inline double phi_dense_oracle(const Eigen::MatrixXd& k,
                               const Eigen::VectorXd& c, double mu) {
  const Eigen::VectorXd x = tikhonov_inv_mu_oracle(k, c, mu);
  return (k * x - c).squaredNorm();
}

/// Random (m+1) x m lower bidiagonal matrix with entries bounded away
/// from zero, the shape Golub-Kahan projections take.
inline Eigen::MatrixXd random_lower_bidiagonal(Eigen::Index m,
                                               std::mt19937_64& g) {
  std::uniform_real_distribution<double> diag(0.5, 2.0);
  std::uniform_real_distribution<double> sub(0.1, 1.5);
  Eigen::MatrixXd c = Eigen::MatrixXd::Zero(m + 1, m);
  for (Eigen::Index i = 0; i < m; ++i) {
    c(i, i) = diag(g);
    c(i + 1, i) = sub(g);
  }
  return c;
}

/// Orthonormality defect max |<V_i, V_j> - delta_ij|.
inline double orthonormality_defect(const tkrylov::SliceStack& v) {
  const Eigen::MatrixXd g = tkrylov::diamond(v, v);
  return (g - Eigen::MatrixXd::Identity(g.rows(), g.cols()))
      .cwiseAbs()
      .maxCoeff();
}

/// Gram-Schmidt orthonormalization of random blocks.
inline tkrylov::SliceStack random_orthonormal_stack(std::size_t count,
                                                    std::size_t n1,
                                                    std::size_t n2,
                                                    std::size_t n3,
                                                    std::mt19937_64& g) {
  tkrylov::SliceStack v;
  for (std::size_t b = 0; b < count; ++b) {
    tkrylov::Tensor3 t = random_tensor(n1, n2, n3, g);
    for (std::size_t i = 0; i < v.count(); ++i)
      t.flat() -= tkrylov::inner(v[i], t) * v[i].flat();
    v.push_back(t * (1.0 / tkrylov::frob_norm(t)));
  }
  return v;
}

inline double max_abs_diff(const tkrylov::Tensor3& a, const tkrylov::Tensor3& b) {
  return (a.flat() - b.flat()).abs().maxCoeff();
}

}  // namespace oracles
