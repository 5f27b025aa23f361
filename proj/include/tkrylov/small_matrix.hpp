#pragma once

#include <Eigen/Dense>
#include <cmath>
#include <cstddef>
#include <stdexcept>

namespace tkrylov {

/// QR factorization of an (m+1) x m upper Hessenberg matrix by a sweep of
/// m Givens rotations. q is (m+1) x (m+1) orthogonal, r is (m+1) x m upper
/// triangular with a zero last row, and h = q * r.
///
/// rotation_ops counts individual 2x2 rotation applications; it grows
/// quadratically in m, never worse, and exists so tests can pin the cost.
struct HessenbergQr {
  Eigen::MatrixXd q;
  Eigen::MatrixXd r;
  std::size_t rotation_ops = 0;
};

inline HessenbergQr qr_hessenberg(const Eigen::MatrixXd& h) {
  const Eigen::Index m = h.cols();
  if (h.rows() != m + 1)
    throw std::invalid_argument("qr_hessenberg: expected (m+1) x m input");
  for (Eigen::Index j = 0; j + 2 < h.rows(); ++j)
    if (h.col(j).tail(h.rows() - j - 2).cwiseAbs().maxCoeff() != 0.0)
      throw std::invalid_argument("qr_hessenberg: input is not upper Hessenberg");

  HessenbergQr out;
  out.r = h;
  out.q = Eigen::MatrixXd::Identity(m + 1, m + 1);
  for (Eigen::Index j = 0; j < m; ++j) {
    const double a = out.r(j, j);
    const double b = out.r(j + 1, j);
    const double rad = std::hypot(a, b);
    if (rad == 0.0) continue;
    const double c = a / rad;
    const double s = b / rad;
    for (Eigen::Index k = j; k < m; ++k) {
      const double t0 = out.r(j, k);
      const double t1 = out.r(j + 1, k);
      out.r(j, k) = c * t0 + s * t1;
      out.r(j + 1, k) = -s * t0 + c * t1;
      ++out.rotation_ops;
    }
    for (Eigen::Index k = 0; k <= m; ++k) {
      const double t0 = out.q(k, j);
      const double t1 = out.q(k, j + 1);
      out.q(k, j) = c * t0 + s * t1;
      out.q(k, j + 1) = -s * t0 + c * t1;
      ++out.rotation_ops;
    }
    out.r(j + 1, j) = 0.0;
  }
  return out;
}

/// Thin wrapper over a one-sided Jacobi SVD with full factors. Sized for
/// projected matrices (dimensions in the tens), where Jacobi's singular
/// value accuracy matters more than speed.
struct SvdSmall {
  Eigen::MatrixXd u;
  Eigen::VectorXd s;
  Eigen::MatrixXd v;
};

inline SvdSmall svd_small(const Eigen::MatrixXd& a) {
  Eigen::JacobiSVD<Eigen::MatrixXd> svd(a, Eigen::ComputeFullU | Eigen::ComputeFullV);
  return {svd.matrixU(), svd.singularValues(), svd.matrixV()};
}

/// Least-squares solve of an overdetermined system by Householder QR.
/// Throws when the triangular factor signals rank deficiency.
inline Eigen::VectorXd lsq_tall(const Eigen::MatrixXd& a, const Eigen::VectorXd& b) {
  if (a.rows() < a.cols())
    throw std::invalid_argument("lsq_tall: system must have rows >= cols");
  if (a.rows() != b.size())
    throw std::invalid_argument("lsq_tall: dimension mismatch");
  Eigen::HouseholderQR<Eigen::MatrixXd> qr(a);
  const double scale = a.norm();
  const auto r_diag = qr.matrixQR().diagonal().head(a.cols());
  if ((r_diag.cwiseAbs().array() < 1e-14 * scale).any())
    throw std::runtime_error("lsq_tall: matrix is numerically rank deficient");
  return qr.solve(b);
}

}  // namespace tkrylov
