#pragma once

#include <Eigen/Dense>
#include <cstddef>
#include <stdexcept>
#include <utility>
#include <vector>

namespace tkrylov {

/// Dense real third-order tensor of shape n1 x n2 x n3.
///
/// Storage is a single contiguous array of doubles, frontal-slice major:
/// entry (i,j,k) lives at k*n1*n2 + j*n1 + i, so each frontal slice is a
/// contiguous column-major n1 x n2 matrix and mode-3 tubes are strided by
/// n1*n2. Values are immutable by convention once an operation has
/// produced them; all free functions below are pure.
class Tensor3 {
 public:
  Tensor3() = default;

  /// Zero tensor of the given shape.
  Tensor3(std::size_t n1, std::size_t n2, std::size_t n3)
      : n1_(n1), n2_(n2), n3_(n3), data_(n1 * n2 * n3, 0.0) {
    if (n1 == 0 || n2 == 0 || n3 == 0)
      throw std::invalid_argument("Tensor3: dimensions must be positive");
  }

  std::size_t n1() const { return n1_; }
  std::size_t n2() const { return n2_; }
  std::size_t n3() const { return n3_; }
  std::size_t size() const { return data_.size(); }

  double operator()(std::size_t i, std::size_t j, std::size_t k) const {
    return data_[k * n1_ * n2_ + j * n1_ + i];
  }
  double& operator()(std::size_t i, std::size_t j, std::size_t k) {
    return data_[k * n1_ * n2_ + j * n1_ + i];
  }

  const double* data() const { return data_.data(); }
  double* data() { return data_.data(); }

  /// Frontal slice k as a column-major matrix view (no copy).
  Eigen::Map<const Eigen::MatrixXd> slice(std::size_t k) const {
    return {data_.data() + k * n1_ * n2_, static_cast<Eigen::Index>(n1_),
            static_cast<Eigen::Index>(n2_)};
  }
  Eigen::Map<Eigen::MatrixXd> slice(std::size_t k) {
    return {data_.data() + k * n1_ * n2_, static_cast<Eigen::Index>(n1_),
            static_cast<Eigen::Index>(n2_)};
  }

  /// Whole tensor as a flat array view.
  Eigen::Map<const Eigen::ArrayXd> flat() const {
    return {data_.data(), static_cast<Eigen::Index>(data_.size())};
  }
  Eigen::Map<Eigen::ArrayXd> flat() {
    return {data_.data(), static_cast<Eigen::Index>(data_.size())};
  }

  bool same_shape(const Tensor3& other) const {
    return n1_ == other.n1_ && n2_ == other.n2_ && n3_ == other.n3_;
  }

  Tensor3& operator+=(const Tensor3& rhs) {
    require_same_shape(rhs);
    flat() += rhs.flat();
    return *this;
  }
  Tensor3& operator-=(const Tensor3& rhs) {
    require_same_shape(rhs);
    flat() -= rhs.flat();
    return *this;
  }
  Tensor3& operator*=(double s) {
    flat() *= s;
    return *this;
  }

  friend Tensor3 operator+(Tensor3 lhs, const Tensor3& rhs) { return lhs += rhs; }
  friend Tensor3 operator-(Tensor3 lhs, const Tensor3& rhs) { return lhs -= rhs; }
  friend Tensor3 operator*(Tensor3 t, double s) { return t *= s; }
  friend Tensor3 operator*(double s, Tensor3 t) { return t *= s; }

 private:
  void require_same_shape(const Tensor3& other) const {
    if (!same_shape(other))
      throw std::invalid_argument("Tensor3: shape mismatch");
  }

  std::size_t n1_ = 0, n2_ = 0, n3_ = 0;
  std::vector<double> data_;
};

/// Identity tensor: first frontal slice is I_n, remaining p-1 slices zero.
inline Tensor3 identity_tensor(std::size_t n, std::size_t p) {
  Tensor3 id(n, n, p);
  id.slice(0).setIdentity();
  return id;
}

/// Scalar inner product: sum of elementwise products.
inline double inner(const Tensor3& a, const Tensor3& b) {
  if (!a.same_shape(b))
    throw std::invalid_argument("inner: shape mismatch");
  return (a.flat() * b.flat()).sum();
}

inline double frob_norm(const Tensor3& a) {
  return a.flat().matrix().norm();
}

/// Stacks the frontal slices vertically into an (n1*n3) x n2 matrix.
inline Eigen::MatrixXd unfold(const Tensor3& a) {
  Eigen::MatrixXd m(a.n1() * a.n3(), a.n2());
  for (std::size_t k = 0; k < a.n3(); ++k)
    m.middleRows(k * a.n1(), a.n1()) = a.slice(k);
  return m;
}

/// Inverse of unfold: reinterprets an (n1*n3) x n2 matrix as an
/// n1 x n2 x n3 tensor. Row count must be divisible by n3.
inline Tensor3 fold(const Eigen::MatrixXd& m, std::size_t n3) {
  if (n3 == 0 || m.rows() % static_cast<Eigen::Index>(n3) != 0)
    throw std::invalid_argument("fold: row count not divisible by n3");
  const std::size_t n1 = m.rows() / n3;
  Tensor3 a(n1, m.cols(), n3);
  for (std::size_t k = 0; k < n3; ++k)
    a.slice(k) = m.middleRows(k * n1, n1);
  return a;
}

/// Block-circulant matrix of the frontal slices: block (r,c) holds slice
/// (r - c) mod n3, so the first block column stacks A_1..A_{n3}.
///
/// This is a test/oracle utility with quadratic blow-up in n3; it refuses
/// element counts above 1e7 unless force is set. Solver paths must never
/// call it.
inline Eigen::MatrixXd bcirc(const Tensor3& a, bool force = false) {
  const double elems = static_cast<double>(a.n1()) * a.n2() * a.n3() * a.n3();
  if (elems > 1e7 && !force)
    throw std::invalid_argument("bcirc: size guard exceeded (pass force to override)");
  Eigen::MatrixXd m(a.n1() * a.n3(), a.n2() * a.n3());
  for (std::size_t c = 0; c < a.n3(); ++c)
    for (std::size_t r = 0; r < a.n3(); ++r)
      m.block(r * a.n1(), c * a.n2(), a.n1(), a.n2()) =
          a.slice((r + a.n3() - c) % a.n3());
  return m;
}

/// Tensor transpose: transposes every frontal slice and reverses the order
/// of slices 2..n3. Satisfies bcirc(t_transpose(a)) = bcirc(a)^T.
inline Tensor3 t_transpose(const Tensor3& a) {
  Tensor3 at(a.n2(), a.n1(), a.n3());
  at.slice(0) = a.slice(0).transpose();
  for (std::size_t k = 1; k < a.n3(); ++k)
    at.slice(k) = a.slice(a.n3() - k).transpose();
  return at;
}

/// Ordered list of same-shape tensor blocks. Carries Krylov bases, whose
/// blocks are pairwise orthonormal under the scalar inner product.
class SliceStack {
 public:
  SliceStack() = default;

  std::size_t count() const { return blocks_.size(); }
  bool empty() const { return blocks_.empty(); }

  const Tensor3& operator[](std::size_t i) const { return blocks_[i]; }

  void push_back(Tensor3 block) {
    if (!blocks_.empty() && !blocks_.front().same_shape(block))
      throw std::invalid_argument("SliceStack: block shape mismatch");
    blocks_.push_back(std::move(block));
  }

  const std::vector<Tensor3>& blocks() const { return blocks_; }

 private:
  std::vector<Tensor3> blocks_;
};

/// Linear combination of the stack blocks by a coefficient vector:
/// sum_j y_j V_j. Coefficient length must equal the block count.
inline Tensor3 stack_combine(const SliceStack& v, const Eigen::VectorXd& y) {
  if (static_cast<std::size_t>(y.size()) != v.count())
    throw std::invalid_argument("stack_combine: coefficient length mismatch");
  if (v.empty())
    throw std::invalid_argument("stack_combine: empty stack");
  Tensor3 out(v[0].n1(), v[0].n2(), v[0].n3());
  for (std::size_t j = 0; j < v.count(); ++j)
    if (y[j] != 0.0) out.flat() += y[j] * v[j].flat();
  return out;
}

/// Column-wise combination: block j of the result is the combination of v
/// by the j-th column of m. Satisfies (v (*) m) (*) u = v (*) (m u).
inline SliceStack stack_combine_matrix(const SliceStack& v,
                                       const Eigen::MatrixXd& m) {
  if (static_cast<std::size_t>(m.rows()) != v.count())
    throw std::invalid_argument("stack_combine_matrix: row count mismatch");
  SliceStack out;
  for (Eigen::Index j = 0; j < m.cols(); ++j)
    out.push_back(stack_combine(v, m.col(j)));
  return out;
}

/// Gram-style product of two stacks: entry (i,j) is <A_i, B_j>.
inline Eigen::MatrixXd diamond(const SliceStack& a, const SliceStack& b) {
  if (!a.empty() && !b.empty() && !a[0].same_shape(b[0]))
    throw std::invalid_argument("diamond: block shape mismatch");
  Eigen::MatrixXd g(a.count(), b.count());
  for (std::size_t i = 0; i < a.count(); ++i)
    for (std::size_t j = 0; j < b.count(); ++j)
      g(i, j) = inner(a[i], b[j]);
  return g;
}

/// 2x2 block tensor: composes the frontal slices of the four parts as
/// [tl tr; bl br]. Shapes must conform slice-wise and share n3.
inline Tensor3 block_concat(const Tensor3& tl, const Tensor3& tr,
                            const Tensor3& bl, const Tensor3& br) {
  if (tl.n3() != tr.n3() || tl.n3() != bl.n3() || tl.n3() != br.n3())
    throw std::invalid_argument("block_concat: n3 mismatch");
  if (tl.n1() != tr.n1() || bl.n1() != br.n1() || tl.n2() != bl.n2() ||
      tr.n2() != br.n2())
    throw std::invalid_argument("block_concat: nonconforming block shapes");
  Tensor3 out(tl.n1() + bl.n1(), tl.n2() + tr.n2(), tl.n3());
  for (std::size_t k = 0; k < out.n3(); ++k) {
    auto s = out.slice(k);
    s.topLeftCorner(tl.n1(), tl.n2()) = tl.slice(k);
    s.topRightCorner(tr.n1(), tr.n2()) = tr.slice(k);
    s.bottomLeftCorner(bl.n1(), bl.n2()) = bl.slice(k);
    s.bottomRightCorner(br.n1(), br.n2()) = br.slice(k);
  }
  return out;
}

}  // namespace tkrylov
