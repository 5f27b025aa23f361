#pragma once

#include <fftw3.h>

#include <Eigen/Dense>
#include <complex>
#include <map>
#include <mutex>
#include <stdexcept>
#include <tuple>
#include <vector>

#include "tensor.hpp"

namespace tkrylov {

/// Complex-valued companion of Tensor3 holding mode-3 DFT images. Same
/// layout contract: frontal-slice major, column-major slices, tube stride
/// n1*n2. Slice k of dft_mode3(A) is the k-th diagonal block of the
/// DFT-diagonalized block circulant of A.
class SpectralTensor3 {
 public:
  SpectralTensor3() = default;

  SpectralTensor3(std::size_t n1, std::size_t n2, std::size_t n3)
      : n1_(n1), n2_(n2), n3_(n3), data_(n1 * n2 * n3, {0.0, 0.0}) {
    if (n1 == 0 || n2 == 0 || n3 == 0)
      throw std::invalid_argument("SpectralTensor3: dimensions must be positive");
  }

  std::size_t n1() const { return n1_; }
  std::size_t n2() const { return n2_; }
  std::size_t n3() const { return n3_; }

  const std::complex<double>* data() const { return data_.data(); }
  std::complex<double>* data() { return data_.data(); }

  Eigen::Map<const Eigen::MatrixXcd> slice(std::size_t k) const {
    return {data_.data() + k * n1_ * n2_, static_cast<Eigen::Index>(n1_),
            static_cast<Eigen::Index>(n2_)};
  }
  Eigen::Map<Eigen::MatrixXcd> slice(std::size_t k) {
    return {data_.data() + k * n1_ * n2_, static_cast<Eigen::Index>(n1_),
            static_cast<Eigen::Index>(n2_)};
  }

 private:
  std::size_t n1_ = 0, n2_ = 0, n3_ = 0;
  std::vector<std::complex<double>> data_;
};

namespace detail {

/// In-place complex FFT along mode 3 (tube stride n1*n2). Plans are cached
/// for the process lifetime keyed by shape and direction; FFTW planning is
/// serialized behind a mutex while execution runs unlocked, which FFTW
/// permits via the new-array execute interface.
inline void fft_mode3_inplace(std::complex<double>* buf, std::size_t n1n2,
                              std::size_t n3, int sign) {
  static std::map<std::tuple<std::size_t, std::size_t, int>, fftw_plan> cache;
  static std::mutex plan_mutex;

  auto* p = reinterpret_cast<fftw_complex*>(buf);
  fftw_plan plan = nullptr;
  {
    std::lock_guard<std::mutex> lock(plan_mutex);
    const auto key = std::make_tuple(n1n2, n3, sign);
    auto it = cache.find(key);
    if (it != cache.end()) {
      plan = it->second;
    } else {
      int n = static_cast<int>(n3);
      plan = fftw_plan_many_dft(1, &n, static_cast<int>(n1n2), p, nullptr,
                                static_cast<int>(n1n2), 1, p, nullptr,
                                static_cast<int>(n1n2), 1, sign,
                                FFTW_ESTIMATE | FFTW_UNALIGNED);
      if (!plan) throw std::runtime_error("fft_mode3: plan creation failed");
      cache.emplace(key, plan);
    }
  }
  fftw_execute_dft(plan, p, p);
}

}  // namespace detail

/// Forward DFT along every mode-3 tube (unnormalized, kernel e^{-2*pi*i/n3}).
inline SpectralTensor3 dft_mode3(const Tensor3& a) {
  SpectralTensor3 out(a.n1(), a.n2(), a.n3());
  for (std::size_t idx = 0; idx < a.size(); ++idx)
    out.data()[idx] = {a.data()[idx], 0.0};
  detail::fft_mode3_inplace(out.data(), a.n1() * a.n2(), a.n3(), FFTW_FORWARD);
  return out;
}

/// Inverse DFT along mode-3 tubes, scaled by 1/n3. The input must carry the
/// conjugate symmetry of a real tensor's spectrum; the imaginary residue is
/// discarded.
inline Tensor3 idft_mode3(const SpectralTensor3& a) {
  std::vector<std::complex<double>> buf(a.data(),
                                        a.data() + a.n1() * a.n2() * a.n3());
  detail::fft_mode3_inplace(buf.data(), a.n1() * a.n2(), a.n3(), FFTW_BACKWARD);
  Tensor3 out(a.n1(), a.n2(), a.n3());
  const double scale = 1.0 / static_cast<double>(a.n3());
  for (std::size_t idx = 0; idx < out.size(); ++idx)
    out.data()[idx] = buf[idx].real() * scale;
  return out;
}

/// Slice-wise spectral product. Only slices 0..floor(n3/2) are multiplied;
/// the rest are filled by conjugate symmetry, which holds whenever both
/// factors are spectra of real tensors.
inline SpectralTensor3 spectral_product(const SpectralTensor3& a,
                                        const SpectralTensor3& b) {
  if (a.n2() != b.n1() || a.n3() != b.n3())
    throw std::invalid_argument("spectral_product: shape mismatch");
  const std::size_t n3 = a.n3();
  SpectralTensor3 c(a.n1(), b.n2(), n3);
  const std::size_t half = n3 / 2;
  for (std::size_t k = 0; k <= half; ++k) c.slice(k) = a.slice(k) * b.slice(k);
  for (std::size_t k = half + 1; k < n3; ++k)
    c.slice(k) = c.slice(n3 - k).conjugate();
  return c;
}

/// T-product of two real tensors via mode-3 DFT diagonalization. Equals
/// fold(bcirc(a) * unfold(b)).
inline Tensor3 t_product(const Tensor3& a, const Tensor3& b) {
  if (a.n2() != b.n1() || a.n3() != b.n3())
    throw std::invalid_argument("t_product: shape mismatch");
  return idft_mode3(spectral_product(dft_mode3(a), dft_mode3(b)));
}

/// T-product with the left factor's spectrum precomputed. Used by operator
/// application loops where the same tensor multiplies many operands.
inline Tensor3 t_product_cached(const SpectralTensor3& a_hat, const Tensor3& b) {
  if (a_hat.n2() != b.n1() || a_hat.n3() != b.n3())
    throw std::invalid_argument("t_product_cached: shape mismatch");
  return idft_mode3(spectral_product(a_hat, dft_mode3(b)));
}

/// T-product with the right factor's spectrum precomputed.
inline Tensor3 t_product_cached_right(const Tensor3& a,
                                      const SpectralTensor3& b_hat) {
  if (a.n2() != b_hat.n1() || a.n3() != b_hat.n3())
    throw std::invalid_argument("t_product_cached_right: shape mismatch");
  return idft_mode3(spectral_product(dft_mode3(a), b_hat));
}

}  // namespace tkrylov
