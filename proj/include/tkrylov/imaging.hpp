#pragma once

#include <Eigen/Dense>
#include <algorithm>
#include <array>
#include <cmath>
#include <cstdint>
#include <fstream>
#include <limits>
#include <random>
#include <stdexcept>
#include <string>
#include <vector>

#include "tensor.hpp"

namespace tkrylov {

/// Working-scale RGB image: three unclamped double planes, nominally in
/// [0,1]. Clamping happens only on export.
struct RgbImage {
  std::size_t n1 = 0, n2 = 0;
  std::array<Eigen::MatrixXd, 3> channel;

  RgbImage() = default;
  RgbImage(std::size_t rows, std::size_t cols) : n1(rows), n2(cols) {
    for (auto& c : channel) c = Eigen::MatrixXd::Zero(rows, cols);
  }
};

struct NoiseSpec {
  double nu = 0.0;
  std::uint64_t seed = 0;
};

struct NoiseResult {
  Tensor3 c;
  Tensor3 noise;
  double eps = 0.0;
};

/// Adds Gaussian noise scaled to an exact level: the perturbation is a
/// seeded standard-normal draw rescaled so that ||N|| = nu * ||C_hat||
/// holds to the last bit, making the returned eps usable directly as the
/// discrepancy bound.
inline NoiseResult add_noise(const Tensor3& c_hat, const NoiseSpec& spec) {
  if (spec.nu < 0.0) throw std::invalid_argument("add_noise: nu must be >= 0");
  NoiseResult out{c_hat, Tensor3(c_hat.n1(), c_hat.n2(), c_hat.n3()), 0.0};
  if (spec.nu == 0.0) return out;

  std::mt19937_64 rng(spec.seed);
  std::normal_distribution<double> dist(0.0, 1.0);
  for (std::size_t i = 0; i < out.noise.size(); ++i) out.noise.data()[i] = dist(rng);
  const double target = spec.nu * frob_norm(c_hat);
  out.noise *= target / frob_norm(out.noise);
  out.c += out.noise;
  out.eps = target;
  return out;
}

/// Signal-to-noise ratio in decibels against the reference x_hat, with the
/// scalar mean of x_hat as the gray level. Perfect restoration returns
/// +infinity.
inline double snr(const Tensor3& x_restored, const Tensor3& x_hat) {
  if (!x_restored.same_shape(x_hat))
    throw std::invalid_argument("snr: shape mismatch");
  const double mean = x_hat.flat().mean();
  const double signal = (x_hat.flat() - mean).matrix().squaredNorm();
  const double err = (x_restored.flat() - x_hat.flat()).matrix().squaredNorm();
  if (err == 0.0) return std::numeric_limits<double>::infinity();
  return 10.0 * std::log10(signal / err);
}

inline double relative_error(const Tensor3& x_restored, const Tensor3& x_hat) {
  if (!x_restored.same_shape(x_hat))
    throw std::invalid_argument("relative_error: shape mismatch");
  const double ref = frob_norm(x_hat);
  if (ref == 0.0) throw std::invalid_argument("relative_error: zero reference");
  return frob_norm(x_hat - x_restored) / ref;
}

namespace detail {

inline std::string next_ppm_token(std::istream& in) {
  std::string tok;
  int ch;
  while ((ch = in.get()) != EOF) {
    if (ch == '#') {
      while ((ch = in.get()) != EOF && ch != '\n') {
      }
      continue;
    }
    if (std::isspace(ch)) {
      if (!tok.empty()) return tok;
      continue;
    }
    tok.push_back(static_cast<char>(ch));
  }
  if (tok.empty()) throw std::runtime_error("ppm: truncated header");
  return tok;
}

}  // namespace detail

/// Binary P6 portable pixmap, maxval 255. Pixel rows run top to bottom.
inline RgbImage load_ppm(const std::string& path) {
  std::ifstream f(path, std::ios::binary);
  if (!f) throw std::runtime_error("load_ppm: cannot open " + path);
  if (detail::next_ppm_token(f) != "P6")
    throw std::runtime_error("load_ppm: not a P6 file: " + path);
  const std::size_t width = std::stoul(detail::next_ppm_token(f));
  const std::size_t height = std::stoul(detail::next_ppm_token(f));
  const std::size_t maxval = std::stoul(detail::next_ppm_token(f));
  if (width == 0 || height == 0)
    throw std::runtime_error("load_ppm: empty image in " + path);
  if (maxval != 255)
    throw std::runtime_error("load_ppm: only maxval 255 is supported");

  std::vector<unsigned char> raw(width * height * 3);
  f.read(reinterpret_cast<char*>(raw.data()),
         static_cast<std::streamsize>(raw.size()));
  if (!f) throw std::runtime_error("load_ppm: truncated payload in " + path);

  RgbImage img(height, width);
  std::size_t idx = 0;
  for (std::size_t i = 0; i < height; ++i)
    for (std::size_t j = 0; j < width; ++j)
      for (int k = 0; k < 3; ++k)
        img.channel[k](i, j) = raw[idx++] / 255.0;
  return img;
}

inline void save_ppm(const RgbImage& img, const std::string& path) {
  std::ofstream f(path, std::ios::binary);
  if (!f) throw std::runtime_error("save_ppm: cannot open " + path);
  f << "P6\n" << img.n2 << " " << img.n1 << "\n255\n";
  std::vector<unsigned char> raw;
  raw.reserve(img.n1 * img.n2 * 3);
  for (std::size_t i = 0; i < img.n1; ++i)
    for (std::size_t j = 0; j < img.n2; ++j)
      for (int k = 0; k < 3; ++k) {
        const double v = std::clamp(img.channel[k](i, j), 0.0, 1.0);
        raw.push_back(static_cast<unsigned char>(std::lround(v * 255.0)));
      }
  f.write(reinterpret_cast<const char*>(raw.data()),
          static_cast<std::streamsize>(raw.size()));
  if (!f) throw std::runtime_error("save_ppm: write failed for " + path);
}

inline Tensor3 image_to_tensor(const RgbImage& img) {
  Tensor3 t(img.n1, img.n2, 3);
  for (int k = 0; k < 3; ++k) t.slice(k) = img.channel[k];
  return t;
}

inline RgbImage tensor_to_image(const Tensor3& t) {
  if (t.n3() != 3)
    throw std::invalid_argument("tensor_to_image: expected 3 frontal slices");
  RgbImage img(t.n1(), t.n2());
  for (int k = 0; k < 3; ++k) img.channel[k] = t.slice(k);
  return img;
}

/// Stacks RGB frames along mode 3, frame-major and channel-minor: channel
/// k of frame f lands in slice 3*f + k (zero-based).
inline Tensor3 frames_to_tensor(const std::vector<RgbImage>& frames) {
  if (frames.empty())
    throw std::invalid_argument("frames_to_tensor: no frames");
  const std::size_t n1 = frames[0].n1, n2 = frames[0].n2;
  Tensor3 t(n1, n2, 3 * frames.size());
  for (std::size_t f = 0; f < frames.size(); ++f) {
    if (frames[f].n1 != n1 || frames[f].n2 != n2)
      throw std::invalid_argument("frames_to_tensor: inconsistent frame sizes");
    for (int k = 0; k < 3; ++k) t.slice(3 * f + k) = frames[f].channel[k];
  }
  return t;
}

inline std::vector<RgbImage> tensor_to_frames(const Tensor3& t) {
  if (t.n3() % 3 != 0)
    throw std::invalid_argument("tensor_to_frames: slice count not a multiple of 3");
  std::vector<RgbImage> frames(t.n3() / 3, RgbImage(t.n1(), t.n2()));
  for (std::size_t f = 0; f < frames.size(); ++f)
    for (int k = 0; k < 3; ++k) frames[f].channel[k] = t.slice(3 * f + k);
  return frames;
}

enum class SynthKind { checker, gradient, disks };

inline SynthKind synth_kind_from_string(const std::string& s) {
  if (s == "checker") return SynthKind::checker;
  if (s == "gradient") return SynthKind::gradient;
  if (s == "disks") return SynthKind::disks;
  throw std::invalid_argument("unknown synthetic image kind: " + s);
}

/// Deterministic structured test images with inter-channel variation.
/// checker: 0/1 blocks of side max(1, n/8), phase-shifted per channel.
/// gradient: per-channel linear ramps. disks: seeded random soft disks on
/// a gray background.
inline RgbImage synth_image(SynthKind kind, std::size_t n, std::uint64_t seed) {
  if (n < 8) throw std::invalid_argument("synth_image: n must be >= 8");
  RgbImage img(n, n);
  switch (kind) {
    case SynthKind::checker: {
      const std::size_t b = std::max<std::size_t>(1, n / 8);
      for (int k = 0; k < 3; ++k)
        for (std::size_t i = 0; i < n; ++i)
          for (std::size_t j = 0; j < n; ++j)
            img.channel[k](i, j) =
                static_cast<double>((i / b + j / b + k) % 2);
      break;
    }
    case SynthKind::gradient: {
      const double d = static_cast<double>(n - 1);
      for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j) {
          img.channel[0](i, j) = i / d;
          img.channel[1](i, j) = j / d;
          img.channel[2](i, j) = (i + j) / (2.0 * d);
        }
      break;
    }
    case SynthKind::disks: {
      std::mt19937_64 rng(seed);
      std::uniform_real_distribution<double> unit(0.0, 1.0);
      for (int k = 0; k < 3; ++k) img.channel[k].setConstant(0.2);
      for (int d = 0; d < 8; ++d) {
        const double ci = unit(rng) * n;
        const double cj = unit(rng) * n;
        const double rad = (0.08 + 0.15 * unit(rng)) * n;
        std::array<double, 3> amp;
        for (auto& a : amp) a = 0.2 + 0.6 * unit(rng);
        for (std::size_t i = 0; i < n; ++i)
          for (std::size_t j = 0; j < n; ++j) {
            const double dist = std::hypot(i - ci, j - cj);
            if (dist < rad) {
              const double w = 1.0 - (dist / rad) * (dist / rad);
              for (int k = 0; k < 3; ++k)
                img.channel[k](i, j) =
                    std::max(img.channel[k](i, j), amp[k] * w);
            }
          }
      }
      break;
    }
  }
  return img;
}

}  // namespace tkrylov
