#pragma once

#include <bit>
#include <cstdint>
#include <cstring>
#include <fstream>
#include <stdexcept>
#include <string>

#include "tensor.hpp"

namespace tkrylov {

static_assert(std::endian::native == std::endian::little,
              "T3 I/O assumes a little-endian host");

/// Binary tensor container. Layout: magic "T3TN", then n1, n2, n3 as
/// little-endian uint64, then n1*n2*n3 doubles in storage order
/// (frontal-slice major, column-major slices).
inline void save_t3(const std::string& path, const Tensor3& t) {
  std::ofstream f(path, std::ios::binary);
  if (!f) throw std::runtime_error("save_t3: cannot open " + path);
  f.write("T3TN", 4);
  const std::uint64_t dims[3] = {t.n1(), t.n2(), t.n3()};
  f.write(reinterpret_cast<const char*>(dims), sizeof(dims));
  f.write(reinterpret_cast<const char*>(t.data()),
          static_cast<std::streamsize>(t.size() * sizeof(double)));
  if (!f) throw std::runtime_error("save_t3: write failed for " + path);
}

inline Tensor3 load_t3(const std::string& path) {
  std::ifstream f(path, std::ios::binary);
  if (!f) throw std::runtime_error("load_t3: cannot open " + path);
  char magic[4];
  f.read(magic, 4);
  if (!f || std::memcmp(magic, "T3TN", 4) != 0)
    throw std::runtime_error("load_t3: bad magic in " + path);
  std::uint64_t dims[3];
  f.read(reinterpret_cast<char*>(dims), sizeof(dims));
  if (!f) throw std::runtime_error("load_t3: truncated header in " + path);
  if (dims[0] == 0 || dims[1] == 0 || dims[2] == 0 ||
      dims[0] * dims[1] * dims[2] > (1ull << 32))
    throw std::runtime_error("load_t3: implausible dimensions in " + path);
  Tensor3 t(dims[0], dims[1], dims[2]);
  f.read(reinterpret_cast<char*>(t.data()),
         static_cast<std::streamsize>(t.size() * sizeof(double)));
  if (!f) throw std::runtime_error("load_t3: truncated payload in " + path);
  return t;
}

}  // namespace tkrylov
