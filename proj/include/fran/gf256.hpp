#pragma once

#include <array>
#include <cstdint>
#include <span>
#include <stdexcept>
#include <vector>

namespace fran::gf256 {

// GF(2^8) with the primitive polynomial x^8 + x^4 + x^3 + x^2 + 1 (0x11d).
struct Tables {
  std::array<std::uint8_t, 512> exp{};
  std::array<int, 256> log{};

  Tables() {
    int x = 1;
    for (int i = 0; i < 255; ++i) {
      exp[i] = static_cast<std::uint8_t>(x);
      log[x] = i;
      x <<= 1;
      if (x & 0x100) x ^= 0x11d;
    }
    for (int i = 255; i < 512; ++i) exp[i] = exp[i - 255];
    log[0] = -1;
  }
};

inline const Tables& tables() {
  static const Tables t;
  return t;
}

inline std::uint8_t add(std::uint8_t a, std::uint8_t b) { return a ^ b; }

inline std::uint8_t mul(std::uint8_t a, std::uint8_t b) {
  if (a == 0 || b == 0) return 0;
  const auto& t = tables();
  return t.exp[t.log[a] + t.log[b]];
}

inline std::uint8_t inv(std::uint8_t a) {
  if (a == 0) throw std::domain_error("gf256: inverse of zero");
  const auto& t = tables();
  return t.exp[255 - t.log[a]];
}

inline std::uint8_t div(std::uint8_t a, std::uint8_t b) { return mul(a, inv(b)); }

// dst ^= coeff * src
inline void mul_add(std::span<std::uint8_t> dst, std::span<const std::uint8_t> src, std::uint8_t coeff) {
  if (coeff == 0) return;
  if (coeff == 1) {
    for (std::size_t j = 0; j < dst.size(); ++j) dst[j] ^= src[j];
    return;
  }
  const auto& t = tables();
  const int lc = t.log[coeff];
  for (std::size_t j = 0; j < dst.size(); ++j)
    if (src[j]) dst[j] ^= t.exp[t.log[src[j]] + lc];
}

// Row-major square matrix.
using Matrix = std::vector<std::vector<std::uint8_t>>;

// Gauss-Jordan inverse; throws std::domain_error when singular.
inline Matrix invert(Matrix a) {
  const std::size_t n = a.size();
  Matrix out(n, std::vector<std::uint8_t>(n, 0));
  for (std::size_t i = 0; i < n; ++i) out[i][i] = 1;
  for (std::size_t col = 0; col < n; ++col) {
    std::size_t pivot = col;
    while (pivot < n && a[pivot][col] == 0) ++pivot;
    if (pivot == n) throw std::domain_error("gf256: singular matrix");
    std::swap(a[pivot], a[col]);
    std::swap(out[pivot], out[col]);
    const std::uint8_t scale = inv(a[col][col]);
    for (std::size_t j = 0; j < n; ++j) {
      a[col][j] = mul(a[col][j], scale);
      out[col][j] = mul(out[col][j], scale);
    }
    for (std::size_t row = 0; row < n; ++row) {
      if (row == col || a[row][col] == 0) continue;
      const std::uint8_t f = a[row][col];
      for (std::size_t j = 0; j < n; ++j) {
        a[row][j] ^= mul(f, a[col][j]);
        out[row][j] ^= mul(f, out[col][j]);
      }
    }
  }
  return out;
}

}  // namespace fran::gf256
