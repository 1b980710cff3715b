#pragma once

#include <cstdint>
#include <map>
#include <set>
#include <span>
#include <string>
#include <vector>

#include "fran/error.hpp"
#include "fran/gf256.hpp"

namespace fran {

using Bytes = std::vector<std::uint8_t>;

// Systematic (H, r) MDS code over GF(2^8). The generator is [I_r ; C] with C
// an (H - r) x r Cauchy matrix, C[j][c] = 1 / (x_j + y_c), x_j = r + j and
// y_c = c, with each row then scaled so its first entry is 1 (for r = 1 this
// is plain repetition). Every square submatrix of a Cauchy matrix is
// invertible and row scaling keeps it so; hence any r generator rows are
// invertible and any r chunks recover the file.
class MdsCode {
 public:
  MdsCode(int H, int r) : H_(H), r_(r) {
    if (r < 1 || r > H) throw Error(Errc::InvalidConnectivity, "MDS code needs 1 <= r <= H");
    if (H > 255) throw Error(Errc::InvalidParams, "GF(2^8) MDS code supports at most 255 chunks");
    generator_.assign(H, std::vector<std::uint8_t>(r, 0));
    for (int c = 0; c < r; ++c) generator_[c][c] = 1;
    for (int j = 0; j < H - r; ++j)
      for (int c = 0; c < r; ++c)
        generator_[r + j][c] = gf256::inv(static_cast<std::uint8_t>((r + j) ^ c));
    for (int j = r; j < H; ++j) {
      const std::uint8_t scale = gf256::inv(generator_[j][0]);
      for (int c = 0; c < r; ++c) generator_[j][c] = gf256::mul(generator_[j][c], scale);
    }
  }

  int H() const { return H_; }
  int r() const { return r_; }
  const gf256::Matrix& generator() const { return generator_; }

  // Chunk i (1-based) is row i of the generator applied to the r subfiles.
  std::vector<Bytes> encode(std::span<const std::uint8_t> file) const {
    if (file.size() % static_cast<std::size_t>(r_) != 0)
      throw Error(Errc::SizeError, "file length " + std::to_string(file.size()) + " not divisible by r");
    const std::size_t chunk = file.size() / r_;
    std::vector<Bytes> chunks(H_, Bytes(chunk, 0));
    for (int i = 0; i < H_; ++i)
      for (int c = 0; c < r_; ++c)
        gf256::mul_add(chunks[i], file.subspan(c * chunk, chunk), generator_[i][c]);
    return chunks;
  }

  // `chunks` maps 1-based chunk index to bytes; exactly r distinct entries.
  Bytes decode(const std::map<int, Bytes>& chunks) const {
    if (static_cast<int>(chunks.size()) < r_)
      throw Error(Errc::InsufficientChunks,
                  "need " + std::to_string(r_) + " chunks, got " + std::to_string(chunks.size()));
    if (static_cast<int>(chunks.size()) > r_)
      throw Error(Errc::InvalidParams, "decode takes exactly r chunks");
    std::size_t chunk = chunks.begin()->second.size();
    gf256::Matrix sub;
    std::vector<const Bytes*> rows;
    for (const auto& [idx, bytes] : chunks) {
      if (idx < 1 || idx > H_) throw Error(Errc::IndexOutOfRange, "chunk index " + std::to_string(idx));
      if (bytes.size() != chunk) throw Error(Errc::SizeError, "chunks differ in length");
      sub.push_back(generator_[idx - 1]);
      rows.push_back(&bytes);
    }
    const gf256::Matrix dec = gf256::invert(std::move(sub));
    Bytes file(chunk * r_, 0);
    std::span<std::uint8_t> out(file);
    for (int c = 0; c < r_; ++c)
      for (int j = 0; j < r_; ++j) gf256::mul_add(out.subspan(c * chunk, chunk), *rows[j], dec[c][j]);
    return file;
  }

 private:
  int H_;
  int r_;
  gf256::Matrix generator_;
};

}  // namespace fran
