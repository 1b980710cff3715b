#pragma once

#include <algorithm>
#include <compare>
#include <cstdint>
#include <filesystem>
#include <fstream>
#include <map>
#include <random>
#include <span>
#include <string>
#include <vector>

#include "fran/combinatorics.hpp"
#include "fran/error.hpp"
#include "fran/mds.hpp"
#include "fran/topology.hpp"

namespace fran {

// Address of f^i_{n,T}: piece T of coded chunk i of file n.
struct PieceId {
  int n = 0;
  int i = 0;
  Subset T;

  auto operator<=>(const PieceId&) const = default;
  bool operator==(const PieceId&) const = default;
};

inline std::string to_string(const PieceId& id) {
  return "f^" + std::to_string(id.i) + "_{" + std::to_string(id.n) + ",{" + subset_string(id.T) + "}}";
}

struct PiecePayload {
  PieceId id;
  Bytes bytes;
};

// W_1..W_N, all of one length. original_sizes keeps pre-padding lengths so
// ingested files of different sizes round-trip exactly.
struct FileLibrary {
  enum class Origin { Pseudorandom, Directory };

  std::vector<Bytes> files;
  std::vector<std::int64_t> original_sizes;
  Origin origin = Origin::Pseudorandom;
  std::uint64_t seed = 0;

  int N() const { return static_cast<int>(files.size()); }
  std::int64_t file_size() const { return files.empty() ? 0 : static_cast<std::int64_t>(files.front().size()); }

  static FileLibrary pseudorandom(int N, std::int64_t F, std::uint64_t seed) {
    FileLibrary lib;
    lib.origin = Origin::Pseudorandom;
    lib.seed = seed;
    std::mt19937_64 rng(seed);
    lib.files.assign(N, Bytes(static_cast<std::size_t>(F)));
    for (auto& f : lib.files) {
      for (std::size_t j = 0; j < f.size(); j += 8) {
        std::uint64_t word = rng();
        for (std::size_t b = 0; b < 8 && j + b < f.size(); ++b) f[j + b] = static_cast<std::uint8_t>(word >> (8 * b));
      }
    }
    lib.original_sizes.assign(N, F);
    return lib;
  }

  // Regular files of `dir` in name order; shorter ones are zero-padded to the
  // longest.
  static FileLibrary from_directory(const std::filesystem::path& dir) {
    namespace fs = std::filesystem;
    if (!fs::is_directory(dir)) throw Error(Errc::IoError, "not a directory: " + dir.string());
    std::vector<fs::path> paths;
    for (const auto& entry : fs::directory_iterator(dir))
      if (entry.is_regular_file()) paths.push_back(entry.path());
    std::sort(paths.begin(), paths.end());
    FileLibrary lib;
    lib.origin = Origin::Directory;
    std::size_t longest = 0;
    for (const auto& p : paths) {
      std::ifstream in(p, std::ios::binary);
      if (!in) throw Error(Errc::IoError, "cannot read " + p.string());
      Bytes data((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
      longest = std::max(longest, data.size());
      lib.original_sizes.push_back(static_cast<std::int64_t>(data.size()));
      lib.files.push_back(std::move(data));
    }
    for (auto& f : lib.files) f.resize(longest, 0);
    return lib;
  }
};

// Smallest multiple of r * C(L, t) that holds F bytes.
inline std::int64_t padded_file_size(std::int64_t F, int r, int L, int t) {
  const std::int64_t unit = r * binomial(L, t);
  return (F + unit - 1) / unit * unit;
}

// Splits a chunk into C(L, t) equal pieces keyed by t-subsets of [L]; map
// order is lexicographic, and concatenating in that order gives the chunk.
inline std::map<Subset, Bytes> subpacketize(std::span<const std::uint8_t> chunk, int L, int t) {
  const auto keys = k_subsets(L, t);
  if (keys.empty() || chunk.size() % keys.size() != 0)
    throw Error(Errc::SizeError, "chunk of " + std::to_string(chunk.size()) + " bytes does not split into C(" +
                                     std::to_string(L) + "," + std::to_string(t) + ") pieces");
  const std::size_t size = chunk.size() / keys.size();
  std::map<Subset, Bytes> out;
  for (std::size_t j = 0; j < keys.size(); ++j)
    out.emplace(keys[j], Bytes(chunk.begin() + j * size, chunk.begin() + (j + 1) * size));
  return out;
}

// Placement rule: user k keeps f^i_{n,T} iff EN i serves k and Index(i,k) is in T.
inline bool caches_piece(const Topology& topo, int k, int i, const Subset& T) {
  auto idx = topo.index_of(i, k);
  return idx && contains(T, *idx);
}

// The cloud's coded, subpacketized library: every f^i_{n,T}.
struct Placement {
  NetworkParams params;
  int t = 0;
  std::int64_t padded_size = 0;
  std::size_t piece_size = 0;
  std::vector<std::int64_t> original_sizes;
  std::map<PieceId, Bytes> pieces;
};

// What a user needs to know about the code, without the library itself.
struct CodeLayout {
  int H = 0;
  int r = 0;
  int t = 0;
  std::size_t piece_size = 0;
  std::int64_t padded_size = 0;
  std::vector<std::int64_t> original_sizes;
};

inline CodeLayout layout_of(const Placement& p) {
  return CodeLayout{p.params.H, p.params.r, p.t, p.piece_size, p.padded_size, p.original_sizes};
}

struct CacheContents {
  int k = 0;
  std::map<PieceId, Bytes> pieces;

  std::size_t stored_bytes() const {
    std::size_t total = 0;
    for (const auto& [id, bytes] : pieces) total += bytes.size();
    return total;
  }
};

// MDS-encodes and subpacketizes every file for integer t = params.integer_t().
// With pad == false, F must already be a multiple of r * C(L, t).
inline Placement encode_library(const FileLibrary& library, const NetworkParams& params, bool pad = true) {
  params.validate();
  const int t = params.integer_t();
  const int L = static_cast<int>(params.L());
  if (library.N() != params.N) throw Error(Errc::InvalidParams, "library size differs from N");

  Placement out;
  out.params = params;
  out.params.file_size_bytes = library.file_size();
  out.t = t;
  out.original_sizes = library.original_sizes;
  out.padded_size = padded_file_size(library.file_size(), params.r, L, t);
  if (!pad && out.padded_size != library.file_size())
    throw Error(Errc::SizeError, "F = " + std::to_string(library.file_size()) + " not divisible by r*C(L,t) = " +
                                     std::to_string(params.r * binomial(L, t)));
  out.piece_size = static_cast<std::size_t>(out.padded_size / (params.r * binomial(L, t)));

  const MdsCode code(params.H, params.r);
  for (int n = 1; n <= params.N; ++n) {
    Bytes file = library.files[n - 1];
    file.resize(static_cast<std::size_t>(out.padded_size), 0);
    auto chunks = code.encode(file);
    for (int i = 1; i <= params.H; ++i)
      for (auto& [T, bytes] : subpacketize(chunks[i - 1], L, t)) out.pieces.emplace(PieceId{n, i, T}, std::move(bytes));
  }
  return out;
}

inline CacheContents cache_for(const Placement& placement, const Topology& topo, int k) {
  CacheContents cache;
  cache.k = k;
  for (const auto& [id, bytes] : placement.pieces)
    if (caches_piece(topo, k, id.i, id.T)) cache.pieces.emplace(id, bytes);
  return cache;
}

inline std::vector<CacheContents> place_caches(const Placement& placement, const Topology& topo) {
  std::vector<CacheContents> caches;
  caches.reserve(topo.K());
  for (int k = 1; k <= topo.K(); ++k) caches.push_back(cache_for(placement, topo, k));
  return caches;
}

inline std::vector<CacheContents> place_caches(const FileLibrary& library, const Topology& topo, int t,
                                               const NetworkParams& base) {
  NetworkParams params = base;
  params.H = topo.H();
  params.r = topo.r();
  params.N = library.N();
  return place_caches(encode_library(library, params.with_t(t)), topo);
}

// Ratio of stored bytes to padded file size, i.e. the M the cache realizes.
inline Rational realized_cache_size(const CacheContents& cache, const Placement& placement) {
  if (placement.padded_size == 0) return Rational(0);
  return Rational(static_cast<std::int64_t>(cache.stored_bytes()), placement.padded_size);
}

}  // namespace fran
