#pragma once

#include <algorithm>
#include <compare>
#include <cstdint>
#include <random>
#include <string>
#include <vector>

#include "fran/combinatorics.hpp"
#include "fran/error.hpp"
#include "fran/placement.hpp"
#include "fran/rational.hpp"
#include "fran/topology.hpp"

namespace fran {

// Names X_i^S: the coded message for EN i and (t+1)-subset S of [L].
struct MessageId {
  int i = 0;
  Subset S;

  auto operator<=>(const MessageId&) const = default;
  bool operator==(const MessageId&) const = default;
};

inline std::string to_string(const MessageId& m) {
  return "X_" + std::to_string(m.i) + "^{" + subset_string(m.S) + "}";
}

struct DemandVector {
  std::vector<int> d;  // d[k-1] is the file user k requests

  int operator()(int k) const { return d.at(k - 1); }

  void validate(int K, int N) const {
    if (static_cast<int>(d.size()) != K)
      throw Error(Errc::InvalidParams, "demand has " + std::to_string(d.size()) + " entries, need K = " + std::to_string(K));
    for (int v : d)
      if (v < 1 || v > N) throw Error(Errc::OutOfRange, "demanded file " + std::to_string(v) + " outside [N]");
  }

  static DemandVector identity(int K) {
    DemandVector out;
    for (int k = 1; k <= K; ++k) out.d.push_back(k);
    return out;
  }

  static DemandVector uniform(int K, int N, std::mt19937_64& rng) {
    std::uniform_int_distribution<int> pick(1, N);
    DemandVector out;
    for (int k = 0; k < K; ++k) out.d.push_back(pick(rng));
    return out;
  }

  // K distinct files (the worst case); needs N >= K.
  static DemandVector distinct(int K, int N, std::mt19937_64& rng) {
    std::vector<int> files(N);
    for (int n = 0; n < N; ++n) files[n] = n + 1;
    std::shuffle(files.begin(), files.end(), rng);
    files.resize(K);
    return DemandVector{files};
  }
};

struct FronthaulMessage {
  MessageId id;
  Bytes payload;
  std::vector<PieceId> constituents;  // one per user k in K_i with Index(i,k) in S
};

// Pieces XORed into X_i^S, in ascending user order.
inline std::vector<PieceId> message_constituents(const Topology& topo, const DemandVector& demand,
                                                 const MessageId& msg) {
  std::vector<PieceId> out;
  for (int k : topo.served_users(msg.i)) {
    const int idx = *topo.index_of(msg.i, k);
    if (contains(msg.S, idx)) out.push_back(PieceId{demand(k), msg.i, without(msg.S, idx)});
  }
  return out;
}

// All X_i^S for EN i, S lexicographic.
inline std::vector<MessageId> en_messages(const Topology& topo, int t, int i) {
  std::vector<MessageId> out;
  for (auto& S : k_subsets(topo.L(), t + 1)) out.push_back(MessageId{i, std::move(S)});
  return out;
}

inline std::vector<MessageId> all_messages(const Topology& topo, int t) {
  std::vector<MessageId> out;
  for (int i = 1; i <= topo.H(); ++i)
    for (auto& m : en_messages(topo, t, i)) out.push_back(std::move(m));
  return out;
}

// H * C(L, t+1) messages ordered by EN, then S.
inline std::vector<FronthaulMessage> build_fronthaul(const Topology& topo, const Placement& placement,
                                                     const DemandVector& demand) {
  demand.validate(topo.K(), placement.params.N);
  std::vector<FronthaulMessage> out;
  for (auto& id : all_messages(topo, placement.t)) {
    FronthaulMessage msg;
    msg.constituents = message_constituents(topo, demand, id);
    msg.payload.assign(placement.piece_size, 0);
    for (const auto& piece : msg.constituents) {
      auto it = placement.pieces.find(piece);
      if (it == placement.pieces.end()) throw Error(Errc::MissingMessage, "library lacks " + to_string(piece));
      for (std::size_t j = 0; j < msg.payload.size(); ++j) msg.payload[j] ^= it->second[j];
    }
    msg.id = std::move(id);
    out.push_back(std::move(msg));
  }
  return out;
}

// R1 = C(L, t+1) / (r C(L, t)).
inline Rational fronthaul_load(const NetworkParams& params) {
  const int t = params.integer_t();
  const std::int64_t L = params.L();
  if (t < 0 || t > L) throw Error(Errc::OutOfRange, "t outside [0, L]");
  return Rational(binomial(L, t + 1), params.r * binomial(L, t));
}

// delta_F = R1 / rho = (L - t) / ((t + 1) r rho).
inline Rational fronthaul_ndt(const NetworkParams& params) {
  const Rational load = fronthaul_load(params);
  if (load == 0) return Rational(0);
  if (params.rho <= 0) throw Error(Errc::UnboundedNdt, "zero fronthaul rate with nonzero load");
  return load / params.rho;
}

inline std::size_t fronthaul_bytes_for_en(const std::vector<FronthaulMessage>& messages, int i) {
  std::size_t total = 0;
  for (const auto& m : messages)
    if (m.id.i == i) total += m.payload.size();
  return total;
}

}  // namespace fran
