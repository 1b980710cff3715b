#pragma once

#include <cstdint>
#include <vector>

#include "fran/fronthaul.hpp"
#include "fran/topology.hpp"

namespace fran {

inline void check_delivery_t(const Topology& topo, int t) {
  if (t < 0 || t > topo.L()) throw Error(Errc::OutOfRange, "t outside [0, L]");
}

// M_k: X_i^S with i in N_k and Index(i,k) in S. EN ascending, S lexicographic.
inline std::vector<MessageId> desired_messages(const Topology& topo, int t, int k) {
  check_delivery_t(topo, t);
  std::vector<MessageId> out;
  for (int i : topo.serving_ens(k)) {
    const int idx = *topo.index_of(i, k);
    for (auto& m : en_messages(topo, t, i))
      if (contains(m.S, idx)) out.push_back(std::move(m));
  }
  return out;
}

inline bool is_desired(const Topology& topo, int k, const MessageId& m) {
  auto idx = topo.index_of(m.i, k);
  return idx && contains(m.S, *idx);
}

inline bool is_interfering(const Topology& topo, int k, const MessageId& m) {
  auto idx = topo.index_of(m.i, k);
  return idx && !contains(m.S, *idx);
}

// I = C(L, t+1) - C(L-1, t): interfering messages per serving EN.
inline std::int64_t interference_count(int L, int t) { return binomial(L, t + 1) - binomial(L - 1, t); }

// X_k: one column per EN of N_k (ascending), each listing that EN's
// interfering messages at k by ascending S.
struct InterferenceMatrix {
  int k = 0;
  std::vector<int> ens;
  std::vector<std::vector<MessageId>> columns;

  std::size_t rows() const { return columns.empty() ? 0 : columns.front().size(); }
  const MessageId& at(std::size_t row, std::size_t col) const { return columns[col][row]; }
};

inline InterferenceMatrix interference_matrix(const Topology& topo, int t, int k) {
  check_delivery_t(topo, t);
  InterferenceMatrix mat;
  mat.k = k;
  for (int i : topo.serving_ens(k)) {
    const int idx = *topo.index_of(i, k);
    std::vector<MessageId> column;
    for (auto& m : en_messages(topo, t, i))
      if (!contains(m.S, idx)) column.push_back(std::move(m));
    mat.ens.push_back(i);
    mat.columns.push_back(std::move(column));
  }
  return mat;
}

// Users of K_i at which X_i^S interferes (Index not in S), ascending.
inline std::vector<int> interfered_users(const Topology& topo, const MessageId& m) {
  std::vector<int> out;
  for (int k : topo.served_users(m.i))
    if (!contains(m.S, *topo.index_of(m.i, k))) out.push_back(k);
  return out;
}

}  // namespace fran
