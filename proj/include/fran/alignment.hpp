#pragma once

#include <algorithm>
#include <compare>
#include <map>
#include <set>
#include <string>
#include <tuple>
#include <vector>

#include <nlohmann/json.hpp>

#include "fran/combinatorics.hpp"
#include "fran/error.hpp"
#include "fran/fronthaul.hpp"
#include "fran/interference.hpp"
#include "fran/topology.hpp"

namespace fran {

// Formal channel gain h_{k,i}.
struct ChannelSymbol {
  int k = 0;
  int i = 0;

  auto operator<=>(const ChannelSymbol&) const = default;
  bool operator==(const ChannelSymbol&) const = default;
};

inline std::string to_string(const ChannelSymbol& h) {
  return "h_{" + std::to_string(h.k) + "," + std::to_string(h.i) + "}";
}

// One row of the (A, B, C) matrices: messages sent along common directions
// (signals), the users where r of them line up (covered_users), and the
// channel symbols generating the directions (basis).
struct AlignmentGroup {
  int g = 0;
  std::vector<MessageId> signals;       // EN ascending
  std::vector<int> covered_users;       // ascending
  std::vector<ChannelSymbol> basis;     // covered user ascending, then EN
};

enum class AlignmentRegime { None, PairwiseSubsets, PerUser };

// Which construction applies for (r, t); throws for unsupported pairs.
inline AlignmentRegime alignment_regime(const Topology& topo, int t) {
  const int L = topo.L();
  check_delivery_t(topo, t);
  if (t >= L - 1) return AlignmentRegime::None;
  if (t == L - 2) return AlignmentRegime::PerUser;
  if (topo.r() == 2) return AlignmentRegime::PairwiseSubsets;
  throw Error(Errc::UnsupportedRegime, "no alignment construction for r=" + std::to_string(topo.r()) +
                                           " with t=" + std::to_string(t) + " < L-2");
}

// r + L - t - 2 signals per group.
inline int group_size(const Topology& topo, int t) { return topo.r() + topo.L() - t - 2; }

// { k : exactly r of `signals` interfere at k }.
inline std::vector<int> covered_users_of(const Topology& topo, const std::vector<MessageId>& signals) {
  std::map<int, int> hits;
  for (const auto& m : signals)
    for (int k : interfered_users(topo, m)) ++hits[k];
  std::vector<int> out;
  for (auto [k, count] : hits)
    if (count == topo.r()) out.push_back(k);
  return out;
}

inline std::vector<ChannelSymbol> basis_of(const Topology& topo, const std::vector<int>& users) {
  std::vector<ChannelSymbol> out;
  for (int k : users)
    for (int i : topo.serving_ens(k)) out.push_back(ChannelSymbol{k, i});
  return out;
}

inline AlignmentGroup make_group(const Topology& topo, std::vector<MessageId> signals) {
  std::sort(signals.begin(), signals.end());
  AlignmentGroup grp;
  grp.covered_users = covered_users_of(topo, signals);
  grp.basis = basis_of(topo, grp.covered_users);
  grp.signals = std::move(signals);
  return grp;
}

namespace detail {

// Row of `k`'s interference matrix holding `m` (its S rank within the column).
inline std::size_t row_in_matrix(const Topology& topo, int t, int k, const MessageId& m) {
  const auto mat = interference_matrix(topo, t, k);
  for (std::size_t c = 0; c < mat.ens.size(); ++c)
    if (mat.ens[c] == m.i)
      for (std::size_t row = 0; row < mat.columns[c].size(); ++row)
        if (mat.columns[c][row] == m) return row;
  return mat.rows();
}

// Discovery order of the greedy generator: the first covered user, then the
// S of the group's signal from that user's lowest EN.
inline void order_and_number(const Topology& topo, int t, std::vector<AlignmentGroup>& groups) {
  using Key = std::tuple<int, std::size_t>;
  std::vector<std::pair<Key, AlignmentGroup>> keyed;
  for (auto& grp : groups) {
    const int first = grp.covered_users.empty() ? 0 : grp.covered_users.front();
    std::size_t row = 0;
    if (first) {
      const int lowest_en = topo.serving_ens(first).front();
      for (const auto& m : grp.signals)
        if (m.i == lowest_en) row = row_in_matrix(topo, t, first, m);
    }
    keyed.emplace_back(Key{first, row}, std::move(grp));
  }
  std::stable_sort(keyed.begin(), keyed.end(), [](const auto& a, const auto& b) { return a.first < b.first; });
  groups.clear();
  for (auto& [key, grp] : keyed) {
    grp.g = static_cast<int>(groups.size()) + 1;
    groups.push_back(std::move(grp));
  }
}

}  // namespace detail

// Closed-form grouping.
//  r = 2, t <= L-2: one group per (L-t)-subset E of ENs, holding X_i^{S_i}
//    for i in E with S_i = [L] \ { Index(i, user{i,j}) : j in E, j != i }.
//  t = L-2: one group per user k, { X_i^{[L] \ Index(i,k)} : i in N_k }.
//  t >= L-1: no interference, no groups.
inline std::vector<AlignmentGroup> build_groups(const Topology& topo, int t) {
  std::vector<AlignmentGroup> groups;
  const int L = topo.L();
  switch (alignment_regime(topo, t)) {
    case AlignmentRegime::None:
      return groups;
    case AlignmentRegime::PerUser:
      for (int k = 1; k <= topo.K(); ++k) {
        std::vector<MessageId> signals;
        for (int i : topo.serving_ens(k)) signals.push_back(MessageId{i, without(complement({}, L), *topo.index_of(i, k))});
        groups.push_back(make_group(topo, std::move(signals)));
      }
      break;
    case AlignmentRegime::PairwiseSubsets:
      for (const auto& E : k_subsets(topo.H(), L - t)) {
        std::vector<MessageId> signals;
        for (int i : E) {
          Subset removed;
          for (int j : E)
            if (j != i) removed.push_back(*topo.index_of(i, topo.user_of(i < j ? Subset{i, j} : Subset{j, i})));
          std::sort(removed.begin(), removed.end());
          Subset S;
          for (int v = 1; v <= L; ++v)
            if (!contains(removed, v)) S.push_back(v);
          signals.push_back(MessageId{i, std::move(S)});
        }
        groups.push_back(make_group(topo, std::move(signals)));
      }
      break;
  }
  detail::order_and_number(topo, t, groups);
  return groups;
}

// Greedy generator in the reference iteration order: users
// ascending; for each user, its interference-matrix rows ascending over the
// signals not yet grouped. A row seeds a group, which is then grown one EN
// at a time with the first unused signal that interferes, together with
// every member, at the user they share. Cross-check for build_groups.
inline std::vector<AlignmentGroup> build_groups_greedy(const Topology& topo, int t) {
  std::vector<AlignmentGroup> groups;
  if (alignment_regime(topo, t) == AlignmentRegime::None) return groups;
  const int target = group_size(topo, t);
  std::set<MessageId> used;

  auto shared_user_interfered = [&](const MessageId& a, const MessageId& b) {
    if (a.i == b.i) return false;
    for (int k : topo.served_users(a.i))
      if (topo.serves(b.i, k) && is_interfering(topo, k, a) && is_interfering(topo, k, b)) return true;
    return false;
  };

  for (int k = 1; k <= topo.K(); ++k) {
    const auto mat = interference_matrix(topo, t, k);
    while (true) {
      std::vector<MessageId> row;
      for (const auto& column : mat.columns)
        for (const auto& m : column)
          if (!used.count(m)) {
            row.push_back(m);
            break;
          }
      if (row.size() != mat.columns.size()) break;

      std::vector<MessageId> signals = row;
      std::set<int> ens;
      for (const auto& m : row) ens.insert(m.i);
      for (int a = 1; a <= topo.H() && static_cast<int>(signals.size()) < target; ++a) {
        if (ens.count(a)) continue;
        for (const auto& cand : en_messages(topo, t, a)) {
          if (used.count(cand)) continue;
          bool ok = std::all_of(signals.begin(), signals.end(),
                                [&](const MessageId& s) { return shared_user_interfered(s, cand); });
          if (ok) {
            signals.push_back(cand);
            ens.insert(a);
            break;
          }
        }
      }
      for (const auto& m : signals) used.insert(m);
      AlignmentGroup grp = make_group(topo, std::move(signals));
      grp.g = static_cast<int>(groups.size()) + 1;
      groups.push_back(std::move(grp));
    }
  }
  return groups;
}

struct GroupCoverReport {
  bool ok = true;
  std::size_t group_count = 0;
  std::size_t message_count = 0;
  std::vector<int> groups_per_user;  // index k-1
  std::vector<std::string> violations;

  void fail(std::string what) {
    ok = false;
    violations.push_back(std::move(what));
  }
};

// Audits a grouping: partition of all messages, per-group shape, and per-user
// coverage. Violations are collected, never thrown.
inline GroupCoverReport verify_group_cover(const std::vector<AlignmentGroup>& groups, const Topology& topo, int t) {
  GroupCoverReport rep;
  const int r = topo.r();
  const int L = topo.L();
  rep.group_count = groups.size();
  rep.groups_per_user.assign(topo.K(), 0);
  const auto messages = all_messages(topo, t);
  rep.message_count = messages.size();

  if (t >= L - 1) {
    if (!groups.empty()) rep.fail("groups present although t >= L-1 leaves no interference");
    return rep;
  }

  std::map<MessageId, int> owner;
  for (const auto& grp : groups)
    for (const auto& m : grp.signals)
      if (!owner.emplace(m, grp.g).second) rep.fail(to_string(m) + " appears in more than one group");
  for (const auto& m : messages)
    if (!owner.count(m)) rep.fail(to_string(m) + " is in no group");
  if (owner.size() != messages.size()) rep.fail("groups hold signals that are not fronthaul messages");

  const int size = group_size(topo, t);
  const auto expect_cover = binomial(size, r);
  for (const auto& grp : groups) {
    const std::string tag = "group " + std::to_string(grp.g) + ": ";
    std::set<int> ens;
    for (const auto& m : grp.signals) ens.insert(m.i);
    if (ens.size() != grp.signals.size()) rep.fail(tag + "two signals from one EN");
    if (static_cast<int>(grp.signals.size()) != size) rep.fail(tag + "size " + std::to_string(grp.signals.size()));
    if (covered_users_of(topo, grp.signals) != grp.covered_users) rep.fail(tag + "covered users disagree with signals");
    if (static_cast<std::int64_t>(grp.covered_users.size()) != expect_cover) rep.fail(tag + "covers wrong number of users");
    if (basis_of(topo, grp.covered_users) != grp.basis) rep.fail(tag + "basis disagrees with covered users");
    for (int k = 1; k <= topo.K(); ++k) {
      int interfering = 0;
      int desired = 0;
      for (const auto& m : grp.signals) {
        interfering += is_interfering(topo, k, m);
        desired += is_desired(topo, k, m);
      }
      const std::string who = tag + "user " + std::to_string(k) + " ";
      if (interfering != 0 && interfering != r) rep.fail(who + "sees a partial interference set");
      if (interfering && desired) rep.fail(who + "mixes desired and interfering signals");
      if (r == 2 && desired > 1) rep.fail(who + "receives more than one desired signal");
    }
    for (int k : grp.covered_users) ++rep.groups_per_user[k - 1];
  }
  const auto I = interference_count(L, t);
  for (int k = 1; k <= topo.K(); ++k)
    if (rep.groups_per_user[k - 1] != I)
      rep.fail("user " + std::to_string(k) + " lies in " + std::to_string(rep.groups_per_user[k - 1]) +
               " groups, expected I = " + std::to_string(I));
  if (r == 2 && static_cast<std::int64_t>(groups.size()) != binomial(topo.H(), t + 1))
    rep.fail("group count differs from C(H, t+1)");
  return rep;
}

inline nlohmann::json groups_json(const std::vector<AlignmentGroup>& groups) {
  nlohmann::json out = nlohmann::json::array();
  for (const auto& grp : groups) {
    nlohmann::json signals = nlohmann::json::array();
    for (const auto& m : grp.signals) signals.push_back({{"i", m.i}, {"S", m.S}});
    nlohmann::json basis = nlohmann::json::array();
    for (const auto& h : grp.basis) basis.push_back({h.k, h.i});
    out.push_back({{"g", grp.g}, {"B", signals}, {"C", grp.covered_users}, {"A", basis}});
  }
  return out;
}

}  // namespace fran
