#pragma once

#include <cmath>
#include <cstdint>
#include <functional>
#include <map>
#include <optional>
#include <random>
#include <set>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "fran/alignment.hpp"
#include "fran/error.hpp"
#include "fran/interference.hpp"
#include "fran/rational.hpp"

namespace fran {

// Which direction set every message is transmitted along. Grouped messages
// share their group's directions; any message left ungrouped (only possible
// when t >= L-1) gets a direction set of its own, numbered after the groups.
class DirectionPlan {
 public:
  DirectionPlan(const std::vector<AlignmentGroup>& groups, const Topology& topo, int t)
      : groups_(&groups), topo_(&topo), t_(t) {
    for (const auto& grp : groups)
      for (const auto& m : grp.signals) direction_.emplace(m, grp.g);
    int next = static_cast<int>(groups.size());
    for (const auto& m : all_messages(topo, t))
      if (direction_.emplace(m, next + 1).second) ++next;
  }

  const Topology& topology() const { return *topo_; }
  int t() const { return t_; }

  int direction_of(const MessageId& m) const {
    auto it = direction_.find(m);
    if (it == direction_.end()) throw Error(Errc::NotRelevant, to_string(m) + " is not a fronthaul message");
    return it->second;
  }

  // A_g for a real group; empty for a solo direction.
  std::vector<ChannelSymbol> basis_of_direction(int g) const {
    if (g >= 1 && g <= static_cast<int>(groups_->size())) return (*groups_)[g - 1].basis;
    return {};
  }

 private:
  const std::vector<AlignmentGroup>* groups_;
  const Topology* topo_;
  int t_;
  std::map<MessageId, int> direction_;
};

struct SubspaceLabel {
  enum class Kind { Desired, Interference };
  Kind kind = Kind::Desired;
  int group = 0;
  int en = 0;  // transmitting EN for desired labels, 0 for interference

  auto operator<=>(const SubspaceLabel&) const = default;
  bool operator==(const SubspaceLabel&) const = default;
};

// Interfering signals collapse onto their group's subspace regardless of
// which EN sent them; desired ones stay tagged with their EN.
inline SubspaceLabel received_label(const DirectionPlan& plan, int k, const MessageId& m) {
  const auto& topo = plan.topology();
  if (is_interfering(topo, k, m)) return {SubspaceLabel::Kind::Interference, plan.direction_of(m), 0};
  if (is_desired(topo, k, m)) return {SubspaceLabel::Kind::Desired, plan.direction_of(m), m.i};
  throw Error(Errc::NotRelevant, to_string(m) + " neither serves nor interferes at user " + std::to_string(k));
}

struct SubspaceCensus {
  std::int64_t desired = 0;
  std::int64_t interference = 0;

  Rational dof() const { return desired + interference == 0 ? Rational(1) : Rational(desired, desired + interference); }
};

// Counts distinct received labels at user k.
inline SubspaceCensus subspace_census(const DirectionPlan& plan, int k) {
  const auto& topo = plan.topology();
  std::set<SubspaceLabel> desired, interference;
  for (int i : topo.serving_ens(k))
    for (const auto& m : en_messages(topo, plan.t(), i)) {
      auto label = received_label(plan, k, m);
      (label.kind == SubspaceLabel::Kind::Desired ? desired : interference).insert(label);
    }
  return {static_cast<std::int64_t>(desired.size()), static_cast<std::int64_t>(interference.size())};
}

// Desired labels and interference labels at k never share a group.
inline bool labels_separated(const DirectionPlan& plan, int k) {
  const auto& topo = plan.topology();
  std::set<int> desired_groups, interference_groups;
  std::size_t desired_count = 0;
  std::set<SubspaceLabel> desired_labels;
  for (int i : topo.serving_ens(k))
    for (const auto& m : en_messages(topo, plan.t(), i)) {
      auto label = received_label(plan, k, m);
      if (label.kind == SubspaceLabel::Kind::Desired) {
        desired_groups.insert(label.group);
        desired_labels.insert(label);
        ++desired_count;
      } else {
        interference_groups.insert(label.group);
      }
    }
  if (desired_labels.size() != desired_count) return false;
  for (int g : desired_groups)
    if (interference_groups.count(g)) return false;
  return true;
}

// d = r C(L-1, t) / ((r-1) C(L-1, t) + C(L, t+1)). At t = L nothing is sent
// and d is taken as 1.
inline Rational dof_per_user(int H, int r, int t) {
  NetworkParams{H, r}.validate_connectivity();
  const auto L = binomial(H - 1, r - 1);
  if (t < 0 || t > L) throw Error(Errc::OutOfRange, "t outside [0, L]");
  if (r != 2 && t < L - 2) throw Error(Errc::UnsupportedRegime, "DoF formula needs r = 2 or t >= L-2");
  if (t == L) return Rational(1);
  const auto c = binomial(L - 1, t);
  return Rational(r * c, (r - 1) * c + binomial(L, t + 1));
}

// Exponent vector over channel symbols; absent symbols have exponent 0.
using Monomial = std::map<ChannelSymbol, int>;

inline Monomial times(Monomial v, const ChannelSymbol& h) {
  ++v[h];
  return v;
}

// G(A_g) at degree n: every monomial with exponents in {0..n} over the basis.
struct DirectionSet {
  std::vector<ChannelSymbol> basis;
  int degree = 0;

  std::uint64_t size() const {
    std::uint64_t s = 1;
    for (std::size_t j = 0; j < basis.size(); ++j) s *= static_cast<std::uint64_t>(degree + 1);
    return s;
  }

  bool contains(const Monomial& v) const {
    for (const auto& [h, e] : v) {
      if (e == 0) continue;
      if (std::find(basis.begin(), basis.end(), h) == basis.end() || e > degree) return false;
    }
    return true;
  }

  template <typename Fn>
  void for_each(Fn&& fn) const {
    std::vector<int> exps(basis.size(), 0);
    while (true) {
      Monomial v;
      for (std::size_t j = 0; j < basis.size(); ++j)
        if (exps[j]) v[basis[j]] = exps[j];
      fn(v);
      std::size_t j = 0;
      while (j < exps.size() && exps[j] == degree) exps[j++] = 0;
      if (j == exps.size()) return;
      ++exps[j];
    }
  }
};

// h * M_n(A) is inside M_{n+1}(A)?
inline bool shift_contained(const DirectionSet& set, const ChannelSymbol& h) {
  const DirectionSet wider{set.basis, set.degree + 1};
  bool ok = true;
  set.for_each([&](const Monomial& v) { ok = ok && wider.contains(times(v, h)); });
  return ok;
}

// For a covered user k, every h_{k,i} (i in N_k) keeps the group's
// directions inside the next-degree set: the aligned signals land in one
// subspace.
inline bool verify_alignment_containment(const AlignmentGroup& group, const Topology& topo, int k, int n) {
  const DirectionSet set{group.basis, n};
  for (int i : topo.serving_ens(k))
    if (!shift_contained(set, ChannelSymbol{k, i})) return false;
  return true;
}

struct RankReport {
  std::size_t distinct_monomials = 0;
  std::size_t draws = 0;
  std::size_t rank = 0;
  double smallest_kept_ratio = 0.0;  // sigma_rank / sigma_max
  bool full_rank() const { return rank == distinct_monomials; }
};

using GainSampler = std::function<double(const ChannelSymbol&, std::mt19937_64&)>;

inline GainSampler uniform_gains() {
  return [](const ChannelSymbol&, std::mt19937_64& rng) { return std::uniform_real_distribution<double>(1.0, 2.0)(rng); };
}

// Numerical rank of the evaluation matrix of `monomials` over `draws`
// independent gain draws. Columns are normalized before the SVD and a
// singular value counts when it exceeds tol * sigma_max.
inline RankReport monomial_rank(const std::vector<Monomial>& monomials, std::size_t draws, std::uint64_t seed,
                                const GainSampler& sampler = uniform_gains(), double tol = 1e-9) {
  RankReport rep;
  rep.distinct_monomials = monomials.size();
  rep.draws = draws;
  if (monomials.empty() || draws == 0) return rep;
  std::set<ChannelSymbol> symbols;
  for (const auto& v : monomials)
    for (const auto& [h, e] : v) symbols.insert(h);

  std::mt19937_64 rng(seed);
  Eigen::MatrixXd eval(static_cast<Eigen::Index>(draws), static_cast<Eigen::Index>(monomials.size()));
  for (std::size_t row = 0; row < draws; ++row) {
    std::map<ChannelSymbol, double> gain;
    for (const auto& h : symbols) gain[h] = sampler(h, rng);
    for (std::size_t col = 0; col < monomials.size(); ++col) {
      double value = 1.0;
      for (const auto& [h, e] : monomials[col]) value *= std::pow(gain[h], e);
      eval(static_cast<Eigen::Index>(row), static_cast<Eigen::Index>(col)) = value;
    }
  }
  for (Eigen::Index col = 0; col < eval.cols(); ++col) eval.col(col).normalize();
  Eigen::BDCSVD<Eigen::MatrixXd> svd(eval);
  const auto& sv = svd.singularValues();
  const double top = sv.size() ? sv(0) : 0.0;
  for (Eigen::Index j = 0; j < sv.size(); ++j)
    if (sv(j) > tol * top) {
      ++rep.rank;
      rep.smallest_kept_ratio = sv(j) / top;
    }
  return rep;
}

// Every monomial user k receives: h_{k,i} * v for each relevant message from
// EN i and each v in its direction set at degree n.
inline std::vector<Monomial> received_monomials(const DirectionPlan& plan, int k, int n) {
  const auto& topo = plan.topology();
  std::set<Monomial> out;
  for (int i : topo.serving_ens(k))
    for (const auto& m : en_messages(topo, plan.t(), i)) {
      const DirectionSet set{plan.basis_of_direction(plan.direction_of(m)), n};
      set.for_each([&](const Monomial& v) { out.insert(times(v, ChannelSymbol{k, i})); });
    }
  return {out.begin(), out.end()};
}

// Diagnostic: the distinct formal monomials at k should be numerically
// independent for almost every draw. `draws` of 0 means twice the monomial
// count; a square evaluation matrix puts its smallest singular values right
// at the threshold.
inline RankReport numeric_rank_spotcheck(const DirectionPlan& plan, int k, int n, std::uint64_t seed,
                                         std::size_t draws = 0, const GainSampler& sampler = uniform_gains()) {
  const auto monomials = received_monomials(plan, k, n);
  return monomial_rank(monomials, draws ? draws : 2 * monomials.size(), seed, sampler);
}

}  // namespace fran
