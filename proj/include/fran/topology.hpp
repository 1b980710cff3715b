#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "fran/combinatorics.hpp"
#include "fran/error.hpp"
#include "fran/rational.hpp"

namespace fran {

// Network and library dimensions. K, L and t are derived, never stored.
struct NetworkParams {
  int H = 0;                         // edge nodes
  int r = 0;                         // ENs per user
  int N = 0;                         // library files
  std::int64_t file_size_bytes = 0;  // F
  Rational rho{1};                   // fronthaul rate
  Rational M{0};                     // cache size in files

  std::int64_t K() const { return binomial(H, r); }
  std::int64_t L() const { return binomial(H - 1, r - 1); }
  Rational t() const { return M * Rational(L()) / Rational(N); }

  // Returns a copy with M chosen so that t equals `t_value`.
  NetworkParams with_t(std::int64_t t_value) const {
    NetworkParams p = *this;
    p.M = Rational(t_value * N, L());
    return p;
  }

  void validate_connectivity() const {
    if (r < 1 || r >= H)
      throw Error(Errc::InvalidConnectivity,
                  "need 1 <= r < H, got H=" + std::to_string(H) + " r=" + std::to_string(r));
  }

  void validate() const {
    validate_connectivity();
    if (N < K()) throw Error(Errc::InvalidParams, "need N >= K = " + std::to_string(K()));
    if (file_size_bytes < 0) throw Error(Errc::InvalidParams, "file size must be nonnegative");
    if (rho < 0) throw Error(Errc::InvalidParams, "rho must be nonnegative");
    if (M < 0 || M > Rational(N))
      throw Error(Errc::OutOfRange, "need 0 <= M <= N, got M=" + to_exact_string(M));
  }

  // Integer t or NonIntegerT.
  int integer_t() const {
    Rational tv = t();
    if (!is_integer(tv))
      throw Error(Errc::NonIntegerT, "t = " + to_exact_string(tv) + " is not an integer; apply memory sharing");
    return static_cast<int>(tv.numerator());
  }
};

// Combination-network topology: user k is the k-th r-subset of [H] in
// lexicographic order and is wired to exactly those ENs. IDs are 1-based.
class Topology {
 public:
  Topology(int H, int r) : H_(H), r_(r) {
    NetworkParams{H, r}.validate_connectivity();
    users_ = k_subsets(H, r);
    L_ = static_cast<int>(binomial(H - 1, r - 1));
    served_.assign(H, {});
    index_.assign(static_cast<std::size_t>(H) * users_.size(), 0);
    for (int k = 1; k <= K(); ++k) {
      for (int i : users_[k - 1]) {
        auto& list = served_[i - 1];
        list.push_back(k);
        index_[slot(i, k)] = static_cast<int>(list.size());
      }
    }
  }

  int H() const { return H_; }
  int r() const { return r_; }
  int K() const { return static_cast<int>(users_.size()); }
  int L() const { return L_; }

  const std::vector<Subset>& users() const { return users_; }

  // K_i, ascending user ids.
  const std::vector<int>& served_users(int i) const {
    check_en(i);
    return served_[i - 1];
  }

  // N_k, ascending EN ids.
  const Subset& serving_ens(int k) const {
    check_user(k);
    return users_[k - 1];
  }

  // Rank of user k among K_i (1-based), or nullopt if EN i does not serve k.
  std::optional<int> index_of(int i, int k) const {
    check_en(i);
    check_user(k);
    int v = index_[slot(i, k)];
    if (v == 0) return std::nullopt;
    return v;
  }

  bool serves(int i, int k) const { return index_of(i, k).has_value(); }

  // Inverse of index_of on K_i.
  int user_at(int i, int index) const {
    const auto& list = served_users(i);
    if (index < 1 || index > static_cast<int>(list.size()))
      throw Error(Errc::IndexOutOfRange, "index " + std::to_string(index) + " outside [L]");
    return list[index - 1];
  }

  // User wired to exactly the ENs in `ens` (sorted r-subset).
  int user_of(const Subset& ens) const {
    if (static_cast<int>(ens.size()) != r_) throw Error(Errc::IndexOutOfRange, "EN set size differs from r");
    return static_cast<int>(subset_rank(ens, H_)) + 1;
  }

 private:
  std::size_t slot(int i, int k) const {
    return static_cast<std::size_t>(i - 1) * users_.size() + static_cast<std::size_t>(k - 1);
  }
  void check_en(int i) const {
    if (i < 1 || i > H_) throw Error(Errc::IndexOutOfRange, "EN id " + std::to_string(i) + " outside [H]");
  }
  void check_user(int k) const {
    if (k < 1 || k > K()) throw Error(Errc::IndexOutOfRange, "user id " + std::to_string(k) + " outside [K]");
  }

  int H_;
  int r_;
  int L_ = 0;
  std::vector<Subset> users_;
  std::vector<std::vector<int>> served_;
  std::vector<int> index_;
};

inline Topology build_topology(const NetworkParams& params) { return Topology(params.H, params.r); }

inline nlohmann::json topology_json(const Topology& topo) {
  nlohmann::json users = nlohmann::json::array();
  for (const auto& u : topo.users()) users.push_back(u);
  return {{"H", topo.H()}, {"r", topo.r()}, {"users", users}};
}

}  // namespace fran
