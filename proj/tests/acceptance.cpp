// Acceptance gate: one PASS/FAIL line per criterion, nonzero exit on any FAIL.

#include <chrono>
#include <cstdio>
#include <functional>
#include <iostream>
#include <map>
#include <random>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "example_reference.hpp"
#include "fran/fran.hpp"
#include "grouping_oracle.hpp"

using namespace fran;

namespace {

// Collects the first few failure messages of one criterion.
class Check {
 public:
  void expect(bool ok, const std::string& what) {
    ++count_;
    if (ok) return;
    ++failures_;
    if (notes_.size() < 5) notes_.push_back(what);
  }
  bool ok() const { return failures_ == 0; }
  std::size_t count() const { return count_; }
  std::string summary() const {
    if (ok()) return std::to_string(count_) + " checks";
    std::string s = std::to_string(failures_) + " of " + std::to_string(count_) + " checks failed:";
    for (const auto& n : notes_) s += " [" + n + "]";
    return s;
  }

 private:
  std::size_t count_ = 0;
  std::size_t failures_ = 0;
  std::vector<std::string> notes_;
};

double seconds_since(std::chrono::steady_clock::time_point start) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
}

std::string secs(double s) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.3f s", s);
  return buf;
}

const NetworkParams kExample{5, 2, 10, 800, Rational(1), Rational(5, 2)};

// Independent closed forms used as oracles below.
Rational oracle_ndt(int r, std::int64_t L, std::int64_t t, const Rational& rho) {
  if (t == L) return Rational(0);
  return Rational(L - t, r) * (Rational(r - 1, L) + Rational(1, t + 1) * (Rational(1) + Rational(1) / rho));
}

Rational oracle_dof(int r, std::int64_t L, std::int64_t t) {
  const auto c = binomial(L - 1, t);
  return Rational(r * c, (r - 1) * c + binomial(L, t + 1));
}

// ------------------------------------------------------------------- 1

std::string criterion1(Check& c) {
  const Topology topo(5, 2);
  const auto lib = FileLibrary::pseudorandom(10, kExample.file_size_bytes, 101);
  const auto placement = encode_library(lib, kExample);
  const auto caches = place_caches(placement, topo);
  for (int k = 1; k <= 10; ++k) {
    std::set<PieceId> expect;
    for (int n = 1; n <= 10; ++n)
      for (auto [chunk, T] : reference::kCacheTable[k - 1]) expect.insert(PieceId{n, chunk, {T}});
    std::set<PieceId> got;
    for (const auto& [id, bytes] : caches[k - 1].pieces) got.insert(id);
    c.expect(got == expect, "cache contents of u_" + std::to_string(k));
    const auto stored = static_cast<std::int64_t>(caches[k - 1].stored_bytes());
    c.expect(Rational(stored) == Rational(5, 2) * Rational(kExample.file_size_bytes),
             "u_" + std::to_string(k) + " stores " + std::to_string(stored) + " bytes");
  }
  return "cache table reproduced for 10 users, 2000 = (5/2)F bytes each at F = 800";
}

// ------------------------------------------------------------------- 2

std::string criterion2(Check& c) {
  const Topology topo(5, 2);
  const auto placement = encode_library(FileLibrary::pseudorandom(10, kExample.file_size_bytes, 102), kExample);
  const auto demand = DemandVector::identity(10);
  const auto msgs = build_fronthaul(topo, placement, demand);
  c.expect(msgs.size() == reference::kFronthaulTable.size(), "30 messages");
  std::size_t mismatched = 0;
  for (std::size_t j = 0; j < std::min(msgs.size(), reference::kFronthaulTable.size()); ++j) {
    const auto& printed = reference::kFronthaulTable[j];
    c.expect(msgs[j].id == MessageId{printed.en, printed.S}, "message order at " + std::to_string(j));
    c.expect(msgs[j].constituents.size() == printed.parts.size(), "constituent count of " + to_string(msgs[j].id));
    for (std::size_t p = 0; p < std::min(printed.parts.size(), msgs[j].constituents.size()); ++p) {
      const auto part = printed.parts[p];
      if (PieceId{part.n, part.chunk, {part.T}} == msgs[j].constituents[p]) continue;
      ++mismatched;
      bool listed = false;
      for (const auto& e : reference::kFronthaulErrata)
        if (e.en == printed.en && e.S == printed.S && e.printed == part &&
            PieceId{e.corrected.n, e.corrected.chunk, {e.corrected.T}} == msgs[j].constituents[p])
          listed = true;
      c.expect(listed, "unlisted difference in " + to_string(msgs[j].id));
    }
  }
  c.expect(mismatched == reference::kFronthaulErrata.size(), std::to_string(mismatched) + " differences");

  c.expect(fronthaul_load(kExample) == Rational(3, 4), "R1 = 3/4");
  std::size_t max_bytes = 0;
  for (int i = 1; i <= 5; ++i) max_bytes = std::max(max_bytes, fronthaul_bytes_for_en(msgs, i));
  c.expect(Rational(static_cast<std::int64_t>(max_bytes), placement.padded_size) == Rational(3, 4),
           "measured R1 = 3/4");
  for (auto rho : {Rational(1, 4), Rational(1), Rational(3), Rational(10)}) {
    NetworkParams p = kExample;
    p.rho = rho;
    c.expect(fronthaul_ndt(p) == Rational(3) / (Rational(4) * rho), "delta_F = 3/(4 rho) at rho " + to_exact_string(rho));
  }
  return "30 messages, 3 listed EN_4 misprints, R1 = 3/4, delta_F = 3/(4 rho)";
}

// ------------------------------------------------------------------- 3

std::string criterion3(Check& c) {
  const auto start = std::chrono::steady_clock::now();
  const Topology topo(5, 2);
  const auto groups = build_groups(topo, 1);
  const double elapsed = seconds_since(start);
  c.expect(groups.size() == 10 && binomial(5, 2) == 10, "G = 10");
  for (std::size_t g = 0; g < std::min(groups.size(), reference::kMatrixB.size()); ++g) {
    std::set<MessageId> printed_b;
    for (const auto& s : reference::kMatrixB[g]) printed_b.insert(MessageId{s.en, s.S});
    c.expect(std::set<MessageId>(groups[g].signals.begin(), groups[g].signals.end()) == printed_b,
             "B row " + std::to_string(g + 1));
    c.expect(std::set<int>(groups[g].covered_users.begin(), groups[g].covered_users.end()) ==
                 std::set<int>(reference::kMatrixC[g].begin(), reference::kMatrixC[g].end()),
             "C row " + std::to_string(g + 1));
    auto row = reference::kMatrixA[g];
    for (const auto& e : reference::kMatrixAErrata)
      if (e.row == static_cast<int>(g) + 1 && row[e.position - 1] == e.printed) row[e.position - 1] = e.corrected;
    std::set<ChannelSymbol> printed_a;
    for (auto [k, i] : row) printed_a.insert(ChannelSymbol{k, i});
    c.expect(std::set<ChannelSymbol>(groups[g].basis.begin(), groups[g].basis.end()) == printed_a,
             "A row " + std::to_string(g + 1));
  }
  c.expect(elapsed < 1.0, "runtime " + secs(elapsed));
  return "B, C row sets equal; A equal after the h_{10,4} correction; G = 10; " + secs(elapsed);
}

// ------------------------------------------------------------------- 4

std::string criterion4(Check& c) {
  {
    const Topology topo(5, 2);
    const auto groups = build_groups(topo, 1);
    const DirectionPlan plan(groups, topo, 1);
    for (int k = 1; k <= 10; ++k) {
      const auto cs = subspace_census(plan, k);
      c.expect(cs.desired == 6 && cs.interference == 3, "census (6,3) at u_" + std::to_string(k));
      c.expect(cs.dof() == Rational(2, 3), "d = 2/3 at u_" + std::to_string(k));
    }
  }
  std::size_t points = 0;
  auto check = [&](int H, int r, int t) {
    const Topology topo(H, r);
    const auto groups = build_groups(topo, t);
    const DirectionPlan plan(groups, topo, t);
    const Rational d = oracle_dof(r, topo.L(), t);
    ++points;
    for (int k = 1; k <= topo.K(); ++k)
      c.expect(subspace_census(plan, k).dof() == d, "H=" + std::to_string(H) + " r=" + std::to_string(r) +
                                                        " t=" + std::to_string(t) + " u_" + std::to_string(k));
  };
  for (int H = 3; H <= 8; ++H)
    for (int t = 1; t <= H - 2; ++t) check(H, 2, t);  // L = H - 1
  for (int H = 2; H <= 6; ++H)
    for (int r = 1; r < H; ++r) {
      const auto L = binomial(H - 1, r - 1);
      for (auto t = std::max<std::int64_t>(0, L - 2); t <= L - 1; ++t) check(H, r, static_cast<int>(t));
    }
  return "Example census (6,3), d = 2/3; census equals the DoF formula at " + std::to_string(points) + " (H,r,t) points";
}

// ------------------------------------------------------------------- 5

std::string criterion5(Check& c) {
  const auto start = std::chrono::steady_clock::now();
  const std::int64_t F = 4096;
  std::mt19937_64 rng(5150);
  int trials = 0;
  for (auto [H, r, t] : {std::tuple{4, 2, 1}, std::tuple{5, 2, 1}, std::tuple{5, 2, 2}, std::tuple{4, 3, 1},
                         std::tuple{5, 2, 3}}) {
    const Topology topo(H, r);
    for (int j = 0; j < 20; ++j) {
      const int N = topo.K() + j % 4;
      NetworkParams params{H, r, N, F, Rational(1), Rational(0)};
      params = params.with_t(t);
      const auto demand = DemandVector::uniform(topo.K(), N, rng);
      const std::uint64_t seed = rng();
      const auto library = FileLibrary::pseudorandom(N, F, seed);
      const auto placement = encode_library(library, params);
      const auto rep = deliver(topo, placement, place_caches(placement, topo), demand, &library);
      ++trials;
      for (const auto& u : rep.per_user)
        c.expect(u.success && u.bytes_match && u.audit_ok,
                 "H=" + std::to_string(H) + " r=" + std::to_string(r) + " t=" + std::to_string(t) + " seed " +
                     std::to_string(seed) + " u_" + std::to_string(u.k) + " " + u.error);
    }
  }
  const double elapsed = seconds_since(start);
  c.expect(trials >= 100, std::to_string(trials) + " trials");
  c.expect(elapsed < 60.0, "runtime " + secs(elapsed));
  return std::to_string(trials) + " trials at F = 4096, every user bit-exact; " + secs(elapsed);
}

// ------------------------------------------------------------------- 6

std::string criterion6(Check& c) {
  std::size_t points = 0;
  const std::vector<Rational> rhos{Rational(1, 2), Rational(1), Rational(2), Rational(10)};
  for (int H = 3; H <= 6; ++H)
    for (int r = 1; r < H; ++r) {
      const Topology topo(H, r);
      const int L = topo.L();
      if (L > 10) continue;
      for (int t = 0; t <= L; ++t) {
        if (!(r == 2 || t >= L - 2)) continue;
        NetworkParams params{H, r, topo.K(), 97, Rational(1), Rational(0)};
        params = params.with_t(t);
        const auto rep = run_end_to_end(params, DemandVector::identity(topo.K()), 600 + t);
        c.expect(rep.all_success(), "pipeline at H=" + std::to_string(H) + " r=" + std::to_string(r));
        for (const auto& rho : rhos) {
          params.rho = rho;
          ++points;
          const Rational direct = oracle_ndt(r, L, t, rho);
          const Rational split = fronthaul_ndt(params) + (t == L ? Rational(0) : edge_ndt(r, L, t));
          const Rational measured = rep.R1 / rho + rep.R2 / rep.d;
          const std::string at = "H=" + std::to_string(H) + " r=" + std::to_string(r) + " t=" + std::to_string(t) +
                                 " rho=" + to_exact_string(rho);
          c.expect(direct == split, "closed form vs fronthaul+edge at " + at);
          c.expect(direct == measured, "closed form vs measured at " + at + ": " + to_exact_string(measured));
          c.expect(ndt_point(params).delta == direct, "ndt_point at " + at);
        }
      }
    }
  NetworkParams ex = kExample;
  const auto rep = run_end_to_end(ex, DemandVector::identity(10), 606);
  const Rational measured = rep.R1 + rep.R2 / rep.d;
  c.expect(measured == Rational(15, 8) && oracle_ndt(2, 4, 1, Rational(1)) == Rational(15, 8) &&
               ndt_point(ex).delta == Rational(15, 8),
           "Example delta(rho=1) = 15/8, measured " + to_exact_string(measured));
  return "three NDT evaluations agree at " + std::to_string(points) + " (H,r,t,rho) points; Example delta = 15/8";
}

// ------------------------------------------------------------------- 7

std::string criterion7(Check& c) {
  const int H = 7, N = 21;
  const auto grid = cache_grid(N, N * 12);
  const std::vector<Rational> rhos{Rational(1, 2), Rational(1), Rational(2), Rational(10)};
  std::vector<std::vector<ConnectivityRow>> tables;
  for (const auto& rho : rhos) tables.push_back(compare_connectivity(H, 5, 2, N, rho, grid));
  std::size_t common = 0;
  for (std::size_t j = 0; j < grid.size(); ++j) {
    if (!tables[0][j].both_proven()) continue;
    ++common;
    for (std::size_t q = 0; q < rhos.size(); ++q) {
      const auto& row = tables[q][j];
      c.expect(row.a.delta <= row.b.delta, "delta_A <= delta_B at M=" + to_exact_string(row.M) + " rho=" +
                                               to_exact_string(row.rho));
      if (q) c.expect(row.gap <= tables[q - 1][j].gap, "gap grows with rho at M=" + to_exact_string(row.M));
    }
  }
  c.expect(common > 0, "common grid not empty");
  return "delta_A <= delta_B and gap non-increasing in rho at " + std::to_string(common) +
         " common proven grid points (M step 1/12), rho in {1/2,1,2,10}";
}

// ------------------------------------------------------------------- 8

std::string criterion8(Check& c) {
  const auto start = std::chrono::steady_clock::now();
  const Topology topo(4, 2);
  const auto partitions = oracle::all_valid_partitions(topo, 1);
  auto as_set = [](const std::vector<AlignmentGroup>& groups) {
    std::set<std::vector<MessageId>> out;
    for (const auto& g : groups) out.insert(g.signals);
    return out;
  };
  c.expect(partitions.size() == 1, std::to_string(partitions.size()) + " valid partitions");
  if (!partitions.empty()) {
    c.expect(partitions.front() == as_set(build_groups(topo, 1)), "closed form equals the unique partition");
    c.expect(partitions.front() == as_set(build_groups_greedy(topo, 1)), "greedy equals the unique partition");
  }
  const double elapsed = seconds_since(start);
  c.expect(elapsed < 10.0, "runtime " + secs(elapsed));
  return "exhaustive search finds exactly one valid partition; closed form and greedy both equal it; " + secs(elapsed);
}

// ------------------------------------------------------------------- 9

// Direct recomputation of interfering signals: X_i^S reaches k through EN i
// in N_k and carries nothing for k when Index(i,k) is not in S.
bool interferes(const Topology& topo, int k, const MessageId& m) {
  const auto idx = topo.index_of(m.i, k);
  return idx && !contains(m.S, *idx);
}

void alignment_invariants(Check& c, const Topology& topo, int t) {
  const std::string at = "H=" + std::to_string(topo.H()) + " r=" + std::to_string(topo.r()) + " t=" + std::to_string(t);
  const int L = topo.L();
  const int r = topo.r();
  const auto groups = build_groups(topo, t);
  c.expect(verify_group_cover(groups, topo, t).ok, "library cover check at " + at);
  if (t >= L - 1) {
    c.expect(groups.empty(), "no groups at " + at);
    return;
  }
  std::map<MessageId, int> owner;
  std::vector<int> groups_at_user(static_cast<std::size_t>(topo.K()) + 1, 0);
  for (const auto& g : groups) {
    c.expect(static_cast<int>(g.signals.size()) == r + L - t - 2, "group size at " + at);
    std::set<int> ens;
    for (const auto& m : g.signals) {
      ens.insert(m.i);
      c.expect(++owner[m] == 1, to_string(m) + " in two groups at " + at);
    }
    c.expect(ens.size() == g.signals.size(), "repeated EN in a group at " + at);
    for (int k = 1; k <= topo.K(); ++k) {
      int hits = 0;
      for (const auto& m : g.signals) hits += interferes(topo, k, m);
      c.expect(hits == 0 || hits == r, "partial alignment at u_" + std::to_string(k) + ", " + at);
      if (hits == r) ++groups_at_user[k];
    }
  }
  c.expect(static_cast<std::int64_t>(owner.size()) == topo.H() * binomial(L, t + 1), "partition covers all at " + at);
  const auto I = binomial(L, t + 1) - binomial(L - 1, t);
  for (int k = 1; k <= topo.K(); ++k)
    c.expect(groups_at_user[k] == I, "u_" + std::to_string(k) + " in " + std::to_string(groups_at_user[k]) +
                                         " groups at " + at);
}

void placement_and_fronthaul_invariants(Check& c, const Topology& topo, int t, std::mt19937_64& rng) {
  const std::string at = "H=" + std::to_string(topo.H()) + " r=" + std::to_string(topo.r()) + " t=" + std::to_string(t);
  const int L = topo.L();
  const int r = topo.r();
  const int N = topo.K() + 1;
  NetworkParams params{topo.H(), r, N, 61, Rational(1), Rational(0)};
  params = params.with_t(t);
  const auto placement = encode_library(FileLibrary::pseudorandom(N, 61, rng()), params);
  const auto caches = place_caches(placement, topo);

  // Placement: every piece is held by exactly t users of its EN, and each
  // user stores N r C(L-1, t-1) pieces, i.e. M F bytes.
  std::map<PieceId, int> holders;
  for (const auto& cache : caches) {
    c.expect(static_cast<std::int64_t>(cache.pieces.size()) == N * r * binomial(L - 1, t - 1),
             "piece count at u_" + std::to_string(cache.k) + ", " + at);
    c.expect(realized_cache_size(cache, placement) == params.M, "cache size at " + at);
    for (const auto& [id, bytes] : cache.pieces) ++holders[id];
  }
  c.expect(static_cast<std::int64_t>(placement.pieces.size()) == N * topo.H() * binomial(L, t), "piece total at " + at);
  for (const auto& [id, bytes] : placement.pieces) {
    auto it = holders.find(id);
    c.expect((it == holders.end() ? 0 : it->second) == t, to_string(id) + " holders at " + at);
  }

  // Fronthaul: C(L, t+1) messages of one piece each per EN, and every
  // missing piece of every requested chunk arrives exactly once.
  const auto demand = DemandVector::uniform(topo.K(), N, rng);
  const auto msgs = build_fronthaul(topo, placement, demand);
  c.expect(static_cast<std::int64_t>(msgs.size()) == topo.H() * binomial(L, t + 1), "message count at " + at);
  for (int i = 1; i <= topo.H(); ++i)
    c.expect(Rational(static_cast<std::int64_t>(fronthaul_bytes_for_en(msgs, i)), placement.padded_size) ==
                 Rational(binomial(L, t + 1), r * binomial(L, t)),
             "EN bytes at " + at);
  std::map<std::pair<int, PieceId>, int> delivered;
  for (const auto& m : msgs) {
    c.expect(m.payload.size() == placement.piece_size, "payload size at " + at);
    for (int k : topo.served_users(m.id.i)) {
      const int idx = *topo.index_of(m.id.i, k);
      if (contains(m.id.S, idx)) ++delivered[{k, PieceId{demand(k), m.id.i, without(m.id.S, idx)}}];
    }
  }
  for (int k = 1; k <= topo.K(); ++k)
    for (int i : topo.serving_ens(k))
      for (const auto& T : k_subsets(L, t)) {
        if (contains(T, *topo.index_of(i, k))) continue;
        auto it = delivered.find({k, PieceId{demand(k), i, T}});
        c.expect(it != delivered.end() && it->second == 1, "delivery count at u_" + std::to_string(k) + ", " + at);
      }
}

std::string criterion9(Check& c) {
  std::size_t alignment_points = 0, pipeline_points = 0;
  for (int H = 3; H <= 8; ++H) {
    const Topology topo(H, 2);
    for (int t = 0; t < topo.L(); ++t, ++alignment_points) alignment_invariants(c, topo, t);
  }
  for (int H = 3; H <= 7; ++H)
    for (int r = 1; r < H; ++r) {
      const Topology topo(H, r);
      if (r == 2) continue;
      for (int t = std::max(0, topo.L() - 2); t < topo.L(); ++t, ++alignment_points) alignment_invariants(c, topo, t);
    }
  std::mt19937_64 rng(909);
  for (int H = 2; H <= 7; ++H)
    for (int r = 1; r < H; ++r) {
      const Topology topo(H, r);
      if (topo.L() > 10) continue;
      for (int t = 0; t <= topo.L(); ++t, ++pipeline_points) placement_and_fronthaul_invariants(c, topo, t, rng);
    }
  return "alignment invariants at " + std::to_string(alignment_points) + " and placement/fronthaul accounting at " +
         std::to_string(pipeline_points) + " (H,r,t) points";
}

}  // namespace

int main() {
  const std::vector<std::pair<std::string, std::function<std::string(Check&)>>> criteria = {
      {"Example placement table and cache size", criterion1},
      {"Example fronthaul table and load", criterion2},
      {"Example alignment matrices", criterion3},
      {"DoF from subspace census", criterion4},
      {"End-to-end bit-exact recovery", criterion5},
      {"NDT consistency", criterion6},
      {"Connectivity comparison", criterion7},
      {"Grouping oracle", criterion8},
      {"Invariant suite", criterion9},
  };
  int failed = 0;
  for (std::size_t j = 0; j < criteria.size(); ++j) {
    Check c;
    std::string detail;
    try {
      detail = criteria[j].second(c);
    } catch (const std::exception& e) {
      c.expect(false, std::string("exception: ") + e.what());
    }
    const bool ok = c.ok();
    failed += !ok;
    std::cout << (ok ? "PASS" : "FAIL") << " criterion " << j + 1 << ": " << criteria[j].first << " -- "
              << (ok ? detail + " (" + c.summary() + ")" : c.summary()) << std::endl;
  }
  std::cout << (failed ? "FAILED " : "ALL PASSED ") << criteria.size() - failed << "/" << criteria.size() << std::endl;
  return failed ? 1 : 0;
}
