#pragma once

#include <algorithm>
#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "fran/alignment.hpp"
#include "fran/fronthaul.hpp"
#include "fran/ia_verify.hpp"
#include "fran/interference.hpp"
#include "fran/mds.hpp"
#include "fran/ndt.hpp"
#include "fran/placement.hpp"
#include "fran/topology.hpp"

namespace fran {

// Recovers W_{d_k} at user k from its desired payloads and its cache:
// every X_i^S (i in N_k, Index(i,k) in S) minus the cached pieces of the
// other users in S yields f^i_{d_k, S \ Index(i,k)}; the cache supplies the
// rest of each chunk, and any r chunks MDS-decode to the file. Every cache
// lookup is appended to `reads` when given.
inline Bytes decode_user(const Topology& topo, const CodeLayout& layout, int k,
                         const std::map<MessageId, Bytes>& delivered, const CacheContents& cache,
                         const DemandVector& demand, std::vector<PieceId>* reads = nullptr) {
  const int n = demand(k);
  const int L = topo.L();
  const int t = layout.t;

  auto cached = [&](const PieceId& id) -> const Bytes& {
    if (reads) reads->push_back(id);
    auto it = cache.pieces.find(id);
    if (it == cache.pieces.end())
      throw Error(Errc::CacheMismatch, "user " + std::to_string(k) + " lacks " + to_string(id));
    return it->second;
  };

  std::map<int, Bytes> chunks;
  for (int i : topo.serving_ens(k)) {
    const int idx = *topo.index_of(i, k);
    Bytes chunk;
    chunk.reserve(layout.piece_size * static_cast<std::size_t>(binomial(L, t)));
    for (const auto& T : k_subsets(L, t)) {
      if (contains(T, idx)) {
        const Bytes& piece = cached(PieceId{n, i, T});
        chunk.insert(chunk.end(), piece.begin(), piece.end());
        continue;
      }
      Subset S = T;
      S.insert(std::upper_bound(S.begin(), S.end(), idx), idx);
      const MessageId msg{i, S};
      auto it = delivered.find(msg);
      if (it == delivered.end())
        throw Error(Errc::MissingMessage, "user " + std::to_string(k) + " did not receive " + to_string(msg));
      if (it->second.size() != layout.piece_size)
        throw Error(Errc::SizeError, to_string(msg) + " has the wrong payload size");
      Bytes piece = it->second;
      for (const auto& other : message_constituents(topo, demand, msg)) {
        if (other.T == T && other.n == n) continue;  // our own piece
        const Bytes& known = cached(other);
        for (std::size_t j = 0; j < piece.size(); ++j) piece[j] ^= known[j];
      }
      chunk.insert(chunk.end(), piece.begin(), piece.end());
    }
    chunks.emplace(i, std::move(chunk));
  }
  Bytes file = MdsCode(layout.H, layout.r).decode(chunks);
  const auto original = layout.original_sizes.at(static_cast<std::size_t>(n - 1));
  file.resize(static_cast<std::size_t>(original));
  return file;
}

struct UserOutcome {
  int k = 0;
  int file = 0;
  bool success = false;      // decoded without error
  bool bytes_match = false;  // equals the reference file (false when no reference)
  bool audit_ok = true;      // every cache read obeys the placement rule
  std::size_t desired_bytes = 0;
  SubspaceCensus census;
  std::optional<Errc> error_code;
  std::string error;
};

struct DeliveryReport {
  DemandVector demand;
  bool compared = false;  // recovered files were checked against a reference library
  std::vector<UserOutcome> per_user;
  std::size_t fronthaul_messages = 0;
  std::size_t group_count = 0;
  bool aligned = true;  // false when no grouping exists for (r, t); d is then the analytic expression
  bool groups_valid = false;
  std::vector<std::string> group_violations;
  // Measured from generated bytes, normalized by the padded file size.
  Rational R1{0};
  Rational R2{0};
  Rational d{1};
  Rational delta_F{0};
  Rational delta_E{0};
  Rational delta{0};
  NdtResult analytic;

  bool all_success() const {
    return std::all_of(per_user.begin(), per_user.end(), [this](const UserOutcome& u) {
      return u.success && u.audit_ok && (u.bytes_match || !compared);
    });
  }
};

// Fronthaul, grouping audit, subspace census, and per-user decoding against
// an existing placement. `reference`, when given, is compared bit for bit;
// `recovered`, when given, receives each user's decoded file (empty on failure).
inline DeliveryReport deliver(const Topology& topo, const Placement& server, const std::vector<CacheContents>& caches,
                              const DemandVector& demand, const FileLibrary* reference = nullptr,
                              std::vector<Bytes>* recovered = nullptr) {
  DeliveryReport rep;
  rep.demand = demand;
  rep.compared = reference != nullptr;
  const int t = server.t;
  const auto messages = build_fronthaul(topo, server, demand);
  rep.fronthaul_messages = messages.size();

  std::vector<AlignmentGroup> groups;
  try {
    groups = build_groups(topo, t);
  } catch (const Error& e) {
    if (e.code() != Errc::UnsupportedRegime) throw;
    rep.aligned = false;
    rep.group_violations.push_back(e.what());
  }
  rep.group_count = groups.size();
  if (rep.aligned) {
    const auto cover = verify_group_cover(groups, topo, t);
    rep.groups_valid = cover.ok;
    rep.group_violations = cover.violations;
  }
  const DirectionPlan plan(groups, topo, t);
  rep.analytic = ndt_point(server.params);

  std::map<MessageId, const Bytes*> payloads;
  for (const auto& m : messages) payloads.emplace(m.id, &m.payload);

  std::size_t max_en_bytes = 0;
  for (int i = 1; i <= topo.H(); ++i) max_en_bytes = std::max(max_en_bytes, fronthaul_bytes_for_en(messages, i));

  std::size_t max_user_bytes = 0;
  std::optional<Rational> min_dof;
  const CodeLayout layout = layout_of(server);
  if (recovered) recovered->assign(static_cast<std::size_t>(topo.K()), Bytes{});
  for (int k = 1; k <= topo.K(); ++k) {
    UserOutcome out;
    out.k = k;
    out.file = demand(k);
    if (rep.aligned) {
      out.census = subspace_census(plan, k);
      if (!min_dof || out.census.dof() < *min_dof) min_dof = out.census.dof();
    }
    std::map<MessageId, Bytes> delivered;
    for (const auto& m : desired_messages(topo, t, k)) {
      const Bytes& payload = *payloads.at(m);
      out.desired_bytes += payload.size();
      delivered.emplace(m, payload);
    }
    max_user_bytes = std::max(max_user_bytes, out.desired_bytes);
    std::vector<PieceId> reads;
    try {
      Bytes file = decode_user(topo, layout, k, delivered, caches.at(k - 1), demand, &reads);
      out.success = true;
      if (reference) out.bytes_match = file == Bytes(reference->files[out.file - 1].begin(),
                                                     reference->files[out.file - 1].begin() +
                                                         reference->original_sizes[out.file - 1]);
      if (recovered) (*recovered)[k - 1] = std::move(file);
    } catch (const Error& e) {
      out.error_code = e.code();
      out.error = e.what();
    }
    for (const auto& id : reads) out.audit_ok = out.audit_ok && caches_piece(topo, k, id.i, id.T);
    rep.per_user.push_back(std::move(out));
  }

  const Rational F(server.padded_size == 0 ? 1 : server.padded_size);
  rep.R1 = Rational(static_cast<std::int64_t>(max_en_bytes)) / F;
  rep.R2 = Rational(static_cast<std::int64_t>(max_user_bytes)) / F;
  rep.d = rep.aligned ? min_dof.value_or(Rational(1)) : rep.analytic.d;
  const Rational rho = server.params.rho;
  if (rep.R1 != 0 && rho <= 0) throw Error(Errc::UnboundedNdt, "zero fronthaul rate with nonzero load");
  rep.delta_F = rep.R1 == 0 ? Rational(0) : rep.R1 / rho;
  rep.delta_E = rep.R2 / rep.d;
  rep.delta = rep.delta_F + rep.delta_E;
  return rep;
}

// Whole pipeline from a seeded pseudorandom library; params.M must give an
// integer t.
inline DeliveryReport run_end_to_end(const NetworkParams& params, const DemandVector& demand, std::uint64_t seed) {
  params.validate();
  params.integer_t();
  const Topology topo = build_topology(params);
  demand.validate(topo.K(), params.N);
  const FileLibrary library = FileLibrary::pseudorandom(params.N, params.file_size_bytes, seed);
  const Placement placement = encode_library(library, params);
  const auto caches = place_caches(placement, topo);
  return deliver(topo, placement, caches, demand, &library);
}

inline nlohmann::json report_json(const DeliveryReport& rep) {
  nlohmann::json users = nlohmann::json::array();
  for (const auto& u : rep.per_user) {
    nlohmann::json entry = {{"k", u.k},
                            {"file", u.file},
                            {"success", u.success},
                            {"bytes_match", u.bytes_match},
                            {"audit_ok", u.audit_ok},
                            {"desired_bytes", u.desired_bytes},
                            {"census", {{"desired", u.census.desired}, {"interference", u.census.interference}}}};
    if (!u.error.empty()) entry["error"] = u.error;
    users.push_back(std::move(entry));
  }
  auto q = [](const Rational& v) { return to_exact_string(v); };
  return {{"demand", rep.demand.d},
          {"all_success", rep.all_success()},
          {"compared", rep.compared},
          {"fronthaul_messages", rep.fronthaul_messages},
          {"group_count", rep.group_count},
          {"aligned", rep.aligned},
          {"groups_valid", rep.groups_valid},
          {"group_violations", rep.group_violations},
          {"R1", q(rep.R1)},
          {"R2", q(rep.R2)},
          {"d", q(rep.d)},
          {"delta_F", q(rep.delta_F)},
          {"delta_E", q(rep.delta_E)},
          {"delta", q(rep.delta)},
          {"ndt",
           {{"delta_F", q(rep.analytic.delta_F)},
            {"delta_E", q(rep.analytic.delta_E)},
            {"delta", q(rep.analytic.delta)},
            {"proven", rep.analytic.proven}}},
          {"per_user", std::move(users)}};
}

}  // namespace fran
