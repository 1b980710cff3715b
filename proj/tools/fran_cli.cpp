// fran: command-line front end for the partially-connected F-RAN coded
// caching pipeline.
//
// Exit codes: 0 ok, 1 failed check, 2 invalid input, 3 unsupported regime,
// 4 I/O or data integrity. Errors go to stderr as one line,
// "error: <Code>: <message>".

#include <CLI11.hpp>

#include <cstdlib>
#include <fstream>
#include <iostream>
#include <optional>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "fran/fran.hpp"

namespace fs = std::filesystem;
using nlohmann::json;
using namespace fran;

namespace {

struct Failure {
  int exit_code;
  std::string code;
  std::string message;
};

int exit_code_for(Errc code) {
  switch (code) {
    case Errc::UnsupportedRegime: return 3;
    case Errc::IoError:
    case Errc::CacheMismatch:
    case Errc::MissingMessage: return 4;
    default: return 2;
  }
}

struct RunConfig {
  std::optional<int> H, r, N, degree_n;
  std::optional<std::string> M, rho, demand, output_dir;
  std::optional<std::int64_t> t, F;
  std::optional<std::uint64_t> seed;

  void overlay(const RunConfig& o) {
    auto take = [](auto& dst, const auto& src) {
      if (src) dst = src;
    };
    take(H, o.H);
    take(r, o.r);
    take(N, o.N);
    take(degree_n, o.degree_n);
    take(M, o.M);
    take(rho, o.rho);
    take(demand, o.demand);
    take(output_dir, o.output_dir);
    take(t, o.t);
    take(F, o.F);
    take(seed, o.seed);
  }
};

std::string scalar_text(const json& v) {
  if (v.is_string()) return v.get<std::string>();
  if (v.is_number_integer()) return std::to_string(v.get<std::int64_t>());
  if (v.is_number()) return v.dump();
  throw Error(Errc::InvalidParams, "expected a number or string, got " + v.dump());
}

RunConfig load_config(const fs::path& path) {
  const json doc = read_json(path);
  if (!doc.is_object()) throw Error(Errc::InvalidParams, "config must be a JSON object");
  RunConfig c;
  try {
    for (const auto& [key, v] : doc.items()) {
      if (key == "H") c.H = v.get<int>();
      else if (key == "r") c.r = v.get<int>();
      else if (key == "N") c.N = v.get<int>();
      else if (key == "M") c.M = scalar_text(v);
      else if (key == "t") c.t = v.get<std::int64_t>();
      else if (key == "rho") c.rho = scalar_text(v);
      else if (key == "F" || key == "file_size_bytes") c.F = v.get<std::int64_t>();
      else if (key == "seed") c.seed = v.get<std::uint64_t>();
      else if (key == "output_dir") c.output_dir = v.get<std::string>();
      else if (key == "degree_n") c.degree_n = v.get<int>();
      else if (key == "demand") {
        if (v.is_array()) {
          std::string list;
          for (const auto& e : v) list += (list.empty() ? "" : ",") + std::to_string(e.get<int>());
          c.demand = list;
        } else {
          c.demand = v.get<std::string>();
        }
      } else {
        throw Error(Errc::InvalidParams, "unknown config key '" + key + "'");
      }
    }
  } catch (const json::exception& e) {
    throw Error(Errc::InvalidParams, std::string("config: ") + e.what());
  }
  return c;
}

template <typename T>
CLI::Option* add_flag_to(CLI::App* sub, const std::string& name, std::optional<T>& slot, const std::string& desc) {
  return sub->add_option_function<T>(name, [&slot](const T& v) { slot = v; }, desc);
}

void add_network_flags(CLI::App* sub, RunConfig& f) {
  add_flag_to(sub, "--H", f.H, "number of edge nodes");
  add_flag_to(sub, "--r", f.r, "edge nodes per user");
  add_flag_to(sub, "--N", f.N, "library size (default K)");
}

void add_cache_flags(CLI::App* sub, RunConfig& f) {
  add_flag_to(sub, "--M", f.M, "cache size in files, e.g. 5/2");
  add_flag_to(sub, "--t", f.t, "integer t = M L / N (alternative to --M)");
  add_flag_to(sub, "--rho", f.rho, "fronthaul rate, e.g. 1/2 (default 1)");
}

void add_run_flags(CLI::App* sub, RunConfig& f) {
  add_flag_to(sub, "--F", f.F, "file size in bytes (default 4096)");
  add_flag_to(sub, "--seed", f.seed, "library and demand seed (default 1)");
  add_flag_to(sub, "--demand", f.demand, "random | distinct | identity | comma list (default random)");
}

std::optional<NetworkParams> resolve_params(const RunConfig& c, bool need_cache) {
  if (!c.H || !c.r) throw Error(Errc::InvalidParams, "--H and --r are required");
  NetworkParams p{*c.H, *c.r, 0, c.F.value_or(4096)};
  p.validate_connectivity();
  p.N = c.N.value_or(static_cast<int>(p.K()));
  p.rho = parse_rational(c.rho.value_or("1"));
  if (p.file_size_bytes <= 0) throw Error(Errc::InvalidParams, "--F must be positive");
  if (c.M && c.t) throw Error(Errc::InvalidParams, "give --M or --t, not both");
  if (c.t) {
    if (*c.t < 0 || *c.t > p.L()) throw Error(Errc::OutOfRange, "t outside [0, L]");
    p = p.with_t(*c.t);
  } else if (c.M) {
    p.M = parse_rational(*c.M);
  } else if (need_cache) {
    throw Error(Errc::InvalidParams, "--M or --t is required");
  } else {
    p.validate();
    return std::nullopt;
  }
  p.validate();
  return p;
}

NetworkParams require_params(const RunConfig& c) { return *resolve_params(c, true); }

DemandVector resolve_demand(const RunConfig& c, int K, int N) {
  const std::string spec = c.demand.value_or("random");
  std::mt19937_64 rng(c.seed.value_or(1) + 0x9e3779b97f4a7c15ULL);
  DemandVector d;
  if (spec == "random") {
    d = DemandVector::uniform(K, N, rng);
  } else if (spec == "distinct") {
    if (N < K) throw Error(Errc::InvalidParams, "distinct demands need N >= K");
    d = DemandVector::distinct(K, N, rng);
  } else if (spec == "identity") {
    if (N < K) throw Error(Errc::InvalidParams, "identity demand needs N >= K");
    d = DemandVector::identity(K);
  } else {
    std::stringstream in(spec);
    std::string item;
    while (std::getline(in, item, ',')) {
      try {
        std::size_t used = 0;
        d.d.push_back(std::stoi(item, &used));
        if (used != item.size()) throw std::invalid_argument(item);
      } catch (const std::exception&) {
        throw Error(Errc::InvalidParams, "bad demand entry '" + item + "'");
      }
    }
  }
  d.validate(K, N);
  return d;
}

fs::path output_dir(const RunConfig& c) {
  if (c.output_dir) return *c.output_dir;
  if (const char* env = std::getenv("FRAN_OUTPUT_DIR"); env && *env) return env;
  return ".";
}

void emit(const std::string& text, const std::string& out_path) {
  if (out_path.empty()) {
    std::cout << text;
    return;
  }
  const fs::path path(out_path);
  if (path.has_parent_path()) fs::create_directories(path.parent_path());
  std::ofstream out(path, std::ios::trunc);
  if (!out) throw Error(Errc::IoError, "cannot write " + out_path);
  out << text;
  if (!out) throw Error(Errc::IoError, "short write to " + out_path);
}

// ---------------------------------------------------------------- commands

int cmd_topology(const RunConfig& c) {
  if (!c.H || !c.r) throw Error(Errc::InvalidParams, "--H and --r are required");
  NetworkParams{*c.H, *c.r}.validate_connectivity();
  const Topology topo(*c.H, *c.r);
  json doc = topology_json(topo);
  doc["K"] = topo.K();
  doc["L"] = topo.L();
  json ens = json::array();
  for (int i = 1; i <= topo.H(); ++i) ens.push_back(topo.served_users(i));
  doc["en_users"] = ens;
  std::cout << doc.dump(2) << '\n';
  return 0;
}

int cmd_place(const RunConfig& c, const std::string& library_dir) {
  const NetworkParams params = require_params(c);
  const Topology topo = build_topology(params);
  const std::uint64_t seed = c.seed.value_or(1);
  FileLibrary lib = library_dir.empty() ? FileLibrary::pseudorandom(params.N, params.file_size_bytes, seed)
                                        : FileLibrary::from_directory(library_dir);
  if (lib.N() != params.N)
    throw Error(Errc::InvalidParams, "library holds " + std::to_string(lib.N()) + " files, N = " +
                                         std::to_string(params.N));
  NetworkParams stored = params;
  stored.file_size_bytes = lib.file_size();
  const Placement placement = encode_library(lib, stored);
  const fs::path dir = output_dir(c) / "placement";
  write_placement(dir, placement, library_dir.empty() ? std::optional<std::uint64_t>(seed) : std::nullopt);

  json users = json::array();
  for (const auto& cache : place_caches(placement, topo))
    users.push_back({{"k", cache.k},
                     {"pieces", cache.pieces.size()},
                     {"stored_bytes", cache.stored_bytes()},
                     {"M_realized", to_exact_string(realized_cache_size(cache, placement))}});
  json doc = {{"placement_dir", dir.string()},
              {"t", placement.t},
              {"piece_size", placement.piece_size},
              {"padded_size", placement.padded_size},
              {"pieces", placement.pieces.size()},
              {"per_user", users}};
  std::cout << doc.dump(2) << '\n';
  return 0;
}

json diff_summary(const DeliveryReport& rep) {
  json failed = json::array();
  std::size_t exact = 0;
  for (const auto& u : rep.per_user) {
    if (u.success && u.bytes_match) ++exact;
    else failed.push_back(u.k);
  }
  return {{"users", rep.per_user.size()}, {"bit_exact", exact}, {"differing_or_failed", failed}};
}

void dump_recovered(const fs::path& dir, const DeliveryReport& rep, const std::vector<Bytes>& files) {
  fs::create_directories(dir);
  for (const auto& u : rep.per_user)
    if (u.success) write_bytes(dir / ("u" + std::to_string(u.k) + "_W" + std::to_string(u.file) + ".bin"), files[u.k - 1]);
}

// Nonzero exit with a single error line when some user did not recover its file.
std::optional<Failure> delivery_failure(const DeliveryReport& rep) {
  if (rep.all_success()) return std::nullopt;
  std::size_t bad = 0;
  const UserOutcome* first = nullptr;
  for (const auto& u : rep.per_user)
    if (!(u.success && u.audit_ok && (u.bytes_match || !rep.compared))) {
      ++bad;
      if (!first) first = &u;
    }
  const std::string what = std::to_string(bad) + " of " + std::to_string(rep.per_user.size()) +
                           " users failed; first u" + std::to_string(first->k);
  if (first->error_code)
    return Failure{exit_code_for(*first->error_code), std::string(errc_name(*first->error_code)),
                   what + ": " + first->error.substr(first->error.find(": ") + 2)};
  return Failure{1, "RecoveryMismatch", what + " recovered bytes differ from the library"};
}

int report_failure(const Failure& f) {
  std::cerr << "error: " << f.code << ": " << f.message << '\n';
  return f.exit_code;
}

int cmd_deliver(const RunConfig& c, const std::string& placement_dir, const std::string& library_dir,
                const std::string& dump_dir) {
  const fs::path dir = placement_dir.empty() ? output_dir(c) / "placement" : fs::path(placement_dir);
  const LoadedPlacement loaded = read_placement(dir);
  const Placement& placement = loaded.placement;
  const Topology topo = build_topology(placement.params);
  const DemandVector demand = resolve_demand(c, topo.K(), placement.params.N);

  std::optional<FileLibrary> reference;
  if (!library_dir.empty()) reference = FileLibrary::from_directory(library_dir);
  else if (loaded.library_seed)
    reference = FileLibrary::pseudorandom(placement.params.N, placement.params.file_size_bytes, *loaded.library_seed);

  const auto messages = build_fronthaul(topo, placement, demand);
  const fs::path fronthaul_dir = output_dir(c) / "fronthaul";
  write_fronthaul(fronthaul_dir, messages, placement, demand);

  std::vector<Bytes> recovered;
  const auto rep = deliver(topo, placement, place_caches(placement, topo), demand, reference ? &*reference : nullptr,
                           &recovered);
  json doc = report_json(rep);
  doc["fronthaul_dir"] = fronthaul_dir.string();
  if (rep.compared) doc["recovered_diff"] = diff_summary(rep);
  write_json(output_dir(c) / "report.json", doc);
  if (!dump_dir.empty()) dump_recovered(dump_dir, rep, recovered);
  std::cout << doc.dump(2) << '\n';
  if (auto f = delivery_failure(rep)) return report_failure(*f);
  return 0;
}

int cmd_simulate(const RunConfig& c, int corrupt_blobs, const std::string& dump_dir) {
  const NetworkParams params = require_params(c);
  params.integer_t();
  const Topology topo = build_topology(params);
  const std::uint64_t seed = c.seed.value_or(1);
  const DemandVector demand = resolve_demand(c, topo.K(), params.N);
  const FileLibrary library = FileLibrary::pseudorandom(params.N, params.file_size_bytes, seed);
  const Placement server = encode_library(library, params);

  // Placement phase: caches are filled from what was persisted.
  const fs::path dir = output_dir(c) / "placement";
  fs::remove_all(dir);
  write_placement(dir, server, seed);
  if (corrupt_blobs < 0) throw Error(Errc::InvalidParams, "--corrupt-blobs must be >= 0");
  json corrupted = json::array();
  // Damage pieces a requesting user holds of its own file; decoding is sure
  // to read them.
  auto read_by_requester = [&](const PieceId& id) {
    for (int k = 1; k <= topo.K(); ++k)
      if (demand(k) == id.n && caches_piece(topo, k, id.i, id.T)) return true;
    return false;
  };
  for (const auto& [id, bytes] : server.pieces) {
    if (static_cast<int>(corrupted.size()) >= corrupt_blobs) break;
    if (bytes.empty() || !read_by_requester(id)) continue;
    const fs::path blob = dir / piece_blob_name(id);
    Bytes damaged = read_bytes(blob);
    damaged[0] ^= 0xff;
    write_bytes(blob, damaged);
    corrupted.push_back(to_string(id));
  }
  const LoadedPlacement loaded = read_placement(dir, false);

  std::vector<Bytes> recovered;
  const auto rep = deliver(topo, server, place_caches(loaded.placement, topo), demand, &library, &recovered);
  json doc = report_json(rep);
  doc["placement_dir"] = dir.string();
  doc["corrupted_blobs"] = corrupted;
  json skipped = json::array();
  for (const auto& id : loaded.corrupt) skipped.push_back(to_string(id));
  doc["rejected_blobs"] = skipped;
  doc["recovered_diff"] = diff_summary(rep);
  write_json(output_dir(c) / "report.json", doc);
  if (!dump_dir.empty()) dump_recovered(dump_dir, rep, recovered);
  std::cout << doc.dump(2) << '\n';
  if (auto f = delivery_failure(rep)) return report_failure(*f);
  return 0;
}

int cmd_verify(const RunConfig& c, int rank_user, bool with_groups) {
  const NetworkParams params = require_params(c);
  const int t = params.integer_t();
  const Topology topo = build_topology(params);
  const int n = c.degree_n.value_or(1);
  if (n < 0) throw Error(Errc::InvalidParams, "--n must be >= 0");
  const auto groups = build_groups(topo, t);
  const auto cover = verify_group_cover(groups, topo, t);
  const DirectionPlan plan(groups, topo, t);
  const Rational d = dof_per_user(params.H, params.r, t);

  bool ok = cover.ok;
  json census = json::array();
  for (int k = 1; k <= topo.K(); ++k) {
    const auto cs = subspace_census(plan, k);
    const bool separated = labels_separated(plan, k);
    ok = ok && separated && cs.dof() == d;
    census.push_back({{"k", k},
                      {"desired", cs.desired},
                      {"interference", cs.interference},
                      {"dof", to_exact_string(cs.dof())},
                      {"separated", separated}});
  }
  std::size_t checks = 0;
  json failed_containment = json::array();
  for (const auto& g : groups)
    for (int k : g.covered_users) {
      ++checks;
      if (!verify_alignment_containment(g, topo, k, n)) failed_containment.push_back({{"g", g.g}, {"k", k}});
    }
  ok = ok && failed_containment.empty();

  json doc = {{"H", params.H},
              {"r", params.r},
              {"t", t},
              {"degree_n", n},
              {"group_count", groups.size()},
              {"cover", {{"ok", cover.ok}, {"violations", cover.violations}, {"groups_per_user", cover.groups_per_user}}},
              {"dof_formula", to_exact_string(d)},
              {"census", census},
              {"containment", {{"checked", checks}, {"failed", failed_containment}}}};
  if (rank_user > 0) {
    if (rank_user > topo.K()) throw Error(Errc::IndexOutOfRange, "no user " + std::to_string(rank_user));
    const auto rank = numeric_rank_spotcheck(plan, rank_user, n, c.seed.value_or(1));
    doc["rank"] = {{"k", rank_user},
                   {"distinct_monomials", rank.distinct_monomials},
                   {"draws", rank.draws},
                   {"rank", rank.rank},
                   {"smallest_kept_ratio", rank.smallest_kept_ratio},
                   {"full_rank", rank.full_rank()}};
    ok = ok && rank.full_rank();
  }
  if (with_groups) doc["groups"] = groups_json(groups);
  doc["ok"] = ok;
  std::cout << doc.dump(2) << '\n';
  if (!ok) return report_failure({1, "VerificationFailed", "alignment checks did not all pass"});
  return 0;
}

int cmd_ndt(const RunConfig& c, int sweep, const std::string& out) {
  std::ostringstream csv;
  if (sweep > 0) {
    if (c.M || c.t) throw Error(Errc::InvalidParams, "--sweep replaces --M/--t");
    RunConfig zero = c;
    zero.M = "0";
    const NetworkParams params = require_params(zero);
    write_ndt_csv(csv, ndt_sweep(params, cache_grid(params.N, sweep)));
  } else {
    write_ndt_csv(csv, {ndt_point(require_params(c))});
  }
  emit(csv.str(), out);
  return 0;
}

std::vector<Rational> parse_rational_list(const std::string& text) {
  std::vector<Rational> out;
  std::stringstream in(text);
  std::string item;
  while (std::getline(in, item, ',')) out.push_back(parse_rational(item));
  if (out.empty()) throw Error(Errc::InvalidParams, "empty rho list");
  return out;
}

int cmd_compare(const RunConfig& c, int rA, int rB, const std::string& rhos, int sweep) {
  if (!c.H) throw Error(Errc::InvalidParams, "--H is required");
  const int H = *c.H;
  NetworkParams{H, rA}.validate_connectivity();
  NetworkParams{H, rB}.validate_connectivity();
  const int N = c.N.value_or(static_cast<int>(binomial(H, rB)));
  const auto grid = cache_grid(N, sweep > 0 ? sweep : N);
  std::ostringstream a_csv, b_csv, gap_csv;
  a_csv << ndt_csv_header() << '\n';
  b_csv << ndt_csv_header() << '\n';
  gap_csv << "M,rho,delta_A,delta_B,gap,a_not_worse,both_proven,M_exact,rho_exact,delta_A_exact,delta_B_exact,gap_exact\n";
  for (const auto& rho : parse_rational_list(rhos)) {
    for (const auto& row : compare_connectivity(H, rA, rB, N, rho, grid)) {
      a_csv << ndt_csv_row(row.a) << '\n';
      b_csv << ndt_csv_row(row.b) << '\n';
      gap_csv << to_decimal_string(row.M) << ',' << to_decimal_string(row.rho) << ',' << to_decimal_string(row.a.delta)
              << ',' << to_decimal_string(row.b.delta) << ',' << to_decimal_string(row.gap) << ','
              << (row.a_not_worse() ? "true" : "false") << ',' << (row.both_proven() ? "true" : "false") << ','
              << to_exact_string(row.M) << ',' << to_exact_string(row.rho) << ',' << to_exact_string(row.a.delta) << ','
              << to_exact_string(row.b.delta) << ',' << to_exact_string(row.gap) << '\n';
    }
  }
  const fs::path dir = output_dir(c);
  emit(a_csv.str(), (dir / ("ndt_r" + std::to_string(rA) + ".csv")).string());
  emit(b_csv.str(), (dir / ("ndt_r" + std::to_string(rB) + ".csv")).string());
  emit(gap_csv.str(), (dir / "gap.csv").string());
  std::cout << gap_csv.str();
  return 0;
}

// ----------------------------------------------------------- export-example

std::string piece_text(const PieceId& id) {
  return "f_{" + std::to_string(id.n) + "," + subset_string(id.T) + "}^" + std::to_string(id.i);
}

std::string message_text(const MessageId& m) { return "X_" + std::to_string(m.i) + "^{" + subset_string(m.S) + "}"; }

// Entries where the printed tables differ from what the scheme generates.
struct Misprint {
  std::string where;
  std::string printed;
};

const std::vector<std::pair<MessageId, Misprint>> kFronthaulMisprints = {
    {{4, {2, 3}}, {"EN_4", "f_{6,3}^1"}},
    {{4, {2, 4}}, {"EN_4", "f_{6,4}^1"}},
    {{4, {3, 4}}, {"EN_4", "f_{8,4}^1"}},
};

struct InterferenceMisprint {
  int user, row, column;
  std::string printed;
};

const std::vector<InterferenceMisprint> kInterferenceMisprints = {
    {2, 3, 1, "X_1^{2,4}"},
    {3, 3, 1, "X_1^{3,4}"},
    {9, 1, 2, "X_5^{1,4}"},
};

struct BasisMisprint {
  int row, position;
  std::string printed;
};

const std::vector<BasisMisprint> kBasisMisprints = {{9, 6, "h_{10,4}"}};

int cmd_export_example(const std::string& out) {
  NetworkParams params{5, 2, 10, 800, Rational(1), Rational(5, 2)};
  const Topology topo = build_topology(params);
  const int t = params.integer_t();
  const auto demand = DemandVector::identity(topo.K());
  const Placement placement = encode_library(FileLibrary::pseudorandom(params.N, params.file_size_bytes, 1), params);
  std::ostringstream os;

  os << "Example: H=5, r=2, K=N=10, L=4, t=1, M=5/2, demand d_k = k\n\n";
  os << "Table I  cache contents (same for every file n)\n";
  for (int k = 1; k <= topo.K(); ++k) {
    std::string cell;
    for (int i : topo.serving_ens(k))
      for (const auto& T : k_subsets(topo.L(), t))
        if (caches_piece(topo, k, i, T)) cell += (cell.empty() ? "" : ", ") + std::string("f_{n,") + subset_string(T) + "}^" + std::to_string(i);
    os << "  u_" << k << ": " << cell << '\n';
  }

  os << "\nTable II  fronthaul messages\n";
  const auto messages = build_fronthaul(topo, placement, demand);
  for (int i = 1; i <= topo.H(); ++i) {
    os << "  EN_" << i << '\n';
    for (const auto& m : messages) {
      if (m.id.i != i) continue;
      std::string line = message_text(m.id) + " = ";
      for (std::size_t j = 0; j < m.constituents.size(); ++j) line += (j ? " + " : "") + piece_text(m.constituents[j]);
      os << "    " << line;
      for (const auto& [id, mp] : kFronthaulMisprints)
        if (id == m.id) os << "   [printed with " << mp.printed << "]";
      os << '\n';
    }
  }

  os << "\nTable III  interference matrices (columns: serving ENs in ascending order)\n";
  for (int k = 1; k <= topo.K(); ++k) {
    const auto X = interference_matrix(topo, t, k);
    os << "  X_" << k << '\n';
    for (int row = 0; row < static_cast<int>(X.rows()); ++row) {
      os << "   ";
      std::string notes;
      for (std::size_t col = 0; col < X.columns.size(); ++col) {
        os << ' ' << message_text(X.at(row, static_cast<int>(col)));
        for (const auto& mp : kInterferenceMisprints)
          if (mp.user == k && mp.row == row + 1 && mp.column == static_cast<int>(col) + 1)
            notes += "   [column " + std::to_string(col + 1) + " printed as " + mp.printed + "]";
      }
      os << notes << '\n';
    }
  }

  const auto groups = build_groups(topo, t);
  os << "\nMatrix A  alignment bases\n";
  for (const auto& g : groups) {
    os << "  " << g.g << ':';
    for (const auto& h : g.basis) os << " h_{" << h.k << ',' << h.i << '}';
    for (const auto& mp : kBasisMisprints)
      if (mp.row == g.g) os << "   [entry " << mp.position << " printed as " << mp.printed << "]";
    os << '\n';
  }
  os << "\nMatrix B  aligned signals\n";
  for (const auto& g : groups) {
    os << "  " << g.g << ':';
    for (const auto& m : g.signals) os << ' ' << message_text(m);
    os << '\n';
  }
  os << "\nMatrix C  covered users\n";
  for (const auto& g : groups) {
    os << "  " << g.g << ':';
    for (int k : g.covered_users) os << " u_" << k;
    os << '\n';
  }
  emit(os.str(), out);
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Coded caching and delivery for partially-connected F-RAN"};
  app.require_subcommand(1);
  std::string config_path;
  app.add_option("--config", config_path, "JSON config; flags override it");
  RunConfig flags;

  auto* topology = app.add_subcommand("topology", "print the EN-user topology as JSON");
  add_network_flags(topology, flags);

  auto* place = app.add_subcommand("place", "encode a library and persist the placement");
  std::string library_dir;
  add_network_flags(place, flags);
  add_cache_flags(place, flags);
  add_run_flags(place, flags);
  place->add_option("--library-dir", library_dir, "ingest files from this directory instead of a seeded library");
  add_flag_to(place, "--out-dir", flags.output_dir, "output directory (default $FRAN_OUTPUT_DIR or .)");

  auto* deliver_cmd = app.add_subcommand("deliver", "deliver from a persisted placement");
  std::string placement_dir, dump_dir;
  add_run_flags(deliver_cmd, flags);
  deliver_cmd->add_option("--placement", placement_dir, "placement directory (default <out>/placement)");
  deliver_cmd->add_option("--library-dir", library_dir, "reference files for the byte comparison");
  deliver_cmd->add_option("--dump-recovered", dump_dir, "write recovered files here");
  add_flag_to(deliver_cmd, "--out-dir", flags.output_dir, "output directory (default $FRAN_OUTPUT_DIR or .)");

  auto* simulate = app.add_subcommand("simulate", "placement, persistence, delivery and decoding in one run");
  int corrupt_blobs = 0;
  add_network_flags(simulate, flags);
  add_cache_flags(simulate, flags);
  add_run_flags(simulate, flags);
  simulate->add_option("--corrupt-blobs", corrupt_blobs, "damage this many persisted blobs that decoding will read");
  simulate->add_option("--dump-recovered", dump_dir, "write recovered files here");
  add_flag_to(simulate, "--out-dir", flags.output_dir, "output directory (default $FRAN_OUTPUT_DIR or .)");

  auto* verify = app.add_subcommand("verify", "check the alignment grouping and subspace counts");
  int rank_user = 0;
  bool with_groups = false;
  add_network_flags(verify, flags);
  add_cache_flags(verify, flags);
  add_flag_to(verify, "--n", flags.degree_n, "direction-set degree (default 1)");
  add_flag_to(verify, "--seed", flags.seed, "seed for the numeric rank check");
  verify->add_option("--rank-user", rank_user, "run the numeric rank check at this user");
  verify->add_flag("--groups", with_groups, "include the A, B, C matrices");

  auto* ndt = app.add_subcommand("ndt", "NDT as CSV, one point or a sweep over M");
  int sweep = 0;
  std::string out;
  add_network_flags(ndt, flags);
  add_cache_flags(ndt, flags);
  ndt->add_option("--sweep", sweep, "evenly spaced M grid with this many steps");
  ndt->add_option("--out", out, "CSV path (default stdout)");

  auto* compare = app.add_subcommand("compare", "NDT of two connectivities on the same ENs");
  int rA = 0, rB = 0;
  std::string rhos = "1/2,1,2,10";
  add_flag_to(compare, "--H", flags.H, "number of edge nodes");
  add_flag_to(compare, "--N", flags.N, "library size (default K)");
  compare->add_option("--rA", rA, "higher connectivity")->required();
  compare->add_option("--rB", rB, "lower connectivity")->required();
  compare->add_option("--rho", rhos, "comma-separated fronthaul rates");
  compare->add_option("--sweep", sweep, "grid steps over [0, N] (default N)");
  add_flag_to(compare, "--out-dir", flags.output_dir, "output directory (default $FRAN_OUTPUT_DIR or .)");

  auto* example = app.add_subcommand("export-example", "tables and matrices for the 5-EN example");
  example->add_option("--out", out, "text path (default stdout)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::Success& e) {  // --help
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    std::string msg = e.what();
    for (auto& ch : msg)
      if (ch == '\n') ch = ' ';
    std::cerr << "error: InvalidParams: " << msg << '\n';
    return 2;
  }

  try {
    RunConfig cfg;
    if (!config_path.empty()) cfg = load_config(config_path);
    cfg.overlay(flags);
    if (*topology) return cmd_topology(cfg);
    if (*place) return cmd_place(cfg, library_dir);
    if (*deliver_cmd) return cmd_deliver(cfg, placement_dir, library_dir, dump_dir);
    if (*simulate) return cmd_simulate(cfg, corrupt_blobs, dump_dir);
    if (*verify) return cmd_verify(cfg, rank_user, with_groups);
    if (*ndt) return cmd_ndt(cfg, sweep, out);
    if (*compare) return cmd_compare(cfg, rA, rB, rhos, sweep);
    if (*example) return cmd_export_example(out);
  } catch (const Error& e) {
    std::cerr << "error: " << e.what() << '\n';
    return exit_code_for(e.code());
  } catch (const fs::filesystem_error& e) {
    std::cerr << "error: IoError: " << e.what() << '\n';
    return 4;
  } catch (const std::exception& e) {
    std::cerr << "error: Internal: " << e.what() << '\n';
    return 1;
  }
  return 0;
}
