#pragma once

#include <cstdint>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <optional>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "fran/error.hpp"
#include "fran/fronthaul.hpp"
#include "fran/placement.hpp"

namespace fran {

namespace fs = std::filesystem;
using nlohmann::json;

inline std::uint64_t fnv1a64(std::span<const std::uint8_t> data) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (auto b : data) {
    h ^= b;
    h *= 0x100000001b3ULL;
  }
  return h;
}

inline std::string hex64(std::uint64_t v) {
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(v));
  return buf;
}

inline void write_bytes(const fs::path& path, std::span<const std::uint8_t> data) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw Error(Errc::IoError, "cannot write " + path.string());
  out.write(reinterpret_cast<const char*>(data.data()), static_cast<std::streamsize>(data.size()));
  if (!out) throw Error(Errc::IoError, "short write to " + path.string());
}

inline Bytes read_bytes(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(Errc::IoError, "cannot read " + path.string());
  return Bytes((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
}

inline void write_json(const fs::path& path, const json& doc) {
  std::ofstream out(path, std::ios::trunc);
  if (!out) throw Error(Errc::IoError, "cannot write " + path.string());
  out << doc.dump(2) << '\n';
}

inline json read_json(const fs::path& path) {
  std::ifstream in(path);
  if (!in) throw Error(Errc::IoError, "cannot read " + path.string());
  try {
    return json::parse(in);
  } catch (const json::exception& e) {
    throw Error(Errc::IoError, path.string() + ": " + e.what());
  }
}

inline json params_json(const NetworkParams& p) {
  return {{"H", p.H},
          {"r", p.r},
          {"N", p.N},
          {"file_size_bytes", p.file_size_bytes},
          {"M", to_exact_string(p.M)},
          {"rho", to_exact_string(p.rho)}};
}

inline NetworkParams params_from_json(const json& j) {
  try {
    NetworkParams p;
    p.H = j.at("H").get<int>();
    p.r = j.at("r").get<int>();
    p.N = j.at("N").get<int>();
    p.file_size_bytes = j.value("file_size_bytes", std::int64_t{0});
    p.M = parse_rational(j.value("M", std::string("0")));
    p.rho = parse_rational(j.value("rho", std::string("1")));
    return p;
  } catch (const json::exception& e) {
    throw Error(Errc::InvalidParams, std::string("params: ") + e.what());
  }
}

inline std::string piece_blob_name(const PieceId& id) {
  std::string name = "pieces/n" + std::to_string(id.n) + "_i" + std::to_string(id.i) + "_T";
  return name + subset_string(id.T, "-") + ".bin";
}

inline json piece_id_json(const PieceId& id) { return {{"n", id.n}, {"i", id.i}, {"T", id.T}}; }

inline PieceId piece_id_from_json(const json& j) {
  return PieceId{j.at("n").get<int>(), j.at("i").get<int>(), j.at("T").get<Subset>()};
}

// Writes manifest.json plus one raw blob per piece under dir/pieces.
// `library_seed` lets a reader regenerate a pseudorandom library for
// comparison; it is absent for ingested libraries.
inline void write_placement(const fs::path& dir, const Placement& placement,
                            std::optional<std::uint64_t> library_seed = std::nullopt) {
  fs::create_directories(dir / "pieces");
  json pieces = json::array();
  for (const auto& [id, bytes] : placement.pieces) {
    const auto blob = piece_blob_name(id);
    write_bytes(dir / blob, bytes);
    json entry = piece_id_json(id);
    entry["blob"] = blob;
    entry["fnv1a64"] = hex64(fnv1a64(bytes));
    pieces.push_back(std::move(entry));
  }
  json manifest = {{"format", "fran-placement/1"},
                   {"params", params_json(placement.params)},
                   {"t", placement.t},
                   {"piece_size", placement.piece_size},
                   {"padded_size", placement.padded_size},
                   {"original_sizes", placement.original_sizes},
                   {"pieces", std::move(pieces)}};
  if (library_seed) manifest["library_seed"] = *library_seed;
  write_json(dir / "manifest.json", manifest);
}

struct LoadedPlacement {
  Placement placement;
  std::optional<std::uint64_t> library_seed;
  std::vector<PieceId> corrupt;  // blobs whose checksum or size did not match; left out of `pieces`
};

// Reads a placement written by write_placement. With strict, a damaged blob
// is an IoError; otherwise it is skipped and listed in `corrupt`.
inline LoadedPlacement read_placement(const fs::path& dir, bool strict = true) {
  const json manifest = read_json(dir / "manifest.json");
  LoadedPlacement out;
  try {
    auto& p = out.placement;
    p.params = params_from_json(manifest.at("params"));
    p.t = manifest.at("t").get<int>();
    p.piece_size = manifest.at("piece_size").get<std::size_t>();
    p.padded_size = manifest.at("padded_size").get<std::int64_t>();
    p.original_sizes = manifest.at("original_sizes").get<std::vector<std::int64_t>>();
    if (manifest.contains("library_seed")) out.library_seed = manifest.at("library_seed").get<std::uint64_t>();
    for (const auto& entry : manifest.at("pieces")) {
      PieceId id = piece_id_from_json(entry);
      Bytes bytes = read_bytes(dir / entry.at("blob").get<std::string>());
      if (bytes.size() != p.piece_size || hex64(fnv1a64(bytes)) != entry.at("fnv1a64").get<std::string>()) {
        if (strict) throw Error(Errc::IoError, "blob for " + to_string(id) + " is damaged");
        out.corrupt.push_back(id);
        continue;
      }
      p.pieces.emplace(std::move(id), std::move(bytes));
    }
  } catch (const json::exception& e) {
    throw Error(Errc::IoError, std::string("manifest: ") + e.what());
  }
  return out;
}

inline std::string message_blob_name(const MessageId& m) {
  return "messages/i" + std::to_string(m.i) + "_S" + subset_string(m.S, "-") + ".bin";
}

// Same layout as the placement manifest: fronthaul.json indexes raw payloads.
inline void write_fronthaul(const fs::path& dir, const std::vector<FronthaulMessage>& messages,
                            const Placement& placement, const DemandVector& demand) {
  fs::create_directories(dir / "messages");
  json entries = json::array();
  for (const auto& m : messages) {
    const auto blob = message_blob_name(m.id);
    write_bytes(dir / blob, m.payload);
    json constituents = json::array();
    for (const auto& c : m.constituents) constituents.push_back(piece_id_json(c));
    entries.push_back({{"i", m.id.i},
                       {"S", m.id.S},
                       {"constituents", std::move(constituents)},
                       {"blob", blob},
                       {"fnv1a64", hex64(fnv1a64(m.payload))}});
  }
  json doc = {{"format", "fran-fronthaul/1"},
              {"params", params_json(placement.params)},
              {"t", placement.t},
              {"piece_size", placement.piece_size},
              {"demand", demand.d},
              {"messages", std::move(entries)}};
  write_json(dir / "fronthaul.json", doc);
}

struct LoadedFronthaul {
  NetworkParams params;
  int t = 0;
  DemandVector demand;
  std::vector<FronthaulMessage> messages;
};

inline LoadedFronthaul read_fronthaul(const fs::path& dir) {
  const json doc = read_json(dir / "fronthaul.json");
  LoadedFronthaul out;
  try {
    out.params = params_from_json(doc.at("params"));
    out.t = doc.at("t").get<int>();
    out.demand.d = doc.at("demand").get<std::vector<int>>();
    for (const auto& entry : doc.at("messages")) {
      FronthaulMessage m;
      m.id = MessageId{entry.at("i").get<int>(), entry.at("S").get<Subset>()};
      for (const auto& c : entry.at("constituents")) m.constituents.push_back(piece_id_from_json(c));
      m.payload = read_bytes(dir / entry.at("blob").get<std::string>());
      if (hex64(fnv1a64(m.payload)) != entry.at("fnv1a64").get<std::string>())
        throw Error(Errc::IoError, "payload for " + to_string(m.id) + " is damaged");
      out.messages.push_back(std::move(m));
    }
  } catch (const json::exception& e) {
    throw Error(Errc::IoError, std::string("fronthaul index: ") + e.what());
  }
  return out;
}

}  // namespace fran
