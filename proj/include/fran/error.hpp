#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace fran {

enum class Errc {
  InvalidConnectivity,
  InvalidParams,
  OutOfRange,
  SizeError,
  InsufficientChunks,
  IndexOutOfRange,
  NonIntegerT,
  UnboundedNdt,
  UnsupportedRegime,
  NotRelevant,
  MissingMessage,
  CacheMismatch,
  IncompatiblePair,
  IoError,
};

constexpr std::string_view errc_name(Errc code) {
  switch (code) {
    case Errc::InvalidConnectivity: return "InvalidConnectivity";
    case Errc::InvalidParams: return "InvalidParams";
    case Errc::OutOfRange: return "OutOfRange";
    case Errc::SizeError: return "SizeError";
    case Errc::InsufficientChunks: return "InsufficientChunks";
    case Errc::IndexOutOfRange: return "IndexOutOfRange";
    case Errc::NonIntegerT: return "NonIntegerT";
    case Errc::UnboundedNdt: return "UnboundedNdt";
    case Errc::UnsupportedRegime: return "UnsupportedRegime";
    case Errc::NotRelevant: return "NotRelevant";
    case Errc::MissingMessage: return "MissingMessage";
    case Errc::CacheMismatch: return "CacheMismatch";
    case Errc::IncompatiblePair: return "IncompatiblePair";
    case Errc::IoError: return "IoError";
  }
  return "Unknown";
}

// All library failures are reported through this type; code() is stable and
// is what the CLI prints and maps to exit codes.
class Error : public std::runtime_error {
 public:
  Error(Errc code, const std::string& what)
      : std::runtime_error(std::string(errc_name(code)) + ": " + what), code_(code) {}

  Errc code() const noexcept { return code_; }

 private:
  Errc code_;
};

}  // namespace fran
