#pragma once

#include <cstddef>
#include <optional>
#include <stdexcept>
#include <string>

namespace tww {

enum class Errc {
  DuplicateEdge,
  SelfLoop,
  BadEndpoint,
  SameVertex,
  DeadVertex,
  BadVertexSet,
  IllegalRecolor,
  DeadVertexAtStep,
  IncompleteSequence,
  InstanceMismatch,
  BudgetExceeded,
  Disconnected,
  NotATree,
  NotAStar,
  PreconditionViolated,
  NoMultipleStumps,
  BadStumpConfig,
  NotOriginal,
  FenTooLarge,
  SyntaxError,
  HeaderMismatch,
  IndexOutOfRange,
};

inline const char* errc_name(Errc c) {
  switch (c) {
    case Errc::DuplicateEdge: return "DuplicateEdge";
    case Errc::SelfLoop: return "SelfLoop";
    case Errc::BadEndpoint: return "BadEndpoint";
    case Errc::SameVertex: return "SameVertex";
    case Errc::DeadVertex: return "DeadVertex";
    case Errc::BadVertexSet: return "BadVertexSet";
    case Errc::IllegalRecolor: return "IllegalRecolor";
    case Errc::DeadVertexAtStep: return "DeadVertexAtStep";
    case Errc::IncompleteSequence: return "IncompleteSequence";
    case Errc::InstanceMismatch: return "InstanceMismatch";
    case Errc::BudgetExceeded: return "BudgetExceeded";
    case Errc::Disconnected: return "Disconnected";
    case Errc::NotATree: return "NotATree";
    case Errc::NotAStar: return "NotAStar";
    case Errc::PreconditionViolated: return "PreconditionViolated";
    case Errc::NoMultipleStumps: return "NoMultipleStumps";
    case Errc::BadStumpConfig: return "BadStumpConfig";
    case Errc::NotOriginal: return "NotOriginal";
    case Errc::FenTooLarge: return "FenTooLarge";
    case Errc::SyntaxError: return "SyntaxError";
    case Errc::HeaderMismatch: return "HeaderMismatch";
    case Errc::IndexOutOfRange: return "IndexOutOfRange";
  }
  return "Unknown";
}

// `where` is a step index for sequence errors and a 1-based line for parse errors.
class Error : public std::runtime_error {
 public:
  Error(Errc code, const std::string& msg, std::optional<std::size_t> where = {})
      : std::runtime_error(std::string(errc_name(code)) + ": " + msg), code_(code), where_(where) {}

  Errc code() const noexcept { return code_; }
  std::optional<std::size_t> where() const noexcept { return where_; }

 private:
  Errc code_;
  std::optional<std::size_t> where_;
};

}  // namespace tww
