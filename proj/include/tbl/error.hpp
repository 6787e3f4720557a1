#pragma once

#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>

namespace tbl {

enum class Errc {
  OutOfRange,
  SelfLoop,
  DuplicateArc,
  NotPresent,
  SyntaxError,
  NotOnCycle,
  NoCycle,
  CapExceeded,
  Unreachable,
  NoCutVertex,
  NoWindow,
  BudgetExceeded,
  BadParams,
  Infeasible,
  NoMove,
  PreconditionFailed,
};

constexpr std::string_view errc_name(Errc e) {
  switch (e) {
    case Errc::OutOfRange: return "OutOfRange";
    case Errc::SelfLoop: return "SelfLoop";
    case Errc::DuplicateArc: return "DuplicateArc";
    case Errc::NotPresent: return "NotPresent";
    case Errc::SyntaxError: return "SyntaxError";
    case Errc::NotOnCycle: return "NotOnCycle";
    case Errc::NoCycle: return "NoCycle";
    case Errc::CapExceeded: return "CapExceeded";
    case Errc::Unreachable: return "Unreachable";
    case Errc::NoCutVertex: return "NoCutVertex";
    case Errc::NoWindow: return "NoWindow";
    case Errc::BudgetExceeded: return "BudgetExceeded";
    case Errc::BadParams: return "BadParams";
    case Errc::Infeasible: return "Infeasible";
    case Errc::NoMove: return "NoMove";
    case Errc::PreconditionFailed: return "PreconditionFailed";
  }
  return "Unknown";
}

// Every recoverable failure in the library is reported through this type.
// `line` is set only by the text parser.
class Error : public std::runtime_error {
 public:
  Error(Errc code, const std::string& what, std::optional<int> line = std::nullopt)
      : std::runtime_error(format(code, what, line)), code_(code), line_(line) {}

  Errc code() const noexcept { return code_; }
  std::optional<int> line() const noexcept { return line_; }

 private:
  static std::string format(Errc code, const std::string& what, std::optional<int> line) {
    std::string msg(errc_name(code));
    if (line) msg += " at line " + std::to_string(*line);
    if (!what.empty()) msg += ": " + what;
    return msg;
  }

  Errc code_;
  std::optional<int> line_;
};

}  // namespace tbl
