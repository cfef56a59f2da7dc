#pragma once

#include <stdexcept>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace nrc {

enum class ErrorCode {
  UnboundVariable,
  TypeStuck,
  DivideByZero,
  DomainOverlap,
  TypeError,
  ControlFlowMismatch,
  MissingTraceLabel,
  HoleEncountered,
  PatternMismatch,
  Incompatible,
  ShapeError,
  PrefixViolation,
  ParseError,
  FormatError,
  SchemaError,
  IoError,
};

inline std::string_view to_string(ErrorCode code) {
  switch (code) {
    case ErrorCode::UnboundVariable: return "UnboundVariable";
    case ErrorCode::TypeStuck: return "TypeStuck";
    case ErrorCode::DivideByZero: return "DivideByZero";
    case ErrorCode::DomainOverlap: return "DomainOverlap";
    case ErrorCode::TypeError: return "TypeError";
    case ErrorCode::ControlFlowMismatch: return "ControlFlowMismatch";
    case ErrorCode::MissingTraceLabel: return "MissingTraceLabel";
    case ErrorCode::HoleEncountered: return "HoleEncountered";
    case ErrorCode::PatternMismatch: return "PatternMismatch";
    case ErrorCode::Incompatible: return "Incompatible";
    case ErrorCode::ShapeError: return "ShapeError";
    case ErrorCode::PrefixViolation: return "PrefixViolation";
    case ErrorCode::ParseError: return "ParseError";
    case ErrorCode::FormatError: return "FormatError";
    case ErrorCode::SchemaError: return "SchemaError";
    case ErrorCode::IoError: return "IoError";
  }
  return "Unknown";
}

// All library failures are reported through this one exception type. Replay
// errors carry the path of trace steps leading to the failure; parse errors
// carry a 1-based source position.
class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& message, std::vector<std::string> path = {})
      : std::runtime_error(compose(code, message, path)),
        code_(code),
        detail_(message),
        path_(std::move(path)) {}

  Error(ErrorCode code, const std::string& message, int line, int column)
      : std::runtime_error(std::string(to_string(code)) + " at " + std::to_string(line) + ":" +
                           std::to_string(column) + ": " + message),
        code_(code),
        detail_(message),
        line_(line),
        column_(column) {}

  ErrorCode code() const noexcept { return code_; }
  const std::string& detail() const noexcept { return detail_; }
  const std::vector<std::string>& path() const noexcept { return path_; }
  int line() const noexcept { return line_; }
  int column() const noexcept { return column_; }

 private:
  static std::string compose(ErrorCode code, const std::string& message,
                             const std::vector<std::string>& path) {
    std::string out(to_string(code));
    if (!path.empty()) {
      out += " at ";
      for (std::size_t i = 0; i < path.size(); ++i) {
        if (i) out += " / ";
        out += path[i];
      }
    }
    out += ": ";
    out += message;
    return out;
  }

  ErrorCode code_;
  std::string detail_;
  std::vector<std::string> path_;
  int line_ = 0;
  int column_ = 0;
};

namespace detail {
template <class... Fs>
struct overloaded : Fs... {
  using Fs::operator()...;
};
template <class... Fs>
overloaded(Fs...) -> overloaded<Fs...>;
}  // namespace detail

}  // namespace nrc
