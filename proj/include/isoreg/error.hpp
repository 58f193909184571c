#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace isoreg {

enum class ErrorCode {
  kInvalidInput,
  kCycleDetected,
  kOrderViolation,
  kNotAntichain,
  kExtractionMismatch,
  kInvalidP,
  kInvalidDelta,
  kOverflow,
  kTooLarge,
  kParse,
};

inline const char* to_string(ErrorCode code) {
  switch (code) {
    case ErrorCode::kInvalidInput: return "InvalidInput";
    case ErrorCode::kCycleDetected: return "CycleDetected";
    case ErrorCode::kOrderViolation: return "OrderViolation";
    case ErrorCode::kNotAntichain: return "NotAntichain";
    case ErrorCode::kExtractionMismatch: return "ExtractionMismatch";
    case ErrorCode::kInvalidP: return "InvalidP";
    case ErrorCode::kInvalidDelta: return "InvalidDelta";
    case ErrorCode::kOverflow: return "Overflow";
    case ErrorCode::kTooLarge: return "TooLarge";
    case ErrorCode::kParse: return "ParseError";
  }
  return "Unknown";
}

class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& what)
      : std::runtime_error(std::string(to_string(code)) + ": " + what),
        code_(code) {}

  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

// Carries the vertices of one directed cycle, in path order.
class CycleDetected : public Error {
 public:
  explicit CycleDetected(std::vector<std::uint32_t> cycle)
      : Error(ErrorCode::kCycleDetected, describe(cycle)),
        cycle_(std::move(cycle)) {}

  const std::vector<std::uint32_t>& cycle() const noexcept { return cycle_; }

 private:
  static std::string describe(const std::vector<std::uint32_t>& cycle) {
    std::string s = "cycle";
    for (auto v : cycle) s += " " + std::to_string(v);
    return s;
  }

  std::vector<std::uint32_t> cycle_;
};

class ParseError : public Error {
 public:
  ParseError(std::size_t line, const std::string& what)
      : Error(ErrorCode::kParse, "line " + std::to_string(line) + ": " + what),
        line_(line) {}

  std::size_t line() const noexcept { return line_; }

 private:
  std::size_t line_;
};

[[noreturn]] inline void fail(ErrorCode code, const std::string& what) {
  throw Error(code, what);
}

}  // namespace isoreg
