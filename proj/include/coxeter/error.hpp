#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>
#include <string_view>

namespace coxeter {

enum class ErrorCode {
  UnsupportedPreset,
  InvalidCartanMatrix,
  NonCrystallographic,
  SystemMismatch,
  ResourceLimit,
  InfiniteGroup,
  Overflow,
  BadWord,
  NotMinimalRep,
  NotComparable,
  BadRange,
  TableMismatch,
  SymmetryViolation,
  BadK,
  NegativeEntry,
  MissingMTilde,
  EmptyCorpus,
  CorpusMissingEntry,
  SearchExhausted,
  DigestMismatch,
  FormatError,
  Usage,
};

inline std::string_view to_string(ErrorCode code) {
  switch (code) {
    case ErrorCode::UnsupportedPreset: return "UnsupportedPreset";
    case ErrorCode::InvalidCartanMatrix: return "InvalidCartanMatrix";
    case ErrorCode::NonCrystallographic: return "NonCrystallographic";
    case ErrorCode::SystemMismatch: return "SystemMismatch";
    case ErrorCode::ResourceLimit: return "ResourceLimit";
    case ErrorCode::InfiniteGroup: return "InfiniteGroup";
    case ErrorCode::Overflow: return "Overflow";
    case ErrorCode::BadWord: return "BadWord";
    case ErrorCode::NotMinimalRep: return "NotMinimalRep";
    case ErrorCode::NotComparable: return "NotComparable";
    case ErrorCode::BadRange: return "BadRange";
    case ErrorCode::TableMismatch: return "TableMismatch";
    case ErrorCode::SymmetryViolation: return "SymmetryViolation";
    case ErrorCode::BadK: return "BadK";
    case ErrorCode::NegativeEntry: return "NegativeEntry";
    case ErrorCode::MissingMTilde: return "MissingMTilde";
    case ErrorCode::EmptyCorpus: return "EmptyCorpus";
    case ErrorCode::CorpusMissingEntry: return "CorpusMissingEntry";
    case ErrorCode::SearchExhausted: return "SearchExhausted";
    case ErrorCode::DigestMismatch: return "DigestMismatch";
    case ErrorCode::FormatError: return "FormatError";
    case ErrorCode::Usage: return "Usage";
  }
  return "Unknown";
}

/// Every failure raised by the library carries one of the codes above; the
/// message is prefixed with the code name so CLI output stays greppable.
class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& what)
      : std::runtime_error(std::string(to_string(code)) + ": " + what), code_(code) {}

  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

namespace detail {

inline std::int64_t checked_add(std::int64_t a, std::int64_t b) {
  std::int64_t r;
  if (__builtin_add_overflow(a, b, &r)) throw Error(ErrorCode::Overflow, "integer addition overflow");
  return r;
}

inline std::int64_t checked_mul(std::int64_t a, std::int64_t b) {
  std::int64_t r;
  if (__builtin_mul_overflow(a, b, &r)) throw Error(ErrorCode::Overflow, "integer multiplication overflow");
  return r;
}

}  // namespace detail
}  // namespace coxeter
