#pragma once

#include <stdexcept>
#include <string>
#include <vector>

namespace llgvm {

/// Numeric values double as C API status codes and CLI exit codes where the
/// two overlap (config = 2, blow-up = 3, selftest = 4).
enum class ErrorCode : int {
  internal = 1,
  config = 2,
  blowup = 3,
  selftest = 4,
  contract = 5,
  io = 6,
  checksum = 7,
  truncated = 8,
  version = 9,
  degenerate = 10,
  state_corruption = 11,
  refused = 12,
};

class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& what)
      : std::runtime_error(what), code_(code) {}
  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

/// Precondition or shape mismatch in a call (grid mismatch, rank mismatch...).
struct ContractViolation : Error {
  explicit ContractViolation(const std::string& what)
      : Error(ErrorCode::contract, what) {}
};

/// Unit-norm invariant of the magnetization broken.
struct StateCorruption : Error {
  explicit StateCorruption(const std::string& what)
      : Error(ErrorCode::state_corruption, what) {}
};

/// Numerical blow-up: NaN fields, collapse of |m*| during renormalization,
/// antipodal time steps.
struct BlowUp : Error {
  explicit BlowUp(const std::string& what) : Error(ErrorCode::blowup, what) {}
};

/// Time step outside the stable range of an integrator.
struct StepRefused : Error {
  explicit StepRefused(const std::string& what)
      : Error(ErrorCode::refused, what) {}
};

struct DegenerateSlice : Error {
  explicit DegenerateSlice(const std::string& what)
      : Error(ErrorCode::degenerate, what) {}
};

/// Carries every validation problem found, not just the first.
class ConfigError : public Error {
 public:
  explicit ConfigError(std::vector<std::string> problems)
      : Error(ErrorCode::config, join(problems)), problems_(std::move(problems)) {}
  const std::vector<std::string>& problems() const noexcept { return problems_; }

 private:
  static std::string join(const std::vector<std::string>& p) {
    std::string s;
    for (const auto& line : p) {
      if (!s.empty()) s += "\n";
      s += line;
    }
    return s;
  }
  std::vector<std::string> problems_;
};

struct IoError : Error {
  IoError(ErrorCode code, const std::string& what) : Error(code, what) {}
};

}  // namespace llgvm
