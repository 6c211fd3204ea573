#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace opinion {

enum class ErrorCode {
  MissingFile,
  SchemaViolation,
  DuplicateCaseId,
  BudgetUnsatisfiable,
  BackendFailure,
  NoAlphabetic,
  EmptyText,
  EmptyTopic,
  RankDeficient,
  TooFewClusters,
  InvalidParameter,
  Configuration,
};

std::string_view to_string(ErrorCode code);

/// Every failure surfaced by the library carries one of the codes above so
/// callers (and the CLI's exit-code mapping) can branch without parsing text.
class Error : public std::runtime_error {
public:
  Error(ErrorCode code, const std::string& message)
      : std::runtime_error(std::string(to_string(code)) + ": " + message),
        code_(code), detail_(message) {}

  ErrorCode code() const noexcept { return code_; }
  const std::string& detail() const noexcept { return detail_; }

  /// Same code, message prefixed with where it happened ("case x, stage y").
  Error with_context(std::string_view context) const {
    return Error(code_, std::string(context) + ": " + detail_);
  }

private:
  ErrorCode code_;
  std::string detail_;
};

}  // namespace opinion
