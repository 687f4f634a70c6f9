#pragma once

#include <stdexcept>
#include <string>

namespace spstore {

enum class ErrorCode {
  MalformedTerm,
  LiteralSubject,
  NonIriPredicate,
  UnknownTermId,
  MintCollision,
  NotASingleton,
  AmbiguousSingleton,
  IncompleteSingleton,
  ResourceLimit,
  NotInferred,
  SyntaxError,
  UnknownPrefix,
  QueryTimeout,
  ConfigError,
  IoError,
};

const char* errorCodeName(ErrorCode code);

class StoreError : public std::runtime_error {
 public:
  StoreError(ErrorCode code, const std::string& message)
      : std::runtime_error(std::string(errorCodeName(code)) + ": " + message), code_(code) {}

  ErrorCode code() const { return code_; }

 private:
  ErrorCode code_;
};

// Query parse failure with a position into the query text.
class QuerySyntaxError : public StoreError {
 public:
  QuerySyntaxError(ErrorCode code, std::size_t line, std::size_t column, const std::string& message)
      : StoreError(code, "line " + std::to_string(line) + ", col " + std::to_string(column) + ": " + message),
        line_(line),
        column_(column) {}

  std::size_t line() const { return line_; }
  std::size_t column() const { return column_; }

 private:
  std::size_t line_;
  std::size_t column_;
};

}  // namespace spstore
