#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace mwpr {

enum class ErrorCode {
  // lexing / parsing
  EmptyInput,
  UnknownCharacter,
  MalformedNumber,
  UnsupportedEquationForm,
  MismatchedParentheses,
  MalformedExpression,
  StackUnderflow,
  LeftoverOperands,
  // corpus
  FileNotFound,
  MalformedJson,
  InvalidRecord,
  DuplicateId,
  NotFound,
  IoError,
  VersionMismatch,
  MalformedIndexFile,
  // providers
  MissingEquation,
  Timeout,
  ConnectionFailed,
  BadResponse,
  RemoteError,
  // baseline / evaluation
  EmptyCorpus,
  NoEntries,
  InsufficientData,
  InvalidArgument,
};

std::string_view to_string(ErrorCode code) noexcept;

/// True for the codes raised by the equation pipeline (tokenize .. build_tree).
bool is_parse_error(ErrorCode code) noexcept;

/// Exception type used across the library. `stage` names the pipeline step
/// or component that raised it (e.g. "tokenize", "record q17").
class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, std::string message, std::string stage = {});

  ErrorCode code() const noexcept { return code_; }
  const std::string& stage() const noexcept { return stage_; }
  const std::string& message() const noexcept { return message_; }

 private:
  ErrorCode code_;
  std::string stage_;
  std::string message_;
};

}  // namespace mwpr
