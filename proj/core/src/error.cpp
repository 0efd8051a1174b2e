#include "mwpr/error.hpp"

namespace mwpr {

std::string_view to_string(ErrorCode code) noexcept {
  switch (code) {
    case ErrorCode::EmptyInput: return "EmptyInput";
    case ErrorCode::UnknownCharacter: return "UnknownCharacter";
    case ErrorCode::MalformedNumber: return "MalformedNumber";
    case ErrorCode::UnsupportedEquationForm: return "UnsupportedEquationForm";
    case ErrorCode::MismatchedParentheses: return "MismatchedParentheses";
    case ErrorCode::MalformedExpression: return "MalformedExpression";
    case ErrorCode::StackUnderflow: return "StackUnderflow";
    case ErrorCode::LeftoverOperands: return "LeftoverOperands";
    case ErrorCode::FileNotFound: return "FileNotFound";
    case ErrorCode::MalformedJson: return "MalformedJson";
    case ErrorCode::InvalidRecord: return "InvalidRecord";
    case ErrorCode::DuplicateId: return "DuplicateId";
    case ErrorCode::NotFound: return "NotFound";
    case ErrorCode::IoError: return "IoError";
    case ErrorCode::VersionMismatch: return "VersionMismatch";
    case ErrorCode::MalformedIndexFile: return "MalformedIndexFile";
    case ErrorCode::MissingEquation: return "MissingEquation";
    case ErrorCode::Timeout: return "Timeout";
    case ErrorCode::ConnectionFailed: return "ConnectionFailed";
    case ErrorCode::BadResponse: return "BadResponse";
    case ErrorCode::RemoteError: return "RemoteError";
    case ErrorCode::EmptyCorpus: return "EmptyCorpus";
    case ErrorCode::NoEntries: return "NoEntries";
    case ErrorCode::InsufficientData: return "InsufficientData";
    case ErrorCode::InvalidArgument: return "InvalidArgument";
  }
  return "Unknown";
}

bool is_parse_error(ErrorCode code) noexcept {
  switch (code) {
    case ErrorCode::EmptyInput:
    case ErrorCode::UnknownCharacter:
    case ErrorCode::MalformedNumber:
    case ErrorCode::UnsupportedEquationForm:
    case ErrorCode::MismatchedParentheses:
    case ErrorCode::MalformedExpression:
    case ErrorCode::StackUnderflow:
    case ErrorCode::LeftoverOperands:
      return true;
    default:
      return false;
  }
}

namespace {

std::string format_what(ErrorCode code, const std::string& message,
                        const std::string& stage) {
  std::string out;
  if (!stage.empty()) out += stage + ": ";
  out += std::string(to_string(code));
  if (!message.empty()) out += ": " + message;
  return out;
}

}  // namespace

Error::Error(ErrorCode code, std::string message, std::string stage)
    : std::runtime_error(format_what(code, message, stage)),
      code_(code),
      stage_(std::move(stage)),
      message_(std::move(message)) {}

}  // namespace mwpr
