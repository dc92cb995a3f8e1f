#include "fa/error.hpp"

#include <cctype>

namespace fa {

std::string_view to_string(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::ParseError: return "ParseError";
    case ErrorKind::BadIdentifier: return "BadIdentifier";
    case ErrorKind::DuplicateId: return "DuplicateId";
    case ErrorKind::UnknownBox: return "UnknownBox";
    case ErrorKind::UnknownArrow: return "UnknownArrow";
    case ErrorKind::UnknownPort: return "UnknownPort";
    case ErrorKind::PortCollision: return "PortCollision";
    case ErrorKind::InOutOverlap: return "InOutOverlap";
    case ErrorKind::LabelCollision: return "LabelCollision";
    case ErrorKind::FeedbackProhibited: return "FeedbackProhibited";
    case ErrorKind::PassthroughProhibited: return "PassthroughProhibited";
    case ErrorKind::BadEndpoint: return "BadEndpoint";
    case ErrorKind::DimensionMismatch: return "DimensionMismatch";
    case ErrorKind::ShapeMismatch: return "ShapeMismatch";
    case ErrorKind::DuplicatePort: return "DuplicatePort";
    case ErrorKind::CodomainMismatch: return "CodomainMismatch";
    case ErrorKind::DomainMismatch: return "DomainMismatch";
    case ErrorKind::BadPermutation: return "BadPermutation";
    case ErrorKind::MissingAction: return "MissingAction";
    case ErrorKind::MissingMass: return "MissingMass";
    case ErrorKind::CyclicDependency: return "CyclicDependency";
    case ErrorKind::UnderdeterminedPort: return "UnderdeterminedPort";
    case ErrorKind::AmbiguousConvergence: return "AmbiguousConvergence";
    case ErrorKind::UnknownValue: return "UnknownValue";
    case ErrorKind::ArgOutOfSet: return "ArgOutOfSet";
  }
  return "Error";
}

namespace {

std::string compose_what(ErrorKind kind, const std::string& message,
                         const std::string& location) {
  std::string what{to_string(kind)};
  what += ": ";
  what += message;
  if (!location.empty()) {
    what += " (at ";
    what += location;
    what += ")";
  }
  return what;
}

}  // namespace

Error::Error(ErrorKind kind, std::string message)
    : std::runtime_error(compose_what(kind, message, "")),
      kind_(kind),
      message_(std::move(message)) {}

Error::Error(ErrorKind kind, std::string message, std::string location)
    : std::runtime_error(compose_what(kind, message, location)),
      kind_(kind),
      message_(std::move(message)),
      location_(std::move(location)) {}

void fail(ErrorKind kind, std::string message) {
  throw Error(kind, std::move(message));
}

bool is_valid_token(std::string_view token) {
  if (token.empty()) return false;
  for (unsigned char c : token) {
    if (c == '.' || std::isspace(c) || std::iscntrl(c)) return false;
  }
  return true;
}

void require_token(std::string_view token, std::string_view what) {
  if (!is_valid_token(token)) {
    fail(ErrorKind::BadIdentifier,
         std::string(what) + " \"" + std::string(token) +
             "\" must be nonempty and contain no '.', whitespace or control characters");
  }
}

}  // namespace fa
