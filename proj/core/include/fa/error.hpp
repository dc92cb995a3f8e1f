#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace fa {

// Every rule the kernel enforces maps to one kind, so callers (and the
// validator tests) can match on the rule that fired rather than on message
// text.
enum class ErrorKind {
  // files and identifiers
  ParseError,
  BadIdentifier,
  DuplicateId,
  UnknownBox,
  UnknownArrow,
  UnknownPort,

  // registry rules
  PortCollision,   // R1: port sets of distinct boxes must be disjoint
  InOutOverlap,    // in(a) and out(a) must be disjoint
  LabelCollision,  // R2 within an arrow, R3 across arrows

  // arrow endpoint rules
  FeedbackProhibited,     // codomain output wired to codomain input
  PassthroughProhibited,  // codomain input wired straight to codomain output
  BadEndpoint,            // endpoint outside the sets allowed for a link

  // matrix shapes
  DimensionMismatch,
  ShapeMismatch,
  DuplicatePort,

  // arrow algebra
  CodomainMismatch,
  DomainMismatch,
  BadPermutation,

  // interpretation
  MissingAction,
  MissingMass,
  CyclicDependency,
  UnderdeterminedPort,
  AmbiguousConvergence,
  UnknownValue,
  ArgOutOfSet,
};

std::string_view to_string(ErrorKind kind);

class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, std::string message);
  Error(ErrorKind kind, std::string message, std::string location);

  ErrorKind kind() const noexcept { return kind_; }
  // Where in a document the error was detected, e.g. "arrows[2].links_in[0]".
  // Empty unless the error came through the loader.
  const std::string& location() const noexcept { return location_; }
  const std::string& message() const noexcept { return message_; }

 private:
  ErrorKind kind_;
  std::string message_;
  std::string location_;
};

[[noreturn]] void fail(ErrorKind kind, std::string message);

// Identifiers (box ids, port names, link-label atoms) are nonempty and must
// not contain '.', which is reserved as the word and namespace separator.
bool is_valid_token(std::string_view token);
void require_token(std::string_view token, std::string_view what);

}  // namespace fa
