#pragma once

#include <stdexcept>
#include <string>

namespace gdm {

/// Coarse failure classes. The HTTP layer maps these onto status codes and
/// the CLI onto exit codes, so new kinds need a mapping in both places.
enum class ErrorKind {
  Validation,      ///< malformed or out-of-domain input
  PhaseViolation,  ///< operation not legal in the session's current phase
  Duplicate,       ///< second submission where only one is allowed
  NotFound,        ///< unknown session, participant or alternative id
  Precondition,    ///< state incomplete for the request (panel, feedback count)
  Schema,          ///< document does not follow the file format
  Io,              ///< filesystem failure
  Internal,
};

const char* to_string(ErrorKind kind) noexcept;

class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& message)
      : std::runtime_error(message), kind_(kind) {}

  ErrorKind kind() const noexcept { return kind_; }

 private:
  ErrorKind kind_;
};

}  // namespace gdm
