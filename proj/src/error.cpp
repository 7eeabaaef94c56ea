#include "gdm/error.hpp"

namespace gdm {

const char* to_string(ErrorKind kind) noexcept {
  switch (kind) {
    case ErrorKind::Validation: return "validation";
    case ErrorKind::PhaseViolation: return "phase violation";
    case ErrorKind::Duplicate: return "duplicate";
    case ErrorKind::NotFound: return "not found";
    case ErrorKind::Precondition: return "precondition";
    case ErrorKind::Schema: return "schema";
    case ErrorKind::Io: return "io";
    case ErrorKind::Internal: return "internal";
  }
  return "unknown";
}

}  // namespace gdm
