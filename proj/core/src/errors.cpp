#include "c2te/errors.hpp"

#include <sstream>

namespace c2te {

const char* to_string(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::Parse: return "ParseError";
    case ErrorKind::AssumptionViolation: return "AssumptionViolation";
    case ErrorKind::UnknownId: return "UnknownId";
    case ErrorKind::Coincident: return "Coincident";
    case ErrorKind::Unsafe: return "Unsafe";
    case ErrorKind::NonFinite: return "NonFinite";
    case ErrorKind::EnumerationLimit: return "EnumerationLimit";
    case ErrorKind::EmptyFleet: return "EmptyFleet";
    case ErrorKind::InvalidArgument: return "InvalidArgument";
  }
  return "Unknown";
}

namespace {

std::string describe_violation(const std::string& rule,
                               const std::vector<int>& ids,
                               const std::string& detail) {
  std::ostringstream out;
  out << "assumption violated [" << rule << "]";
  if (!ids.empty()) {
    out << " vehicles {";
    for (std::size_t k = 0; k < ids.size(); ++k) {
      out << (k ? ", " : "") << ids[k];
    }
    out << "}";
  }
  if (!detail.empty()) out << ": " << detail;
  return out.str();
}

}  // namespace

AssumptionViolation::AssumptionViolation(std::string rule, std::vector<int> ids,
                                         const std::string& detail)
    : Error(ErrorKind::AssumptionViolation, describe_violation(rule, ids, detail)),
      rule_(std::move(rule)),
      ids_(std::move(ids)) {}

UnsafeError::UnsafeError(int a, int b, double distance, const std::string& detail)
    : Error(ErrorKind::Unsafe, detail), a_(a), b_(b), distance_(distance) {}

}  // namespace c2te
