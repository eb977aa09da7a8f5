#include "dwellcert/errors.hpp"

namespace dwellcert {

const char* errc_name(errc c) {
  switch (c) {
    case errc::empty_family: return "EmptyFamily";
    case errc::dimension_mismatch: return "DimensionMismatch";
    case errc::nonpositive_dwell_time: return "NonpositiveDwellTime";
    case errc::nonfinite_entry: return "NonFiniteEntry";
    case errc::step_nonpositive: return "StepNonpositive";
    case errc::step_too_large: return "StepTooLarge";
    case errc::non_square: return "NonSquare";
    case errc::complex_leading: return "ComplexLeading";
    case errc::not_closed: return "NotClosed";
    case errc::malformed_cycle: return "MalformedCycle";
    case errc::budget_exceeded: return "BudgetExceeded";
    case errc::no_cycle_found: return "NoCycleFound";
    case errc::degenerate_ball: return "DegenerateBall";
    case errc::negative_input: return "NegativeInput";
    case errc::orthant_violation: return "OrthantViolation";
    case errc::vertex_budget_exceeded: return "VertexBudgetExceeded";
    case errc::certificate_mismatch: return "CertificateMismatch";
    case errc::domain_error: return "DomainError";
    case errc::parse_error: return "ParseError";
    case errc::validation_error: return "ValidationError";
    case errc::verification_failed: return "VerificationFailed";
    case errc::io_error: return "IoError";
    case errc::dimension_not_two: return "DimensionNotTwo";
  }
  return "UnknownError";
}

}  // namespace dwellcert
