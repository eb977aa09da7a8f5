#pragma once

#include <stdexcept>
#include <string>

namespace dwellcert {

// One code per failure mode the library can report. CLI maps these to exit codes.
enum class errc {
  // system model
  empty_family,
  dimension_mismatch,
  nonpositive_dwell_time,
  nonfinite_entry,
  step_nonpositive,
  step_too_large,
  // linear algebra
  non_square,
  complex_leading,
  // cycles
  not_closed,
  malformed_cycle,
  budget_exceeded,
  no_cycle_found,
  // polytope norms
  degenerate_ball,
  negative_input,
  orthant_violation,
  // invariant polytope / bounds
  vertex_budget_exceeded,
  certificate_mismatch,
  domain_error,
  // io
  parse_error,
  validation_error,
  verification_failed,
  io_error,
  dimension_not_two,
};

const char* errc_name(errc c);

class error : public std::runtime_error {
 public:
  error(errc code, const std::string& what)
      : std::runtime_error(std::string(errc_name(code)) + ": " + what), code_(code) {}
  errc code() const { return code_; }

 private:
  errc code_;
};

[[noreturn]] inline void fail(errc code, const std::string& what) { throw error(code, what); }

}  // namespace dwellcert
