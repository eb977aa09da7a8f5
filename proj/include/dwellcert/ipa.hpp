#pragma once

#include <string>

#include "dwellcert/cycles.hpp"
#include "dwellcert/polytope.hpp"

namespace dwellcert {

struct IpaConfig {
  int max_iterations = 200;
  int max_vertices_per_mode = 20000;
  double redundancy_slack = 1e-10;  // delta for the containment tests
  bool positive_mode = false;       // use co_+ polytopes (Metzler systems)
};

enum class CertStatus { certified, approximate };

/// Output of the invariant polytope run: the certified (or candidate) joint
/// spectral radius of the graph system, per unit time, with the multinorm
/// that witnesses it. epsilon is the measured extremality defect of the
/// multinorm for the shifted graph; certified status requires a fixpoint and
/// epsilon <= 1e-9.
struct MultinormCertificate {
  double rho_hat = 0.0;
  Multinorm multinorm;
  double epsilon = 0.0;
  Cycle leading_cycle;
  int iterations_used = 0;
  CertStatus status = CertStatus::approximate;
  bool cycle_possibly_not_leading = false;
};

/// Invariant polytope iteration seeded by the periodic trajectory of the
/// candidate leading cycle: shift the regimes by ln(cycle value), push the
/// leading eigenvector around the cycle, then repeatedly map every mode's
/// vertex set through the shifted edge operators, keeping only points outside
/// the current hulls. Terminates certified when an iteration adds nothing;
/// returns approximate with the measured extremality defect when a cap is hit.
MultinormCertificate run_ipa(const GraphSystem& g, const Cycle& cycle, const IpaConfig& cfg = {});

struct VerifyReport {
  bool ok = false;
  double max_violation = 0.0;
  std::string first_violation;  // empty when ok

  explicit operator bool() const { return ok; }
};

/// Re-checks every edge/vertex containment of the certificate against the
/// unshifted graph with fresh LPs, plus rho_hat >= cycle value. Needs no
/// search; this is the standalone audit path.
VerifyReport verify_certificate(const GraphSystem& g, const MultinormCertificate& cert);

}  // namespace dwellcert
