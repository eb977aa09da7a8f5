#pragma once

#include <optional>

#include "dwellcert/ipa.hpp"

namespace dwellcert {

enum class Verdict { stable, unstable, inconclusive };

const char* verdict_name(Verdict v);

/// Two-sided bracket for the Lyapunov exponent of the continuous-time system,
/// derived from a certificate of its h-discretization:
///   sigma_lower = ln rho_hat
///   sigma_upper = ln((1+eps) rho_hat) - (1/m) ln(1 - C h^2 / 8)
/// with C = max_j ||(A_j - sigma_lower I)^2||_j in the certificate multinorm.
/// sigma_upper is +inf when 1 - C h^2/8 <= 0 (step too coarse for this C).
struct BoundsReport {
  double h = 0.0;
  double m = 0.0;
  double sigma_lower = 0.0;
  double sigma_upper = 0.0;  // may be +inf
  double curvature = 0.0;    // C
  double epsilon = 0.0;
  double rho_hat = 0.0;
  std::optional<DwellNotation> leading_cycle;  // nullopt = uncertified
  bool certified = false;
  Verdict verdict = Verdict::inconclusive;
};

BoundsReport lyapunov_bounds(const MultinormCertificate& cert, const SwitchingSystem& sys,
                             double h);

/// -(1/m) ln(1 - C h^2/8); equals C h^2/(8m) + O(h^4). Throws domain_error
/// when 1 - C h^2/8 <= 0.
double quadratic_bound_gap(double curvature, double m, double h);

/// Chord inequality for one regime: with x(t) = e^{tA} x0 and the polytope
/// norm p, checks ||x(tau)|| <= (1 - h^2 ||A^2||_p / 8)^{-1} max(||x(0)||,
/// ||x(h)||) for tau in [0, h]. Requires h < sqrt(8 / ||A^2||_p). Verification
/// tooling: a false return is a bug somewhere upstream.
bool chord_bound_check(const Matrix& a, const PolytopeNorm& p, const Vector& x0, double h,
                       double tau);

}  // namespace dwellcert
