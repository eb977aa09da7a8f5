#include "dwellcert/bounds.hpp"

#include <cmath>
#include <limits>

namespace dwellcert {

namespace {
constexpr double kInf = std::numeric_limits<double>::infinity();

// max_v ||B v||_p over the polytope's vertices, through the sign-tolerant
// gauge so positive-mode curvature stays finite when B is not
// order-preserving. +inf when some image escapes the span.
double vertex_operator_norm(const Matrix& b, const PolytopeNorm& p) {
  double best = 0.0;
  for (const Vector& v : p.vertices()) best = std::max(best, norm_eval_extended(p, b * v));
  return best;
}
}  // namespace

const char* verdict_name(Verdict v) {
  switch (v) {
    case Verdict::stable: return "stable";
    case Verdict::unstable: return "unstable";
    case Verdict::inconclusive: return "inconclusive";
  }
  return "?";
}

double quadratic_bound_gap(double curvature, double m, double h) {
  if (!(m > 0.0) || !(h > 0.0) || curvature < 0.0 || !std::isfinite(curvature))
    fail(errc::domain_error, "quadratic_bound_gap: bad arguments");
  const double q = curvature * h * h / 8.0;
  if (q >= 1.0) fail(errc::domain_error, "quadratic_bound_gap: 1 - C h^2/8 <= 0");
  return -std::log1p(-q) / m;
}

BoundsReport lyapunov_bounds(const MultinormCertificate& cert, const SwitchingSystem& sys,
                             double h) {
  if (cert.multinorm.size() != sys.mode_count())
    fail(errc::certificate_mismatch, "certificate has a different number of modes");
  for (const PolytopeNorm& p : cert.multinorm.components)
    if (p.dim() != sys.dim)
      fail(errc::certificate_mismatch, "certificate dimension does not match the system");
  if (!(h > 0.0) || h > sys.dwell_time)
    fail(errc::certificate_mismatch, "step is outside (0, m]");
  if (!(cert.rho_hat > 0.0)) fail(errc::certificate_mismatch, "certificate rate is not positive");

  BoundsReport rep;
  rep.h = h;
  rep.m = sys.dwell_time;
  rep.rho_hat = cert.rho_hat;
  rep.epsilon = cert.epsilon;
  rep.certified = cert.status == CertStatus::certified;
  rep.sigma_lower = std::log(cert.rho_hat);
  const double sigma_plus = rep.sigma_lower + std::log1p(cert.epsilon);

  const Matrix id = Matrix::Identity(sys.dim, sys.dim);
  double curvature = 0.0;
  for (int j = 0; j < sys.mode_count(); ++j) {
    const Matrix shifted = sys.matrices[static_cast<size_t>(j)] - rep.sigma_lower * id;
    curvature = std::max(
        curvature, vertex_operator_norm(shifted * shifted,
                                        cert.multinorm.components[static_cast<size_t>(j)]));
  }
  rep.curvature = curvature;

  const double q = curvature * h * h / 8.0;
  rep.sigma_upper =
      (std::isfinite(curvature) && q < 1.0) ? sigma_plus - std::log1p(-q) / sys.dwell_time : kInf;

  if (rep.sigma_lower > 0.0)
    rep.verdict = Verdict::unstable;
  else if (rep.sigma_upper < 0.0)
    rep.verdict = Verdict::stable;
  else
    rep.verdict = Verdict::inconclusive;

  if (rep.certified)
    rep.leading_cycle =
        dwell_notation_relaxed(cert.leading_cycle, build_discretization(sys, h));
  return rep;
}

bool chord_bound_check(const Matrix& a, const PolytopeNorm& p, const Vector& x0, double h,
                       double tau) {
  if (!(h > 0.0) || tau < 0.0 || tau > h)
    fail(errc::domain_error, "chord_bound_check: need 0 <= tau <= h, h > 0");
  if (a.rows() != p.dim() || x0.size() != p.dim())
    fail(errc::dimension_mismatch, "chord_bound_check: incompatible dimensions");

  const double a2norm = vertex_operator_norm(a * a, p);
  const double q = h * h * a2norm / 8.0;
  if (!(q < 1.0)) fail(errc::step_too_large, "chord_bound_check: h >= sqrt(8/||A^2||)");

  const double lhs = norm_eval_extended(p, mat_exp(a, tau) * x0);
  const double end0 = norm_eval_extended(p, x0);
  const double end1 = norm_eval_extended(p, mat_exp(a, h) * x0);
  const double rhs = std::max(end0, end1) / (1.0 - q);
  // slack covers the LP tolerance on both sides of a tight inequality
  return lhs <= rhs * (1.0 + 1e-9) + 1e-12;
}

}  // namespace dwellcert
