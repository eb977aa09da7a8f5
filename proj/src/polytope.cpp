#include "dwellcert/polytope.hpp"

#include <cmath>
#include <limits>

#include "dwellcert/simplex.hpp"

namespace dwellcert {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();
constexpr double kLpTol = 1e-10;

void require_point(const PolytopeNorm& p, const Vector& x) {
  if (x.size() != p.dim()) fail(errc::dimension_mismatch, "query point has wrong dimension");
  if (!x.allFinite()) fail(errc::nonfinite_entry, "query point has non-finite entries");
}

// Gauge LP data. symmetric: min 1'(l,u) s.t. [V -V](l,u) = x.
// positive:  min 1'l s.t. V l - s = x  (s surplus).
struct GaugeLp {
  Matrix a;
  Vector c;
};

GaugeLp build_lp(const PolytopeNorm& p) {
  const int d = p.dim();
  const int k = p.vertex_count();
  GaugeLp lp;
  if (p.variant() == Variant::symmetric) {
    lp.a.resize(d, 2 * k);
    lp.c = Vector::Ones(2 * k);
    for (int i = 0; i < k; ++i) {
      lp.a.col(i) = p.vertices()[static_cast<size_t>(i)];
      lp.a.col(k + i) = -p.vertices()[static_cast<size_t>(i)];
    }
  } else {
    lp.a.resize(d, k + d);
    lp.c = Vector::Zero(k + d);
    lp.c.head(k).setOnes();
    for (int i = 0; i < k; ++i) lp.a.col(i) = p.vertices()[static_cast<size_t>(i)];
    lp.a.rightCols(d) = -Matrix::Identity(d, d);
  }
  return lp;
}

// Core evaluation; stop_below enables the containment early exit.
double gauge(const PolytopeNorm& p, const Vector& x, bool allow_below_orthant, double stop_below,
             bool* below_threshold) {
  require_point(p, x);
  if (p.vertex_count() == 0) return x.isZero(0.0) ? 0.0 : kInf;

  Vector q = x;
  if (p.variant() == Variant::positive) {
    const double neg_tol = 1e-12 * std::max(1.0, q.cwiseAbs().maxCoeff());
    if (!allow_below_orthant && (q.array() < -neg_tol).any())
      fail(errc::negative_input, "positive-variant norm of a point below the orthant");
    if (!allow_below_orthant) q = q.cwiseMax(0.0);
  }

  GaugeLp lp = build_lp(p);
  LpResult res = lp_min_equality(lp.a, q, lp.c, stop_below, kLpTol);
  switch (res.status) {
    case LpStatus::optimal:
      return std::max(res.objective, 0.0);
    case LpStatus::below_threshold:
      if (below_threshold) *below_threshold = true;
      return std::max(res.objective, 0.0);
    case LpStatus::infeasible:
      return kInf;
    case LpStatus::unbounded:
      break;  // impossible: costs are nonnegative
  }
  fail(errc::domain_error, "gauge LP reported an impossible status");
}

}  // namespace

PolytopeNorm::PolytopeNorm(int dim, Variant variant, std::vector<Vector> vertices)
    : dim_(dim), variant_(variant) {
  if (dim <= 0) fail(errc::dimension_mismatch, "polytope dimension must be positive");
  vertices_.reserve(vertices.size());
  for (auto& v : vertices) add_vertex(std::move(v));
}

void PolytopeNorm::add_vertex(Vector v) {
  if (v.size() != dim_) fail(errc::dimension_mismatch, "vertex has wrong dimension");
  if (!v.allFinite()) fail(errc::nonfinite_entry, "vertex has non-finite entries");
  if (v.isZero(0.0)) fail(errc::degenerate_ball, "zero vector cannot be a polytope vertex");
  if (variant_ == Variant::positive) {
    const double neg_tol = 1e-12 * std::max(1.0, v.cwiseAbs().maxCoeff());
    if ((v.array() < -neg_tol).any())
      fail(errc::negative_input, "positive-variant vertex below the orthant");
    v = v.cwiseMax(0.0);
  }
  outer_radius_ = std::max(outer_radius_, v.norm());
  vertices_.push_back(std::move(v));
}

double norm_eval(const PolytopeNorm& p, const Vector& x) {
  const double g = gauge(p, x, /*allow_below_orthant=*/false, -kInf, nullptr);
  if (std::isinf(g))
    fail(errc::degenerate_ball, "point is not absorbed by the polytope at any scale");
  return g;
}

double norm_eval_extended(const PolytopeNorm& p, const Vector& x) {
  return gauge(p, x, /*allow_below_orthant=*/true, -kInf, nullptr);
}

bool contains(const PolytopeNorm& p, const Vector& x, double delta) {
  require_point(p, x);
  if (delta < 0) fail(errc::domain_error, "containment slack must be nonnegative");
  // The unit ball sits inside the Euclidean ball of the largest vertex norm.
  if (x.norm() > p.outer_radius() * (1.0 + delta) * (1.0 + 1e-12)) return false;
  bool below = false;
  const double g = gauge(p, x, /*allow_below_orthant=*/false, 1.0 + delta, &below);
  if (std::isinf(g))
    fail(errc::degenerate_ball, "point is not absorbed by the polytope at any scale");
  return below || g <= 1.0 + delta;
}

double operator_norm(const Matrix& b, const PolytopeNorm& from, const PolytopeNorm& to) {
  if (from.variant() != to.variant())
    fail(errc::dimension_mismatch, "operator_norm: polytope variants differ");
  if (b.rows() != to.dim() || b.cols() != from.dim())
    fail(errc::dimension_mismatch, "operator_norm: incompatible shapes");
  double best = 0.0;
  for (const Vector& v : from.vertices()) {
    Vector image = b * v;
    if (from.variant() == Variant::positive) {
      const double neg_tol = 1e-9 * std::max(1.0, image.cwiseAbs().maxCoeff());
      if ((image.array() < -neg_tol).any())
        fail(errc::orthant_violation,
             "operator maps a positive-variant vertex out of the orthant");
      image = image.cwiseMax(0.0);
    }
    best = std::max(best, norm_eval(to, image));
  }
  return best;
}

double check_extremality(const GraphSystem& g, const Multinorm& m, double rho) {
  if (m.size() != g.vertex_count)
    fail(errc::dimension_mismatch, "multinorm component count does not match the graph");
  if (!(rho > 0.0)) fail(errc::domain_error, "extremality rate must be positive");
  double eps = 0.0;
  for (const GraphEdge& e : g.edges) {
    const PolytopeNorm& src = m.components[static_cast<size_t>(e.from)];
    const PolytopeNorm& dst = m.components[static_cast<size_t>(e.to)];
    const double scale = std::pow(rho, e.duration);
    for (const Vector& v : src.vertices()) {
      const double val = norm_eval_extended(dst, e.op * v) / scale - 1.0;
      if (val > eps) eps = val;  // propagates +inf when the image is not absorbed
      if (std::isinf(eps)) return eps;
    }
  }
  return eps;
}

}  // namespace dwellcert
