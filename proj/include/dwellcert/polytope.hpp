#pragma once

#include <vector>

#include "dwellcert/system.hpp"

namespace dwellcert {

enum class Variant { symmetric, positive };

/// Minkowski-functional norm whose unit ball is a vertex-represented polytope.
/// symmetric: ball = co_s(V), the convex hull of V and -V.
/// positive:  ball = co_+(V) = { x >= 0 : x <= y for some y in conv(V) },
///            all vertices componentwise >= 0.
/// Vertices are stored unreduced; every geometric query is answered by LP.
class PolytopeNorm {
 public:
  PolytopeNorm() = default;
  PolytopeNorm(int dim, Variant variant, std::vector<Vector> vertices);

  int dim() const { return dim_; }
  Variant variant() const { return variant_; }
  const std::vector<Vector>& vertices() const { return vertices_; }
  int vertex_count() const { return static_cast<int>(vertices_.size()); }
  void add_vertex(Vector v);
  /// Largest vertex 2-norm; the unit ball lies inside this Euclidean ball.
  double outer_radius() const { return outer_radius_; }

 private:
  int dim_ = 0;
  Variant variant_ = Variant::symmetric;
  std::vector<Vector> vertices_;
  double outer_radius_ = 0.0;
};

/// Minkowski functional of the unit ball at x, by LP.
/// symmetric: min sum(l)+sum(u) s.t. V l - V u = x, l,u >= 0.
/// positive:  min sum(l) s.t. V l >= x, l >= 0; requires x >= 0.
/// Throws degenerate_ball when x is not absorbed at any scale (vertices do not
/// span), negative_input for the positive variant with x below the orthant.
double norm_eval(const PolytopeNorm& p, const Vector& x);

/// norm_eval without the positive-variant sign restriction on x: for the
/// positive variant this is the monotone envelope min{sum(l) : V l >= x},
/// which agrees with norm_eval on the orthant and stays finite for arbitrary
/// x whenever the vertices have a strictly positive combination. Returns
/// +inf instead of throwing when x is not absorbed.
double norm_eval_extended(const PolytopeNorm& p, const Vector& x);

/// norm_eval(p, x) <= 1 + delta, with an early-exit LP.
bool contains(const PolytopeNorm& p, const Vector& x, double delta);

/// Operator norm of B: from-ball -> to-norm, exact as the max over the from
/// vertices. Positive variant: throws orthant_violation if B maps a vertex
/// out of the orthant (B not order-preserving).
double operator_norm(const Matrix& b, const PolytopeNorm& from, const PolytopeNorm& to);

struct Multinorm {
  std::vector<PolytopeNorm> components;  // one per graph vertex / mode

  int size() const { return static_cast<int>(components.size()); }
};

/// Largest relative violation of the extremality conditions of the multinorm
/// for g at rate rho: max over edges (i->j) and vertices v of component i of
/// norm_j(E_ji v) / rho^{duration} - 1, clamped at 0. Zero means extremal.
double check_extremality(const GraphSystem& g, const Multinorm& m, double rho);

}  // namespace dwellcert
