#include "dwellcert/ipa.hpp"

#include <cmath>

namespace dwellcert {

namespace {

// Containment with +inf treated as "outside" so span growth never throws.
bool absorbed(const PolytopeNorm& p, const Vector& x, double delta) {
  if (p.vertex_count() == 0) return false;
  if (x.norm() > p.outer_radius() * (1.0 + delta) * (1.0 + 1e-12)) return false;
  return norm_eval_extended(p, x) <= 1.0 + delta;
}

Vector clamp_positive(Vector v, bool positive) {
  if (!positive) return v;
  const double floor = -1e-9 * std::max(1.0, v.cwiseAbs().maxCoeff());
  if ((v.array() < floor).any())
    fail(errc::orthant_violation,
         "positive mode requires order-preserving dynamics (Metzler regimes)");
  return v.cwiseMax(0.0);
}

}  // namespace

MultinormCertificate run_ipa(const GraphSystem& g, const Cycle& cycle, const IpaConfig& cfg) {
  if (cfg.max_iterations < 1 || cfg.max_vertices_per_mode < 1)
    fail(errc::domain_error, "ipa caps must be positive");
  if (cfg.redundancy_slack < 0.0) fail(errc::domain_error, "redundancy slack must be >= 0");
  if (!(cycle.value > 0.0)) fail(errc::domain_error, "candidate cycle value must be positive");
  if (!cycle.path.closed()) fail(errc::not_closed, "candidate is not a cycle");

  const int n = g.vertex_count;
  const double sigma = std::log(cycle.value);
  const GraphSystem gs = shift_graph(g, sigma);
  const Variant variant = cfg.positive_mode ? Variant::positive : Variant::symmetric;
  const double delta = cfg.redundancy_slack;

  // periodic trajectory of the candidate cycle in the shifted system
  const PathProduct shifted_product = path_from_edges(gs, cycle.path.edge_sequence);
  EigenPair lead = leading_eigenpair(shifted_product.product());  // throws on complex leading
  Vector x = clamp_positive(lead.vector, cfg.positive_mode);

  std::vector<PolytopeNorm> comps;
  comps.reserve(static_cast<size_t>(n));
  for (int j = 0; j < n; ++j)
    comps.emplace_back(static_cast<int>(x.size()), variant, std::vector<Vector>{});

  std::vector<std::vector<Vector>> frontier(static_cast<size_t>(n));
  auto near_duplicate = [](const PolytopeNorm& p, const Vector& v) {
    for (const Vector& w : p.vertices())
      if ((v - w).lpNorm<Eigen::Infinity>() <= 1e-12 * (1.0 + w.lpNorm<Eigen::Infinity>()))
        return true;
    return false;
  };
  auto accept = [&](int mode, const Vector& v) {
    PolytopeNorm& p = comps[static_cast<size_t>(mode)];
    if (near_duplicate(p, v)) return;
    if (absorbed(p, v, delta)) return;
    p.add_vertex(v);
    frontier[static_cast<size_t>(mode)].push_back(v);
  };

  accept(cycle.path.start_vertex, x);
  for (size_t i = 0; i + 1 < cycle.path.edge_sequence.size(); ++i) {
    const GraphEdge& e = gs.edge(cycle.path.edge_sequence[i]);
    x = clamp_positive(e.op * x, cfg.positive_mode);
    accept(e.to, x);
  }

  bool fixpoint = false;
  bool capped = false;
  int used = 0;
  std::vector<std::vector<Vector>> next(static_cast<size_t>(n));
  for (int it = 1; it <= cfg.max_iterations && !capped; ++it) {
    used = it;
    for (auto& f : next) f.clear();
    bool added = false;
    for (int j = 0; j < n && !capped; ++j) {
      PolytopeNorm& pj = comps[static_cast<size_t>(j)];
      auto try_point = [&](const Vector& img) {
        if (near_duplicate(pj, img)) return;
        if (absorbed(pj, img, delta)) return;
        pj.add_vertex(img);
        next[static_cast<size_t>(j)].push_back(img);
        added = true;
        if (pj.vertex_count() > cfg.max_vertices_per_mode) capped = true;
      };
      const int loop_id = g.find_edge(j, j);
      for (const Vector& v : frontier[static_cast<size_t>(j)]) {
        if (capped) break;
        try_point(clamp_positive(gs.edge(loop_id).op * v, cfg.positive_mode));
      }
      for (int s = 0; s < n && !capped; ++s) {
        if (s == j) continue;
        const int cross_id = g.find_edge(s, j);
        for (const Vector& v : frontier[static_cast<size_t>(s)]) {
          if (capped) break;
          try_point(clamp_positive(gs.edge(cross_id).op * v, cfg.positive_mode));
        }
      }
    }
    frontier.swap(next);
    if (!added) {
      fixpoint = true;
      break;
    }
  }

  MultinormCertificate cert;
  cert.rho_hat = cycle.value;
  cert.multinorm.components = std::move(comps);
  cert.leading_cycle = cycle;
  cert.iterations_used = used;

  const double eps = check_extremality(gs, cert.multinorm, 1.0);
  if (!std::isfinite(eps))
    fail(errc::vertex_budget_exceeded,
         "polytopes do not absorb their own images at any finite factor");
  cert.epsilon = eps;
  cert.status = (fixpoint && eps <= 1e-9) ? CertStatus::certified : CertStatus::approximate;
  cert.cycle_possibly_not_leading = cert.status != CertStatus::certified;
  return cert;
}

VerifyReport verify_certificate(const GraphSystem& g, const MultinormCertificate& cert) {
  VerifyReport rep;
  if (cert.multinorm.size() != g.vertex_count) {
    rep.first_violation = "multinorm component count does not match the graph";
    return rep;
  }
  if (!(cert.rho_hat > 0.0) || !std::isfinite(cert.rho_hat) || cert.epsilon < 0.0 ||
      !std::isfinite(cert.epsilon)) {
    rep.first_violation = "certificate rates are not positive finite";
    return rep;
  }
  for (const PolytopeNorm& p : cert.multinorm.components)
    if (p.vertex_count() == 0) {
      rep.first_violation = "a multinorm component has no vertices";
      return rep;
    }

  double worst = 0.0;
  std::string first;
  for (const GraphEdge& e : g.edges) {
    const PolytopeNorm& src = cert.multinorm.components[static_cast<size_t>(e.from)];
    const PolytopeNorm& dst = cert.multinorm.components[static_cast<size_t>(e.to)];
    const double scale = std::pow(cert.rho_hat, e.duration);
    for (int i = 0; i < src.vertex_count(); ++i) {
      const Vector& v = src.vertices()[static_cast<size_t>(i)];
      const double lhs = norm_eval_extended(dst, e.op * v);
      const double rhs = (1.0 + cert.epsilon) * scale * norm_eval_extended(src, v) + 1e-9;
      if (lhs > rhs) {
        const double viol = lhs - rhs;
        if (viol > worst) worst = viol;
        if (first.empty())
          first = "edge " + std::to_string(e.from) + "->" + std::to_string(e.to) + " vertex " +
                  std::to_string(i) + ": " + std::to_string(lhs) + " > " + std::to_string(rhs);
      }
    }
  }

  // the cycle is the certificate's lower evidence: rho_hat must be exactly
  // the recomputed cycle value (an inflated rho_hat would claim an
  // unsupported lower bound; containments alone cannot catch that)
  const Cycle recomputed = make_cycle(g, cert.leading_cycle.path.edge_sequence);
  if (std::abs(cert.rho_hat - recomputed.value) > 1e-9 * std::max(1.0, recomputed.value)) {
    worst = std::max(worst, std::abs(recomputed.value - cert.rho_hat));
    if (first.empty())
      first = "rho_hat " + std::to_string(cert.rho_hat) + " is not its cycle value " +
              std::to_string(recomputed.value);
  }

  rep.ok = first.empty();
  rep.max_violation = worst;
  rep.first_violation = first;
  return rep;
}

}  // namespace dwellcert
