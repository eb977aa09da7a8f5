#include <doctest.h>

#include <cmath>
#include <random>

#include "dwellcert/ipa.hpp"

using namespace dwellcert;

namespace {

SwitchingSystem example1() {
  const double c = 1.0 / (std::sqrt(2.0) + 2.0);
  Matrix a1(2, 2), a2(2, 2);
  a1 << 0, 0, c, 0;
  a2 << -2 * c, -2 * c, -c, -2 * c;
  return validate_system({a1, a2}, 1.0);
}

MultinormCertificate certify_example1(const GraphSystem& g) {
  const GripenbergResult res = gripenberg_search(g, 200, 700);
  return run_ipa(g, res.best, {});
}

}  // namespace

TEST_CASE("identity dynamics certifies immediately") {
  const SwitchingSystem sys = validate_system({Matrix::Zero(2, 2)}, 1.0);
  const GraphSystem g = build_discretization(sys, 0.5);
  const Cycle loop = make_cycle(g, {0});
  CHECK(loop.value == doctest::Approx(1.0).epsilon(1e-14));
  const MultinormCertificate cert = run_ipa(g, loop, {});
  CHECK(cert.status == CertStatus::certified);
  CHECK(cert.rho_hat == doctest::Approx(1.0).epsilon(1e-14));
  CHECK(cert.iterations_used == 1);
  CHECK(cert.epsilon <= 1e-9);
  CHECK(cert.multinorm.components[0].vertex_count() == 1);
}

TEST_CASE("the 2-D example certifies with the book-keeping invariants") {
  const SwitchingSystem sys = example1();
  const GraphSystem g = build_discretization(sys, 0.2);
  const MultinormCertificate cert = certify_example1(g);

  CHECK(cert.status == CertStatus::certified);
  CHECK(cert.rho_hat == doctest::Approx(1.0331).epsilon(1e-3));
  CHECK(!cert.cycle_possibly_not_leading);

  // certified extremality of the shifted graph
  const GraphSystem gs = shift_graph(g, std::log(cert.rho_hat));
  CHECK(check_extremality(gs, cert.multinorm, 1.0) <= 1e-9);

  // the four containments: every edge operator is non-expansive
  for (const GraphEdge& e : gs.edges) {
    const double on = operator_norm(e.op, cert.multinorm.components[static_cast<size_t>(e.from)],
                                    cert.multinorm.components[static_cast<size_t>(e.to)]);
    CHECK(on <= 1.0 + 1e-8);
  }

  // monotone growth: the seed trajectory stayed inside the final polytopes
  const PathProduct shifted = path_from_edges(gs, cert.leading_cycle.path.edge_sequence);
  EigenPair lead = leading_eigenpair(shifted.product());
  Vector x = lead.vector;
  CHECK(std::abs(std::abs(lead.value) - 1.0) <= 1e-9);
  int at = cert.leading_cycle.path.start_vertex;
  for (size_t i = 0; i < cert.leading_cycle.path.edge_sequence.size(); ++i) {
    CHECK(contains(cert.multinorm.components[static_cast<size_t>(at)], x, 1e-7));
    const GraphEdge& e = gs.edge(cert.leading_cycle.path.edge_sequence[i]);
    x = e.op * x;
    at = e.to;
  }
  // the cycle maps the eigenvector to (+/-) itself
  CHECK((x - lead.value * lead.vector).norm() <= 1e-9);
}

TEST_CASE("every search candidate is bounded by the certified rate") {
  const SwitchingSystem sys = example1();
  const GraphSystem g = build_discretization(sys, 0.2);
  const GripenbergResult res = gripenberg_search(g, 200, 700);
  const MultinormCertificate cert = run_ipa(g, res.best, {});
  REQUIRE(cert.status == CertStatus::certified);
  for (const Cycle& c : res.candidates) CHECK(c.value <= cert.rho_hat * (1.0 + 1e-9));
}

TEST_CASE("verify_certificate rejects emptied components") {
  const SwitchingSystem sys = example1();
  const GraphSystem g = build_discretization(sys, 0.2);
  MultinormCertificate cert = run_ipa(g, gripenberg_search(g, 100, 400).best, {});
  cert.multinorm.components[1] = PolytopeNorm();
  CHECK(!verify_certificate(g, cert).ok);
}

TEST_CASE("the leading eigenpair of the cycle product matches rho_hat^T") {
  const SwitchingSystem sys = example1();
  const GraphSystem g = build_discretization(sys, 0.2);
  const Cycle best = gripenberg_search(g, 200, 700).best;
  const Matrix prod = best.path.product();
  const EigenPair lead = leading_eigenpair(prod);
  const double want = std::pow(best.value, best.path.total_time);
  CHECK(std::abs(lead.value) == doctest::Approx(want).epsilon(1e-9));
  CHECK(std::abs(lead.value) == doctest::Approx(spectral_radius(prod)).epsilon(1e-10));
}

TEST_CASE("mode permutation only permutes the certificate") {
  const SwitchingSystem sys = example1();
  const SwitchingSystem swapped =
      validate_system({sys.matrices[1], sys.matrices[0]}, sys.dwell_time);
  const GraphSystem g = build_discretization(sys, 0.25);
  const GraphSystem g2 = build_discretization(swapped, 0.25);
  const MultinormCertificate a = run_ipa(g, gripenberg_search(g, 100, 400).best, {});
  const MultinormCertificate b = run_ipa(g2, gripenberg_search(g2, 100, 400).best, {});
  CHECK(a.rho_hat == doctest::Approx(b.rho_hat).epsilon(1e-10));
  CHECK((a.status == CertStatus::certified) == (b.status == CertStatus::certified));
  CHECK(a.multinorm.components[0].vertex_count() == b.multinorm.components[1].vertex_count());
  CHECK(a.multinorm.components[1].vertex_count() == b.multinorm.components[0].vertex_count());
}

TEST_CASE("positive mode keeps every vertex in the orthant") {
  std::mt19937_64 rng(3);
  for (int trial = 0; trial < 3; ++trial) {
    std::vector<Matrix> mats;
    for (int k = 0; k < 2; ++k) {
      Matrix a(4, 4);
      for (int i = 0; i < 4; ++i)
        for (int j = 0; j < 4; ++j)
          a(i, j) = i == j ? -4.0 + static_cast<double>(rng() % 9)
                           : static_cast<double>(rng() % 7);
      mats.push_back(a / operator_2norm(a));
    }
    const SwitchingSystem sys = validate_system(std::move(mats), 0.6);
    REQUIRE(is_metzler(sys));
    const GraphSystem g = build_discretization(sys, 0.2);
    IpaConfig cfg;
    cfg.positive_mode = true;
    const MultinormCertificate cert = run_ipa(g, gripenberg_search(g, 100, 200).best, cfg);
    for (const PolytopeNorm& p : cert.multinorm.components) {
      CHECK(p.variant() == Variant::positive);
      for (const Vector& v : p.vertices()) CHECK(v.minCoeff() >= -1e-12);
    }
    CHECK(verify_certificate(g, cert).ok);
  }
}

TEST_CASE("caps produce an approximate certificate with measured epsilon") {
  const SwitchingSystem sys = example1();
  const GraphSystem g = build_discretization(sys, 0.2);
  // a deliberately sub-leading candidate: the A2 loop alone
  const Cycle weak = make_cycle(g, {1});
  IpaConfig cfg;
  cfg.max_iterations = 5;
  const MultinormCertificate cert = run_ipa(g, weak, cfg);
  CHECK(cert.status == CertStatus::approximate);
  CHECK(cert.cycle_possibly_not_leading);
  CHECK(cert.epsilon > 1e-9);
  const GraphSystem gs = shift_graph(g, std::log(cert.rho_hat));
  CHECK(check_extremality(gs, cert.multinorm, 1.0) <= cert.epsilon + 1e-12);
}

TEST_CASE("verify_certificate accepts the real thing and rejects tampering") {
  const SwitchingSystem sys = example1();
  const GraphSystem g = build_discretization(sys, 0.2);
  MultinormCertificate cert = certify_example1(g);
  CHECK(verify_certificate(g, cert).ok);

  MultinormCertificate halved = cert;
  halved.rho_hat /= 2.0;
  const VerifyReport rep = verify_certificate(g, halved);
  CHECK(!rep.ok);
  CHECK(!rep.first_violation.empty());

  MultinormCertificate shrunk = cert;
  std::vector<Vector> fewer(shrunk.multinorm.components[0].vertices().begin(),
                            shrunk.multinorm.components[0].vertices().begin() + 3);
  shrunk.multinorm.components[0] = PolytopeNorm(2, Variant::symmetric, fewer);
  CHECK(!verify_certificate(g, shrunk).ok);
}
