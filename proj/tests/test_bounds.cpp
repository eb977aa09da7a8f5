#include <doctest.h>

#include <cmath>
#include <random>

#include "dwellcert/bounds.hpp"
#include "dwellcert/io.hpp"

using namespace dwellcert;

namespace {

SwitchingSystem example1() {
  const double c = 1.0 / (std::sqrt(2.0) + 2.0);
  Matrix a1(2, 2), a2(2, 2);
  a1 << 0, 0, c, 0;
  a2 << -2 * c, -2 * c, -c, -2 * c;
  return validate_system({a1, a2}, 1.0);
}

Vector vec2(double x, double y) {
  Vector v(2);
  v << x, y;
  return v;
}

}  // namespace

TEST_CASE("quadratic_bound_gap closed form") {
  CHECK(quadratic_bound_gap(0.0, 1.0, 0.2) == 0.0);
  // direct evaluation of -(1/m) ln(1 - C h^2/8)
  const double want = -std::log(1.0 - 2.8361 * 0.04 / 8.0) / 1.0;
  CHECK(quadratic_bound_gap(2.8361, 1.0, 0.2) == doctest::Approx(want).epsilon(1e-14));
  CHECK(want == doctest::Approx(0.014285).epsilon(1e-4));
  CHECK_THROWS_AS((void)quadratic_bound_gap(1000.0, 1.0, 1.0), error);
}

TEST_CASE("quadratic_bound_gap has the advertised small-h limit") {
  const double c = 3.7, m = 0.6;
  for (double h : {0.01, 0.005, 0.001}) {
    const double ratio = quadratic_bound_gap(c, m, h) / (h * h);
    CHECK(ratio == doctest::Approx(c / (8.0 * m)).epsilon(0.01));
  }
}

TEST_CASE("single zero regime gives the degenerate bracket [0, 0]") {
  const SwitchingSystem sys = validate_system({Matrix::Zero(2, 2)}, 1.0);
  const GraphSystem g = build_discretization(sys, 0.5);
  const MultinormCertificate cert = run_ipa(g, make_cycle(g, {0}), {});
  const BoundsReport rep = lyapunov_bounds(cert, sys, 0.5);
  CHECK(rep.sigma_lower == doctest::Approx(0.0).epsilon(1e-14));
  CHECK(rep.sigma_upper == doctest::Approx(0.0).epsilon(1e-12));
  CHECK(rep.curvature <= 1e-12);
  CHECK(rep.verdict == Verdict::inconclusive);
}

TEST_CASE("the 2-D example reproduces its published bracket") {
  const SwitchingSystem sys = example1();
  const RunConfig cfg;
  const StepResult r = analyze_step(sys, 0.2, cfg);
  REQUIRE(r.ok());
  CHECK(r.report.sigma_lower == doctest::Approx(0.0325).epsilon(0.03));
  CHECK(std::abs(r.report.sigma_lower - 0.0325) <= 1e-3);
  CHECK(std::abs(r.report.sigma_upper - 0.0469) <= 1e-3);
  CHECK(std::abs(r.report.curvature - 2.8361) / 2.8361 <= 0.25);
  CHECK(r.report.verdict == Verdict::unstable);
  // closed-form consistency of the upper bound
  const double sigma_plus = r.report.sigma_lower + std::log1p(r.report.epsilon);
  CHECK(r.report.sigma_upper ==
        doctest::Approx(sigma_plus + quadratic_bound_gap(r.report.curvature, 1.0, 0.2))
            .epsilon(1e-12));
}

TEST_CASE("bounds reject a certificate for a different system") {
  const SwitchingSystem sys = example1();
  const GraphSystem g = build_discretization(sys, 0.2);
  const MultinormCertificate cert = run_ipa(g, gripenberg_search(g, 100, 400).best, {});
  const SwitchingSystem other = validate_system({Matrix::Zero(3, 3), Matrix::Zero(3, 3)}, 1.0);
  CHECK_THROWS_AS((void)lyapunov_bounds(cert, other, 0.2), error);
  CHECK_THROWS_AS((void)lyapunov_bounds(cert, sys, 1.5), error);
}

TEST_CASE("chord bound on constant and scalar flows") {
  PolytopeNorm p(2, Variant::symmetric, {vec2(1, 0.1), vec2(-0.2, 1)});
  CHECK(chord_bound_check(Matrix::Zero(2, 2), p, vec2(0.4, -0.3), 0.5, 0.25));
  CHECK(chord_bound_check(0.8 * Matrix::Identity(2, 2), p, vec2(1, 1), 0.5, 0.37));
  CHECK(chord_bound_check(-0.8 * Matrix::Identity(2, 2), p, vec2(1, 1), 0.5, 0.37));
}

TEST_CASE("chord bound precondition") {
  PolytopeNorm p(2, Variant::symmetric, {vec2(1, 0), vec2(0, 1)});
  Matrix a = 10.0 * Matrix::Identity(2, 2);
  CHECK_THROWS_AS((void)chord_bound_check(a, p, vec2(1, 0), 1.0, 0.5), error);
}

TEST_CASE("chord bound randomized sweep") {
  std::mt19937_64 rng(2026);
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  int checked = 0;
  while (checked < 300) {
    const int d = 2 + static_cast<int>(rng() % 5);
    Matrix a(d, d);
    for (int i = 0; i < d; ++i)
      for (int j = 0; j < d; ++j) a(i, j) = u(rng);
    std::vector<Vector> verts;
    const int nv = 3 + static_cast<int>(rng() % 8);
    for (int k = 0; k < nv; ++k) {
      Vector v(d);
      for (int i = 0; i < d; ++i) v[i] = u(rng);
      if (v.norm() > 0.2) verts.push_back(v);
    }
    if (static_cast<int>(verts.size()) < d) continue;
    PolytopeNorm p(d, Variant::symmetric, verts);
    Vector x0(d);
    for (int i = 0; i < d; ++i) x0[i] = u(rng);

    const double a2 = operator_norm(a * a, p, p);
    if (!(a2 > 0.0) || std::isinf(a2)) continue;
    const double hmax = std::sqrt(8.0 / a2);
    const double h = 0.9 * hmax * (0.2 + 0.8 * std::abs(u(rng)));
    const double tau = h * std::abs(u(rng));
    CHECK(chord_bound_check(a, p, x0, h, tau));
    ++checked;
  }
}

TEST_CASE("brackets stay ordered across random systems") {
  std::mt19937_64 rng(404);
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  RunConfig cfg;
  cfg.depth = 300;
  for (int trial = 0; trial < 5; ++trial) {
    std::vector<Matrix> mats;
    for (int k = 0; k < 2; ++k) {
      Matrix a(2, 2);
      for (int i = 0; i < 2; ++i)
        for (int j = 0; j < 2; ++j) a(i, j) = u(rng);
      mats.push_back(a / operator_2norm(a));
    }
    const SwitchingSystem sys = validate_system(std::move(mats), 0.8);
    const StepResult r = analyze_step(sys, 0.2, cfg);
    REQUIRE(r.ok());
    CHECK(r.report.sigma_lower <= r.report.sigma_upper + 1e-12);
  }
}
