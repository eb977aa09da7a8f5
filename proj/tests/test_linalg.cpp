#include <doctest.h>

#include <cmath>
#include <random>

#include "dwellcert/linalg.hpp"

using namespace dwellcert;

namespace {

// Independent oracle: 30-term Taylor series on A/2^20, squared back up.
// Carries ~1e-10 relative error from the squaring chain, so comparisons
// against it use 1e-9.
Matrix taylor_exp(const Matrix& a, double t, int terms = 30, int scaling = 20) {
  const Matrix b = (t * std::ldexp(1.0, -scaling)) * a;
  Matrix x = Matrix::Identity(a.rows(), a.cols());
  Matrix term = x;
  for (int k = 1; k <= terms; ++k) {
    term = Matrix(term * b / k);
    x += term;
  }
  for (int s = 0; s < scaling; ++s) x = Matrix(x * x);
  return x;
}

// Independent oracle: plain power iteration for the dominant eigenvalue.
double power_iteration_rho(const Matrix& m, int steps = 10000) {
  Vector v = Vector::Ones(m.rows()).normalized();
  double lambda = 0.0;
  for (int i = 0; i < steps; ++i) {
    Vector w = m * v;
    const double n = w.norm();
    if (n == 0.0) return 0.0;
    lambda = n;
    v = w / n;
  }
  return lambda;
}

Matrix random_matrix(std::mt19937_64& rng, int d, double scale = 1.0) {
  std::uniform_real_distribution<double> u(-scale, scale);
  Matrix a(d, d);
  for (int i = 0; i < d; ++i)
    for (int j = 0; j < d; ++j) a(i, j) = u(rng);
  return a;
}

Matrix example1_a1() {
  const double c = 1.0 / (std::sqrt(2.0) + 2.0);
  Matrix a(2, 2);
  a << 0, 0, c, 0;
  return a;
}

Matrix example1_a2() {
  const double c = 1.0 / (std::sqrt(2.0) + 2.0);
  Matrix a(2, 2);
  a << -2 * c, -2 * c, -c, -2 * c;
  return a;
}

}  // namespace

TEST_CASE("mat_exp base cases") {
  std::mt19937_64 rng(1);
  Matrix a = random_matrix(rng, 3);
  CHECK((mat_exp(a, 0.0) - Matrix::Identity(3, 3)).norm() == doctest::Approx(0.0).epsilon(1e-14));

  Matrix d(2, 2);
  d << 1, 0, 0, 2;
  const Matrix e = mat_exp(d, 1.0);
  CHECK(e(0, 0) == doctest::Approx(std::exp(1.0)).epsilon(1e-13));
  CHECK(e(1, 1) == doctest::Approx(std::exp(2.0)).epsilon(1e-13));
  CHECK(std::abs(e(0, 1)) + std::abs(e(1, 0)) == 0.0);
}

TEST_CASE("mat_exp of nilpotent regime is exactly linear") {
  const Matrix a1 = example1_a1();
  const Matrix e = mat_exp(a1, 0.2);
  CHECK(e(0, 0) == 1.0);
  CHECK(e(1, 1) == 1.0);
  CHECK(e(0, 1) == 0.0);
  CHECK(e(1, 0) == doctest::Approx(0.2 * a1(1, 0)).epsilon(1e-15));
}

TEST_CASE("mat_exp against the scaled Taylor oracle") {
  for (const Matrix& a : {example1_a1(), example1_a2()}) {
    const Matrix got = mat_exp(a, 0.2);
    const Matrix want = taylor_exp(a, 0.2);
    for (int i = 0; i < 2; ++i)
      for (int j = 0; j < 2; ++j) {
        const double scale = std::max(std::abs(want(i, j)), 1e-3);
        CHECK(std::abs(got(i, j) - want(i, j)) / scale < 1e-9);
      }
  }
  std::mt19937_64 rng(42);
  for (int trial = 0; trial < 10; ++trial) {
    const int d = 2 + static_cast<int>(rng() % 4);
    const Matrix a = random_matrix(rng, d);
    const Matrix got = mat_exp(a, 0.7);
    const Matrix want = taylor_exp(a, 0.7);
    CHECK((got - want).norm() / want.norm() < 1e-9);
  }
}

TEST_CASE("mat_exp semigroup property") {
  std::mt19937_64 rng(7);
  std::uniform_real_distribution<double> u(0.0, 2.0);
  for (int trial = 0; trial < 20; ++trial) {
    const int d = 2 + static_cast<int>(rng() % 4);
    const Matrix a = random_matrix(rng, d);
    const double s = u(rng), t = u(rng);
    const Matrix lhs = mat_exp(a, s) * mat_exp(a, t);
    const Matrix rhs = mat_exp(a, s + t);
    CHECK(operator_2norm(lhs - rhs) <= 1e-9 * operator_2norm(rhs));
  }
}

TEST_CASE("mat_exp rejects bad input") {
  CHECK_THROWS_AS((void)mat_exp(Matrix::Zero(2, 3), 1.0), error);
  Matrix bad = Matrix::Zero(2, 2);
  bad(0, 0) = std::nan("");
  CHECK_THROWS_AS((void)mat_exp(bad, 1.0), error);
}

TEST_CASE("spectral_radius basics") {
  CHECK(spectral_radius(Matrix::Identity(2, 2)) == doctest::Approx(1.0).epsilon(1e-12));
  Matrix nil(2, 2);
  nil << 0, 1, 0, 0;
  CHECK(spectral_radius(nil) <= 1e-9);
  Matrix sym(2, 2);
  sym << 2, 1, 1, 2;
  CHECK(spectral_radius(sym) == doctest::Approx(3.0).epsilon(1e-12));
}

TEST_CASE("spectral_radius properties") {
  std::mt19937_64 rng(11);
  for (int trial = 0; trial < 20; ++trial) {
    const int d = 2 + static_cast<int>(rng() % 5);
    const Matrix m = random_matrix(rng, d);
    const double rho = spectral_radius(m);
    CHECK(rho <= operator_2norm(m) * (1.0 + 1e-12) + 1e-12);
    Matrix p = m;
    for (int k = 2; k <= 5; ++k) {
      p = Matrix(p * m);
      const double want = std::pow(rho, k);
      if (want > 1e-12) CHECK(spectral_radius(p) == doctest::Approx(want).epsilon(1e-7));
    }
  }
}

TEST_CASE("leading_eigenpair basics and errors") {
  Matrix d31(2, 2);
  d31 << 3, 0, 0, 1;
  const EigenPair p = leading_eigenpair(d31);
  CHECK(p.value == doctest::Approx(3.0).epsilon(1e-12));
  CHECK(std::abs(p.vector[0]) == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(std::abs(p.vector[1]) <= 1e-10);

  Matrix swap(2, 2);
  swap << 0, 1, 1, 0;  // eigenvalues +1 and -1 tie at the top modulus
  CHECK_THROWS_AS((void)leading_eigenpair(swap), error);

  Matrix rot(2, 2);
  rot << 0, -1, 1, 0;  // +/- i
  CHECK_THROWS_AS((void)leading_eigenpair(rot), error);

  // repeated real dominant eigenvalue is fine (any eigenvector works)
  const EigenPair q = leading_eigenpair(2.5 * Matrix::Identity(3, 3));
  CHECK(q.value == doctest::Approx(2.5).epsilon(1e-12));
}

TEST_CASE("leading_eigenpair against power iteration, Perron sign") {
  std::mt19937_64 rng(23);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  for (int trial = 0; trial < 15; ++trial) {
    const int d = 2 + static_cast<int>(rng() % 5);
    Matrix m(d, d);
    for (int i = 0; i < d; ++i)
      for (int j = 0; j < d; ++j) m(i, j) = u(rng);
    const EigenPair p = leading_eigenpair(m);
    CHECK(p.value == doctest::Approx(power_iteration_rho(m)).epsilon(1e-7));
    CHECK(p.vector.minCoeff() >= -1e-12);  // Perron-Frobenius direction
    CHECK(p.vector.norm() == doctest::Approx(1.0).epsilon(1e-12));
    CHECK((m * p.vector - p.value * p.vector).norm() <= 1e-8 * operator_2norm(m));
  }
}

TEST_CASE("operator_2norm basics") {
  CHECK(operator_2norm(Matrix::Identity(3, 3)) == doctest::Approx(1.0).epsilon(1e-12));
  Matrix d(2, 2);
  d << 2, 0, 0, -5;
  CHECK(operator_2norm(d) == doctest::Approx(5.0).epsilon(1e-12));
  Matrix r1(2, 2);
  r1 << 0, 3, 0, 0;
  CHECK(operator_2norm(r1) == doctest::Approx(3.0).epsilon(1e-12));
}

TEST_CASE("operator_2norm against power iteration on the Gram matrix") {
  std::mt19937_64 rng(37);
  for (int trial = 0; trial < 10; ++trial) {
    const int d = 2 + static_cast<int>(rng() % 5);
    const Matrix m = random_matrix(rng, d);
    const double want = std::sqrt(power_iteration_rho(m.transpose() * m, 20000));
    CHECK(operator_2norm(m) == doctest::Approx(want).epsilon(1e-9));
  }
}
