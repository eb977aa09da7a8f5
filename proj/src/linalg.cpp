#include "dwellcert/linalg.hpp"

#include <cmath>
#include <complex>

#include <Eigen/Eigenvalues>
#include <unsupported/Eigen/MatrixFunctions>

namespace dwellcert {

namespace {

void require_square(const Matrix& m, const char* who) {
  if (m.rows() != m.cols() || m.rows() == 0)
    fail(errc::non_square, std::string(who) + ": matrix is " + std::to_string(m.rows()) + "x" +
                               std::to_string(m.cols()));
}

void require_finite(const Matrix& m, const char* who) {
  if (!m.allFinite()) fail(errc::nonfinite_entry, std::string(who) + ": non-finite entries");
}

}  // namespace

bool all_finite(const Matrix& m) { return m.allFinite(); }

Matrix mat_exp(const Matrix& a, double t) {
  require_square(a, "mat_exp");
  require_finite(a, "mat_exp");
  if (!std::isfinite(t)) fail(errc::nonfinite_entry, "mat_exp: non-finite time");
  return Matrix((t * a).exp());
}

double spectral_radius(const Matrix& m) {
  require_square(m, "spectral_radius");
  require_finite(m, "spectral_radius");
  if (m.rows() == 1) return std::abs(m(0, 0));
  Eigen::EigenSolver<Matrix> es(m, /*computeEigenvectors=*/false);
  return es.eigenvalues().cwiseAbs().maxCoeff();
}

EigenPair leading_eigenpair(const Matrix& m) {
  require_square(m, "leading_eigenpair");
  require_finite(m, "leading_eigenpair");
  const auto n = m.rows();
  if (n == 1) {
    EigenPair p;
    p.value = m(0, 0);
    p.vector = Vector::Ones(1);
    return p;
  }
  Eigen::EigenSolver<Matrix> es(m, /*computeEigenvectors=*/true);
  const auto& vals = es.eigenvalues();
  const double rho = vals.cwiseAbs().maxCoeff();
  const double tol = 1e-9 * std::max(rho, 1e-300);

  // Everything at the top modulus must be one real value; a complex pair or a
  // +/- tie is the unsupported general case.
  int pick = -1;
  bool pos = false, neg = false;
  for (int i = 0; i < vals.size(); ++i) {
    if (std::abs(vals[i]) < rho - tol) continue;
    if (std::abs(vals[i].imag()) > tol)
      fail(errc::complex_leading, "maximal-modulus eigenvalue is not real");
    (vals[i].real() >= 0 ? pos : neg) = true;
    if (pick < 0) pick = i;
  }
  if (pos && neg)
    fail(errc::complex_leading, "real eigenvalues of opposite sign tie at the maximal modulus");

  EigenPair p;
  p.value = vals[pick].real();
  Vector v = es.eigenvectors().col(pick).real();
  if (v.norm() < 1e-12) v = es.eigenvectors().col(pick).imag();
  v.normalize();

  // Inverse-iteration polish if the direct vector is off (slightly perturbed
  // shift keeps the solve well-posed on the singular pencil).
  const double mnorm = operator_2norm(m);
  auto residual = [&](const Vector& x) { return (m * x - p.value * x).norm(); };
  if (residual(v) > 1e-10 * std::max(mnorm, 1e-300)) {
    const double off = 1e-13 * std::max(mnorm, 1.0);
    Eigen::PartialPivLU<Matrix> lu(m - (p.value + off) * Matrix::Identity(n, n));
    for (int it = 0; it < 8 && residual(v) > 1e-12 * std::max(mnorm, 1e-300); ++it) {
      Vector w = lu.solve(v);
      if (!w.allFinite() || w.norm() == 0.0) break;
      v = w.normalized();
    }
  }

  int imax = 0;
  v.cwiseAbs().maxCoeff(&imax);
  if (v[imax] < 0) v = -v;
  if ((m.array() >= 0.0).all()) v = v.cwiseMax(0.0).normalized();  // Perron direction
  p.vector = v;
  return p;
}

double operator_2norm(const Matrix& m) {
  require_finite(m, "operator_2norm");
  if (m.size() == 0) return 0.0;
  Eigen::JacobiSVD<Matrix> svd(m);
  return svd.singularValues()(0);
}

}  // namespace dwellcert
