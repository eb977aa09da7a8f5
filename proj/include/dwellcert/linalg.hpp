#pragma once

#include <Eigen/Dense>

#include "dwellcert/errors.hpp"

namespace dwellcert {

using Matrix = Eigen::MatrixXd;
using Vector = Eigen::VectorXd;

/// Real eigenvalue of maximal modulus together with a unit eigenvector.
struct EigenPair {
  double value = 0.0;
  Vector vector;
};

bool all_finite(const Matrix& m);

/// e^{tA} for square A (scaling-and-squaring with a fixed-order rational core).
Matrix mat_exp(const Matrix& a, double t);

/// Maximum modulus of the eigenvalues.
double spectral_radius(const Matrix& m);

/// The real, dominant eigenpair. Throws complex_leading when the eigenvalue of
/// maximal modulus is not real within 1e-9 relative, or when two real
/// eigenvalues of opposite sign tie for the maximal modulus. A repeated real
/// dominant eigenvalue is accepted (any eigenvector of the eigenspace is
/// returned). If all entries of m are nonnegative the returned vector is
/// componentwise nonnegative.
EigenPair leading_eigenpair(const Matrix& m);

/// Largest singular value.
double operator_2norm(const Matrix& m);

}  // namespace dwellcert
