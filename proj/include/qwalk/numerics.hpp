#pragma once

// Dense complex linear algebra used by the walk and CTQW modules.
// Problem sizes stay at desk scale (operators up to a few thousand rows),
// so everything is stored densely.

#include <complex>
#include <vector>

#include <Eigen/Dense>

namespace qwalk {

using Complex = std::complex<double>;
using ComplexVector = Eigen::VectorXcd;
using ComplexMatrix = Eigen::MatrixXcd;

namespace numerics {

inline constexpr double kPi = 3.141592653589793238462643383279502884;

/// Tolerance used to decide whether a matrix is Hermitian.
inline constexpr double kHermitianTol = 1e-12;
/// Tolerance used to decide whether a matrix is unitary.
inline constexpr double kUnitaryTol = 1e-10;
/// Two eigenphases closer than this (circularly) are degenerate.
inline constexpr double kDegeneracyTol = 1e-8;

/// Eigenvalues with matching eigenvector columns.
struct EigenSystem {
  ComplexVector values;
  ComplexMatrix vectors;

  Eigen::Index size() const { return values.size(); }
};

/// max |H - H^dagger| elementwise.
double hermiticity_residual(const ComplexMatrix& h);
/// max |U^dagger U - I| elementwise.
double unitarity_residual(const ComplexMatrix& u);
/// max |entry| of a matrix.
double max_abs(const ComplexMatrix& m);

/// Maps an angle to the principal branch (-pi, pi]; -pi itself maps to pi.
double principal_phase(double angle);

/// Shortest distance between two angles on the circle.
double circular_distance(double a, double b);

/// Eigendecomposition of a Hermitian matrix. Eigenvalues are real and
/// ascending, eigenvectors orthonormal.
/// Throws Error(Nonsquare) or Error(NotHermitian).
EigenSystem hermitian_eigendecompose(const ComplexMatrix& h);

/// Eigendecomposition of a unitary matrix via the complex Schur form, which
/// is diagonal for normal matrices, so the eigenvector columns come out
/// orthonormal even inside degenerate eigenspaces. Eigenvalues are ordered
/// by phase ascending in (-pi, pi], ties broken by Schur index.
/// Throws Error(Nonsquare) or Error(NotUnitary).
EigenSystem unitary_eigendecompose(const ComplexMatrix& u);

/// Phases of the eigenvalues, in (-pi, pi].
std::vector<double> eigenphases(const EigenSystem& system);

/// exp(-i H t) for Hermitian H, through the eigendecomposition.
ComplexMatrix evolution_operator(const ComplexMatrix& h, double t);

/// Propagator that diagonalizes once and evolves to many times.
class HermitianPropagator {
 public:
  explicit HermitianPropagator(const ComplexMatrix& h);

  /// exp(-i H t) applied to a vector.
  ComplexVector evolve(const ComplexVector& initial, double t) const;
  ComplexMatrix operator_at(double t) const;
  const EigenSystem& eigensystem() const { return system_; }

 private:
  EigenSystem system_;
};

}  // namespace numerics
}  // namespace qwalk
