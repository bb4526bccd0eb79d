#include "qwalk/numerics.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <sstream>

#include <Eigen/Eigenvalues>

#include "qwalk/errors.hpp"

namespace qwalk {

namespace numerics {

namespace {

void require_square(const ComplexMatrix& m, const char* what) {
  if (m.rows() != m.cols() || m.rows() == 0) {
    std::ostringstream msg;
    msg << what << ": expected a non-empty square matrix, got " << m.rows() << "x" << m.cols();
    throw Error(ErrorCode::Nonsquare, msg.str());
  }
}

void require_finite(const ComplexMatrix& m, const char* what) {
  if (!m.allFinite()) {
    throw Error(ErrorCode::InvalidParameter, std::string(what) + ": matrix has non-finite entries");
  }
}

}  // namespace

double max_abs(const ComplexMatrix& m) {
  return m.size() == 0 ? 0.0 : m.cwiseAbs().maxCoeff();
}

double hermiticity_residual(const ComplexMatrix& h) {
  return max_abs(h - h.adjoint());
}

double unitarity_residual(const ComplexMatrix& u) {
  const auto n = u.cols();
  return max_abs(u.adjoint() * u - ComplexMatrix::Identity(n, n));
}

double principal_phase(double angle) {
  double r = std::remainder(angle, 2.0 * kPi);  // [-pi, pi]
  if (r <= -kPi) r += 2.0 * kPi;
  return r;
}

double circular_distance(double a, double b) {
  return std::abs(std::remainder(a - b, 2.0 * kPi));
}

EigenSystem hermitian_eigendecompose(const ComplexMatrix& h) {
  require_square(h, "hermitian_eigendecompose");
  require_finite(h, "hermitian_eigendecompose");
  const double residual = hermiticity_residual(h);
  if (residual > kHermitianTol) {
    std::ostringstream msg;
    msg << "hermitian_eigendecompose: max|H - H^dagger| = " << residual;
    throw Error(ErrorCode::NotHermitian, msg.str());
  }
  Eigen::SelfAdjointEigenSolver<ComplexMatrix> solver(h);
  if (solver.info() != Eigen::Success) {
    throw Error(ErrorCode::Numerical, "hermitian_eigendecompose: eigensolver did not converge");
  }
  EigenSystem out;
  out.values = solver.eigenvalues().cast<Complex>();
  out.vectors = solver.eigenvectors();
  return out;
}

EigenSystem unitary_eigendecompose(const ComplexMatrix& u) {
  require_square(u, "unitary_eigendecompose");
  require_finite(u, "unitary_eigendecompose");
  const double residual = unitarity_residual(u);
  if (residual > kUnitaryTol) {
    std::ostringstream msg;
    msg << "unitary_eigendecompose: max|U^dagger U - I| = " << residual;
    throw Error(ErrorCode::NotUnitary, msg.str());
  }
  Eigen::ComplexSchur<ComplexMatrix> schur(u);
  if (schur.info() != Eigen::Success) {
    throw Error(ErrorCode::Numerical, "unitary_eigendecompose: Schur iteration did not converge");
  }
  const ComplexMatrix& t = schur.matrixT();
  const ComplexMatrix& q = schur.matrixU();
  const auto n = u.rows();

  std::vector<double> phase(static_cast<std::size_t>(n));
  for (Eigen::Index i = 0; i < n; ++i) phase[i] = principal_phase(std::arg(t(i, i)));
  std::vector<Eigen::Index> order(static_cast<std::size_t>(n));
  std::iota(order.begin(), order.end(), Eigen::Index{0});
  std::stable_sort(order.begin(), order.end(),
                   [&](Eigen::Index a, Eigen::Index b) { return phase[a] < phase[b]; });

  EigenSystem out;
  out.values.resize(n);
  out.vectors.resize(n, n);
  for (Eigen::Index k = 0; k < n; ++k) {
    out.values(k) = t(order[k], order[k]);
    out.vectors.col(k) = q.col(order[k]);
  }
  return out;
}

std::vector<double> eigenphases(const EigenSystem& system) {
  std::vector<double> out(static_cast<std::size_t>(system.size()));
  for (Eigen::Index i = 0; i < system.size(); ++i) out[i] = principal_phase(std::arg(system.values(i)));
  return out;
}

HermitianPropagator::HermitianPropagator(const ComplexMatrix& h)
    : system_(hermitian_eigendecompose(h)) {}

ComplexVector HermitianPropagator::evolve(const ComplexVector& initial, double t) const {
  if (initial.size() != system_.size()) {
    std::ostringstream msg;
    msg << "evolve: state has dimension " << initial.size() << ", Hamiltonian " << system_.size();
    throw Error(ErrorCode::DimensionMismatch, msg.str());
  }
  if (t == 0.0) return initial;
  ComplexVector coeffs = system_.vectors.adjoint() * initial;
  for (Eigen::Index i = 0; i < coeffs.size(); ++i) {
    coeffs(i) *= std::exp(Complex(0.0, -system_.values(i).real() * t));
  }
  return system_.vectors * coeffs;
}

ComplexMatrix HermitianPropagator::operator_at(double t) const {
  const auto n = system_.size();
  if (t == 0.0) return ComplexMatrix::Identity(n, n);
  ComplexVector phases(n);
  for (Eigen::Index i = 0; i < n; ++i) phases(i) = std::exp(Complex(0.0, -system_.values(i).real() * t));
  return system_.vectors * phases.asDiagonal() * system_.vectors.adjoint();
}

ComplexMatrix evolution_operator(const ComplexMatrix& h, double t) {
  return HermitianPropagator(h).operator_at(t);
}

}  // namespace numerics
}  // namespace qwalk
