#pragma once

#include <array>

#include "edur/complex_matrix.hpp"

namespace edur {

using BlochVector = std::array<double, 3>;

double length(const BlochVector& r);

// |psi(vartheta, phi)> = (cos(vartheta/2), e^{i phi} sin(vartheta/2))^T,
// the pure state with Bloch vector (sin v cos p, sin v sin p, cos v).
Vector2 bloch_ket(double vartheta, double phi);

// Validated qubit density matrix. Construction enforces Hermiticity, unit
// trace and positivity (all within 1e-12); later operations rely on it.
class QubitState {
 public:
  explicit QubitState(const ComplexMatrix2& rho);

  static QubitState from_bloch(const BlochVector& r);
  static QubitState pure(const Vector2& ket);

  const ComplexMatrix2& rho() const { return rho_; }
  BlochVector bloch() const;
  // Bloch-vector length |r|; the mixture parameter for rho_x(alpha).
  double bloch_length() const { return length(bloch()); }
  double purity() const;

  // U rho U†
  QubitState conjugated(const ComplexMatrix2& unitary) const;

 private:
  ComplexMatrix2 rho_;
};

// rho_x(alpha) = (1 + alpha sigma_x)/2, alpha in [0, 1].
QubitState rho_x(double alpha);

// Real part of Tr(obs rho) for Hermitian obs. Throws PreconditionError
// otherwise.
double expectation(const ComplexMatrix2& obs, const QubitState& state);

// Tr(op rho) for an arbitrary operator.
Complex trace_with(const ComplexMatrix2& op, const QubitState& state);

// Binary spin observable cos(theta) sigma_z + sin(theta) sigma_y in the z-y
// plane. Theta is reduced to [0, 2 pi).
class AxisObservable {
 public:
  explicit AxisObservable(double theta);

  double theta() const { return theta_; }
  const ComplexMatrix2& matrix() const { return matrix_; }
  BlochVector axis() const;

  // Eigenvector for eigenvalue `sign` (+1 or -1).
  Vector2 eigenket(int sign) const;
  ComplexMatrix2 projector(int sign) const;

 private:
  double theta_;
  ComplexMatrix2 matrix_;
};

// n.sigma for an arbitrary unit axis; not part of the sweep API, where every
// observable stays in the z-y plane.
ComplexMatrix2 spin_observable(const BlochVector& axis);

// <obs^2> - <obs>^2 = 1 - <obs>^2 for a binary observable.
double variance(const AxisObservable& obs, const QubitState& state);
double standard_deviation(const AxisObservable& obs, const QubitState& state);

// Tr sqrt(sqrt(rho) sigma sqrt(rho)).
double fidelity(const QubitState& rho, const QubitState& sigma);

}  // namespace edur
