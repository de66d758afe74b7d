#include "edur/qubit_state.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <sstream>

#include "edur/errors.hpp"

namespace edur {

namespace {

constexpr double kStateTolerance = 1e-12;

double reduce_angle(double theta) {
  if (!std::isfinite(theta)) throw PreconditionError("angle must be finite");
  constexpr double two_pi = 2.0 * std::numbers::pi;
  double r = std::fmod(theta, two_pi);
  if (r < 0.0) r += two_pi;
  if (r >= two_pi) r = 0.0;
  return r;
}

}  // namespace

double length(const BlochVector& r) { return std::hypot(r[0], r[1], r[2]); }

Vector2 bloch_ket(double vartheta, double phi) {
  return {Complex{std::cos(vartheta / 2.0)}, std::polar(1.0, phi) * std::sin(vartheta / 2.0)};
}

QubitState::QubitState(const ComplexMatrix2& rho) : rho_(rho) {
  if (!rho.is_hermitian(kStateTolerance)) {
    std::ostringstream msg;
    msg << "QubitState: density matrix is not Hermitian: " << rho;
    throw PreconditionError(msg.str());
  }
  if (std::abs(rho.trace() - 1.0) > kStateTolerance) {
    throw PreconditionError("QubitState: trace differs from 1");
  }
  const auto eig = hermitian_eig(rho);
  if (eig.values[1] < -kStateTolerance) {
    throw PreconditionError("QubitState: density matrix has a negative eigenvalue");
  }
  rho_ = rho.hermitian_part();
}

QubitState QubitState::from_bloch(const BlochVector& r) {
  if (length(r) > 1.0 + kStateTolerance) {
    throw RangeError("QubitState: Bloch vector longer than 1");
  }
  ComplexMatrix2 rho = ComplexMatrix2::identity() + pauli(PauliAxis::x) * Complex{r[0]} +
                       pauli(PauliAxis::y) * Complex{r[1]} + pauli(PauliAxis::z) * Complex{r[2]};
  return QubitState(rho * Complex{0.5});
}

QubitState QubitState::pure(const Vector2& ket) {
  const double n = norm(ket);
  if (!(n > 0.0)) throw PreconditionError("QubitState::pure: zero vector");
  const Vector2 unit{ket[0] / n, ket[1] / n};
  return QubitState(outer(unit, unit));
}

BlochVector QubitState::bloch() const {
  return {expectation(pauli(PauliAxis::x), *this), expectation(pauli(PauliAxis::y), *this),
          expectation(pauli(PauliAxis::z), *this)};
}

double QubitState::purity() const { return (rho_ * rho_).trace().real(); }

QubitState QubitState::conjugated(const ComplexMatrix2& unitary) const {
  return QubitState((unitary * rho_ * unitary.adjoint()).hermitian_part());
}

QubitState rho_x(double alpha) {
  if (!(alpha >= 0.0 && alpha <= 1.0)) {
    std::ostringstream msg;
    msg << "rho_x: mixture " << alpha << " outside [0, 1]";
    throw RangeError(msg.str());
  }
  return QubitState::from_bloch({alpha, 0.0, 0.0});
}

Complex trace_with(const ComplexMatrix2& op, const QubitState& state) { return (op * state.rho()).trace(); }

double expectation(const ComplexMatrix2& obs, const QubitState& state) {
  if (!obs.is_hermitian()) throw PreconditionError("expectation: observable is not Hermitian");
  return trace_with(obs, state).real();
}

AxisObservable::AxisObservable(double theta)
    : theta_(reduce_angle(theta)),
      matrix_(pauli(PauliAxis::z) * Complex{std::cos(theta_)} + pauli(PauliAxis::y) * Complex{std::sin(theta_)}) {}

BlochVector AxisObservable::axis() const { return {0.0, std::sin(theta_), std::cos(theta_)}; }

Vector2 AxisObservable::eigenket(int sign) const {
  if (sign == 1) return bloch_ket(theta_, std::numbers::pi / 2.0);
  if (sign == -1) return bloch_ket(std::numbers::pi - theta_, 3.0 * std::numbers::pi / 2.0);
  throw PreconditionError("AxisObservable::eigenket: sign must be +1 or -1");
}

ComplexMatrix2 AxisObservable::projector(int sign) const {
  const Vector2 v = eigenket(sign);
  return outer(v, v);
}

ComplexMatrix2 spin_observable(const BlochVector& axis) {
  const double len = length(axis);
  if (std::abs(len - 1.0) > kStateTolerance) throw PreconditionError("spin_observable: axis is not a unit vector");
  return pauli(PauliAxis::x) * Complex{axis[0]} + pauli(PauliAxis::y) * Complex{axis[1]} +
         pauli(PauliAxis::z) * Complex{axis[2]};
}

double variance(const AxisObservable& obs, const QubitState& state) {
  const double mean = expectation(obs.matrix(), state);
  return std::clamp(1.0 - mean * mean, 0.0, 1.0);
}

double standard_deviation(const AxisObservable& obs, const QubitState& state) {
  return std::sqrt(variance(obs, state));
}

double fidelity(const QubitState& rho, const QubitState& sigma) {
  const ComplexMatrix2 root = psd_sqrt(rho.rho());
  const ComplexMatrix2 inner_product = (root * sigma.rho() * root).hermitian_part();
  const auto eig = hermitian_eig(inner_product);
  return std::sqrt(std::max(eig.values[0], 0.0)) + std::sqrt(std::max(eig.values[1], 0.0));
}

}  // namespace edur
