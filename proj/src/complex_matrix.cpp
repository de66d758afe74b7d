#include "edur/complex_matrix.hpp"

#include <algorithm>
#include <cmath>
#include <ostream>
#include <sstream>

#include "edur/errors.hpp"

namespace edur {

namespace {

constexpr double kDegenerateGap = 1e-14;
constexpr double kPsdTolerance = 1e-12;

}  // namespace

ComplexMatrix2 ComplexMatrix2::adjoint() const {
  return {std::conj(m_[0]), std::conj(m_[2]), std::conj(m_[1]), std::conj(m_[3])};
}

double ComplexMatrix2::max_abs() const {
  double best = 0.0;
  for (const auto& z : m_) best = std::max(best, std::abs(z));
  return best;
}

double ComplexMatrix2::frobenius_norm_sq() const {
  double sum = 0.0;
  for (const auto& z : m_) sum += std::norm(z);
  return sum;
}

bool ComplexMatrix2::is_finite() const {
  return std::all_of(m_.begin(), m_.end(),
                     [](const Complex& z) { return std::isfinite(z.real()) && std::isfinite(z.imag()); });
}

bool ComplexMatrix2::is_hermitian(double tol) const {
  return is_finite() && max_abs_diff(*this, adjoint()) <= tol;
}

ComplexMatrix2 ComplexMatrix2::hermitian_part() const { return (*this + adjoint()) * Complex{0.5}; }

ComplexMatrix2& ComplexMatrix2::operator+=(const ComplexMatrix2& rhs) {
  for (std::size_t i = 0; i < 4; ++i) m_[i] += rhs.m_[i];
  return *this;
}

ComplexMatrix2& ComplexMatrix2::operator-=(const ComplexMatrix2& rhs) {
  for (std::size_t i = 0; i < 4; ++i) m_[i] -= rhs.m_[i];
  return *this;
}

ComplexMatrix2& ComplexMatrix2::operator*=(Complex s) {
  for (auto& z : m_) z *= s;
  return *this;
}

ComplexMatrix2 operator*(const ComplexMatrix2& a, const ComplexMatrix2& b) {
  return {a(0, 0) * b(0, 0) + a(0, 1) * b(1, 0), a(0, 0) * b(0, 1) + a(0, 1) * b(1, 1),
          a(1, 0) * b(0, 0) + a(1, 1) * b(1, 0), a(1, 0) * b(0, 1) + a(1, 1) * b(1, 1)};
}

Vector2 operator*(const ComplexMatrix2& a, const Vector2& v) {
  return {a(0, 0) * v[0] + a(0, 1) * v[1], a(1, 0) * v[0] + a(1, 1) * v[1]};
}

std::ostream& operator<<(std::ostream& os, const ComplexMatrix2& m) {
  return os << "[[" << m(0, 0) << ", " << m(0, 1) << "], [" << m(1, 0) << ", " << m(1, 1) << "]]";
}

double max_abs_diff(const ComplexMatrix2& a, const ComplexMatrix2& b) { return (a - b).max_abs(); }

ComplexMatrix2 outer(const Vector2& u, const Vector2& v) {
  return {u[0] * std::conj(v[0]), u[0] * std::conj(v[1]), u[1] * std::conj(v[0]), u[1] * std::conj(v[1])};
}

Complex inner(const Vector2& u, const Vector2& v) { return std::conj(u[0]) * v[0] + std::conj(u[1]) * v[1]; }

double norm(const Vector2& v) { return std::sqrt(std::norm(v[0]) + std::norm(v[1])); }

ComplexMatrix2 commutator(const ComplexMatrix2& a, const ComplexMatrix2& b) { return a * b - b * a; }

ComplexMatrix2 anticommutator(const ComplexMatrix2& a, const ComplexMatrix2& b) { return a * b + b * a; }

ComplexMatrix2 pauli(PauliAxis axis) {
  using namespace std::complex_literals;
  switch (axis) {
    case PauliAxis::identity:
      return ComplexMatrix2::identity();
    case PauliAxis::x:
      return {0.0, 1.0, 1.0, 0.0};
    case PauliAxis::y:
      return {0.0, -1i, 1i, 0.0};
    case PauliAxis::z:
      return {1.0, 0.0, 0.0, -1.0};
  }
  return ComplexMatrix2::identity();
}

ComplexMatrix2 rotation(const std::array<double, 3>& axis, double angle) {
  const double len = std::hypot(axis[0], axis[1], axis[2]);
  if (!(len > 0.0) || !std::isfinite(angle)) {
    throw PreconditionError("rotation: axis must be non-zero and angle finite");
  }
  const double c = std::cos(angle / 2.0);
  const double s = std::sin(angle / 2.0);
  const ComplexMatrix2 generator = pauli(PauliAxis::x) * Complex{axis[0] / len} +
                                   pauli(PauliAxis::y) * Complex{axis[1] / len} +
                                   pauli(PauliAxis::z) * Complex{axis[2] / len};
  return ComplexMatrix2::identity() * Complex{c} + generator * Complex{0.0, -s};
}

ComplexMatrix2 rotation_about_x(double angle) { return rotation({1.0, 0.0, 0.0}, angle); }

ComplexMatrix2 rotation_about_z(double angle) { return rotation({0.0, 0.0, 1.0}, angle); }

HermitianEigen hermitian_eig(const ComplexMatrix2& m) {
  if (!m.is_hermitian()) {
    std::ostringstream msg;
    msg << "hermitian_eig: matrix is not Hermitian: " << m;
    throw PreconditionError(msg.str());
  }
  const double a = m(0, 0).real();
  const double d = m(1, 1).real();
  // Average the off-diagonal pair so tiny asymmetries do not leak in.
  const Complex b = 0.5 * (m(0, 1) + std::conj(m(1, 0)));

  const double mean = 0.5 * (a + d);
  const double half_diff = 0.5 * (a - d);
  const double radius = std::hypot(half_diff, std::abs(b));

  HermitianEigen out;
  out.values = {mean + radius, mean - radius};
  if (2.0 * radius < kDegenerateGap) {
    out.vectors = {Vector2{1.0, 0.0}, Vector2{0.0, 1.0}};
    return out;
  }
  // Pick the better-conditioned null vector of (m - lambda_max).
  Vector2 top = half_diff >= 0.0 ? Vector2{radius + half_diff, std::conj(b)} : Vector2{b, radius - half_diff};
  const double len = norm(top);
  top = {top[0] / len, top[1] / len};
  out.vectors = {top, Vector2{-std::conj(top[1]), std::conj(top[0])}};
  return out;
}

ComplexMatrix2 psd_sqrt(const ComplexMatrix2& m) {
  const HermitianEigen eig = hermitian_eig(m);
  ComplexMatrix2 root;
  for (std::size_t i = 0; i < 2; ++i) {
    double lambda = eig.values[i];
    if (lambda < -kPsdTolerance) {
      std::ostringstream msg;
      msg << "psd_sqrt: eigenvalue " << lambda << " is negative";
      throw NotPsdError(msg.str());
    }
    lambda = std::max(lambda, 0.0);
    root += outer(eig.vectors[i], eig.vectors[i]) * Complex{std::sqrt(lambda)};
  }
  return root.hermitian_part();
}

double trace_abs(const ComplexMatrix2& m) {
  // (s1 + s2)^2 = s1^2 + s2^2 + 2 s1 s2 = ||m||_F^2 + 2 |det m|
  const double value = m.frobenius_norm_sq() + 2.0 * std::abs(m.determinant());
  return std::sqrt(std::max(value, 0.0));
}

}  // namespace edur
