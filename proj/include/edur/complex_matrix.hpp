#pragma once

#include <array>
#include <complex>
#include <cstddef>
#include <iosfwd>

namespace edur {

using Complex = std::complex<double>;

// Column vector in C^2.
using Vector2 = std::array<Complex, 2>;

// Absolute max-entry tolerance under which a matrix counts as Hermitian.
inline constexpr double kHermitianTolerance = 1e-12;

// Dense 2x2 complex matrix, row-major.
class ComplexMatrix2 {
 public:
  constexpr ComplexMatrix2() = default;
  constexpr ComplexMatrix2(Complex a00, Complex a01, Complex a10, Complex a11)
      : m_{a00, a01, a10, a11} {}

  static constexpr ComplexMatrix2 identity() { return {1.0, 0.0, 0.0, 1.0}; }
  static constexpr ComplexMatrix2 zero() { return {}; }
  static ComplexMatrix2 diagonal(double d0, double d1) { return {d0, 0.0, 0.0, d1}; }

  constexpr Complex operator()(std::size_t row, std::size_t col) const { return m_[2 * row + col]; }
  constexpr Complex& operator()(std::size_t row, std::size_t col) { return m_[2 * row + col]; }

  ComplexMatrix2 adjoint() const;
  Complex trace() const { return m_[0] + m_[3]; }
  Complex determinant() const { return m_[0] * m_[3] - m_[1] * m_[2]; }

  // Max-entry (Chebyshev) norm.
  double max_abs() const;
  double frobenius_norm_sq() const;
  bool is_finite() const;
  bool is_hermitian(double tol = kHermitianTolerance) const;

  // (M + M†)/2; removes rounding asymmetry from analytically Hermitian products.
  ComplexMatrix2 hermitian_part() const;

  ComplexMatrix2& operator+=(const ComplexMatrix2& rhs);
  ComplexMatrix2& operator-=(const ComplexMatrix2& rhs);
  ComplexMatrix2& operator*=(Complex s);

  friend ComplexMatrix2 operator+(ComplexMatrix2 lhs, const ComplexMatrix2& rhs) { return lhs += rhs; }
  friend ComplexMatrix2 operator-(ComplexMatrix2 lhs, const ComplexMatrix2& rhs) { return lhs -= rhs; }
  friend ComplexMatrix2 operator*(ComplexMatrix2 lhs, Complex s) { return lhs *= s; }
  friend ComplexMatrix2 operator*(Complex s, ComplexMatrix2 rhs) { return rhs *= s; }
  friend ComplexMatrix2 operator*(const ComplexMatrix2& lhs, const ComplexMatrix2& rhs);
  friend Vector2 operator*(const ComplexMatrix2& lhs, const Vector2& v);
  friend ComplexMatrix2 operator-(const ComplexMatrix2& m) { return m * Complex{-1.0}; }

 private:
  std::array<Complex, 4> m_{};
};

std::ostream& operator<<(std::ostream& os, const ComplexMatrix2& m);

double max_abs_diff(const ComplexMatrix2& a, const ComplexMatrix2& b);

// |u><v|
ComplexMatrix2 outer(const Vector2& u, const Vector2& v);
// <u|v>
Complex inner(const Vector2& u, const Vector2& v);
double norm(const Vector2& v);

ComplexMatrix2 commutator(const ComplexMatrix2& a, const ComplexMatrix2& b);
ComplexMatrix2 anticommutator(const ComplexMatrix2& a, const ComplexMatrix2& b);

enum class PauliAxis { identity, x, y, z };

ComplexMatrix2 pauli(PauliAxis axis);

// exp(-i angle sigma_x / 2); rotates Bloch vectors about x by `angle`.
ComplexMatrix2 rotation_about_x(double angle);
ComplexMatrix2 rotation_about_z(double angle);
// exp(-i angle (n.sigma) / 2) for unit axis n.
ComplexMatrix2 rotation(const std::array<double, 3>& axis, double angle);

struct HermitianEigen {
  std::array<double, 2> values;  // descending
  std::array<Vector2, 2> vectors;
};

// Closed-form eigendecomposition of a Hermitian 2x2 matrix. Degenerate
// spectra (eigenvalue gap below 1e-14) return the canonical basis.
// Throws PreconditionError for non-Hermitian input.
HermitianEigen hermitian_eig(const ComplexMatrix2& m);

// Principal square root of a PSD Hermitian matrix. Eigenvalues in
// [-1e-12, 0) are clamped to zero; anything more negative throws NotPsdError.
ComplexMatrix2 psd_sqrt(const ComplexMatrix2& m);

// Trace norm Tr|X| = Tr sqrt(X†X), the sum of singular values.
double trace_abs(const ComplexMatrix2& m);

}  // namespace edur
