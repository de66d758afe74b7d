#pragma once

#include <cmath>
#include <numbers>
#include <random>

#include "edur/complex_matrix.hpp"
#include "edur/qubit_state.hpp"

namespace edur::testing {

inline constexpr double kPi = std::numbers::pi;

// Hand-rolled generators for property tests; fixed seeds keep runs stable.
class Generator {
 public:
  explicit Generator(std::uint64_t seed) : engine_(seed) {}

  double uniform(double lo, double hi) { return std::uniform_real_distribution<double>(lo, hi)(engine_); }
  double normal() { return std::normal_distribution<double>(0.0, 1.0)(engine_); }

  ComplexMatrix2 hermitian(double scale = 1.0) {
    const double a = scale * normal();
    const double d = scale * normal();
    const Complex b{scale * normal(), scale * normal()};
    return {a, b, std::conj(b), d};
  }

  ComplexMatrix2 general(double scale = 1.0) {
    return {Complex{normal(), normal()} * scale, Complex{normal(), normal()} * scale,
            Complex{normal(), normal()} * scale, Complex{normal(), normal()} * scale};
  }

  // Haar-ish random SU(2) element from a random axis and angle.
  ComplexMatrix2 unitary() {
    return rotation({normal(), normal(), normal()}, uniform(0.0, 2.0 * kPi));
  }

  BlochVector bloch(double max_length = 1.0) {
    BlochVector v{normal(), normal(), normal()};
    const double len = length(v);
    const double r = max_length * std::cbrt(uniform(0.0, 1.0));
    return {r * v[0] / len, r * v[1] / len, r * v[2] / len};
  }

  QubitState state() { return QubitState::from_bloch(bloch()); }

 private:
  std::mt19937_64 engine_;
};

}  // namespace edur::testing
