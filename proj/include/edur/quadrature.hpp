#pragma once

#include <cstddef>
#include <vector>

namespace edur {

struct QuadratureRule {
  std::vector<double> nodes;
  std::vector<double> weights;
};

// n-point Gauss-Hermite rule for the weight exp(-x^2) on the real line.
// Rules are cached; safe to call concurrently.
const QuadratureRule& gauss_hermite(std::size_t n);

// n-point Gauss-Legendre rule on [-1, 1]. Cached like gauss_hermite.
const QuadratureRule& gauss_legendre(std::size_t n);

}  // namespace edur
