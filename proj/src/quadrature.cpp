#include "edur/quadrature.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <memory>
#include <mutex>
#include <numbers>

#include "edur/errors.hpp"

namespace edur {

namespace {

constexpr int kMaxNewtonIterations = 100;
constexpr double kNewtonTolerance = 3e-14;
constexpr double kRescaleLimit = 1e150;

// Newton iteration on orthonormal Hermite functions, which stay bounded for
// large n where the plain polynomials overflow.
QuadratureRule build_hermite(std::size_t n) {
  const double pim4 = std::pow(std::numbers::pi, -0.25);
  QuadratureRule rule{std::vector<double>(n), std::vector<double>(n)};
  const std::size_t half = (n + 1) / 2;
  const double nd = static_cast<double>(n);
  double z = 0.0;
  for (std::size_t i = 0; i < half; ++i) {
    if (i == 0) {
      z = std::sqrt(2.0 * nd + 1.0) - 1.85575 * std::pow(2.0 * nd + 1.0, -0.16667);
    } else {
      // Step by the local zero spacing pi / sqrt(2n + 1 - x^2), evaluated at
      // the midpoint of the step.
      const double prev = rule.nodes[i - 1];
      const auto spacing = [&](double x) {
        return std::numbers::pi / std::sqrt(std::max(2.0 * nd + 1.0 - x * x, 1.0));
      };
      z = prev - spacing(prev - 0.5 * spacing(prev));
    }
    double derivative = 0.0;
    bool rescaled = false;
    double last_step = INFINITY;
    int iter = 0;
    for (; iter < kMaxNewtonIterations; ++iter) {
      double p1 = pim4;
      double p2 = 0.0;
      rescaled = false;
      for (std::size_t j = 1; j <= n; ++j) {
        const double jd = static_cast<double>(j);
        const double p3 = p2;
        p2 = p1;
        p1 = z * std::sqrt(2.0 / jd) * p2 - std::sqrt((jd - 1.0) / jd) * p3;
        // Outer nodes of large rules: the polynomials outgrow the double
        // range. Only their ratio drives Newton, and such nodes carry
        // weights far below the double range anyway.
        if (std::abs(p1) > kRescaleLimit) {
          p1 /= kRescaleLimit;
          p2 /= kRescaleLimit;
          rescaled = true;
        }
      }
      derivative = std::sqrt(2.0 * nd) * p2;
      const double previous = z;
      z = previous - p1 / derivative;
      const double step = std::abs(z - previous);
      if (step <= kNewtonTolerance * std::max(1.0, std::abs(z))) break;
      // Rounding floor of the recurrence: the step no longer shrinks.
      if (step < 1e-10 * std::max(1.0, std::abs(z)) && step >= last_step) break;
      last_step = step;
    }
    if (iter == kMaxNewtonIterations) throw AccuracyError("gauss_hermite: Newton iteration did not converge");
    if (i > 0 && !(z < rule.nodes[i - 1])) throw AccuracyError("gauss_hermite: root search lost a node");
    rule.nodes[i] = z;
    rule.nodes[n - 1 - i] = -z;
    rule.weights[i] = rescaled ? 0.0 : 2.0 / (derivative * derivative);
    rule.weights[n - 1 - i] = rule.weights[i];
  }
  // Ascending order, like the Legendre rule; weights are symmetric.
  std::reverse(rule.nodes.begin(), rule.nodes.end());
  return rule;
}

QuadratureRule build_legendre(std::size_t n) {
  QuadratureRule rule{std::vector<double>(n), std::vector<double>(n)};
  const std::size_t half = (n + 1) / 2;
  const double nd = static_cast<double>(n);
  for (std::size_t i = 0; i < half; ++i) {
    double z = std::cos(std::numbers::pi * (static_cast<double>(i) + 0.75) / (nd + 0.5));
    double derivative = 0.0;
    int iter = 0;
    for (; iter < kMaxNewtonIterations; ++iter) {
      double p1 = 1.0;
      double p2 = 0.0;
      for (std::size_t j = 1; j <= n; ++j) {
        const double jd = static_cast<double>(j);
        const double p3 = p2;
        p2 = p1;
        p1 = ((2.0 * jd - 1.0) * z * p2 - (jd - 1.0) * p3) / jd;
      }
      derivative = nd * (z * p1 - p2) / (z * z - 1.0);
      const double previous = z;
      z = previous - p1 / derivative;
      if (std::abs(z - previous) <= kNewtonTolerance) break;
    }
    if (iter == kMaxNewtonIterations) throw AccuracyError("gauss_legendre: Newton iteration did not converge");
    rule.nodes[i] = -z;
    rule.nodes[n - 1 - i] = z;
    rule.weights[i] = 2.0 / ((1.0 - z * z) * derivative * derivative);
    rule.weights[n - 1 - i] = rule.weights[i];
  }
  return rule;
}

template <QuadratureRule (*Build)(std::size_t)>
const QuadratureRule& cached(std::size_t n) {
  static std::mutex mutex;
  static std::map<std::size_t, std::unique_ptr<QuadratureRule>> cache;
  if (n == 0) throw PreconditionError("quadrature: need at least one node");
  std::lock_guard lock(mutex);
  auto& slot = cache[n];
  if (!slot) slot = std::make_unique<QuadratureRule>(Build(n));
  return *slot;
}

}  // namespace

const QuadratureRule& gauss_hermite(std::size_t n) { return cached<build_hermite>(n); }

const QuadratureRule& gauss_legendre(std::size_t n) { return cached<build_legendre>(n); }

}  // namespace edur
