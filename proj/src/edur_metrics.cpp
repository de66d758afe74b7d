#include "edur/edur_metrics.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <sstream>

#include "edur/errors.hpp"

namespace edur {

namespace {

constexpr double kPi = std::numbers::pi;

double clamp_square(double value) {
  if (std::abs(value) <= kSquareZeroTolerance) return 0.0;
  return value < 0.0 && value > -kSquareClampTolerance ? 0.0 : value;
}

double safe_sqrt(double value) { return std::sqrt(std::max(value, 0.0)); }

// <(O - X)^2> + <O^(2) - O^2>
double moment_form(const ComplexMatrix2& output, const ComplexMatrix2& output_sq, const ComplexMatrix2& target,
                   const QubitState& state) {
  const ComplexMatrix2 diff = output - target;
  return trace_with(diff * diff, state).real() + trace_with(output_sq - output * output, state).real();
}

double binary_form(const ComplexMatrix2& output, const ComplexMatrix2& target, const QubitState& state) {
  return 2.0 - 2.0 * trace_with(target * output, state).real();
}

void check_agreement(const char* what, double general, double binary) {
  if (std::abs(general - binary) > kRouteAgreementTolerance) {
    std::ostringstream msg;
    msg.precision(17);
    msg << what << ": general form " << general << " disagrees with binary form " << binary;
    throw ConsistencyError(msg.str());
  }
}

}  // namespace

EdurPoint make_point(double error_sq, double disturbance_sq, double theta_oa, double theta_b, double alpha) {
  EdurPoint p;
  p.error_sq = clamp_square(error_sq);
  p.disturbance_sq = clamp_square(disturbance_sq);
  p.error = safe_sqrt(p.error_sq);
  p.disturbance = safe_sqrt(p.disturbance_sq);
  p.theta_oa = theta_oa;
  p.theta_b = theta_b;
  p.alpha = alpha;
  return p;
}

EdurPoint error_disturbance(const MeasurementFamily& app, const AxisObservable& a, const AxisObservable& b,
                            const QubitState& state) {
  const ComplexMatrix2 oa1 = output_operator_a(app, 1);
  const ComplexMatrix2 oa2 = output_operator_a(app, 2);
  const ComplexMatrix2 ob1 = output_operator_b(app, b, 1);
  const ComplexMatrix2 ob2 = output_operator_b(app, b, 2);

  const double error_sq = binary_form(oa1, a.matrix(), state);
  const double disturbance_sq = binary_form(ob1, b.matrix(), state);
  check_agreement("error", moment_form(oa1, oa2, a.matrix(), state), error_sq);
  check_agreement("disturbance", moment_form(ob1, ob2, b.matrix(), state), disturbance_sq);

  return make_point(error_sq, disturbance_sq, app.meter_theta().value_or(std::numeric_limits<double>::quiet_NaN()),
                    b.theta(), state.bloch_length());
}

double error_closed_form(double theta_oa) {
  if (!(theta_oa >= 0.0 && theta_oa <= kPi)) throw RangeError("error_closed_form: theta_oa outside [0, pi]");
  return 2.0 * std::sin(theta_oa / 2.0);
}

DisturbanceRange disturbance_bounds_closed_form(double theta_oa, double theta_b) {
  const double half = (theta_oa - theta_b) / 2.0;
  const double s = 2.0 * std::abs(std::sin(half));
  const double c = 2.0 * std::abs(std::cos(half));
  return {std::min(s, c), std::max(s, c)};
}

std::vector<double> polar_grid(double step) {
  if (!(step > 0.0) || !std::isfinite(step)) throw PreconditionError("grid step must be positive");
  std::vector<double> grid;
  for (long k = 0;; ++k) {
    const double x = static_cast<double>(k) * step;
    if (x >= kPi - 1e-9 * step) break;
    grid.push_back(x);
  }
  grid.push_back(kPi);
  return grid;
}

std::vector<double> azimuth_grid(double step) {
  if (!(step > 0.0) || !std::isfinite(step)) throw PreconditionError("grid step must be positive");
  std::vector<double> grid;
  for (long k = 0;; ++k) {
    const double x = static_cast<double>(k) * step;
    if (x >= 2.0 * kPi - 1e-9 * step) break;
    grid.push_back(x);
  }
  return grid;
}

CorrectionSurface optimize_correction(double theta_oa, const AxisObservable& b, const QubitState& state,
                                      double grid_step) {
  const AxisObservable a(0.0);
  const AxisObservable oa(theta_oa);
  const auto polar = polar_grid(grid_step);
  const auto azimuth = azimuth_grid(grid_step);

  std::vector<SurfacePoint> surface;
  surface.reserve(polar.size() * azimuth.size());
  std::size_t argmin = 0;
  std::size_t argmax = 0;
  for (double v : polar) {
    for (double p : azimuth) {
      const EdurPoint pt = error_disturbance(corrected_apparatus(oa, CorrectionTarget(v, p)), a, b, state);
      surface.push_back({v, p, pt.disturbance});
      const std::size_t idx = surface.size() - 1;
      if (pt.disturbance < surface[argmin].disturbance) argmin = idx;
      if (pt.disturbance > surface[argmax].disturbance) argmax = idx;
    }
  }
  const auto extremum = [&](std::size_t i) {
    return CorrectionExtremum{CorrectionTarget(surface[i].vartheta, surface[i].phi), surface[i].disturbance};
  };
  return {extremum(argmin), extremum(argmax), disturbance_bounds_closed_form(oa.theta(), b.theta()),
          std::move(surface)};
}

double bound_c(const AxisObservable& a, const AxisObservable& b, const QubitState& state) {
  return 0.5 * std::abs(trace_with(commutator(a.matrix(), b.matrix()), state));
}

double bound_d(const AxisObservable& a, const AxisObservable& b, const QubitState& state) {
  const ComplexMatrix2 root = psd_sqrt(state.rho());
  return 0.5 * trace_abs(root * commutator(a.matrix(), b.matrix()) * root);
}

BoundSet bounds(const AxisObservable& a, const AxisObservable& b, const QubitState& state) {
  // The Robertson expression and its trace extension coincide as formulas;
  // c_ab is kept as its own column so pure-state rows read naturally.
  const double c_prime = bound_c(a, b, state);
  return {c_prime, c_prime, bound_d(a, b, state)};
}

InequalityCheck check_ozawa(const EdurPoint& point, const AxisObservable& a, const AxisObservable& b,
                            const QubitState& state) {
  const double da = standard_deviation(a, state);
  const double db = standard_deviation(b, state);
  const double lhs = point.error * point.disturbance + point.error * db + point.disturbance * da;
  const double rhs = bound_c(a, b, state);
  return {lhs, rhs, lhs >= rhs - kInequalityTolerance, lhs - rhs};
}

InequalityCheck check_branciard(const EdurPoint& point, const AxisObservable& a, const AxisObservable& b,
                                const QubitState& state, double bound) {
  const double va = variance(a, state);
  const double vb = variance(b, state);
  const double radicand = va * vb - bound * bound;
  if (radicand < -1e-12) {
    std::ostringstream msg;
    msg << "check_branciard: bound " << bound << " exceeds dA dB";
    throw DomainError(msg.str());
  }
  const double lhs = point.error_sq * vb + point.disturbance_sq * va +
                     2.0 * point.error * point.disturbance * safe_sqrt(radicand);
  const double rhs = bound * bound;
  return {lhs, rhs, lhs >= rhs - kInequalityTolerance, lhs - rhs};
}

InequalityCheck check_tight_qubit(const EdurPoint& point) {
  const double e = point.error_sq - 2.0;
  const double n = point.disturbance_sq - 2.0;
  const double lhs = e * e + n * n;
  return {lhs, 4.0, lhs <= 4.0 + kTightRelationTolerance, 4.0 - lhs};
}

}  // namespace edur
