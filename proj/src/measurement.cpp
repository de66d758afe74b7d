#include "edur/measurement.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <sstream>

#include "edur/errors.hpp"

namespace edur {

namespace {

constexpr double kPi = std::numbers::pi;

double wrap_two_pi(double x) {
  double r = std::fmod(x, 2.0 * kPi);
  if (r < 0.0) r += 2.0 * kPi;
  if (r >= 2.0 * kPi) r = 0.0;
  return r;
}

void check_power(int power) {
  if (power != 1 && power != 2) throw PreconditionError("output operator power must be 1 or 2");
}

}  // namespace

MeasurementFamily::MeasurementFamily(const ComplexMatrix2& plus, const ComplexMatrix2& minus,
                                     std::optional<double> meter_theta)
    : outcomes_{Outcome{+1, plus}, Outcome{-1, minus}}, meter_theta_(meter_theta) {
  if (!plus.is_finite() || !minus.is_finite()) throw PreconditionError("MeasurementFamily: non-finite operator");
  const ComplexMatrix2 sum = povm(+1) + povm(-1);
  const double defect = max_abs_diff(sum, ComplexMatrix2::identity());
  if (defect > kCompletenessTolerance) {
    std::ostringstream msg;
    msg << "MeasurementFamily: completeness violated by " << defect;
    throw PreconditionError(msg.str());
  }
}

const ComplexMatrix2& MeasurementFamily::op(int label) const {
  if (label == 1) return outcomes_[0].op;
  if (label == -1) return outcomes_[1].op;
  throw PreconditionError("MeasurementFamily: outcome label must be +1 or -1");
}

ComplexMatrix2 MeasurementFamily::povm(int label) const {
  const ComplexMatrix2& m = op(label);
  return (m.adjoint() * m).hermitian_part();
}

double MeasurementFamily::probability(int label, const QubitState& state) const {
  return std::max(0.0, expectation(povm(label), state));
}

ComplexMatrix2 MeasurementFamily::unnormalized_post_state(int label, const QubitState& state) const {
  const ComplexMatrix2& m = op(label);
  return (m * state.rho() * m.adjoint()).hermitian_part();
}

QubitState MeasurementFamily::apply(const QubitState& state) const {
  return QubitState(unnormalized_post_state(+1, state) + unnormalized_post_state(-1, state));
}

CorrectionTarget::CorrectionTarget(double vartheta, double phi) {
  if (!std::isfinite(vartheta) || !std::isfinite(phi)) throw PreconditionError("CorrectionTarget: non-finite angle");
  double v = wrap_two_pi(vartheta);
  double p = phi;
  if (v > kPi) {
    // Same point on the sphere reached through the other hemisphere.
    v = 2.0 * kPi - v;
    p += kPi;
  }
  vartheta_ = v;
  phi_ = wrap_two_pi(p);
}

Vector2 CorrectionTarget::output_ket(int label) const {
  if (label == 1) return bloch_ket(vartheta_, phi_);
  if (label == -1) return bloch_ket(kPi - vartheta_, phi_ + kPi);
  throw PreconditionError("CorrectionTarget: outcome label must be +1 or -1");
}

CorrectionTarget eigenstate_target(const AxisObservable& b, int sign) {
  if (sign == 1) return {b.theta(), kPi / 2.0};
  if (sign == -1) return {kPi - b.theta(), 3.0 * kPi / 2.0};
  throw PreconditionError("eigenstate_target: sign must be +1 or -1");
}

CorrectionTarget branch_target(const AxisObservable& oa, const AxisObservable& b, CorrectionBranch branch) {
  const int optimal_sign = std::cos(b.theta() - oa.theta()) >= 0.0 ? 1 : -1;
  return eigenstate_target(b, branch == CorrectionBranch::optimal ? optimal_sign : -optimal_sign);
}

MeasurementFamily projective_apparatus(const AxisObservable& oa) {
  return MeasurementFamily(oa.projector(+1), oa.projector(-1), oa.theta());
}

MeasurementFamily corrected_apparatus(const AxisObservable& oa, const CorrectionTarget& target) {
  return MeasurementFamily(outer(target.output_ket(+1), oa.eigenket(+1)),
                           outer(target.output_ket(-1), oa.eigenket(-1)), oa.theta());
}

ComplexMatrix2 output_operator_a(const MeasurementFamily& app, int power) {
  check_power(power);
  ComplexMatrix2 sum;
  for (const auto& outcome : app.outcomes()) {
    sum += app.povm(outcome.label) * Complex{std::pow(static_cast<double>(outcome.label), power)};
  }
  return sum.hermitian_part();
}

ComplexMatrix2 output_operator_b(const MeasurementFamily& app, const AxisObservable& b, int power) {
  check_power(power);
  const ComplexMatrix2 bk = power == 1 ? b.matrix() : b.matrix() * b.matrix();
  ComplexMatrix2 sum;
  for (const auto& outcome : app.outcomes()) sum += outcome.op.adjoint() * bk * outcome.op;
  return sum.hermitian_part();
}

}  // namespace edur
