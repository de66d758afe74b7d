#pragma once

#include <vector>

#include "edur/measurement.hpp"
#include "edur/qubit_state.hpp"

namespace edur {

// Squared values in (-kSquareClampTolerance, 0) are rounding noise and clamp
// to zero before taking the square root.
inline constexpr double kSquareClampTolerance = 1e-10;
// |value| below this is the rounding residue of O(1) terms cancelling; it
// snaps to zero so exact zeros stay zero after the square root.
inline constexpr double kSquareZeroTolerance = 1e-13;
// Agreement required between the general and binary error formulas.
inline constexpr double kRouteAgreementTolerance = 1e-10;
inline constexpr double kInequalityTolerance = 1e-10;
inline constexpr double kTightRelationTolerance = 1e-9;

struct EdurPoint {
  double error = 0.0;        // epsilon(A)
  double disturbance = 0.0;  // eta(B)
  double error_sq = 0.0;
  double disturbance_sq = 0.0;
  double theta_oa = 0.0;
  double theta_b = 0.0;
  double alpha = 0.0;
};

// Builds a point from squared values, clamping rounding residue to zero.
EdurPoint make_point(double error_sq, double disturbance_sq, double theta_oa, double theta_b, double alpha);

// Error of A and disturbance of B caused by `app` on `state`. Both the
// moment-operator form <(O-X)^2> + <O^(2) - O^2> and the binary shortcut
// 2 - 2 Re<X O> are evaluated; ConsistencyError if they differ by more than
// 1e-10.
EdurPoint error_disturbance(const MeasurementFamily& app, const AxisObservable& a, const AxisObservable& b,
                            const QubitState& state);

// 2 sin(theta_oa / 2), theta_oa in [0, pi].
double error_closed_form(double theta_oa);

struct DisturbanceRange {
  double min;
  double max;
};

// Attainable disturbance range over all correction unitaries:
// {2|sin((theta_oa - theta_b)/2)|, 2|cos((theta_oa - theta_b)/2)|} sorted.
DisturbanceRange disturbance_bounds_closed_form(double theta_oa, double theta_b);

struct SurfacePoint {
  double vartheta;
  double phi;
  double disturbance;
};

struct CorrectionExtremum {
  CorrectionTarget target;
  double disturbance;
};

struct CorrectionSurface {
  CorrectionExtremum min;
  CorrectionExtremum max;
  DisturbanceRange closed_form;       // analytic extremes for comparison
  std::vector<SurfacePoint> surface;  // vartheta-major grid order
};

// Inclusive [0, pi] grid for vartheta: multiples of `step` below pi plus the
// endpoint pi itself.
std::vector<double> polar_grid(double step);
// Half-open [0, 2 pi) grid for phi.
std::vector<double> azimuth_grid(double step);

// Exhaustive search of the disturbance over correction targets on a
// (vartheta, phi) grid.
CorrectionSurface optimize_correction(double theta_oa, const AxisObservable& b, const QubitState& state,
                                      double grid_step);

// C'_AB = |Tr([A, B] rho)| / 2; the Robertson C_AB on pure states.
double bound_c(const AxisObservable& a, const AxisObservable& b, const QubitState& state);

// D_AB = Tr|sqrt(rho) [A, B] sqrt(rho)| / 2.
double bound_d(const AxisObservable& a, const AxisObservable& b, const QubitState& state);

struct BoundSet {
  double c_ab;  // 1/2 |<[A, B]>|, equal to c_prime_ab on every state
  double c_prime_ab;
  double d_ab;
};

BoundSet bounds(const AxisObservable& a, const AxisObservable& b, const QubitState& state);

struct InequalityCheck {
  double lhs;
  double rhs;
  bool satisfied;

  // Signed margin toward validity: lhs - rhs for ">=" relations, rhs - lhs
  // for the "<=" tight relation.
  double slack;
};

// eps eta + eps dB + eta dA >= C'_AB
InequalityCheck check_ozawa(const EdurPoint& point, const AxisObservable& a, const AxisObservable& b,
                            const QubitState& state);

// eps^2 dB^2 + eta^2 dA^2 + 2 eps eta sqrt(dA^2 dB^2 - C^2) >= C^2, with the
// constant `bound` (C'_AB or D_AB). DomainError if bound^2 exceeds
// dA^2 dB^2 by more than 1e-12.
InequalityCheck check_branciard(const EdurPoint& point, const AxisObservable& a, const AxisObservable& b,
                                const QubitState& state, double bound);

// (eps^2 - 2)^2 + (eta^2 - 2)^2 <= 4, the admissible region when D_AB = 1.
InequalityCheck check_tight_qubit(const EdurPoint& point);

}  // namespace edur
