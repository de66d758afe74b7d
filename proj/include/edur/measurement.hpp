#pragma once

#include <array>
#include <optional>

#include "edur/complex_matrix.hpp"
#include "edur/qubit_state.hpp"

namespace edur {

// Completeness tolerance for sum_m M_m† M_m = 1.
inline constexpr double kCompletenessTolerance = 1e-10;

struct Outcome {
  int label;  // +1 or -1
  ComplexMatrix2 op;
};

// Measurement operators {M_m} of a binary apparatus, labels fixed to +1 and
// -1 (in that order).
class MeasurementFamily {
 public:
  // Throws PreconditionError if the family is incomplete or mislabeled.
  MeasurementFamily(const ComplexMatrix2& plus, const ComplexMatrix2& minus,
                    std::optional<double> meter_theta = std::nullopt);

  const std::array<Outcome, 2>& outcomes() const { return outcomes_; }
  const ComplexMatrix2& op(int label) const;
  // P_m = M_m† M_m
  ComplexMatrix2 povm(int label) const;

  // Angle of the observable the apparatus measures, when known.
  std::optional<double> meter_theta() const { return meter_theta_; }

  double probability(int label, const QubitState& state) const;
  // M_m rho M_m†, not normalized.
  ComplexMatrix2 unnormalized_post_state(int label, const QubitState& state) const;
  // sum_m M_m rho M_m†
  QubitState apply(const QubitState& state) const;

 private:
  std::array<Outcome, 2> outcomes_;
  std::optional<double> meter_theta_;
};

// Output states of the correction unitary: outcome +1 is mapped to
// |psi(vartheta, phi)> and outcome -1 to |psi(pi - vartheta, phi + pi)>.
// Stored canonically with vartheta in [0, pi] and phi in [0, 2 pi).
class CorrectionTarget {
 public:
  CorrectionTarget(double vartheta, double phi);

  double vartheta() const { return vartheta_; }
  double phi() const { return phi_; }

  Vector2 output_ket(int label) const;

 private:
  double vartheta_;
  double phi_;
};

// Target whose +1 output is the `sign` eigenstate of `b`.
CorrectionTarget eigenstate_target(const AxisObservable& b, int sign);

enum class CorrectionBranch { optimal, anti_optimal };

// Correction that minimizes (optimal) or maximizes (anti_optimal) the
// disturbance of `b`: the outputs become b-eigenstates, paired with the O_A
// outcomes according to the sign of cos(theta_b - theta_oa).
CorrectionTarget branch_target(const AxisObservable& oa, const AxisObservable& b, CorrectionBranch branch);

// {|m_OA><m_OA|}
MeasurementFamily projective_apparatus(const AxisObservable& oa);

// {U_corr |m_OA><m_OA|} with U_corr given by its output states.
MeasurementFamily corrected_apparatus(const AxisObservable& oa, const CorrectionTarget& target);

// O_A^(k) = sum_m m^k P_m, k in {1, 2}.
ComplexMatrix2 output_operator_a(const MeasurementFamily& app, int power);

// O_B^(k) = sum_m M_m† B^k M_m, k in {1, 2}.
ComplexMatrix2 output_operator_b(const MeasurementFamily& app, const AxisObservable& b, int power);

}  // namespace edur
