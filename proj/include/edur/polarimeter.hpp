#pragma once

#include <array>
#include <cstddef>
#include <cstdint>
#include <numbers>
#include <optional>

#include "edur/edur_metrics.hpp"
#include "edur/measurement.hpp"
#include "edur/qubit_state.hpp"

namespace edur {

// ---------------------------------------------------------------------------
// State preparation through a fluctuating rotation
// ---------------------------------------------------------------------------

enum class NoiseDistribution { gaussian, uniform };

// A rotation about x by nominal_angle + d, with d a zero-mean random angle
// of standard deviation noise_sigma.
struct NoisyRotationSpec {
  double nominal_angle = std::numbers::pi / 2.0;
  double noise_sigma = 0.0;
  NoiseDistribution distribution = NoiseDistribution::gaussian;
  // Initial node count; refinement doubles it until the output settles.
  std::size_t quadrature_points = 16;
};

// Ensemble average  E_d[ R_x(angle + d) rho R_x(angle + d)† ].
//
// Gaussian noise is integrated with Gauss-Hermite nodes scaled by sigma,
// uniform noise (on [-sqrt(3) sigma, sqrt(3) sigma]) with Gauss-Legendre.
// The node count doubles until the Bloch vector moves by less than 1e-10;
// AccuracyError if it still moves by more than 1e-8 at the refinement cap.
QubitState mixing_channel(const NoisyRotationSpec& spec, const QubitState& input);

// Noise sigma for which the mixing channel maps |+z> to a state of Bloch
// length alpha (bisection against the quadrature). RangeError for alpha
// outside [0, 1].
double solve_sigma_for_alpha(double alpha, NoiseDistribution distribution);

// rho_x(alpha) realized physically: |+z> through the noisy pi/2 rotation,
// then a z rotation carrying the -y axis onto +x.
QubitState prepare_rho_x(double alpha, NoiseDistribution distribution = NoiseDistribution::gaussian);

// ---------------------------------------------------------------------------
// Intensities of the successive O_A-then-B measurement
// ---------------------------------------------------------------------------

enum class CountMode { exact, poisson };

struct CountSettings {
  CountMode mode = CountMode::exact;
  double mean_counts = 1e4;  // expected total counts per setting
  std::uint64_t seed = 0;
};

// Intensities I_{mb} for m, b in {+1, -1}.
class CountTable {
 public:
  CountTable() = default;
  CountTable(std::array<double, 4> entries, CountMode mode, double mean_counts);

  double at(int m, int b) const { return entries_[index(m, b)]; }
  const std::array<double, 4>& entries() const { return entries_; }
  CountMode mode() const { return mode_; }
  double mean_counts() const { return mean_counts_; }
  double total() const;

  // Storage order: (+,+), (+,-), (-,+), (-,-).
  static std::size_t index(int m, int b);
  static constexpr std::array<std::array<int, 2>, 4> kLabels{{{1, 1}, {1, -1}, {-1, 1}, {-1, -1}}};

 private:
  std::array<double, 4> entries_{};
  CountMode mode_ = CountMode::exact;
  double mean_counts_ = 0.0;
};

// p(m, b) = Tr(P^B_b M_m rho M_m†) in CountTable storage order.
std::array<double, 4> joint_probabilities(const MeasurementFamily& app, const AxisObservable& b,
                                          const QubitState& state);

// Derives an independent generator seed for one (stream, entry) pair so
// sampled tables do not depend on evaluation order.
std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t stream, std::uint64_t entry);

// Exact mode: mean_counts * p(m, b). Poisson mode: independent draws with
// those means, reproducible from (settings.seed, stream).
CountTable simulate_counts(const MeasurementFamily& app, const AxisObservable& b, const QubitState& state,
                           const CountSettings& settings, std::uint64_t stream = 0);

struct OutputExpectations {
  double mean_oa;  // sum m I_mb / sum I_mb
  double mean_ob;  // sum b I_mb / sum I_mb
};

// EmptyDataError for an all-zero table.
OutputExpectations expectations_from_counts(const CountTable& table);

// Tr(P+ rho), P+ = (1 + obs)/2.
double prefactor(const AxisObservable& projector_observable, const QubitState& state);

// Counts behind a separately measured prefactor: a single projective
// apparatus recording the + and - outcomes.
struct PrefactorMeasurement {
  double plus = 0.0;
  double minus = 0.0;

  double value() const;
};

// ---------------------------------------------------------------------------
// Three-state method
// ---------------------------------------------------------------------------

// Tables for one reconstructed quantity: the input state rho, the reflected
// state X rho X and the conditioned state P+ rho P+ / Tr(P+ rho).
struct TableSet {
  std::optional<CountTable> plain;
  std::optional<CountTable> reflected;
  std::optional<CountTable> conditioned;
  std::optional<PrefactorMeasurement> prefactor;
};

struct ThreeStateRun {
  TableSet error_set;        // states rho, A rho A, rho|A
  TableSet disturbance_set;  // states rho, B rho B, rho|B
  CountSettings settings;
  double theta_oa = 0.0;
  double theta_b = 0.0;
  double alpha = 0.0;
};

// Random-number stream indices of the simulated settings.
enum class RunStream : std::uint64_t {
  plain = 0,
  a_reflected = 1,
  a_conditioned = 2,
  b_reflected = 3,
  b_conditioned = 4,
  a_prefactor = 5,
  b_prefactor = 6,
};

// P+ rho P+ / Tr(P+ rho); the P+ eigenstate when Tr(P+ rho) vanishes.
QubitState conditioned_state(const AxisObservable& obs, const QubitState& state);

// Simulates every table of the protocol for apparatus `app` (followed by a
// projective B measurement) on `state`. The plain-state table is shared by
// both sets.
ThreeStateRun simulate_three_state(const MeasurementFamily& app, const AxisObservable& a, const AxisObservable& b,
                                   const QubitState& state, const CountSettings& settings);

// Ingredients of  X^2 = 2 - 4 p c + r + s.
struct SquaredTerms {
  double prefactor;    // p = Tr(P+ rho)
  double conditioned;  // c = Tr(rho|X O)
  double reflected;    // r = Tr(X rho X O)
  double plain;        // s = Tr(rho O)
};

double squared_from_terms(const SquaredTerms& terms);

struct ThreeStateTerms {
  SquaredTerms error;
  SquaredTerms disturbance;
};

// ProtocolIncompleteError if any table or prefactor is missing.
ThreeStateTerms three_state_terms(const ThreeStateRun& run);

// Error and disturbance from intensities alone. Sampled runs keep the raw
// (possibly negative) squared estimates; the roots use max(0, .).
EdurPoint three_state_reconstruct(const ThreeStateRun& run);

struct ReconstructionUncertainty {
  double error_sq_sigma;
  double disturbance_sq_sigma;
};

// One-standard-deviation uncertainty of the squared estimates from Poisson
// variances of the intensities, propagated linearly through the count
// combinations. On an exact run it predicts the spread of a sampled run with
// the same mean counts.
ReconstructionUncertainty propagate_uncertainty(const ThreeStateRun& run);

}  // namespace edur
