#include "edur/polarimeter.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <random>
#include <sstream>

#include "edur/errors.hpp"
#include "edur/quadrature.hpp"

namespace edur {

namespace {

constexpr double kRefinementTolerance = 1e-10;
constexpr double kAccuracyLimit = 1e-8;
constexpr std::size_t kMaxQuadratureNodes = 4096;
constexpr double kGaussianSigmaCeiling = 10.0;

double max_component_diff(const BlochVector& a, const BlochVector& b) {
  double d = 0.0;
  for (std::size_t i = 0; i < 3; ++i) d = std::max(d, std::abs(a[i] - b[i]));
  return d;
}

ComplexMatrix2 averaged_rotation(const NoisyRotationSpec& spec, const QubitState& input, std::size_t nodes) {
  ComplexMatrix2 sum;
  const auto accumulate = [&](double deviation, double weight) {
    const ComplexMatrix2 u = rotation_about_x(spec.nominal_angle + deviation);
    sum += (u * input.rho() * u.adjoint()) * Complex{weight};
  };
  if (spec.distribution == NoiseDistribution::gaussian) {
    const QuadratureRule& rule = gauss_hermite(nodes);
    const double scale = std::numbers::sqrt2 * spec.noise_sigma;
    const double norm = 1.0 / std::sqrt(std::numbers::pi);
    for (std::size_t i = 0; i < nodes; ++i) accumulate(scale * rule.nodes[i], norm * rule.weights[i]);
  } else {
    const QuadratureRule& rule = gauss_legendre(nodes);
    const double half_width = std::sqrt(3.0) * spec.noise_sigma;
    for (std::size_t i = 0; i < nodes; ++i) accumulate(half_width * rule.nodes[i], 0.5 * rule.weights[i]);
  }
  return sum.hermitian_part();
}

// Renormalizes the trace, which the quadrature weights preserve only to
// rounding.
QubitState as_state(const ComplexMatrix2& m) { return QubitState(m * Complex{1.0 / m.trace().real()}); }

double table_mean(const CountTable& table, bool use_b) {
  const double total = table.total();
  if (!(total > 0.0)) throw EmptyDataError("count table holds no counts");
  double weighted = 0.0;
  for (std::size_t k = 0; k < 4; ++k) weighted += CountTable::kLabels[k][use_b ? 1 : 0] * table.entries()[k];
  return weighted / total;
}

// Poisson variance of table_mean, to first order in the intensities.
double table_mean_variance(const CountTable& table, bool use_b) {
  const double total = table.total();
  const double mean = table_mean(table, use_b);
  double var = 0.0;
  for (std::size_t k = 0; k < 4; ++k) {
    const double w = CountTable::kLabels[k][use_b ? 1 : 0] - mean;
    var += w * w * table.entries()[k];
  }
  return var / (total * total);
}

double prefactor_variance(const PrefactorMeasurement& m) {
  const double total = m.plus + m.minus;
  const double p = m.value();
  return p * (1.0 - p) / total;
}

const TableSet& require_complete(const TableSet& set, const char* name) {
  if (!set.plain || !set.reflected || !set.conditioned || !set.prefactor) {
    std::ostringstream msg;
    msg << "three-state run: " << name << " set is incomplete";
    throw ProtocolIncompleteError(msg.str());
  }
  return set;
}

SquaredTerms terms_of(const TableSet& set, bool use_b) {
  return {set.prefactor->value(), table_mean(*set.conditioned, use_b), table_mean(*set.reflected, use_b),
          table_mean(*set.plain, use_b)};
}

double squared_variance(const TableSet& set, bool use_b) {
  const double p = set.prefactor->value();
  const double c = table_mean(*set.conditioned, use_b);
  return 16.0 * (c * c * prefactor_variance(*set.prefactor) + p * p * table_mean_variance(*set.conditioned, use_b)) +
         table_mean_variance(*set.reflected, use_b) + table_mean_variance(*set.plain, use_b);
}

std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

double draw_poisson(double mean, std::uint64_t seed) {
  if (!(mean > 0.0)) return 0.0;
  std::mt19937_64 engine(seed);
  std::poisson_distribution<long long> dist(mean);
  return static_cast<double>(dist(engine));
}

}  // namespace

QubitState mixing_channel(const NoisyRotationSpec& spec, const QubitState& input) {
  if (!(spec.noise_sigma >= 0.0) || !std::isfinite(spec.noise_sigma)) {
    throw PreconditionError("mixing_channel: noise sigma must be finite and non-negative");
  }
  if (spec.quadrature_points < 3) throw PreconditionError("mixing_channel: need at least 3 quadrature points");
  if (spec.noise_sigma == 0.0) return input.conjugated(rotation_about_x(spec.nominal_angle));

  std::size_t nodes = spec.quadrature_points;
  QubitState previous = as_state(averaged_rotation(spec, input, nodes));
  double change = 0.0;
  while (2 * nodes <= kMaxQuadratureNodes) {
    nodes *= 2;
    QubitState current = as_state(averaged_rotation(spec, input, nodes));
    change = max_component_diff(current.bloch(), previous.bloch());
    previous = current;
    if (change < kRefinementTolerance) return previous;
  }
  if (change > kAccuracyLimit) {
    std::ostringstream msg;
    msg << "mixing_channel: quadrature still moving by " << change << " at " << nodes << " nodes";
    throw AccuracyError(msg.str());
  }
  return previous;
}

double solve_sigma_for_alpha(double alpha, NoiseDistribution distribution) {
  if (!(alpha >= 0.0 && alpha <= 1.0)) throw RangeError("solve_sigma_for_alpha: alpha outside [0, 1]");
  if (alpha == 1.0) return 0.0;

  const QubitState up = QubitState::from_bloch({0.0, 0.0, 1.0});
  const auto length_at = [&](double sigma) {
    NoisyRotationSpec spec;
    spec.noise_sigma = sigma;
    spec.distribution = distribution;
    return mixing_channel(spec, up).bloch_length();
  };
  double lo = 0.0;
  double hi = distribution == NoiseDistribution::gaussian ? kGaussianSigmaCeiling : std::numbers::pi / std::sqrt(3.0);
  // Bloch length decreases monotonically in sigma on [lo, hi].
  for (int iter = 0; iter < 200 && hi - lo > 1e-14; ++iter) {
    const double mid = 0.5 * (lo + hi);
    const double len = length_at(mid);
    if (std::abs(len - alpha) < 1e-12) return mid;
    (len > alpha ? lo : hi) = mid;
  }
  return 0.5 * (lo + hi);
}

QubitState prepare_rho_x(double alpha, NoiseDistribution distribution) {
  NoisyRotationSpec spec;
  spec.noise_sigma = solve_sigma_for_alpha(alpha, distribution);
  spec.distribution = distribution;
  const QubitState mixed = mixing_channel(spec, QubitState::from_bloch({0.0, 0.0, 1.0}));
  return mixed.conjugated(rotation_about_z(std::numbers::pi / 2.0));
}

CountTable::CountTable(std::array<double, 4> entries, CountMode mode, double mean_counts)
    : entries_(entries), mode_(mode), mean_counts_(mean_counts) {
  for (double e : entries_) {
    if (!(e >= 0.0) || !std::isfinite(e)) throw PreconditionError("CountTable: intensities must be finite and >= 0");
  }
}

double CountTable::total() const { return entries_[0] + entries_[1] + entries_[2] + entries_[3]; }

std::size_t CountTable::index(int m, int b) {
  if ((m != 1 && m != -1) || (b != 1 && b != -1)) throw PreconditionError("CountTable: labels must be +1 or -1");
  return (m == 1 ? 0 : 2) + (b == 1 ? 0 : 1);
}

std::array<double, 4> joint_probabilities(const MeasurementFamily& app, const AxisObservable& b,
                                          const QubitState& state) {
  std::array<double, 4> p{};
  for (std::size_t k = 0; k < 4; ++k) {
    const auto [m, bl] = CountTable::kLabels[k];
    const ComplexMatrix2 post = app.unnormalized_post_state(m, state);
    p[k] = std::max(0.0, (b.projector(bl) * post).trace().real());
  }
  return p;
}

std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t stream, std::uint64_t entry) {
  return splitmix64(splitmix64(splitmix64(seed) ^ stream) ^ entry);
}

CountTable simulate_counts(const MeasurementFamily& app, const AxisObservable& b, const QubitState& state,
                           const CountSettings& settings, std::uint64_t stream) {
  if (!(settings.mean_counts > 0.0)) throw PreconditionError("simulate_counts: mean counts must be positive");
  const auto p = joint_probabilities(app, b, state);
  std::array<double, 4> entries{};
  for (std::size_t k = 0; k < 4; ++k) {
    const double mean = settings.mean_counts * p[k];
    entries[k] = settings.mode == CountMode::exact ? mean : draw_poisson(mean, derive_seed(settings.seed, stream, k));
  }
  return CountTable(entries, settings.mode, settings.mean_counts);
}

OutputExpectations expectations_from_counts(const CountTable& table) {
  return {table_mean(table, false), table_mean(table, true)};
}

double prefactor(const AxisObservable& projector_observable, const QubitState& state) {
  return std::clamp(expectation(projector_observable.projector(+1), state), 0.0, 1.0);
}

double PrefactorMeasurement::value() const {
  const double total = plus + minus;
  if (!(total > 0.0)) throw EmptyDataError("prefactor measurement holds no counts");
  return plus / total;
}

QubitState conditioned_state(const AxisObservable& obs, const QubitState& state) {
  const ComplexMatrix2 projector = obs.projector(+1);
  const double weight = prefactor(obs, state);
  if (weight < 1e-15) return QubitState::pure(obs.eigenket(+1));
  return QubitState((projector * state.rho() * projector).hermitian_part() * Complex{1.0 / weight});
}

namespace {

PrefactorMeasurement simulate_prefactor(const AxisObservable& obs, const QubitState& state,
                                        const CountSettings& settings, RunStream stream) {
  const double p = prefactor(obs, state);
  const double n_plus = settings.mean_counts * p;
  const double n_minus = settings.mean_counts * (1.0 - p);
  if (settings.mode == CountMode::exact) return {n_plus, n_minus};
  const auto s = static_cast<std::uint64_t>(stream);
  return {draw_poisson(n_plus, derive_seed(settings.seed, s, 0)),
          draw_poisson(n_minus, derive_seed(settings.seed, s, 1))};
}

}  // namespace

ThreeStateRun simulate_three_state(const MeasurementFamily& app, const AxisObservable& a, const AxisObservable& b,
                                   const QubitState& state, const CountSettings& settings) {
  const auto counts = [&](const QubitState& input, RunStream stream) {
    return simulate_counts(app, b, input, settings, static_cast<std::uint64_t>(stream));
  };
  ThreeStateRun run;
  run.settings = settings;
  run.theta_oa = app.meter_theta().value_or(std::numeric_limits<double>::quiet_NaN());
  run.theta_b = b.theta();
  run.alpha = state.bloch_length();

  const CountTable plain = counts(state, RunStream::plain);
  run.error_set.plain = plain;
  run.error_set.reflected = counts(state.conjugated(a.matrix()), RunStream::a_reflected);
  run.error_set.conditioned = counts(conditioned_state(a, state), RunStream::a_conditioned);
  run.error_set.prefactor = simulate_prefactor(a, state, settings, RunStream::a_prefactor);

  run.disturbance_set.plain = plain;
  run.disturbance_set.reflected = counts(state.conjugated(b.matrix()), RunStream::b_reflected);
  run.disturbance_set.conditioned = counts(conditioned_state(b, state), RunStream::b_conditioned);
  run.disturbance_set.prefactor = simulate_prefactor(b, state, settings, RunStream::b_prefactor);
  return run;
}

double squared_from_terms(const SquaredTerms& t) {
  return 2.0 - 4.0 * t.prefactor * t.conditioned + t.reflected + t.plain;
}

ThreeStateTerms three_state_terms(const ThreeStateRun& run) {
  return {terms_of(require_complete(run.error_set, "error"), false),
          terms_of(require_complete(run.disturbance_set, "disturbance"), true)};
}

EdurPoint three_state_reconstruct(const ThreeStateRun& run) {
  const ThreeStateTerms terms = three_state_terms(run);
  const double error_sq = squared_from_terms(terms.error);
  const double disturbance_sq = squared_from_terms(terms.disturbance);
  EdurPoint point = make_point(error_sq, disturbance_sq, run.theta_oa, run.theta_b, run.alpha);
  if (run.settings.mode == CountMode::poisson) {
    point.error_sq = error_sq;
    point.disturbance_sq = disturbance_sq;
  }
  return point;
}

ReconstructionUncertainty propagate_uncertainty(const ThreeStateRun& run) {
  const TableSet& error_set = require_complete(run.error_set, "error");
  const TableSet& disturbance_set = require_complete(run.disturbance_set, "disturbance");
  return {std::sqrt(squared_variance(error_set, false)), std::sqrt(squared_variance(disturbance_set, true))};
}

}  // namespace edur
