#include "edur/audit.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <ostream>
#include <sstream>

#include "edur/count_io.hpp"

namespace edur {

namespace {

constexpr double kPi = std::numbers::pi;
const AxisObservable kA(0.0);
const std::vector<double> kAllThetaB{kPi / 2.0, kPi / 3.0, kPi / 6.0};

SweepConfig with(const SweepConfig& base, std::vector<double> theta_b, CorrectionMode mode) {
  SweepConfig c = base;
  c.theta_b = std::move(theta_b);
  c.correction = {mode, std::nullopt};
  return c;
}

CheckResult upper_check(std::string name, double worst, double limit, std::string detail = {}) {
  return {std::move(name), worst <= limit, worst, limit, std::move(detail)};
}

EdurPoint point_at(double theta_oa, double theta_b, double alpha, CorrectionBranch branch) {
  const AxisObservable oa(theta_oa);
  const AxisObservable b(theta_b);
  return error_disturbance(corrected_apparatus(oa, branch_target(oa, b, branch)), kA, b, rho_x(alpha));
}

CheckResult check_saturation(const AuditConfig& config) {
  double worst = 0.0;
  for (const auto& row : edur_sweep(with(config.sweep, {kPi / 2.0}, CorrectionMode::optimal))) {
    worst = std::max(worst, std::abs(row.tight.lhs - 4.0));
  }
  return upper_check("tight-relation saturation", worst, 1e-9, "max |(e^2-2)^2 + (n^2-2)^2 - 4| at optimal points");
}

CheckResult check_anchors() {
  const double b = kPi / 2.0;
  const auto opt = CorrectionBranch::optimal;
  const auto anti = CorrectionBranch::anti_optimal;
  const EdurPoint zero = point_at(0.0, b, 1.0, opt);
  const EdurPoint quarter_min = point_at(kPi / 2.0, b, 1.0, opt);
  const EdurPoint quarter_max = point_at(kPi / 2.0, b, 1.0, anti);
  const EdurPoint half = point_at(kPi, b, 1.0, opt);
  const double worst = std::max({std::abs(zero.error), std::abs(zero.disturbance - std::sqrt(2.0)),
                                 std::abs(quarter_min.disturbance), std::abs(quarter_max.disturbance - 2.0),
                                 std::abs(half.error - 2.0)});
  return upper_check("anchor points", worst, 1e-9, "(0, sqrt2) at 0; eta 0/2 at pi/2; eps 2 at pi");
}

CheckResult check_bounds(const AuditConfig& config) {
  double worst = 0.0;
  for (double alpha : config.sweep.alphas) {
    const QubitState state = rho_x(alpha);
    worst = std::max(worst, std::abs(bound_d(kA, AxisObservable(kPi / 2.0), state) - 1.0));
    worst = std::max(worst, std::abs(bound_c(kA, AxisObservable(kPi / 2.0), state) - alpha));
    for (double theta_b : {kPi / 3.0, kPi / 6.0}) {
      worst = std::max(worst, std::abs(bound_d(kA, AxisObservable(theta_b), state) - std::sin(theta_b)));
    }
  }
  return upper_check("bound behavior", worst, 1e-12, "D=1, C'=alpha, D=sin(theta_b)");
}

CheckResult check_mixture_independence(const AuditConfig& config) {
  double worst = 0.0;
  for (double theta_b : kAllThetaB) {
    const AxisObservable b(theta_b);
    for (double theta_oa : config.sweep.theta_oa.points()) {
      for (auto branch : {CorrectionBranch::optimal, CorrectionBranch::anti_optimal}) {
        const EdurPoint pure = point_at(theta_oa, theta_b, 1.0, branch);
        for (double alpha : config.sweep.alphas) {
          const EdurPoint p = point_at(theta_oa, theta_b, alpha, branch);
          worst = std::max({worst, std::abs(p.error - pure.error), std::abs(p.disturbance - pure.disturbance)});
        }
      }
    }
  }
  return upper_check("mixture independence", worst, 1e-9, "max |eps(alpha)-eps(1)|, |eta(alpha)-eta(1)|");
}

CheckResult check_oracle_equivalence(const AuditConfig& config) {
  double worst = 0.0;
  for (double theta_b : kAllThetaB) {
    const AxisObservable b(theta_b);
    for (double theta_oa : config.sweep.theta_oa.points()) {
      const AxisObservable oa(theta_oa);
      for (const auto& variant : apparatus_variants(oa, b, {CorrectionMode::both, std::nullopt})) {
        for (double alpha : config.sweep.alphas) {
          const QubitState state = rho_x(alpha);
          const EdurPoint direct = error_disturbance(variant.apparatus, kA, b, state);
          const EdurPoint rebuilt =
              config.reconstruct(simulate_three_state(variant.apparatus, kA, b, state, CountSettings{}));
          worst = std::max({worst, std::abs(direct.error_sq - rebuilt.error_sq),
                            std::abs(direct.disturbance_sq - rebuilt.disturbance_sq)});
        }
      }
    }
  }
  return upper_check("three-state oracle equivalence", worst, 1e-9, "exact counts vs operator computation");
}

std::vector<CheckResult> check_surface(const AuditConfig& config) {
  const double theta_oa = 5.0 * kPi / 18.0;
  const AxisObservable b(kPi / 2.0);
  const CorrectionSurface s = optimize_correction(theta_oa, b, rho_x(1.0), config.surface_step);
  const double extreme_err = std::max(std::abs(s.min.disturbance - 2.0 * std::sin(kPi / 9.0)),
                                      std::abs(s.max.disturbance - 2.0 * std::cos(kPi / 9.0)));
  const auto y_fidelity = [&](const CorrectionTarget& t) {
    const QubitState out = QubitState::pure(t.output_ket(+1));
    return std::max(fidelity(out, QubitState::from_bloch({0.0, 1.0, 0.0})),
                    fidelity(out, QubitState::from_bloch({0.0, -1.0, 0.0})));
  };
  const double worst_fid = std::min(y_fidelity(s.min.target), y_fidelity(s.max.target));
  std::ostringstream where;
  where << "argmin (" << s.min.target.vartheta() << ", " << s.min.target.phi() << "), argmax ("
        << s.max.target.vartheta() << ", " << s.max.target.phi() << ")";
  return {upper_check("correction surface extremes", extreme_err, 5e-3, "vs 2 sin 20deg, 2 cos 20deg"),
          {"correction surface argmin/argmax", worst_fid >= 0.999, worst_fid, 0.999, where.str()}};
}

std::vector<CheckResult> check_mixing(const AuditConfig& config) {
  double worst_length = 0.0;
  double worst_analytic = 0.0;
  for (double alpha : config.sweep.alphas) {
    const double sigma = solve_sigma_for_alpha(alpha, NoiseDistribution::gaussian);
    NoisyRotationSpec spec;
    spec.noise_sigma = sigma;
    const double len = mixing_channel(spec, QubitState::from_bloch({0.0, 0.0, 1.0})).bloch_length();
    worst_length = std::max(worst_length, std::abs(len - alpha));
    worst_analytic = std::max(worst_analytic, std::abs(std::exp(-sigma * sigma / 2.0) - alpha));
  }
  return {upper_check("mixing channel Bloch length", worst_length, 1e-6),
          upper_check("mixing channel analytic sigma", worst_analytic, 1e-6, "alpha = exp(-sigma^2/2)")};
}

std::vector<CheckResult> check_statistics(const AuditConfig& config) {
  const AxisObservable oa(5.0 * kPi / 18.0);
  const AxisObservable b(kPi / 2.0);
  const QubitState state = rho_x(0.5);
  const MeasurementFamily app = corrected_apparatus(oa, branch_target(oa, b, CorrectionBranch::optimal));
  const double exact = error_disturbance(app, kA, b, state).error_sq;

  const int n = config.statistical_trials;
  double sum = 0.0;
  double sum_sq = 0.0;
  double sigma_sum = 0.0;
  for (int trial = 0; trial < n; ++trial) {
    const CountSettings settings{CountMode::poisson, config.statistical_mean_counts,
                                 derive_seed(config.sweep.counts.seed, 0x5eed, static_cast<std::uint64_t>(trial))};
    const ThreeStateRun run = simulate_three_state(app, kA, b, state, settings);
    const double value = config.reconstruct(run).error_sq;
    sum += value;
    sum_sq += value * value;
    sigma_sum += propagate_uncertainty(run).error_sq_sigma;
  }
  const double mean = sum / n;
  const double sd = std::sqrt(std::max(0.0, (sum_sq - n * mean * mean) / (n - 1)));
  const double standard_error = sd / std::sqrt(static_cast<double>(n));
  const double propagated = sigma_sum / n;
  const double bias_in_se = std::abs(mean - exact) / standard_error;
  const double sd_mismatch = std::abs(sd - propagated) / propagated;

  std::ostringstream detail;
  detail << "mean " << mean << " vs exact " << exact << ", sd " << sd << " vs propagated " << propagated;
  return {upper_check("statistical mean", bias_in_se, 3.0, detail.str()),
          upper_check("statistical spread", sd_mismatch, 0.25, detail.str())};
}

std::vector<CheckResult> check_inequalities(const AuditConfig& config) {
  double worst_ozawa = std::numeric_limits<double>::infinity();
  double worst_branciard = std::numeric_limits<double>::infinity();
  double least_gap = std::numeric_limits<double>::infinity();
  for (const auto& row : edur_sweep(with(config.sweep, kAllThetaB, CorrectionMode::both))) {
    worst_ozawa = std::min(worst_ozawa, row.ozawa.slack);
    worst_branciard = std::min(worst_branciard, row.branciard_d.slack);
    if (row.branch == "optimal" && row.point.alpha <= 0.5) least_gap = std::min(least_gap, row.branciard_c.slack);
  }
  std::vector<CheckResult> out{
      {"Ozawa relation holds", worst_ozawa >= -1e-10, worst_ozawa, -1e-10, "min slack over all points"},
      {"Branciard relation with D holds", worst_branciard >= -1e-10, worst_branciard, -1e-10,
       "min slack over all points"}};
  if (std::isfinite(least_gap)) {
    out.push_back({"Branciard relation with C' not tight", least_gap > 0.01, least_gap, 0.01,
                   "min slack at optimal points, alpha <= 0.5"});
  }
  return out;
}

}  // namespace

bool AuditReport::passed() const {
  return std::all_of(checks.begin(), checks.end(), [](const CheckResult& c) { return c.passed; });
}

AuditReport run_audit(const AuditConfig& config) {
  // Fails fast on an empty grid before any work is done.
  config.sweep.theta_oa.points();

  AuditReport report;
  const auto append = [&](std::vector<CheckResult> checks) {
    for (auto& c : checks) report.checks.push_back(std::move(c));
  };
  report.checks.push_back(check_saturation(config));
  report.checks.push_back(check_anchors());
  report.checks.push_back(check_bounds(config));
  report.checks.push_back(check_mixture_independence(config));
  report.checks.push_back(check_oracle_equivalence(config));
  append(check_surface(config));
  append(check_mixing(config));
  append(check_statistics(config));
  append(check_inequalities(config));
  return report;
}

void print_report(std::ostream& out, const AuditReport& report) {
  for (const auto& c : report.checks) {
    out << (c.passed ? "PASS" : "FAIL") << "  " << c.name << "  residual=" << format_double(c.residual)
        << "  threshold=" << format_double(c.threshold);
    if (!c.detail.empty()) out << "  (" << c.detail << ")";
    out << '\n';
  }
  out << (report.passed() ? "audit passed" : "audit FAILED") << '\n';
}

}  // namespace edur
