#pragma once

#include <cstdint>
#include <iosfwd>
#include <numbers>
#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "edur/edur_metrics.hpp"
#include "edur/measurement.hpp"
#include "edur/polarimeter.hpp"

namespace edur {

// Inclusive grid start, start + step, ..., with the final point snapped onto
// `stop` when it lands within rounding of it.
struct AngleGrid {
  double start = 0.0;
  double stop = std::numbers::pi;
  double step = std::numbers::pi / 18.0;

  // PreconditionError on a non-positive step or an empty grid.
  std::vector<double> points() const;
};

enum class CorrectionMode { both, optimal, anti_optimal, none, explicit_target };

struct CorrectionChoice {
  CorrectionMode mode = CorrectionMode::both;
  std::optional<CorrectionTarget> target;  // explicit_target only
};

// Labelled apparatus variants to evaluate for one (theta_oa, theta_b).
struct ApparatusVariant {
  std::string branch;  // optimal, anti-optimal, none, explicit
  MeasurementFamily apparatus;
};

std::vector<ApparatusVariant> apparatus_variants(const AxisObservable& oa, const AxisObservable& b,
                                                 const CorrectionChoice& choice);

struct SweepConfig {
  AngleGrid theta_oa;
  std::vector<double> theta_b{std::numbers::pi / 2.0};
  std::vector<double> alphas{1.0, 0.75, 0.5, 0.25, 0.0};
  CorrectionChoice correction;
  CountSettings counts;
  // Surface command: fixed detuning and (vartheta, phi) grid step.
  double surface_theta_oa = 5.0 * std::numbers::pi / 18.0;
  double surface_step = std::numbers::pi / 36.0;
};

// Column-oriented result table emitted as CSV or JSON. Cells are numbers,
// integers or strings; column order is fixed by the producer.
using Cell = std::variant<double, std::int64_t, std::string>;

struct ResultTable {
  std::vector<std::string> columns;
  std::vector<std::vector<Cell>> rows;

  void add_row(std::vector<Cell> row);
};

void write_csv(std::ostream& out, const ResultTable& table);
// JSON array with one object per row; keys follow column order.
void write_json(std::ostream& out, const ResultTable& table);

struct ResultRow {
  EdurPoint point;
  std::string branch;
  double delta_a;
  double delta_b;
  BoundSet bounds;
  InequalityCheck ozawa;
  InequalityCheck branciard_d;
  InequalityCheck branciard_c;
  InequalityCheck tight;
  DisturbanceRange closed_form;
};

// Operator-level sweep over theta_b x theta_oa x alpha x branch, in that
// nesting order. A = sigma_z; states rho_x(alpha).
std::vector<ResultRow> edur_sweep(const SweepConfig& config);
ResultTable sweep_table(const std::vector<ResultRow>& rows);

struct ThreeStateRow {
  ThreeStateRun run;
  std::string branch;
  EdurPoint reconstructed;
  EdurPoint direct;
  ReconstructionUncertainty sigma;
  double preparation_fidelity;  // channel-prepared state vs rho_x(alpha)
};

// Three-state protocol on the same grid as edur_sweep, with counts per
// config.counts. Sampled runs derive their seed from (config seed, row
// index), so rows do not depend on evaluation order.
std::vector<ThreeStateRow> three_state_sweep(const SweepConfig& config);
ResultTable three_state_table(const std::vector<ThreeStateRow>& rows);
// Long-format intensities: run keys followed by state,m,b,intensity.
ResultTable three_state_counts_table(const std::vector<ThreeStateRow>& rows);

// Disturbance over the correction grid at config.surface_theta_oa for the
// first theta_b and first alpha, followed by the located min and max rows.
ResultTable surface_table(const SweepConfig& config);

}  // namespace edur
