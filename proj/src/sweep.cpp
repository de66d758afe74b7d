#include "edur/sweep.hpp"

#include <cmath>
#include <map>
#include <ostream>

#include <json.hpp>

#include "edur/count_io.hpp"
#include "edur/errors.hpp"

namespace edur {

namespace {

const AxisObservable kA(0.0);

std::string csv_cell(const Cell& cell) {
  if (const auto* d = std::get_if<double>(&cell)) return std::isnan(*d) ? std::string("nan") : format_double(*d);
  if (const auto* i = std::get_if<std::int64_t>(&cell)) return std::to_string(*i);
  return std::get<std::string>(cell);
}

nlohmann::json json_cell(const Cell& cell) {
  if (const auto* d = std::get_if<double>(&cell)) return std::isnan(*d) ? nlohmann::json(nullptr) : nlohmann::json(*d);
  if (const auto* i = std::get_if<std::int64_t>(&cell)) return *i;
  return std::get<std::string>(cell);
}

}  // namespace

std::vector<double> AngleGrid::points() const {
  if (!(step > 0.0) || !std::isfinite(step) || !std::isfinite(start) || !std::isfinite(stop)) {
    throw PreconditionError("angle grid: step must be positive and bounds finite");
  }
  if (start > stop + 1e-12) throw PreconditionError("angle grid: empty (start > stop)");
  std::vector<double> out;
  const double snap = 1e-9 * step;
  for (long k = 0;; ++k) {
    double x = start + static_cast<double>(k) * step;
    if (x > stop + snap) break;
    if (std::abs(x - stop) <= snap) x = stop;
    out.push_back(x);
  }
  return out;
}

std::vector<ApparatusVariant> apparatus_variants(const AxisObservable& oa, const AxisObservable& b,
                                                 const CorrectionChoice& choice) {
  std::vector<ApparatusVariant> out;
  const auto add_branch = [&](CorrectionBranch branch, const char* label) {
    out.push_back({label, corrected_apparatus(oa, branch_target(oa, b, branch))});
  };
  switch (choice.mode) {
    case CorrectionMode::both:
      add_branch(CorrectionBranch::optimal, "optimal");
      add_branch(CorrectionBranch::anti_optimal, "anti-optimal");
      break;
    case CorrectionMode::optimal:
      add_branch(CorrectionBranch::optimal, "optimal");
      break;
    case CorrectionMode::anti_optimal:
      add_branch(CorrectionBranch::anti_optimal, "anti-optimal");
      break;
    case CorrectionMode::none:
      out.push_back({"none", projective_apparatus(oa)});
      break;
    case CorrectionMode::explicit_target:
      if (!choice.target) throw PreconditionError("explicit correction requires a target");
      out.push_back({"explicit", corrected_apparatus(oa, *choice.target)});
      break;
  }
  return out;
}

void ResultTable::add_row(std::vector<Cell> row) {
  if (row.size() != columns.size()) throw PreconditionError("result table: row width does not match header");
  rows.push_back(std::move(row));
}

void write_csv(std::ostream& out, const ResultTable& table) {
  for (std::size_t i = 0; i < table.columns.size(); ++i) out << (i ? "," : "") << table.columns[i];
  out << '\n';
  for (const auto& row : table.rows) {
    for (std::size_t i = 0; i < row.size(); ++i) out << (i ? "," : "") << csv_cell(row[i]);
    out << '\n';
  }
}

void write_json(std::ostream& out, const ResultTable& table) {
  nlohmann::ordered_json rows = nlohmann::ordered_json::array();
  for (const auto& row : table.rows) {
    nlohmann::ordered_json obj = nlohmann::ordered_json::object();
    for (std::size_t i = 0; i < row.size(); ++i) obj[table.columns[i]] = json_cell(row[i]);
    rows.push_back(std::move(obj));
  }
  out << rows.dump(2) << '\n';
}

std::vector<ResultRow> edur_sweep(const SweepConfig& config) {
  const auto grid = config.theta_oa.points();
  std::vector<ResultRow> rows;
  for (double theta_b : config.theta_b) {
    const AxisObservable b(theta_b);
    for (double theta_oa : grid) {
      const AxisObservable oa(theta_oa);
      const auto variants = apparatus_variants(oa, b, config.correction);
      for (double alpha : config.alphas) {
        const QubitState state = rho_x(alpha);
        const BoundSet bound_set = bounds(kA, b, state);
        for (const auto& variant : variants) {
          ResultRow row{};
          row.point = error_disturbance(variant.apparatus, kA, b, state);
          row.point.theta_oa = theta_oa;
          row.point.alpha = alpha;
          row.branch = variant.branch;
          row.delta_a = standard_deviation(kA, state);
          row.delta_b = standard_deviation(b, state);
          row.bounds = bound_set;
          row.ozawa = check_ozawa(row.point, kA, b, state);
          row.branciard_d = check_branciard(row.point, kA, b, state, bound_set.d_ab);
          row.branciard_c = check_branciard(row.point, kA, b, state, bound_set.c_prime_ab);
          row.tight = check_tight_qubit(row.point);
          row.closed_form = disturbance_bounds_closed_form(theta_oa, b.theta());
          rows.push_back(std::move(row));
        }
      }
    }
  }
  return rows;
}

ResultTable sweep_table(const std::vector<ResultRow>& rows) {
  ResultTable table;
  table.columns = {"theta_oa",        "theta_b",          "alpha",           "branch",
                   "error",           "disturbance",      "error_sq",        "disturbance_sq",
                   "delta_a",         "delta_b",          "c_ab",            "c_prime_ab",
                   "d_ab",            "ozawa_lhs",        "ozawa_rhs",       "branciard_d_lhs",
                   "branciard_d_rhs", "branciard_c_lhs",  "branciard_c_rhs", "tight_lhs",
                   "saturation_residual", "eta_min_closed_form", "eta_max_closed_form"};
  for (const auto& r : rows) {
    table.add_row({r.point.theta_oa, r.point.theta_b, r.point.alpha, r.branch, r.point.error, r.point.disturbance,
                   r.point.error_sq, r.point.disturbance_sq, r.delta_a, r.delta_b, r.bounds.c_ab,
                   r.bounds.c_prime_ab, r.bounds.d_ab, r.ozawa.lhs, r.ozawa.rhs, r.branciard_d.lhs,
                   r.branciard_d.rhs, r.branciard_c.lhs, r.branciard_c.rhs, r.tight.lhs, r.tight.lhs - 4.0,
                   r.closed_form.min, r.closed_form.max});
  }
  return table;
}

std::vector<ThreeStateRow> three_state_sweep(const SweepConfig& config) {
  const auto grid = config.theta_oa.points();
  std::map<double, double> preparation_fidelity;
  for (double alpha : config.alphas) {
    if (!preparation_fidelity.contains(alpha)) {
      preparation_fidelity[alpha] = fidelity(rho_x(alpha), prepare_rho_x(alpha));
    }
  }

  std::vector<ThreeStateRow> rows;
  std::uint64_t row_index = 0;
  for (double theta_b : config.theta_b) {
    const AxisObservable b(theta_b);
    for (double theta_oa : grid) {
      const AxisObservable oa(theta_oa);
      const auto variants = apparatus_variants(oa, b, config.correction);
      for (double alpha : config.alphas) {
        const QubitState state = rho_x(alpha);
        for (const auto& variant : variants) {
          CountSettings settings = config.counts;
          settings.seed = derive_seed(config.counts.seed, row_index++, 0);
          ThreeStateRow row{simulate_three_state(variant.apparatus, kA, b, state, settings),
                            variant.branch,
                            {},
                            error_disturbance(variant.apparatus, kA, b, state),
                            {},
                            preparation_fidelity.at(alpha)};
          row.run.theta_oa = theta_oa;
          row.run.alpha = alpha;
          row.direct.theta_oa = theta_oa;
          row.direct.alpha = alpha;
          row.reconstructed = three_state_reconstruct(row.run);
          row.sigma = propagate_uncertainty(row.run);
          rows.push_back(std::move(row));
        }
      }
    }
  }
  return rows;
}

ResultTable three_state_table(const std::vector<ThreeStateRow>& rows) {
  ResultTable table;
  table.columns = {"theta_oa",       "theta_b",           "alpha",
                   "branch",         "counts_mode",       "mean_counts",
                   "prefactor_a",    "prefactor_b",       "error",
                   "disturbance",    "error_sq",          "disturbance_sq",
                   "error_sq_sigma", "disturbance_sq_sigma", "direct_error_sq",
                   "direct_disturbance_sq", "preparation_fidelity"};
  for (const auto& r : rows) {
    table.add_row({r.run.theta_oa, r.run.theta_b, r.run.alpha, r.branch,
                   std::string(r.run.settings.mode == CountMode::exact ? "exact" : "poisson"),
                   r.run.settings.mean_counts, r.run.error_set.prefactor->value(),
                   r.run.disturbance_set.prefactor->value(), r.reconstructed.error, r.reconstructed.disturbance,
                   r.reconstructed.error_sq, r.reconstructed.disturbance_sq, r.sigma.error_sq_sigma,
                   r.sigma.disturbance_sq_sigma, r.direct.error_sq, r.direct.disturbance_sq,
                   r.preparation_fidelity});
  }
  return table;
}

ResultTable three_state_counts_table(const std::vector<ThreeStateRow>& rows) {
  ResultTable table;
  table.columns = {"theta_oa", "theta_b", "alpha", "branch", "state", "m", "b", "intensity"};
  for (const auto& r : rows) {
    for (const auto& named : named_tables(r.run)) {
      for (std::size_t k = 0; k < 4; ++k) {
        const auto [m, b] = CountTable::kLabels[k];
        table.add_row({r.run.theta_oa, r.run.theta_b, r.run.alpha, r.branch, named.state, std::int64_t{m},
                       std::int64_t{b}, named.table.entries()[k]});
      }
    }
  }
  return table;
}

ResultTable surface_table(const SweepConfig& config) {
  if (config.theta_b.empty() || config.alphas.empty()) {
    throw PreconditionError("surface: need at least one theta_b and one alpha");
  }
  const AxisObservable b(config.theta_b.front());
  const CorrectionSurface result =
      optimize_correction(config.surface_theta_oa, b, rho_x(config.alphas.front()), config.surface_step);

  ResultTable table;
  table.columns = {"kind", "theta_oa", "theta_b", "vartheta", "phi", "disturbance", "eta_min_closed_form",
                   "eta_max_closed_form"};
  const auto add = [&](const char* kind, double vartheta, double phi, double disturbance) {
    table.add_row({std::string(kind), config.surface_theta_oa, b.theta(), vartheta, phi, disturbance,
                   result.closed_form.min, result.closed_form.max});
  };
  for (const auto& p : result.surface) add("grid", p.vartheta, p.phi, p.disturbance);
  add("min", result.min.target.vartheta(), result.min.target.phi(), result.min.disturbance);
  add("max", result.max.target.vartheta(), result.max.target.phi(), result.max.disturbance);
  return table;
}

}  // namespace edur
