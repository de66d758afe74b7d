#pragma once

#include <functional>
#include <iosfwd>
#include <string>
#include <vector>

#include "edur/polarimeter.hpp"
#include "edur/sweep.hpp"

namespace edur {

struct AuditConfig {
  // theta_oa grid, alphas and seed are taken from here; theta_b sets and
  // correction branches are fixed by the checks themselves.
  SweepConfig sweep;
  int statistical_trials = 200;
  double statistical_mean_counts = 1e4;
  double surface_step = std::numbers::pi / 72.0;
  // Reconstruction under audit; replaceable to verify the audit detects a
  // broken formula.
  std::function<EdurPoint(const ThreeStateRun&)> reconstruct = three_state_reconstruct;
};

struct CheckResult {
  std::string name;
  bool passed;
  double residual;   // worst observed value of the checked quantity
  double threshold;  // the limit it is compared against
  std::string detail;
};

struct AuditReport {
  std::vector<CheckResult> checks;

  bool passed() const;
};

AuditReport run_audit(const AuditConfig& config);

// One line per check: PASS/FAIL, name, residual, threshold, detail.
void print_report(std::ostream& out, const AuditReport& report);

}  // namespace edur
