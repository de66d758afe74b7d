#include "cli.hpp"

#include <CLI11.hpp>

#include <algorithm>
#include <cctype>
#include <fstream>
#include <functional>
#include <iostream>
#include <numbers>
#include <optional>
#include <ostream>
#include <vector>

#include "edur/audit.hpp"
#include "edur/count_io.hpp"
#include "edur/errors.hpp"
#include "edur/sweep.hpp"

namespace edur::cli {

namespace {

constexpr double kPi = std::numbers::pi;

struct Options {
  std::string theta_oa;
  std::vector<std::string> theta_b;
  std::vector<std::string> alpha;
  std::string step;
  std::string correction = "both";
  std::string counts = "exact";
  std::uint64_t seed = 0;
  std::string out;
  std::string counts_out;
  std::string format = "csv";
  bool degrees = false;
  int trials = 200;
  bool inject_fault = false;
};

std::string lower(std::string s) {
  std::transform(s.begin(), s.end(), s.begin(), [](unsigned char c) { return std::tolower(c); });
  return s;
}

std::vector<std::string> split(const std::string& s, char sep) {
  std::vector<std::string> out;
  std::size_t begin = 0;
  while (true) {
    const std::size_t end = s.find(sep, begin);
    out.push_back(s.substr(begin, end - begin));
    if (end == std::string::npos) return out;
    begin = end + 1;
  }
}

double parse_number(const std::string& text, const char* what) {
  try {
    return parse_double(text);
  } catch (const FormatError&) {
    throw PreconditionError(std::string(what) + ": '" + text + "' is not a number");
  }
}

// theta_oa: a single angle or start:stop[:step].
AngleGrid parse_grid(const Options& o, const AngleGrid& defaults) {
  AngleGrid grid = defaults;
  if (!o.step.empty()) grid.step = parse_angle(o.step, o.degrees);
  if (o.theta_oa.empty()) return grid;
  const auto parts = split(o.theta_oa, ':');
  if (parts.size() == 1) {
    grid.start = grid.stop = parse_angle(parts[0], o.degrees);
  } else if (parts.size() == 2 || parts.size() == 3) {
    grid.start = parse_angle(parts[0], o.degrees);
    grid.stop = parse_angle(parts[1], o.degrees);
    if (parts.size() == 3) grid.step = parse_angle(parts[2], o.degrees);
  } else {
    throw PreconditionError("--theta-oa: expected ANGLE or START:STOP[:STEP]");
  }
  return grid;
}

CorrectionChoice parse_correction(const Options& o) {
  const std::string c = lower(o.correction);
  if (c == "both") return {CorrectionMode::both, {}};
  if (c == "optimal") return {CorrectionMode::optimal, {}};
  if (c == "anti-optimal") return {CorrectionMode::anti_optimal, {}};
  if (c == "none") return {CorrectionMode::none, {}};
  if (c.rfind("explicit:", 0) == 0) {
    const auto parts = split(c.substr(9), ',');
    if (parts.size() != 2) throw PreconditionError("--correction explicit:VARTHETA,PHI needs two angles");
    return {CorrectionMode::explicit_target,
            CorrectionTarget(parse_angle(parts[0], o.degrees), parse_angle(parts[1], o.degrees))};
  }
  throw PreconditionError("--correction: unknown mode '" + o.correction + "'");
}

CountSettings parse_counts(const Options& o) {
  CountSettings s;
  s.seed = o.seed;
  const std::string c = lower(o.counts);
  if (c == "exact") {
    s.mode = CountMode::exact;
  } else if (c.rfind("poisson", 0) == 0) {
    // poisson, poisson:N or poisson(N)
    s.mode = CountMode::poisson;
    std::string n = c.substr(7);
    if (!n.empty() && n.front() == ':') {
      n.erase(0, 1);
    } else if (n.size() >= 2 && n.front() == '(' && n.back() == ')') {
      n = n.substr(1, n.size() - 2);
    } else if (!n.empty()) {
      throw PreconditionError("--counts: expected exact, poisson, poisson:N or poisson(N)");
    }
    if (!n.empty()) s.mean_counts = parse_number(n, "--counts");
    if (!(s.mean_counts > 0.0)) throw PreconditionError("--counts: mean counts must be positive");
  } else {
    throw PreconditionError("--counts: expected exact, poisson, poisson:N or poisson(N)");
  }
  return s;
}

SweepConfig build_config(const Options& o, const AngleGrid& grid_defaults) {
  SweepConfig config;
  config.theta_oa = parse_grid(o, grid_defaults);
  if (!o.theta_b.empty()) {
    config.theta_b.clear();
    for (const auto& t : o.theta_b) config.theta_b.push_back(parse_angle(t, o.degrees));
  }
  if (!o.alpha.empty()) {
    config.alphas.clear();
    for (const auto& a : o.alpha) {
      const double v = parse_number(a, "--alpha");
      if (!(v >= 0.0 && v <= 1.0)) throw PreconditionError("--alpha: values must lie in [0, 1]");
      config.alphas.push_back(v);
    }
  }
  config.correction = parse_correction(o);
  config.counts = parse_counts(o);
  return config;
}

void emit(std::ostream& out, const ResultTable& table, const std::string& format) {
  if (format == "json") {
    write_json(out, table);
  } else {
    write_csv(out, table);
  }
}

// Writes to `path`, or to `fallback` when path is empty.
void with_output(const std::string& path, std::ostream& fallback, const std::function<void(std::ostream&)>& body) {
  if (path.empty()) {
    body(fallback);
    return;
  }
  std::ofstream file(path, std::ios::binary);
  if (!file) throw std::ios_base::failure("cannot open '" + path + "' for writing");
  body(file);
  file.flush();
  if (!file) throw std::ios_base::failure("write to '" + path + "' failed");
}

EdurPoint faulty_reconstruct(const ThreeStateRun& run) {
  ThreeStateTerms terms = three_state_terms(run);
  // Sign error in the conditioned term: 2 + 4 p c + r + s.
  terms.error.conditioned = -terms.error.conditioned;
  return make_point(squared_from_terms(terms.error), squared_from_terms(terms.disturbance), run.theta_oa,
                    run.theta_b, run.alpha);
}

void add_common(CLI::App& app, Options& o) {
  app.add_option("--theta-oa", o.theta_oa, "Detuning angle: ANGLE or START:STOP[:STEP]");
  app.add_option("--theta-b", o.theta_b, "Angles of B in the z-y plane")->delimiter(',');
  app.add_option("--alpha", o.alpha, "Mixture parameters in [0, 1]")->delimiter(',');
  app.add_option("--step", o.step, "Grid step (theta_oa grid; correction grid for surface)");
  app.add_option("--correction", o.correction, "both | optimal | anti-optimal | none | explicit:VARTHETA,PHI");
  app.add_option("--counts", o.counts, "exact | poisson[:N] | poisson(N)");
  app.add_option("--seed", o.seed, "Seed for sampled counts");
  app.add_option("--out", o.out, "Output file (default: stdout)");
  app.add_option("--format", o.format, "Output format")->check(CLI::IsMember({"csv", "json"}));
  app.add_flag("--degrees", o.degrees, "Read plain angle values as degrees");
}

}  // namespace

double parse_angle(const std::string& raw, bool degrees) {
  std::string text;
  for (char c : lower(raw)) {
    if (!std::isspace(static_cast<unsigned char>(c))) text.push_back(c);
  }
  const std::size_t pi = text.find("pi");
  if (pi == std::string::npos) {
    const double v = parse_number(text, "angle");
    return degrees ? v * kPi / 180.0 : v;
  }
  if (degrees) throw PreconditionError("angle '" + raw + "': pi multiples are radians; drop --degrees");
  std::string coeff = text.substr(0, pi);
  if (!coeff.empty() && coeff.back() == '*') coeff.pop_back();
  double value = kPi;
  if (coeff == "-") {
    value = -kPi;
  } else if (!coeff.empty() && coeff != "+") {
    value *= parse_number(coeff, "angle");
  }
  const std::string rest = text.substr(pi + 2);
  if (!rest.empty()) {
    if (rest.front() != '/') throw PreconditionError("angle '" + raw + "': expected /DIVISOR after pi");
    const double divisor = parse_number(rest.substr(1), "angle");
    if (divisor == 0.0) throw PreconditionError("angle '" + raw + "': division by zero");
    value /= divisor;
  }
  return value;
}

int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Error-disturbance simulator for successive spin-1/2 measurements"};
  app.set_config("--config", "", "key=value file with option defaults; flags override it");
  app.require_subcommand(1);

  Options o;
  add_common(app, o);
  app.fallthrough();

  auto* surface = app.add_subcommand("surface", "Disturbance over correction targets at fixed theta_oa");
  auto* sweep = app.add_subcommand("sweep", "Error, disturbance and bounds over theta_oa, theta_b, alpha");
  auto* three = app.add_subcommand("three-state", "Simulated intensities and three-state reconstruction");
  three->add_option("--counts-out", o.counts_out, "Intensity table file (default: OUT.counts.FORMAT)");
  auto* audit = app.add_subcommand("audit", "Run every consistency and inequality check");
  audit->add_option("--trials", o.trials, "Seeds for the statistical check")->check(CLI::PositiveNumber);
  audit->add_flag("--inject-fault", o.inject_fault)->group("");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    if (e.get_exit_code() == 0) {
      app.exit(e, out, err);
      return kExitOk;
    }
    err << "error: " << e.what() << "\n" << "run with --help for usage\n";
    return kExitUsage;
  }

  try {
    if (surface->parsed()) {
      SweepConfig config = build_config(o, AngleGrid{});
      if (!o.theta_oa.empty()) {
        if (config.theta_oa.start != config.theta_oa.stop) {
          throw PreconditionError("surface: --theta-oa takes a single angle");
        }
        config.surface_theta_oa = config.theta_oa.start;
      }
      if (!o.step.empty()) config.surface_step = config.theta_oa.step;
      if (!(config.surface_theta_oa >= 0.0 && config.surface_theta_oa <= kPi)) {
        throw PreconditionError("surface: theta_oa must lie in [0, pi]");
      }
      const ResultTable table = surface_table(config);
      with_output(o.out, out, [&](std::ostream& s) { emit(s, table, o.format); });
      return kExitOk;
    }
    if (sweep->parsed()) {
      const SweepConfig config = build_config(o, AngleGrid{});
      const ResultTable table = sweep_table(edur_sweep(config));
      with_output(o.out, out, [&](std::ostream& s) { emit(s, table, o.format); });
      return kExitOk;
    }
    if (three->parsed()) {
      const SweepConfig config = build_config(o, AngleGrid{});
      const auto rows = three_state_sweep(config);
      const ResultTable table = three_state_table(rows);
      const ResultTable counts = three_state_counts_table(rows);
      with_output(o.out, out, [&](std::ostream& s) { emit(s, table, o.format); });
      std::string counts_path = o.counts_out;
      if (counts_path.empty() && !o.out.empty()) counts_path = o.out + ".counts." + o.format;
      if (!counts_path.empty()) {
        with_output(counts_path, out, [&](std::ostream& s) { emit(s, counts, o.format); });
      }
      return kExitOk;
    }
    // audit
    AuditConfig config;
    config.sweep = build_config(o, AngleGrid{});
    config.statistical_trials = o.trials;
    if (config.sweep.counts.mode == CountMode::poisson) {
      config.statistical_mean_counts = config.sweep.counts.mean_counts;
    }
    if (o.inject_fault) config.reconstruct = faulty_reconstruct;
    const AuditReport report = run_audit(config);
    with_output(o.out, out, [&](std::ostream& s) { print_report(s, report); });
    return report.passed() ? kExitOk : kExitAuditFailed;
  } catch (const PreconditionError& e) {
    err << "error: " << e.what() << "\n";
    return kExitUsage;
  } catch (const RangeError& e) {
    err << "error: " << e.what() << "\n";
    return kExitUsage;
  } catch (const std::ios_base::failure& e) {
    err << "error: " << e.what() << "\n";
    return kExitUsage;
  } catch (const Error& e) {
    // Numerical failures inside the model.
    err << "error: " << e.what() << "\n";
    return kExitAuditFailed;
  }
}

}  // namespace edur::cli
