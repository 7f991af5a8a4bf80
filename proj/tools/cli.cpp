#include "cli.hpp"

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <future>
#include <iostream>
#include <optional>
#include <sstream>

#include <fmt/format.h>

#include "CLI11.hpp"
#include "json.hpp"
#include "polytrope/analytic.hpp"
#include "polytrope/emden.hpp"
#include "polytrope/homology.hpp"
#include "polytrope/io.hpp"
#include "polytrope/phase_plane.hpp"

namespace polytrope::cli {
namespace {

using nlohmann::ordered_json;

struct Settings {
  IntegrationOptions integration;
  PhaseOptions phase;
  std::string format = "csv";
  std::string out;
};

struct ArgumentError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

int exit_code_for(ErrorCode code) {
  switch (code) {
    case ErrorCode::InvalidArgument:
    case ErrorCode::UndefinedExponent:
    case ErrorCode::UnsupportedIndex:
    case ErrorCode::Domain:
    case ErrorCode::LaunchTooLarge:
    case ErrorCode::OutOfRange:
    case ErrorCode::MissingSurface:
      return kArgumentError;
    default:
      return kNumericalFailure;
  }
}

// Compact label for file names: 0.25 -> "0.25", 4 -> "4".
std::string label(double x) { return fmt::format("{}", x); }

std::ofstream open_file(const std::filesystem::path& path) {
  if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path());
  std::ofstream os(path, std::ios::binary);
  if (!os) throw ArgumentError("cannot open " + path.string() + " for writing");
  return os;
}

// Writes to `path`, or to `fallback` when the path is empty.
template <typename Writer>
void emit(const std::string& path, std::ostream& fallback, Writer&& write) {
  if (path.empty()) {
    write(fallback);
    return;
  }
  auto os = open_file(path);
  write(os);
}

void dump_json(std::ostream& os, const ordered_json& j) { os << j.dump(2) << '\n'; }

// "dir/" or an existing directory means files go inside it; anything else is a name prefix.
std::filesystem::path prefix_path(const std::string& out, const std::string& fallback) {
  if (out.empty()) return fallback;
  std::filesystem::path p(out);
  if (out.back() == '/' || std::filesystem::is_directory(p)) return p / fallback;
  return p;
}

std::filesystem::path with_suffix(const std::filesystem::path& prefix, const std::string& suffix) {
  return prefix.string() + suffix;
}

const char* extension(const Settings& s) { return s.format == "json" ? ".json" : ".csv"; }

// ---- solve ----------------------------------------------------------------

int cmd_solve(double n, const Settings& s, std::ostream& out) {
  const PolytropeIndex index(n);
  const SolutionProfile profile = integrate_emden(index, s.integration);
  if (s.format == "json") {
    emit(s.out, out, [&](std::ostream& os) { dump_json(os, io::profile_json(profile)); });
    return kSuccess;
  }
  emit(s.out, out, [&](std::ostream& os) { io::write_profile_csv(os, profile); });
  if (!s.out.empty()) {
    auto sidecar = std::filesystem::path(s.out).replace_extension(".json");
    auto os = open_file(sidecar);
    dump_json(os, io::summary_json(profile));
  }
  return kSuccess;
}

// ---- phase ----------------------------------------------------------------

int cmd_phase(double n, const std::vector<std::string>& kinds, double perturb, double t_span,
              double v_boundary, const Settings& s, std::ostream& out) {
  const PolytropeIndex index(n);
  if (!(perturb > 0.0 && perturb < 1.0)) throw ArgumentError("--perturb must lie in (0, 1)");
  const auto prefix = prefix_path(s.out, "phase_n" + label(n));
  ordered_json report;
  report["n"] = n;
  report["trajectories"] = ordered_json::array();
  for (const auto& kind : kinds) {
    Trajectory traj;
    std::optional<double> factor;
    if (kind == "e") {
      traj = integrate_separatrix(index, t_span, s.phase);
    } else if (kind == "f" || kind == "m") {
      // A lower boundary omega leaves mass for a central singularity; a higher one
      // exhausts the mass before the centre.
      factor = kind == "f" ? 1.0 - perturb : 1.0 + perturb;
      const BoundaryStart b = perturbed_boundary(index, *factor, v_boundary, s.phase);
      traj = integrate_irregular(index, b.start, t_span, s.phase, b.t);
    } else {
      throw ArgumentError("unknown trajectory kind '" + kind + "' (expected e, f or m)");
    }
    const auto path = with_suffix(prefix, "_" + kind + extension(s));
    auto os = open_file(path);
    if (s.format == "json") {
      dump_json(os, io::trajectory_json(traj));
    } else {
      io::write_trajectory_csv(os, traj);
    }
    ordered_json entry = {{"kind", kind},
                          {"file", path.string()},
                          {"class", to_string(traj.solution_class)},
                          {"inner_end", to_string(traj.inner_end)},
                          {"outer_end", to_string(traj.outer_end)}};
    if (factor) entry["omega_factor"] = *factor;
    if (!traj.points.empty() && traj.points.back().p.u > 0.0 && traj.points.back().p.v > 0.0 &&
        index.omega_tilde()) {
      entry["terminal_omega"] = omega(index, traj.points.back().p);
    }
    report["trajectories"].push_back(std::move(entry));
  }
  auto os = open_file(with_suffix(prefix, "_critical.json"));
  dump_json(os, io::critical_points_json(index));
  dump_json(out, report);
  return kSuccess;
}

// ---- scale ----------------------------------------------------------------

int cmd_scale(double n, const std::vector<double>& factors, const std::vector<double>& levels,
              const Settings& s, std::ostream& out) {
  const PolytropeIndex index(n);
  const double w = index.require_omega_tilde();
  const SolutionProfile base = integrate_emden(index, s.integration);
  const auto prefix = prefix_path(s.out, "scale_n" + label(n));

  std::vector<std::pair<double, double>> level_xi;
  for (double level : levels) level_xi.emplace_back(level, xi_at_v(base, level));

  ordered_json report;
  report["n"] = n;
  report["factors"] = ordered_json::array();
  for (double A : factors) {
    const SolutionProfile mapped = homology_map(A, index, base);
    const auto path = with_suffix(prefix, "_A" + label(A) + extension(s));
    auto os = open_file(path);
    if (s.format == "json") {
      dump_json(os, io::profile_json(mapped));
    } else {
      io::write_profile_csv(os, mapped);
    }
    ordered_json entry;
    entry["A"] = A;
    entry["file"] = path.string();
    entry["origin_value"] = std::pow(A, w);
    if (mapped.surface) entry["xi1"] = mapped.surface->xi1;
    entry["levels"] = ordered_json::array();
    for (const auto& [level, xi] : level_xi) {
      const HomologousPair pair = homologous_points(A, base, xi / A);
      entry["levels"].push_back(
          {{"v_level", level},
           {"xi", pair.xi},
           {"original", {{"u", pair.original.u}, {"v", pair.original.v}}},
           {"rescaled", {{"u", pair.rescaled.u}, {"v", pair.rescaled.v}}}});
    }
    report["factors"].push_back(std::move(entry));
  }
  auto os = open_file(with_suffix(prefix, "_homology.json"));
  dump_json(os, report);
  dump_json(out, report);
  return kSuccess;
}

// ---- summary --------------------------------------------------------------

int cmd_summary(const std::vector<double>& ns, const Settings& s, std::ostream& out) {
  std::vector<PolytropeIndex> indices;
  for (double n : ns) indices.emplace_back(n);
  std::vector<std::future<SolutionProfile>> jobs;
  jobs.reserve(indices.size());
  for (const auto& index : indices) {
    jobs.push_back(std::async(std::launch::async, [index, opts = s.integration] {
      return integrate_emden(index, opts);
    }));
  }
  std::vector<SolutionProfile> profiles;
  for (auto& job : jobs) profiles.push_back(job.get());
  emit(s.out, out, [&](std::ostream& os) {
    if (s.format == "json") {
      dump_json(os, io::summary_table_json(profiles));
    } else {
      io::write_summary_csv(os, profiles);
    }
  });
  return kSuccess;
}

// ---- critical -------------------------------------------------------------

int cmd_critical(const std::vector<double>& ns, const Settings& s, std::ostream& out) {
  emit(s.out, out, [&](std::ostream& os) {
    if (s.format == "json") {
      ordered_json all = ordered_json::array();
      for (double n : ns) all.push_back(io::critical_points_json(PolytropeIndex(n)));
      dump_json(os, all);
      return;
    }
    os << "n,label,u,v,physical\n";
    for (double n : ns) {
      for (const auto& cp : critical_points(PolytropeIndex(n))) {
        os << io::format_real(n) << ',' << cp.label << ',' << io::format_real(cp.p.u) << ','
           << io::format_real(cp.p.v) << ',' << (cp.physical ? "true" : "false") << '\n';
      }
    }
  });
  return kSuccess;
}

// ---- oracle-check ---------------------------------------------------------

struct OracleCase {
  std::string name;
  double error = 0.0;
  double tolerance = 0.0;
  [[nodiscard]] bool pass() const { return error <= tolerance; }
};

std::vector<OracleCase> oracle_suite(double n, double tolerance, const Settings& s) {
  const PolytropeIndex index(n);
  IntegrationOptions opts = s.integration;
  double upper = 0.0;
  if (n == 5.0) {
    opts.max_xi = 50.0;
    upper = 50.0;
  } else {
    upper = 0.99 * analytic::xi1(n);
  }
  const SolutionProfile profile = integrate_emden(index, opts);
  double theta_err = 0.0;
  double dtheta_err = 0.0;
  for (const auto& sample : profile.samples) {
    if (sample.xi > upper) break;
    const RadialState exact = analytic::theta(n, sample.xi);
    theta_err = std::max(theta_err, std::abs(sample.theta - exact.theta));
    dtheta_err = std::max(dtheta_err, std::abs(sample.dtheta - exact.dtheta));
  }
  std::vector<OracleCase> cases = {{"theta_sup_norm", theta_err, tolerance},
                                   {"dtheta_sup_norm", dtheta_err, tolerance}};
  if (n == 5.0) {
    cases.push_back({"no_surface", profile.surface ? 1.0 : 0.0, 0.0});
  } else {
    const double xi1 = profile.surface ? profile.surface->xi1 : std::numeric_limits<double>::infinity();
    cases.push_back({"xi1", std::abs(xi1 - analytic::xi1(n)), tolerance});
    const double mc = profile.surface ? profile.surface->mass_coeff : 0.0;
    cases.push_back({"mass_coeff", std::abs(mc - analytic::mass(n, analytic::xi1(n))), tolerance});
  }
  return cases;
}

int cmd_oracle_check(double tolerance, const Settings& s, std::ostream& out) {
  if (!(tolerance > 0.0)) throw ArgumentError("--tol must be > 0");
  ordered_json report;
  report["tolerance"] = tolerance;
  report["suites"] = ordered_json::array();
  bool all = true;
  for (double n : {0.0, 1.0, 5.0}) {
    const auto cases = oracle_suite(n, tolerance, s);
    ordered_json suite;
    suite["n"] = n;
    suite["cases"] = ordered_json::array();
    bool ok = true;
    for (const auto& c : cases) {
      suite["cases"].push_back(
          {{"name", c.name}, {"error", c.error}, {"tolerance", c.tolerance}, {"pass", c.pass()}});
      ok = ok && c.pass();
    }
    suite["pass"] = ok;
    all = all && ok;
    report["suites"].push_back(std::move(suite));
  }
  report["pass"] = all;
  emit(s.out, out, [&](std::ostream& os) { dump_json(os, report); });
  return all ? kSuccess : kCheckFailure;
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Polytropic stellar models: Lane-Emden solutions, phase plane and homology.",
               "polytrope"};
  app.require_subcommand(1, 1);
  app.fallthrough();
  app.set_config("--config", "", "key=value file with default settings");

  Settings s;
  app.add_option("--max-xi", s.integration.max_xi, "outer integration limit")
      ->capture_default_str();
  app.add_option("--rel-tol", s.integration.rel_tol, "relative tolerance")->capture_default_str();
  app.add_option("--abs-tol", s.integration.abs_tol, "absolute tolerance")->capture_default_str();
  app.add_option("--launch-xi", s.integration.launch_xi, "series launch radius")
      ->capture_default_str();
  app.add_option("--samples", s.integration.sample_count, "output samples per profile")
      ->capture_default_str();
  app.add_option("--format", s.format, "output format")
      ->check(CLI::IsMember({"csv", "json"}))
      ->capture_default_str();
  app.add_option("--out", s.out, "output file, or prefix/directory for multi-file commands");

  double n = 0.0;
  std::vector<double> n_list;
  auto* solve = app.add_subcommand("solve", "regular solution theta(xi) for one index");
  solve->add_option("--n", n, "polytropic index")->required();

  std::vector<std::string> kinds = {"e"};
  double perturb = 0.1;
  double t_span = 60.0;
  double v_boundary = 10.0;
  auto* phase = app.add_subcommand("phase", "phase-plane trajectories and critical points");
  phase->add_option("--n", n, "polytropic index")->required();
  phase->add_option("--kinds", kinds, "trajectory kinds among e, f, m")->delimiter(',');
  phase->add_option("--perturb", perturb, "relative omega perturbation for f and m")
      ->capture_default_str();
  phase->add_option("--t-span", t_span, "log-radius span for each direction")
      ->capture_default_str();
  phase->add_option("--v-boundary", v_boundary, "separatrix v at which f and m start")
      ->capture_default_str();

  std::vector<double> factors = {4.0, 1.0, 0.25};
  std::vector<double> levels = {0.081, 0.25, 2.3};
  auto* scale = app.add_subcommand("scale", "homology-rescaled profiles and homologous points");
  scale->add_option("--n", n, "polytropic index")->required();
  scale->add_option("--factors", factors, "scale factors A")->delimiter(',');
  scale->add_option("--levels", levels, "v levels for the homologous-point report")
      ->delimiter(',');

  n_list = {0.0, 1.0, 1.5, 2.0, 3.0, 4.0, 4.5, 4.9, 4.99, 5.0};
  auto* summary = app.add_subcommand("summary", "surface constants for a list of indices");
  summary->add_option("--n-list", n_list, "indices")->delimiter(',');

  std::optional<double> critical_n;
  std::vector<double> critical_list;
  auto* critical = app.add_subcommand("critical", "critical points of the (u, v) flow");
  auto* cn = critical->add_option("--n", critical_n, "polytropic index");
  critical->add_option("--n-list", critical_list, "indices")->delimiter(',')->excludes(cn);

  double tolerance = tol::integration;
  auto* oracle = app.add_subcommand("oracle-check", "compare against closed-form solutions");
  oracle->add_option("--tol", tolerance, "absolute tolerance for every case")
      ->capture_default_str();

  try {
    std::vector<std::string> reversed(args.rbegin(), args.rend());
    app.parse(reversed);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return kSuccess;
  } catch (const CLI::CallForAllHelp&) {
    out << app.help("", CLI::AppFormatMode::All);
    return kSuccess;
  } catch (const CLI::ParseError& e) {
    err << "error: " << e.what() << '\n';
    return kArgumentError;
  }

  try {
    s.integration.validate();
    if (*solve) return cmd_solve(n, s, out);
    if (*phase) return cmd_phase(n, kinds, perturb, t_span, v_boundary, s, out);
    if (*scale) return cmd_scale(n, factors, levels, s, out);
    if (*summary) return cmd_summary(n_list, s, out);
    if (*critical) {
      std::vector<double> ns = critical_list;
      if (critical_n) ns.insert(ns.begin(), *critical_n);
      if (ns.empty()) throw ArgumentError("critical needs --n or --n-list");
      return cmd_critical(ns, s, out);
    }
    if (*oracle) return cmd_oracle_check(tolerance, s, out);
  } catch (const ArgumentError& e) {
    err << "error: " << e.what() << '\n';
    return kArgumentError;
  } catch (const Error& e) {
    err << "error: " << e.what() << '\n';
    return exit_code_for(e.code());
  } catch (const std::filesystem::filesystem_error& e) {
    err << "error: " << e.what() << '\n';
    return kArgumentError;
  }
  return kArgumentError;
}

}  // namespace polytrope::cli
