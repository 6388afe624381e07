#include "scalerk/cli.hpp"

#include "scalerk/config.hpp"
#include "scalerk/report.hpp"

#include <CLI11.hpp>

#include <algorithm>
#include <cmath>
#include <fstream>
#include <map>
#include <optional>

namespace scalerk {
namespace {

class OutputError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct Overrides {
  std::string config_path;
  std::map<std::string, std::string> values;
  std::string name;
  bool fast = false;
};

void register_options(CLI::App* sub, Overrides& ov) {
  sub->add_option("--config", ov.config_path, "structured-text configuration file (key = value lines)");
  for (const auto& k : Config::registry()) {
    auto* opt = sub->add_option("--" + k.key, ov.values[k.key], k.help);
    opt->default_str(k.default_value);
  }
  sub->add_option("--name", ov.name, "alias of --tableau.name");
  sub->add_flag("--fast", ov.fast, "fast profile (grid N=256)");
}

Config effective_config(CLI::App* sub, const Overrides& ov) {
  Config cfg;
  if (!ov.config_path.empty()) cfg.load_file(ov.config_path);
  for (const auto& k : Config::registry())
    if (sub->count("--" + k.key) > 0) cfg.set(k.key, ov.values.at(k.key));
  if (sub->count("--name") > 0) cfg.set("tableau.name", ov.name);
  if (ov.fast) cfg.set("study.fast", "true");
  return cfg;
}

std::ofstream open_output(const std::string& path) {
  std::ofstream os(path, std::ios::binary);
  if (!os) throw OutputError("cannot open output file '" + path + "'");
  return os;
}

OutputHeader header_for(const Config& cfg) {
  OutputHeader h;
  h.version = kVersion;
  h.config_hash = cfg.hash();
  h.config_dump = cfg.dump();
  return h;
}

void write_config_if_requested(const Config& cfg) {
  const auto& path = cfg.get("output.config");
  if (path.empty()) return;
  auto os = open_output(path);
  os << "# scalerk " << kVersion << " config_hash=" << cfg.hash() << "\n" << cfg.dump();
}

std::vector<double> checked_eps(const Config& cfg) {
  auto eps = cfg.get_list("bounds.eps");
  if (eps.empty()) throw ConfigError("bounds.eps must not be empty");
  for (double e : eps)
    if (!(e >= 0.0 && e <= 1.0)) throw ConfigError("bounds.eps entries must lie in [0,1]");
  return eps;
}

int cmd_check_tableau(const Config& cfg, std::ostream& out) {
  const auto tab = tableau_from(cfg);
  const auto rep = check_a_stability(tab);
  write_astability_report(out, rep);
  return rep.pass() ? kExitOk : kExitCheckFailed;
}

int cmd_integrate(const Config& cfg, std::ostream& out, std::ostream& err) {
  const auto spec = problem_spec_from(cfg);
  const auto tab = tableau_from(cfg);
  const auto solver = solver_from(cfg);
  const double h = cfg.get_double("integrate.h");
  const int steps = cfg.get_int("integrate.steps");
  const int stride = cfg.get_int("integrate.stride");
  const double ell = cfg.get_double("integrate.ell");
  const double eps = cfg.get_double("study.epsilon");
  if (!(h > 0)) throw ConfigError("integrate.h must be positive");
  if (steps < 0) throw ConfigError("integrate.steps must be non-negative");
  if (stride < 1) throw ConfigError("integrate.stride must be at least 1");
  if (ell < 0) throw ConfigError("integrate.ell must be non-negative");

  const auto problem = build_problem<double>(spec);
  const auto u0 = initial_data(problem, ell, eps);
  Trajectory<double> traj;
  try {
    traj = RungeKuttaStepper<double>(problem, tab, h, solver).integrate(u0, steps, stride);
  } catch (const StageSolveError& e) {
    err << "integrate: stage solver failed at " << e.what() << "\n";
    return kExitCheckFailed;
  }
  std::vector<int> index;
  for (double t : traj.times) index.push_back(static_cast<int>(std::lround(t / h)));
  const auto header = header_for(cfg);
  {
    auto os = open_output(cfg.get("output.trajectory"));
    write_trajectory_csv(os, traj, index, header);
  }
  if (!cfg.get("output.coeffs").empty()) {
    auto os = open_output(cfg.get("output.coeffs"));
    write_coefficient_dump(os, traj, index, header);
  }
  out << "integrated " << steps << " steps of h=" << format_double(h) << " with " << tab.name << "\n";
  out << "  Y-norm: initial " << format_double(y_norm(traj.states.front())) << ", final "
      << format_double(y_norm(traj.states.back())) << "\n";
  return kExitOk;
}

int cmd_study(const Config& cfg, std::ostream& out) {
  const auto scfg = study_from(cfg);
  const auto result = run_study(scfg);
  const auto header = header_for(cfg);
  {
    auto os = open_output(cfg.get("output.csv"));
    write_study_csv(os, result, header);
  }
  if (!cfg.get("output.json").empty()) {
    auto os = open_output(cfg.get("output.json"));
    write_study_json(os, result, header, scfg.keep_step_errors);
  }
  if (!cfg.get("output.plot").empty()) {
    auto os = open_output(cfg.get("output.plot"));
    write_plot_data(os, result, header);
  }
  out << "ell     q_est      q_pred\n";
  for (const auto& o : result.orders) {
    char line[96];
    std::snprintf(line, sizeof line, "%-7.3g %-10.4f %-10.4f%s\n", o.ell, o.q_est, o.q_pred, o.ok ? "" : "  failed");
    out << line;
  }
  out << "runtime " << format_double(result.runtime_seconds) << " s, stage iterations mean "
      << format_double(result.solver_iters_mean) << " max " << result.solver_iters_max << "\n";
  for (const auto& r : result.rows)
    if (!r.ok) out << "failed ell=" << format_double(r.ell) << " h=" << format_double(r.h) << ": " << r.failure << "\n";
  return result.complete() ? kExitOk : kExitCheckFailed;
}

int cmd_project(const Config& cfg, std::ostream& out, std::ostream& err) {
  const auto spec = problem_spec_from(cfg);
  const auto tab = tableau_from(cfg);
  const auto solver = solver_from(cfg);
  const auto ells = cfg.get_list("project.ells");
  const auto m_list = cfg.get_list("project.m_list");
  const double h = cfg.get_double("project.h");
  const double T = cfg.get_double("project.T");
  const double h_ref = cfg.get_double("project.h_ref");
  const double eps = cfg.get_double("study.epsilon");
  if (ells.empty()) throw ConfigError("project.ells must not be empty");
  if (m_list.size() < 2) throw ConfigError("project.m_list needs at least two levels");
  for (double m : m_list)
    if (!(m > 0)) throw ConfigError("project.m_list entries must be positive");
  if (!(h > 0) || !(T > 0) || !(h_ref > 0)) throw ConfigError("project.h, project.T and project.h_ref must be positive");

  const auto problem = build_problem<double>(spec);
  const auto header = header_for(cfg);
  auto os = open_output(cfg.get("output.project"));
  os << header.comment_line() << "\n";
  os << "ell,kind,m,error,slope,fit_residual\n";
  int status = kExitOk;
  for (double ell : ells) {
    const auto u0 = initial_data(problem, ell, eps);
    std::optional<ProjectionErrorResult> one, flow;
    try {
      one = step_projection_error(problem, u0, h, m_list, tab, solver);
      flow = flow_projection_error(problem, u0, T, m_list, h_ref, tab, solver);
    } catch (const std::exception& e) {
      err << "project: ell=" << format_double(ell) << ": " << e.what() << "\n";
      os << "# failed ell=" << format_double(ell) << ": " << e.what() << "\n";
      status = kExitCheckFailed;
      continue;
    }
    for (const auto& [kind, res] : {std::pair<const char*, const ProjectionErrorResult*>{"step", &*one},
                                    std::pair<const char*, const ProjectionErrorResult*>{"flow", &*flow}}) {
      for (const auto& p : res->points)
        os << format_double(ell) << ',' << kind << ',' << format_double(p.m) << ',' << format_double(p.max_error) << ','
           << format_double(res->slope) << ',' << format_double(res->fit_residual) << "\n";
      out << "ell=" << format_double(ell) << " " << kind << " error slope in m: " << format_double(res->slope) << "\n";
    }
  }
  return status;
}

int cmd_bounds(const Config& cfg, std::ostream& out) {
  const auto eps = checked_eps(cfg);
  const auto T_list = cfg.get_list("bounds.T");
  const auto h_list = cfg.get_list("bounds.h");
  if (T_list.empty() || h_list.size() < 2) throw ConfigError("bounds.T must be non-empty and bounds.h needs two steps");
  const auto problem = build_problem<double>(problem_spec_from(cfg));
  const auto tab = tableau_from(cfg);
  const auto semigroup = semigroup_continuity_check(problem, eps, T_list);
  const auto resolvent = resolvent_continuity_check(tab, problem, eps, h_list);
  write_bounds_report(out, semigroup);
  write_bounds_report(out, resolvent);
  return semigroup.pass() && resolvent.pass() ? kExitOk : kExitCheckFailed;
}

}  // namespace

int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Implicit Runge-Kutta integration of semilinear PDEs on a Hilbert scale", "scalerk"};
  app.set_version_flag("--version", std::string("scalerk ") + kVersion);
  app.require_subcommand(1);

  struct Sub {
    CLI::App* app;
    Overrides ov;
  };
  std::map<std::string, Sub> subs;
  const std::vector<std::pair<std::string, std::string>> commands{
      {"check-tableau", "audit a Butcher tableau for A-stability (RK1/RK2)"},
      {"integrate", "integrate one trajectory and write per-step norms"},
      {"study", "convergence-order study over initial-data regularities"},
      {"project", "Galerkin truncation error runs"},
      {"bounds", "semigroup and stage-resolvent continuity diagnostics"}};
  for (const auto& [name, help] : commands) {
    auto& s = subs[name];
    s.app = app.add_subcommand(name, help);
    register_options(s.app, s.ov);
  }

  std::vector<std::string> reversed(args.rbegin(), args.rend());
  try {
    app.parse(reversed);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kExitOk : kExitConfigError;
  }

  for (auto& [name, s] : subs) {
    if (!s.app->parsed()) continue;
    try {
      const Config cfg = effective_config(s.app, s.ov);
      write_config_if_requested(cfg);
      if (name == "check-tableau") return cmd_check_tableau(cfg, out);
      if (name == "integrate") return cmd_integrate(cfg, out, err);
      if (name == "study") return cmd_study(cfg, out);
      if (name == "project") return cmd_project(cfg, out, err);
      return cmd_bounds(cfg, out);
    } catch (const ConfigError& e) {
      err << name << ": configuration error: " << e.what() << "\n";
      return kExitConfigError;
    } catch (const ProblemError& e) {
      err << name << ": configuration error: " << e.what() << "\n";
      return kExitConfigError;
    } catch (const TableauError& e) {
      err << name << ": configuration error: " << e.what() << "\n";
      return kExitConfigError;
    } catch (const std::exception& e) {
      err << name << ": " << e.what() << "\n";
      return kExitCheckFailed;
    }
  }
  return kExitConfigError;
}

}  // namespace scalerk
