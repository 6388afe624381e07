#include "scalerk/config.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <cstdint>
#include <cstdio>
#include <fstream>
#include <sstream>

namespace scalerk {

namespace {

std::string trim(std::string_view s) {
  auto b = s.find_first_not_of(" \t\r");
  if (b == std::string_view::npos) return {};
  auto e = s.find_last_not_of(" \t\r");
  std::string out(s.substr(b, e - b + 1));
  if (out.size() >= 2 && out.front() == '"' && out.back() == '"') out = out.substr(1, out.size() - 2);
  return out;
}

std::string lower(std::string s) {
  std::transform(s.begin(), s.end(), s.begin(), [](unsigned char c) { return char(std::tolower(c)); });
  return s;
}

double parse_double(const std::string& key, const std::string& text) {
  const std::string t = trim(text);
  double v = 0;
  const auto* first = t.data();
  const auto* last = t.data() + t.size();
  auto [ptr, ec] = std::from_chars(first, last, v);
  if (t.empty() || ec != std::errc() || ptr != last) throw ConfigError(key + ": '" + text + "' is not a number");
  return v;
}

}  // namespace

const std::vector<ConfigKey>& Config::registry() {
  static const std::vector<ConfigKey> keys = {
      {"problem.kind", "wave", "wave | wave_inhomogeneous | nls"},
      {"problem.bc", "periodic", "periodic | dirichlet | neumann"},
      {"problem.potential", "0 1 -4", "wave: coefficients c_j of V'(u)=sum c_j u^j; nls: P in dV/dconj(u)=P(|u|^2)u"},
      {"problem.a", "1", "wave_inhomogeneous a(x) cosine coefficients"},
      {"problem.b", "0", "wave_inhomogeneous b(x) cosine coefficients"},
      {"problem.alpha", "0.75", "nls scale offset alpha > 1/2"},
      {"problem.N", "1000", "collocation grid size (even); K = N/2"},
      {"problem.max_degree", "10", "maximum potential degree"},
      {"problem.dealias", "false", "apply the 2/3 rule to nonlinear terms"},
      {"problem.strict_bc", "false", "reject nonlinearities leaking out of a sine/cosine basis"},
      {"tableau.name", "midpoint", "midpoint | gauss2 | gauss3, or a label for an inline tableau"},
      {"tableau.a", "", "inline tableau matrix, rows separated by ';'"},
      {"tableau.b", "", "inline tableau weights"},
      {"tableau.p", "", "inline tableau classical order"},
      {"solver.rel_tol", "1e-12", "stage iteration tolerance relative to 1+||U||_Y"},
      {"solver.max_iter", "100", "stage iteration limit"},
      {"study.T", "0.5", "final time"},
      {"study.ells", "0 0.5 1 1.5 2 2.5 3", "initial-data regularities"},
      {"study.h_list", "0.1 0.095 0.09 0.085 0.08 0.075 0.07 0.065 0.06 0.055 0.05", "time steps for ell > 0"},
      {"study.h_list_ell0", "0.1 0.09 0.08 0.07 0.06 0.05", "time steps for ell = 0"},
      {"study.h_ref", "1e-3", "reference step for ell > 0"},
      {"study.h_ref_ell0", "1e-4", "reference step for ell = 0"},
      {"study.epsilon", "1e-8", "initial-data regularizer"},
      {"study.error_norm", "Y", "Y | Yell"},
      {"study.threads", "0", "worker threads (0: hardware concurrency)"},
      {"study.fast", "false", "fast profile: grid N=256"},
      {"study.step_errors", "false", "include per-step error arrays in the JSON output"},
      {"integrate.h", "0.05", "time step"},
      {"integrate.steps", "10", "number of steps"},
      {"integrate.ell", "1", "regularity of the initial data"},
      {"integrate.stride", "1", "record every stride-th state"},
      {"project.ells", "1 2", "initial-data regularities for Galerkin error runs"},
      {"project.m_list", "8 16 32 64", "projection levels"},
      {"project.h", "0.05", "step for the one-step error"},
      {"project.T", "0.5", "final time of the flow error"},
      {"project.h_ref", "1e-3", "step for the flow error"},
      {"bounds.eps", "0 0.25 0.5 1", "exponents in [0,1]"},
      {"bounds.T", "0.01 0.1 1", "times for the semigroup check"},
      {"bounds.h", "0.0125 0.025 0.05 0.1 0.2", "steps for the resolvent check"},
      {"output.csv", "study.csv", "study CSV path"},
      {"output.json", "", "study JSON path (empty: none)"},
      {"output.plot", "study_plot.dat", "plot-data path (empty: none)"},
      {"output.trajectory", "trajectory.csv", "integrate: per-step norms"},
      {"output.coeffs", "", "integrate: coefficient dump path (empty: none)"},
      {"output.project", "project.csv", "project: Galerkin error table"},
      {"output.config", "", "write the effective configuration here (empty: none)"},
  };
  return keys;
}

Config::Config() {
  for (const auto& k : registry()) values_[k.key] = k.default_value;
}

void Config::set(const std::string& key, const std::string& value) {
  auto it = values_.find(key);
  if (it == values_.end()) throw ConfigError("unknown configuration key '" + key + "'");
  it->second = trim(value);
}

const std::string& Config::get(const std::string& key) const {
  auto it = values_.find(key);
  if (it == values_.end()) throw ConfigError("unknown configuration key '" + key + "'");
  return it->second;
}

void Config::load_text(std::string_view text, const std::string& source) {
  std::istringstream in{std::string(text)};
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
    if (trim(line).empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos)
      throw ConfigError(source + ":" + std::to_string(lineno) + ": expected 'key = value'");
    const std::string key = trim(std::string_view(line).substr(0, eq));
    try {
      set(key, line.substr(eq + 1));
    } catch (const ConfigError& e) {
      throw ConfigError(source + ":" + std::to_string(lineno) + ": " + e.what());
    }
  }
}

void Config::load_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open configuration file '" + path + "'");
  std::stringstream buf;
  buf << in.rdbuf();
  load_text(buf.str(), path);
}

double Config::get_double(const std::string& key) const { return parse_double(key, get(key)); }

int Config::get_int(const std::string& key) const {
  const double v = get_double(key);
  if (v != static_cast<double>(static_cast<int>(v))) throw ConfigError(key + ": expected an integer");
  return static_cast<int>(v);
}

bool Config::get_bool(const std::string& key) const {
  const std::string v = lower(get(key));
  if (v == "true" || v == "1" || v == "yes" || v == "on") return true;
  if (v == "false" || v == "0" || v == "no" || v == "off") return false;
  throw ConfigError(key + ": '" + get(key) + "' is not a boolean");
}

std::vector<double> Config::get_list(const std::string& key) const {
  std::string text = get(key);
  std::replace(text.begin(), text.end(), ',', ' ');
  std::istringstream in(text);
  std::vector<double> out;
  std::string tok;
  while (in >> tok) out.push_back(parse_double(key, tok));
  return out;
}

std::string Config::dump() const {
  std::ostringstream os;
  for (const auto& k : registry()) os << k.key << " = " << values_.at(k.key) << "\n";
  return os.str();
}

std::string Config::hash() const {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char c : dump()) {
    h ^= c;
    h *= 0x100000001b3ULL;
  }
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
  return buf;
}

ProblemKind parse_problem_kind(const std::string& s) {
  const auto v = lower(s);
  if (v == "wave") return ProblemKind::Wave;
  if (v == "wave_inhomogeneous") return ProblemKind::WaveInhomogeneous;
  if (v == "nls") return ProblemKind::Nls;
  throw ConfigError("problem.kind: unknown problem '" + s + "'");
}

BoundaryCondition parse_boundary(const std::string& s) {
  const auto v = lower(s);
  if (v == "periodic") return BoundaryCondition::Periodic;
  if (v == "dirichlet") return BoundaryCondition::Dirichlet;
  if (v == "neumann") return BoundaryCondition::Neumann;
  throw ConfigError("problem.bc: unknown boundary condition '" + s + "'");
}

ErrorNorm parse_error_norm(const std::string& s) {
  const auto v = lower(s);
  if (v == "y") return ErrorNorm::Y;
  if (v == "yell") return ErrorNorm::Yell;
  throw ConfigError("study.error_norm: expected Y or Yell, got '" + s + "'");
}

Eigen::MatrixXd parse_matrix(const std::string& text) {
  std::vector<std::vector<double>> rows;
  std::stringstream all(text);
  std::string row;
  while (std::getline(all, row, ';')) {
    std::replace(row.begin(), row.end(), ',', ' ');
    std::istringstream in(row);
    std::vector<double> vals;
    std::string tok;
    while (in >> tok) vals.push_back(parse_double("tableau.a", tok));
    if (!vals.empty()) rows.push_back(std::move(vals));
  }
  if (rows.empty()) throw ConfigError("tableau.a: empty matrix");
  Eigen::MatrixXd m(rows.size(), rows.front().size());
  for (std::size_t i = 0; i < rows.size(); ++i) {
    if (rows[i].size() != rows.front().size()) throw ConfigError("tableau.a: ragged rows");
    for (std::size_t j = 0; j < rows[i].size(); ++j) m(Eigen::Index(i), Eigen::Index(j)) = rows[i][j];
  }
  return m;
}

ProblemSpec problem_spec_from(const Config& cfg) {
  ProblemSpec spec;
  spec.kind = parse_problem_kind(cfg.get("problem.kind"));
  spec.bc = parse_boundary(cfg.get("problem.bc"));
  spec.potential = cfg.get_list("problem.potential");
  spec.a = cfg.get_list("problem.a");
  spec.b = cfg.get_list("problem.b");
  spec.alpha = cfg.get_double("problem.alpha");
  const int N = cfg.get_bool("study.fast") ? 256 : cfg.get_int("problem.N");
  if (N < 4 || N % 2 != 0) throw ConfigError("problem.N must be even and at least 4");
  spec.K = N / 2;
  spec.max_degree = cfg.get_int("problem.max_degree");
  spec.dealias = cfg.get_bool("problem.dealias");
  spec.strict_bc = cfg.get_bool("problem.strict_bc");
  return spec;
}

ButcherTableau<double> tableau_from(const Config& cfg) {
  if (cfg.get("tableau.a").empty()) {
    if (!cfg.get("tableau.b").empty()) throw ConfigError("tableau.b given without tableau.a");
    try {
      return builtin_tableau<double>(cfg.get("tableau.name"));
    } catch (const TableauError& e) {
      throw ConfigError(std::string("tableau.name: ") + e.what());
    }
  }
  ButcherTableau<double> tab;
  tab.name = cfg.get("tableau.name");
  tab.a = parse_matrix(cfg.get("tableau.a"));
  const auto b = cfg.get_list("tableau.b");
  tab.b = Eigen::Map<const Eigen::VectorXd>(b.data(), Eigen::Index(b.size()));
  tab.order = cfg.get("tableau.p").empty() ? 1 : cfg.get_int("tableau.p");
  try {
    validate_tableau(tab);
  } catch (const TableauError& e) {
    throw ConfigError(e.what());
  }
  return tab;
}

StageSolveConfig solver_from(const Config& cfg) {
  StageSolveConfig s;
  s.rel_tol = cfg.get_double("solver.rel_tol");
  s.max_iter = cfg.get_int("solver.max_iter");
  try {
    s.validate();
  } catch (const std::invalid_argument& e) {
    throw ConfigError(e.what());
  }
  return s;
}

StudyConfig study_from(const Config& cfg) {
  StudyConfig s;
  s.problem = problem_spec_from(cfg);
  s.N = 2 * s.problem.K;
  s.tableau = tableau_from(cfg);
  s.solver = solver_from(cfg);
  s.T = cfg.get_double("study.T");
  s.ells = cfg.get_list("study.ells");
  s.h_list = cfg.get_list("study.h_list");
  s.h_list_ell0 = cfg.get_list("study.h_list_ell0");
  s.h_ref = cfg.get_double("study.h_ref");
  s.h_ref_ell0 = cfg.get_double("study.h_ref_ell0");
  s.epsilon = cfg.get_double("study.epsilon");
  s.error_norm = parse_error_norm(cfg.get("study.error_norm"));
  s.threads = cfg.get_int("study.threads");
  s.keep_step_errors = cfg.get_bool("study.step_errors");
  try {
    s.validate();
  } catch (const std::invalid_argument& e) {
    throw ConfigError(e.what());
  }
  return s;
}

}  // namespace scalerk
