#pragma once

// Flat dotted-key configuration ("problem.kind = wave") shared by the CLI
// subcommands. Every key has a documented default; unknown keys are errors.

#include "scalerk/study.hpp"

#include <map>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace scalerk {

inline constexpr const char* kVersion = "0.1.0";

class ConfigError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

struct ConfigKey {
  std::string key;
  std::string default_value;
  std::string help;
};

class Config {
 public:
  /// All known keys in canonical order.
  static const std::vector<ConfigKey>& registry();

  Config();

  /// Parses "key = value" lines; '#' starts a comment.
  void load_text(std::string_view text, const std::string& source = "<text>");
  void load_file(const std::string& path);

  void set(const std::string& key, const std::string& value);
  const std::string& get(const std::string& key) const;

  double get_double(const std::string& key) const;
  int get_int(const std::string& key) const;
  bool get_bool(const std::string& key) const;
  std::vector<double> get_list(const std::string& key) const;

  /// Canonical dump: every key in registry order, loadable by load_text.
  std::string dump() const;
  /// 16-hex-digit FNV-1a hash of dump().
  std::string hash() const;

  const std::map<std::string, std::string>& values() const { return values_; }

 private:
  std::map<std::string, std::string> values_;
};

ProblemSpec problem_spec_from(const Config& cfg);
ButcherTableau<double> tableau_from(const Config& cfg);
StageSolveConfig solver_from(const Config& cfg);
StudyConfig study_from(const Config& cfg);

ProblemKind parse_problem_kind(const std::string& s);
BoundaryCondition parse_boundary(const std::string& s);
ErrorNorm parse_error_norm(const std::string& s);

/// Matrix literal: rows separated by ';', entries by spaces or commas.
Eigen::MatrixXd parse_matrix(const std::string& text);

}  // namespace scalerk
