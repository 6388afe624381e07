#pragma once

// Text outputs: CSV / JSON / plot-data files. Numbers are written with 17
// significant digits, '.' decimal separator, LF line endings.

#include "scalerk/study.hpp"

#include <ostream>
#include <string>

namespace scalerk {

struct OutputHeader {
  std::string tool = "scalerk";
  std::string version;
  std::string config_hash;
  std::string config_dump;  // "key = value" lines echoed into JSON

  std::string comment_line() const;  // "# scalerk <version> config_hash=<hash>"
};

std::string format_double(double v);

/// Columns ell,h,n_steps,err_max,err_final,q_est,q_pred,fit_residual,solver_iters_mean.
void write_study_csv(std::ostream& os, const StudyResult& result, const OutputHeader& header);
void write_study_json(std::ostream& os, const StudyResult& result, const OutputHeader& header, bool step_errors);
/// Two series: (ell, q_est) then (ell, q_pred), separated by two blank lines.
void write_plot_data(std::ostream& os, const StudyResult& result, const OutputHeader& header);

/// Columns step,t,y_norm,iterations.
void write_trajectory_csv(std::ostream& os, const Trajectory<double>& traj, const std::vector<int>& step_index,
                          const OutputHeader& header);
/// Columns step,t,component,k,re,im.
void write_coefficient_dump(std::ostream& os, const Trajectory<double>& traj, const std::vector<int>& step_index,
                            const OutputHeader& header);

void write_astability_report(std::ostream& os, const AStabilityReport& rep);
void write_bounds_report(std::ostream& os, const BoundsReport& rep);

}  // namespace scalerk
