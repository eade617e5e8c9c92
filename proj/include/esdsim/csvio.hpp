#pragma once

#include <string>
#include <utility>
#include <vector>

#include "esdsim/config.hpp"
#include "esdsim/protocol.hpp"

namespace esd::io {

// Series files carry one row per grid point:
//   gamma_t,c_sys_mean,c_sys_stderr,c_env_mean,c_env_stderr,
//   p010_sys,p010_env,mitigated
// Doubles are printed as %.12e, the mitigated flag as 0/1, lines end in LF.
struct SeriesRow {
  double gamma_t = 0.0;
  double c_sys_mean = 0.0;
  double c_sys_stderr = 0.0;
  double c_env_mean = 0.0;
  double c_env_stderr = 0.0;
  double p010_sys = 0.0;
  double p010_env = 0.0;
  bool mitigated = false;
};

std::string series_csv_text(const protocol::ExperimentResult& result);
void write_series_csv(const std::string& path,
                      const protocol::ExperimentResult& result);
std::vector<SeriesRow> parse_series_csv(const std::string& text);
std::vector<SeriesRow> read_series_csv(const std::string& path);

// gamma_t,c_sys,c_env rows from the closed-form curves.
std::string analytic_csv_text(const ent::InitialState& init,
                              const std::vector<double>& grid);
void write_analytic_csv(const std::string& path, const ent::InitialState& init,
                        const std::vector<double>& grid);

// lambda_over_pi,p0 rows from the ancilla reset diagnostic.
std::string diagnostic_csv_text(
    const std::vector<std::pair<double, double>>& rows);
void write_diagnostic_csv(const std::string& path,
                          const std::vector<std::pair<double, double>>& rows);

// Machine-readable run description: grid, file seed, and one entry per set
// (csv name, lambda/alpha, layout, seed, shots, repetitions, exact flag,
// mitigation flag, noise, critical times or "none", warning count).
std::string manifest_text(const RunConfig& cfg,
                          const std::vector<protocol::ExperimentResult>& results,
                          const std::vector<std::string>& csv_names);
void write_manifest(const std::string& path, const RunConfig& cfg,
                    const std::vector<protocol::ExperimentResult>& results,
                    const std::vector<std::string>& csv_names);

void write_text_file(const std::string& path, const std::string& text);
std::string read_text_file(const std::string& path);

}  // namespace esd::io
