#include "esdsim/csvio.hpp"

#include <cstdio>
#include <fstream>
#include <sstream>

#include "esdsim/errors.hpp"
#include "json.hpp"

namespace esd::io {

namespace {

constexpr char kSeriesHeader[] =
    "gamma_t,c_sys_mean,c_sys_stderr,c_env_mean,c_env_stderr,"
    "p010_sys,p010_env,mitigated";

std::string fmt(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.12e", v);
  return buf;
}

std::vector<std::string> split(const std::string& line, char sep) {
  std::vector<std::string> out;
  std::size_t start = 0;
  while (true) {
    const std::size_t pos = line.find(sep, start);
    out.push_back(line.substr(start, pos - start));
    if (pos == std::string::npos) break;
    start = pos + 1;
  }
  return out;
}

double parse_double(const std::string& s) {
  try {
    std::size_t used = 0;
    const double v = std::stod(s, &used);
    if (used == s.size()) return v;
  } catch (const std::exception&) {
  }
  throw IoError("malformed number in CSV: \"" + s + "\"");
}

nlohmann::ordered_json noise_json(const channels::NoiseModel& noise) {
  nlohmann::ordered_json n;
  n["p1"] = noise.p1;
  n["p2"] = noise.p2;
  n["readout"] = {{"p01", noise.readout[0][1]}, {"p10", noise.readout[1][0]}};
  if (!noise.readout_per_qubit.empty()) {
    nlohmann::ordered_json o = nlohmann::ordered_json::object();
    for (const auto& [wire, m] : noise.readout_per_qubit)
      o[std::to_string(wire)] = {{"p01", m[0][1]}, {"p10", m[1][0]}};
    n["readout"]["overrides"] = o;
  }
  return n;
}

}  // namespace

std::string series_csv_text(const protocol::ExperimentResult& result) {
  if (result.system.points.size() != result.environment.points.size())
    throw DimensionMismatch("series for the two targets have different sizes");
  std::string out = kSeriesHeader;
  out += '\n';
  for (std::size_t i = 0; i < result.system.points.size(); ++i) {
    const protocol::SeriesPoint& s = result.system.points[i];
    const protocol::SeriesPoint& e = result.environment.points[i];
    out += fmt(s.gamma_t) + ',' + fmt(s.mean) + ',' + fmt(s.stderr_) + ',' +
           fmt(e.mean) + ',' + fmt(e.stderr_) + ',' + fmt(s.p010) + ',' +
           fmt(e.p010) + ',' + (result.mitigated ? '1' : '0') + '\n';
  }
  return out;
}

void write_series_csv(const std::string& path,
                      const protocol::ExperimentResult& result) {
  write_text_file(path, series_csv_text(result));
}

std::vector<SeriesRow> parse_series_csv(const std::string& text) {
  std::istringstream in(text);
  std::string line;
  if (!std::getline(in, line) || line != kSeriesHeader)
    throw IoError("series CSV header mismatch");
  std::vector<SeriesRow> rows;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    const std::vector<std::string> f = split(line, ',');
    if (f.size() != 8) throw IoError("series CSV row needs eight fields");
    SeriesRow r;
    r.gamma_t = parse_double(f[0]);
    r.c_sys_mean = parse_double(f[1]);
    r.c_sys_stderr = parse_double(f[2]);
    r.c_env_mean = parse_double(f[3]);
    r.c_env_stderr = parse_double(f[4]);
    r.p010_sys = parse_double(f[5]);
    r.p010_env = parse_double(f[6]);
    if (f[7] != "0" && f[7] != "1")
      throw IoError("mitigated flag must be 0 or 1");
    r.mitigated = f[7] == "1";
    rows.push_back(r);
  }
  return rows;
}

std::vector<SeriesRow> read_series_csv(const std::string& path) {
  return parse_series_csv(read_text_file(path));
}

std::string analytic_csv_text(const ent::InitialState& init,
                              const std::vector<double>& grid) {
  std::string out = "gamma_t,c_sys,c_env\n";
  for (double gt : grid)
    out += fmt(gt) + ',' + fmt(ent::closed_concurrence_system(init, gt)) + ',' +
           fmt(ent::closed_concurrence_environment(init, gt)) + '\n';
  return out;
}

void write_analytic_csv(const std::string& path, const ent::InitialState& init,
                        const std::vector<double>& grid) {
  write_text_file(path, analytic_csv_text(init, grid));
}

std::string diagnostic_csv_text(
    const std::vector<std::pair<double, double>>& rows) {
  std::string out = "lambda_over_pi,p0\n";
  for (const auto& [x, p0] : rows) out += fmt(x) + ',' + fmt(p0) + '\n';
  return out;
}

void write_diagnostic_csv(const std::string& path,
                          const std::vector<std::pair<double, double>>& rows) {
  write_text_file(path, diagnostic_csv_text(rows));
}

std::string manifest_text(const RunConfig& cfg,
                          const std::vector<protocol::ExperimentResult>& results,
                          const std::vector<std::string>& csv_names) {
  if (results.size() != csv_names.size())
    throw DimensionMismatch("one CSV name per result is required");
  nlohmann::ordered_json m;
  m["grid"] = {{"min", cfg.grid_min},
               {"max", cfg.grid_max},
               {"points", cfg.grid_points}};
  m["seed"] = cfg.file_seed;
  m["sets"] = nlohmann::ordered_json::array();
  for (std::size_t i = 0; i < results.size(); ++i) {
    const protocol::ExperimentResult& r = results[i];
    const protocol::ExperimentConfig& c = r.config;
    nlohmann::ordered_json s;
    s["csv"] = csv_names[i];
    s["lambda"] = c.init.lambda;
    s["alpha"] = c.init.s();
    s["layout"] = c.layout.physical;
    s["seed"] = c.seed;
    s["shots"] = c.shots;
    s["repetitions"] = c.repetitions;
    s["exact"] = c.exact;
    s["mitigated"] = r.mitigated;
    s["noise"] = c.noise ? noise_json(*c.noise) : nlohmann::ordered_json();
    const std::optional<double> td = ent::esd_time(c.init);
    const std::optional<double> tb = ent::esb_time(c.init);
    s["esd_time"] = td ? nlohmann::ordered_json(*td)
                       : nlohmann::ordered_json("none");
    s["esb_time"] = tb ? nlohmann::ordered_json(*tb)
                       : nlohmann::ordered_json("none");
    s["quality_warnings"] = r.quality_warnings;
    m["sets"].push_back(std::move(s));
  }
  return m.dump(2) + "\n";
}

void write_manifest(const std::string& path, const RunConfig& cfg,
                    const std::vector<protocol::ExperimentResult>& results,
                    const std::vector<std::string>& csv_names) {
  write_text_file(path, manifest_text(cfg, results, csv_names));
}

void write_text_file(const std::string& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw IoError("cannot open file for writing: " + path);
  out << text;
  out.flush();
  if (!out) throw IoError("cannot write file: " + path);
}

std::string read_text_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open file: " + path);
  std::ostringstream buf;
  buf << in.rdbuf();
  if (in.bad()) throw IoError("cannot read file: " + path);
  return buf.str();
}

}  // namespace esd::io
