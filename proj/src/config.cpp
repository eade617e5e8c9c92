#include "esdsim/config.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <initializer_list>
#include <sstream>

#include "esdsim/errors.hpp"
#include "esdsim/rng.hpp"
#include "json.hpp"

namespace esd::io {

namespace {

using nlohmann::json;

// Mixed into the file seed (with the set index) for sets without their own.
constexpr std::uint64_t kSetSeedTag = 0x5E75;

void check_keys(const json& j, std::initializer_list<const char*> allowed,
                const char* where) {
  if (!j.is_object())
    throw ConfigError(std::string(where) + " must be a JSON object");
  for (const auto& item : j.items()) {
    if (std::none_of(allowed.begin(), allowed.end(), [&](const char* k) {
          return item.key() == k;
        }))
      throw ConfigError("unknown key \"" + item.key() + "\" in " + where);
  }
}

channels::NoiseModel parse_noise(const json& j) {
  check_keys(j, {"p1", "p2", "readout"}, "noise");
  channels::NoiseModel noise;
  if (j.contains("p1")) noise.p1 = j.at("p1").get<double>();
  if (j.contains("p2")) noise.p2 = j.at("p2").get<double>();
  if (j.contains("readout")) {
    const json& r = j.at("readout");
    check_keys(r, {"p01", "p10", "overrides"}, "readout");
    const double p01 = r.contains("p01") ? r.at("p01").get<double>() : 0.0;
    const double p10 = r.contains("p10") ? r.at("p10").get<double>() : 0.0;
    noise.readout = channels::readout_from_flips(p01, p10);
    if (r.contains("overrides")) {
      const json& o = r.at("overrides");
      if (!o.is_object())
        throw ConfigError("readout overrides must map wires to flip pairs");
      for (const auto& item : o.items()) {
        int wire = -1;
        try {
          std::size_t used = 0;
          wire = std::stoi(item.key(), &used);
          if (used != item.key().size()) wire = -1;
        } catch (const std::exception&) {
          wire = -1;
        }
        if (wire < 0)
          throw ConfigError("readout override key must be a wire number");
        check_keys(item.value(), {"p01", "p10"}, "readout override");
        const json& v = item.value();
        const double q01 = v.contains("p01") ? v.at("p01").get<double>() : 0.0;
        const double q10 = v.contains("p10") ? v.at("p10").get<double>() : 0.0;
        noise.readout_per_qubit[wire] = channels::readout_from_flips(q01, q10);
      }
    }
  }
  noise.validate();
  return noise;
}

protocol::QubitLayout parse_layout(const json& j) {
  if (!j.is_array() || j.size() != 5)
    throw ConfigError("layout must list five wires");
  protocol::QubitLayout layout;
  for (std::size_t i = 0; i < 5; ++i) layout.physical[i] = j[i].get<int>();
  layout.validate();
  return layout;
}

protocol::QubitLayout default_layout(std::size_t index) {
  switch (index) {
    case 0:
      return protocol::QubitLayout::consecutive(0);
    case 1:
      return protocol::QubitLayout::consecutive(6);
    case 2:
      return protocol::QubitLayout::consecutive(27);
    default:
      throw ConfigError("sets beyond the third need an explicit layout");
  }
}

}  // namespace

double parse_alpha(const std::string& text) {
  const std::string prefix = "1/sqrt(";
  if (text.size() > prefix.size() + 1 && text.rfind(prefix, 0) == 0 &&
      text.back() == ')') {
    const std::string digits = text.substr(prefix.size(),
                                           text.size() - prefix.size() - 1);
    if (!digits.empty() &&
        std::all_of(digits.begin(), digits.end(),
                    [](char c) { return c >= '0' && c <= '9'; })) {
      const long k = std::stol(digits);
      if (k >= 2) return 1.0 / std::sqrt(static_cast<double>(k));
    }
  }
  throw ConfigError("alpha must look like \"1/sqrt(k)\" with integer k >= 2");
}

RunConfig parse_run_config(const std::string& text,
                           const CliOverrides& overrides) {
  json j;
  try {
    j = json::parse(text);
  } catch (const json::exception& e) {
    throw ConfigError(std::string("config is not valid JSON: ") + e.what());
  }

  try {
    check_keys(j,
               {"grid", "sets", "seed", "shots", "repetitions", "mitigation",
                "exact", "reset_aware_swap", "noise"},
               "the configuration");

    if (!j.contains("grid")) throw ConfigError("a grid section is required");
    const json& g = j.at("grid");
    check_keys(g, {"min", "max", "points"}, "grid");
    for (const char* k : {"min", "max", "points"})
      if (!g.contains(k))
        throw ConfigError(std::string("grid needs \"") + k + "\"");

    RunConfig cfg;
    cfg.grid_min = g.at("min").get<double>();
    cfg.grid_max = g.at("max").get<double>();
    cfg.grid_points = g.at("points").get<int>();
    if (cfg.grid_min < 0.0) throw ConfigError("grid min must be non-negative");
    if (!(cfg.grid_max > cfg.grid_min))
      throw ConfigError("grid max must exceed grid min");
    if (cfg.grid_points < 1) throw ConfigError("grid needs at least one point");

    std::vector<double> grid(cfg.grid_points);
    for (int i = 0; i < cfg.grid_points; ++i)
      grid[i] = cfg.grid_points == 1
                    ? cfg.grid_min
                    : cfg.grid_min + (cfg.grid_max - cfg.grid_min) * i /
                                         (cfg.grid_points - 1);
    if (cfg.grid_points > 1) grid.back() = cfg.grid_max;

    cfg.file_seed = overrides.seed
                        ? *overrides.seed
                        : (j.contains("seed")
                               ? j.at("seed").get<std::uint64_t>()
                               : std::uint64_t{0});

    protocol::ExperimentConfig base;
    base.grid = grid;
    if (j.contains("shots")) base.shots = j.at("shots").get<std::uint64_t>();
    if (j.contains("repetitions"))
      base.repetitions = j.at("repetitions").get<int>();
    if (j.contains("mitigation"))
      base.mitigation = j.at("mitigation").get<bool>();
    if (j.contains("exact")) base.exact = j.at("exact").get<bool>();
    if (j.contains("reset_aware_swap"))
      base.reset_aware_swap = j.at("reset_aware_swap").get<bool>();
    if (overrides.no_mitigation) base.mitigation = false;
    if (j.contains("noise")) base.noise = parse_noise(j.at("noise"));

    if (!j.contains("sets") || !j.at("sets").is_array() || j.at("sets").empty())
      throw ConfigError("at least one set is required");
    const json& sets = j.at("sets");
    for (std::size_t i = 0; i < sets.size(); ++i) {
      const json& s = sets[i];
      check_keys(s, {"alpha", "lambda", "layout", "seed", "noise"}, "a set");
      protocol::ExperimentConfig e = base;
      const bool has_alpha = s.contains("alpha");
      const bool has_lambda = s.contains("lambda");
      if (has_alpha == has_lambda)
        throw ConfigError("each set needs exactly one of alpha or lambda");
      e.init = has_alpha
                   ? ent::InitialState::from_alpha(
                         parse_alpha(s.at("alpha").get<std::string>()))
                   : ent::InitialState::from_lambda(s.at("lambda").get<double>());
      e.layout = s.contains("layout") ? parse_layout(s.at("layout"))
                                      : default_layout(i);
      e.seed = s.contains("seed")
                   ? s.at("seed").get<std::uint64_t>()
                   : derive_seed(cfg.file_seed, {kSetSeedTag, i});
      if (s.contains("noise")) e.noise = parse_noise(s.at("noise"));
      e.validate();
      cfg.sets.push_back(std::move(e));
    }

    if (overrides.sets) {
      if (*overrides.sets < 1 ||
          static_cast<std::size_t>(*overrides.sets) > cfg.sets.size())
        throw ConfigError("set count override is out of range");
      cfg.sets.resize(static_cast<std::size_t>(*overrides.sets));
    }
    return cfg;
  } catch (const json::exception& e) {
    throw ConfigError(std::string("bad configuration value: ") + e.what());
  }
}

RunConfig load_run_config(const std::string& path,
                          const CliOverrides& overrides) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open config file: " + path);
  std::ostringstream buf;
  buf << in.rdbuf();
  if (in.bad()) throw IoError("cannot read config file: " + path);
  return parse_run_config(buf.str(), overrides);
}

}  // namespace esd::io
