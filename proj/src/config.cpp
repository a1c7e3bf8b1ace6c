#include "mecopt/config.hpp"

#include "mecopt/units.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <map>
#include <sstream>

namespace mecopt {

using nlohmann::json;

namespace {

std::string_view trim(std::string_view s) {
  const auto first = s.find_first_not_of(" \t\r\n");
  if (first == std::string_view::npos) return {};
  const auto last = s.find_last_not_of(" \t\r\n");
  return s.substr(first, last - first + 1);
}

std::optional<double> to_number(std::string_view s) {
  s = trim(s);
  double value = 0.0;
  auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), value);
  if (ec != std::errc{} || ptr != s.data() + s.size() || s.empty()) return std::nullopt;
  return value;
}

// Numeric rows of a CSV file; a leading non-numeric line is treated as a header.
std::vector<std::vector<double>> read_numeric_csv(const std::filesystem::path& path,
                                                  std::size_t columns) {
  std::ifstream in(path);
  if (!in) throw MissingFileError("cannot open '" + path.string() + "'");
  std::vector<std::vector<double>> rows;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (trim(line).empty()) continue;
    std::vector<double> row;
    std::stringstream fields(line);
    std::string field;
    bool numeric = true;
    while (std::getline(fields, field, ',')) {
      auto value = to_number(field);
      if (!value) {
        numeric = false;
        break;
      }
      row.push_back(*value);
    }
    if (!numeric) {
      if (rows.empty() && line_no == 1) continue;
      throw ConfigError(path.string() + ":" + std::to_string(line_no) + ": non-numeric field");
    }
    if (row.size() != columns) {
      throw ConfigError(path.string() + ":" + std::to_string(line_no) + ": expected " +
                        std::to_string(columns) + " column(s)");
    }
    rows.push_back(std::move(row));
  }
  return rows;
}

void check_keys(const json& obj, std::initializer_list<std::string_view> allowed, const std::string& where) {
  if (!obj.is_object()) throw ConfigError(where + ": expected an object");
  for (const auto& [key, value] : obj.items()) {
    if (std::find(allowed.begin(), allowed.end(), key) == allowed.end()) {
      throw ConfigError(where + ": unknown key '" + key + "'");
    }
  }
}

const json& require(const json& obj, const char* key, const std::string& where) {
  auto it = obj.find(key);
  if (it == obj.end()) throw ConfigError(where + ": missing '" + key + "'");
  return *it;
}

double quantity(const json& value, Dimension dim, const std::string& where) {
  if (value.is_number()) return value.get<double>();
  if (value.is_string()) {
    try {
      return parse_quantity(value.get<std::string>(), dim);
    } catch (const std::invalid_argument& e) {
      throw ConfigError(where + ": " + e.what());
    }
  }
  throw ConfigError(where + ": expected a number or a quantity string");
}

std::string string_field(const json& obj, const char* key, const std::string& where) {
  const json& v = require(obj, key, where);
  if (!v.is_string()) throw ConfigError(where + "." + key + ": expected a string");
  return v.get<std::string>();
}

std::filesystem::path resolve(const std::filesystem::path& base_dir, const std::string& file) {
  std::filesystem::path p(file);
  return p.is_absolute() ? p : base_dir / p;
}

std::vector<double> quantity_list(const json& value, Dimension dim, const std::string& where) {
  if (!value.is_array()) throw ConfigError(where + ": expected an array");
  std::vector<double> out;
  for (std::size_t i = 0; i < value.size(); ++i) {
    out.push_back(quantity(value[i], dim, where + "[" + std::to_string(i) + "]"));
  }
  return out;
}

CpuProfile parse_profile(const json& j, const std::filesystem::path& base_dir, const std::string& where) {
  check_keys(j, {"builtin", "csv", "frequency", "power", "flops_per_cycle"}, where);
  if (j.contains("builtin")) {
    const std::string name = string_field(j, "builtin", where);
    if (name != "i5-2500k-like") throw ConfigError(where + ": unknown builtin profile '" + name + "'");
    CpuProfile p = i5_2500k_like_profile();
    if (j.contains("flops_per_cycle")) {
      p.flops_per_cycle = quantity(j["flops_per_cycle"], Dimension::dimensionless, where + ".flops_per_cycle");
    }
    return p;
  }
  const double s = quantity(require(j, "flops_per_cycle", where), Dimension::dimensionless,
                            where + ".flops_per_cycle");
  if (j.contains("csv")) return load_cpu_profile_csv(resolve(base_dir, string_field(j, "csv", where)), s);

  const auto f = quantity_list(require(j, "frequency", where), Dimension::frequency, where + ".frequency");
  const auto p = quantity_list(require(j, "power", where), Dimension::power, where + ".power");
  CpuProfile profile;
  profile.freq_grid_hz = Eigen::Map<const Eigen::VectorXd>(f.data(), static_cast<Eigen::Index>(f.size()));
  profile.power_w = Eigen::Map<const Eigen::VectorXd>(p.data(), static_cast<Eigen::Index>(p.size()));
  profile.flops_per_cycle = s;
  return profile;
}

Distribution parse_distribution(const json& j, Dimension dim, const std::string& where) {
  check_keys(j, {"uniform", "lognormal"}, where);
  if (j.size() != 1) throw ConfigError(where + ": give exactly one of 'uniform' or 'lognormal'");
  if (j.contains("uniform")) {
    const json& bounds = j["uniform"];
    if (!bounds.is_array() || bounds.size() != 2) throw ConfigError(where + ".uniform: expected [low, high]");
    return Distribution::uniform(quantity(bounds[0], dim, where + ".uniform[0]"),
                                 quantity(bounds[1], dim, where + ".uniform[1]"));
  }
  const json& ln = j["lognormal"];
  check_keys(ln, {"median", "sigma"}, where + ".lognormal");
  return Distribution::lognormal(quantity(require(ln, "median", where), dim, where + ".lognormal.median"),
                                 quantity(require(ln, "sigma", where), Dimension::dimensionless,
                                          where + ".lognormal.sigma"));
}

std::vector<double> parse_delay_samples(const json& j, const std::filesystem::path& base_dir,
                                        const std::string& where) {
  std::vector<double> samples;
  if (j.is_array()) {
    samples = quantity_list(j, Dimension::time, where);
  } else {
    check_keys(j, {"csv"}, where);
    samples = load_delay_samples_csv(resolve(base_dir, string_field(j, "csv", where)));
  }
  std::sort(samples.begin(), samples.end());
  return samples;
}

NetworkPath parse_path(const json& entry, const json& defaults, const std::filesystem::path& base_dir,
                       const std::string& where) {
  if (!entry.is_object()) throw ConfigError(where + ": expected an object");
  json merged = defaults.is_null() ? json::object() : defaults;
  for (const auto& [key, value] : entry.items()) merged[key] = value;
  check_keys(merged,
             {"origin", "node", "gamma_wired", "gamma_wireless", "rate", "distance", "prop_coeff",
              "response_access_delay"},
             where);
  NetworkPath p;
  p.origin = string_field(merged, "origin", where);
  p.node_id = string_field(merged, "node", where);
  if (merged.contains("gamma_wired")) {
    p.gamma_wired_j_per_bit = quantity(merged["gamma_wired"], Dimension::energy_per_bit, where + ".gamma_wired");
  }
  if (merged.contains("gamma_wireless")) {
    p.gamma_wireless_j_per_bit =
        quantity(merged["gamma_wireless"], Dimension::energy_per_bit, where + ".gamma_wireless");
  }
  if (merged.contains("rate")) p.rate_bps = quantity(merged["rate"], Dimension::rate, where + ".rate");
  if (merged.contains("distance")) {
    p.distance_km = quantity(merged["distance"], Dimension::distance, where + ".distance");
  }
  if (merged.contains("prop_coeff")) {
    p.prop_coeff_s_per_km = quantity(merged["prop_coeff"], Dimension::propagation, where + ".prop_coeff");
  }
  if (merged.contains("response_access_delay")) {
    p.response_access_delay =
        parse_delay_samples(merged["response_access_delay"], base_dir, where + ".response_access_delay");
  }
  return p;
}

ComputeNode parse_node(const json& j, const std::map<std::string, CpuProfile>& profiles,
                       const std::string& where) {
  check_keys(j, {"id", "kind", "profile", "f_min", "f_max", "servers", "efficiency_scale"}, where);
  ComputeNode node;
  node.id = string_field(j, "id", where);
  const std::string kind = string_field(j, "kind", where);
  if (kind != "edge" && kind != "cloud") throw ConfigError(where + ".kind: expected 'edge' or 'cloud'");
  node.kind = kind == "edge" ? NodeKind::edge : NodeKind::cloud;

  const std::string profile_name = string_field(j, "profile", where);
  auto it = profiles.find(profile_name);
  if (it == profiles.end()) throw ConfigError(where + ".profile: unknown profile '" + profile_name + "'");
  node.profile = it->second;
  if (j.contains("efficiency_scale")) {
    const double scale = quantity(j["efficiency_scale"], Dimension::dimensionless, where + ".efficiency_scale");
    if (!(scale > 0.0)) throw ConfigError(where + ".efficiency_scale: must be positive");
    node.profile = with_efficiency_scale(node.profile, scale);
  }
  if (node.profile.freq_grid_hz.size() < 2) throw ConfigError(where + ": profile grid too short");
  node.f_min_hz = j.contains("f_min") ? quantity(j["f_min"], Dimension::frequency, where + ".f_min")
                                      : node.profile.min_frequency_hz();
  node.f_max_hz = j.contains("f_max") ? quantity(j["f_max"], Dimension::frequency, where + ".f_max")
                                      : node.profile.max_frequency_hz();
  if (node.is_cloud()) {
    node.servers = std::nullopt;
    if (j.contains("servers") && !(j["servers"].is_string() && j["servers"] == "unbounded")) {
      throw ConfigError(where + ".servers: cloud nodes are unbounded");
    }
  } else {
    node.servers = 1;
    if (j.contains("servers")) {
      if (!j["servers"].is_number_integer() || j["servers"].get<int>() < 1) {
        throw ConfigError(where + ".servers: expected a positive integer");
      }
      node.servers = j["servers"].get<int>();
    }
  }
  return node;
}

WorkloadSpec parse_workload(const json& j, const std::vector<std::string>& origins, const std::string& where) {
  check_keys(j,
             {"n_tasks", "horizon", "arrival_rate", "size_bits", "intensity", "output_ratio", "deadline",
              "uplink_access_delay", "origins", "origin_weights"},
             where);
  WorkloadSpec w;
  w.origins = origins;
  if (j.contains("n_tasks")) {
    if (!j["n_tasks"].is_number_unsigned()) throw ConfigError(where + ".n_tasks: expected a count");
    w.n_tasks = j["n_tasks"].get<std::size_t>();
  }
  if (j.contains("horizon")) w.horizon_s = quantity(j["horizon"], Dimension::time, where + ".horizon");
  if (j.contains("arrival_rate")) {
    w.arrival_rate_per_s = quantity(j["arrival_rate"], Dimension::dimensionless, where + ".arrival_rate");
  }
  if (j.contains("size_bits")) w.size_bits = parse_distribution(j["size_bits"], Dimension::bits, where + ".size_bits");
  if (j.contains("intensity")) {
    w.intensity = parse_distribution(j["intensity"], Dimension::intensity, where + ".intensity");
  }
  if (j.contains("output_ratio")) {
    w.output_ratio = parse_distribution(j["output_ratio"], Dimension::dimensionless, where + ".output_ratio");
  }
  if (j.contains("deadline")) w.deadline_s = parse_distribution(j["deadline"], Dimension::time, where + ".deadline");
  if (j.contains("uplink_access_delay")) {
    w.uplink_access_delay_s =
        parse_distribution(j["uplink_access_delay"], Dimension::time, where + ".uplink_access_delay");
  }
  if (j.contains("origins")) {
    w.origins.clear();
    for (const auto& o : j["origins"]) {
      if (!o.is_string()) throw ConfigError(where + ".origins: expected strings");
      w.origins.push_back(o.get<std::string>());
    }
  }
  if (j.contains("origin_weights")) {
    w.origin_weights = quantity_list(j["origin_weights"], Dimension::dimensionless, where + ".origin_weights");
  }
  return w;
}

}  // namespace

CpuProfile load_cpu_profile_csv(const std::filesystem::path& path, double flops_per_cycle) {
  const auto rows = read_numeric_csv(path, 2);
  CpuProfile p;
  p.freq_grid_hz.resize(static_cast<Eigen::Index>(rows.size()));
  p.power_w.resize(static_cast<Eigen::Index>(rows.size()));
  for (std::size_t i = 0; i < rows.size(); ++i) {
    p.freq_grid_hz(static_cast<Eigen::Index>(i)) = rows[i][0];
    p.power_w(static_cast<Eigen::Index>(i)) = rows[i][1];
  }
  p.flops_per_cycle = flops_per_cycle;
  return p;
}

std::vector<double> load_delay_samples_csv(const std::filesystem::path& path) {
  std::vector<double> samples;
  for (const auto& row : read_numeric_csv(path, 1)) samples.push_back(row[0]);
  std::sort(samples.begin(), samples.end());
  return samples;
}

json read_json_file(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw MissingFileError("cannot open config '" + path.string() + "'");
  try {
    return json::parse(in);
  } catch (const json::parse_error& e) {
    throw ConfigError(path.string() + ": " + e.what());
  }
}

Scenario parse_scenario(const json& doc, const std::filesystem::path& base_dir) {
  const std::string where = "config";
  check_keys(doc,
             {"seed", "scheduler", "frequency_optimizer", "grid_points", "sca_tolerance", "sca_max_iter",
              "epoch", "access_quantile", "profiles", "nodes", "origins", "path_defaults", "paths",
              "workload"},
             where);
  Scenario sc;
  sc.document = doc;
  sc.base_dir = base_dir;

  try {
    std::map<std::string, CpuProfile> profiles;
    if (doc.contains("profiles")) {
      if (!doc["profiles"].is_object()) throw ConfigError("config.profiles: expected an object");
      for (const auto& [name, spec] : doc["profiles"].items()) {
        profiles.emplace(name, parse_profile(spec, base_dir, "config.profiles." + name));
      }
    }
    const json& nodes = require(doc, "nodes", where);
    if (!nodes.is_array()) throw ConfigError("config.nodes: expected an array");
    for (std::size_t i = 0; i < nodes.size(); ++i) {
      sc.topology.nodes.push_back(parse_node(nodes[i], profiles, "config.nodes[" + std::to_string(i) + "]"));
    }

    const json& origins = require(doc, "origins", where);
    if (!origins.is_array()) throw ConfigError("config.origins: expected an array");
    for (const auto& o : origins) {
      if (!o.is_string()) throw ConfigError("config.origins: expected strings");
      sc.topology.origins.push_back(o.get<std::string>());
    }

    const json defaults = doc.value("path_defaults", json::object());
    const json& paths = require(doc, "paths", where);
    if (!paths.is_array()) throw ConfigError("config.paths: expected an array");
    for (std::size_t i = 0; i < paths.size(); ++i) {
      sc.topology.paths.push_back(
          parse_path(paths[i], defaults, base_dir, "config.paths[" + std::to_string(i) + "]"));
    }

    sc.workload = parse_workload(doc.value("workload", json::object()), sc.topology.origins, "config.workload");
    if (doc.contains("seed")) {
      if (!doc["seed"].is_number_unsigned()) throw ConfigError("config.seed: expected a non-negative integer");
      sc.workload.seed = doc["seed"].get<std::uint64_t>();
    }

    if (doc.contains("scheduler")) {
      const std::string name = string_field(doc, "scheduler", where);
      auto kind = parse_scheduler(name);
      if (!kind) {
        throw UnknownSchedulerError("unknown scheduler '" + name + "'; valid options: " + scheduler_names());
      }
      sc.params.scheduler = *kind;
    }
    if (doc.contains("frequency_optimizer")) {
      const std::string name = string_field(doc, "frequency_optimizer", where);
      auto method = parse_frequency_method(name);
      if (!method) throw ConfigError("config.frequency_optimizer: expected 'sca' or 'grid'");
      sc.params.options.method = *method;
    }
    auto& freq = sc.params.options.frequency;
    if (doc.contains("grid_points")) {
      if (!doc["grid_points"].is_number_unsigned() || doc["grid_points"].get<std::size_t>() < 2) {
        throw ConfigError("config.grid_points: expected an integer >= 2");
      }
      freq.grid_points = doc["grid_points"].get<std::size_t>();
    }
    if (doc.contains("sca_tolerance")) {
      freq.sca_tol_hz = quantity(doc["sca_tolerance"], Dimension::frequency, "config.sca_tolerance");
      if (!(freq.sca_tol_hz > 0.0)) throw ConfigError("config.sca_tolerance: must be positive");
    }
    if (doc.contains("sca_max_iter")) {
      if (!doc["sca_max_iter"].is_number_unsigned()) throw ConfigError("config.sca_max_iter: expected a count");
      freq.sca_max_iter = doc["sca_max_iter"].get<int>();
    }
    if (doc.contains("access_quantile")) {
      freq.access_quantile = quantity(doc["access_quantile"], Dimension::dimensionless, "config.access_quantile");
      if (!(freq.access_quantile > 0.0 && freq.access_quantile < 1.0)) {
        throw ConfigError("config.access_quantile: must lie in (0, 1)");
      }
    }
    if (doc.contains("epoch")) {
      sc.params.epoch_s = quantity(doc["epoch"], Dimension::time, "config.epoch");
      if (!(sc.params.epoch_s > 0.0)) throw ConfigError("config.epoch: must be positive");
    }
  } catch (const nlohmann::json::exception& e) {
    throw ConfigError(std::string("config: ") + e.what());
  }

  if (auto errors = validate(sc.topology); !errors.empty()) {
    std::string message = "invalid topology:";
    for (const auto& e : errors) message += "\n  " + e;
    throw ConfigError(message);
  }
  try {
    validate(sc.workload);
  } catch (const ValidationError& e) {
    throw ConfigError(std::string("config.workload: ") + e.what());
  }
  for (const auto& o : sc.workload.origins) {
    if (std::find(sc.topology.origins.begin(), sc.topology.origins.end(), o) == sc.topology.origins.end()) {
      throw ConfigError("config.workload.origins: unknown origin '" + o + "'");
    }
  }
  return sc;
}

Scenario load_scenario(const std::filesystem::path& path) {
  return parse_scenario(read_json_file(path), path.parent_path());
}

bool is_sweep_parameter(std::string_view parameter) {
  return parameter == "cloud.efficiency_scale" || parameter == "edge.efficiency_scale" ||
         parameter == "workload.arrival_rate" || parameter == "epoch" || parameter == "seed";
}

Scenario with_parameter(const Scenario& base, std::string_view parameter, double value) {
  json doc = base.document;
  if (parameter == "cloud.efficiency_scale" || parameter == "edge.efficiency_scale") {
    const std::string kind = parameter == "cloud.efficiency_scale" ? "cloud" : "edge";
    for (auto& node : doc["nodes"]) {
      if (node.value("kind", "") == kind) node["efficiency_scale"] = value;
    }
  } else if (parameter == "workload.arrival_rate") {
    doc["workload"]["arrival_rate"] = value;
  } else if (parameter == "epoch") {
    doc["epoch"] = value;
  } else if (parameter == "seed") {
    if (!(value >= 0.0) || value != std::floor(value)) throw ConfigError("seed must be a non-negative integer");
    doc["seed"] = static_cast<std::uint64_t>(value);
  } else {
    throw ConfigError("unknown sweep parameter '" + std::string(parameter) + "'");
  }
  return parse_scenario(doc, base.base_dir);
}

}  // namespace mecopt
