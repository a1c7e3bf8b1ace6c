#ifndef MECOPT_CONFIG_HPP
#define MECOPT_CONFIG_HPP

#include "mecopt/simulator.hpp"

#include <json.hpp>

#include <filesystem>
#include <stdexcept>
#include <string>
#include <string_view>

namespace mecopt {

/// Config file does not exist or cannot be read.
class MissingFileError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Config content violates the schema (bad key, type, unit or value).
class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class UnknownSchedulerError : public ConfigError {
 public:
  using ConfigError::ConfigError;
};

/// Everything one run needs. `document` and `base_dir` are kept so sweeps can
/// rewrite a parameter and rebuild from the original description.
struct Scenario {
  Topology topology;
  WorkloadSpec workload;
  RunParams params;
  nlohmann::json document;
  std::filesystem::path base_dir;
};

/// Two-column CSV (frequency Hz, power W); a non-numeric first line is a header.
CpuProfile load_cpu_profile_csv(const std::filesystem::path& path, double flops_per_cycle);

/// One-column CSV of delays in seconds, returned sorted ascending.
std::vector<double> load_delay_samples_csv(const std::filesystem::path& path);

nlohmann::json read_json_file(const std::filesystem::path& path);

/// Relative file references inside `document` resolve against `base_dir`.
Scenario parse_scenario(const nlohmann::json& document, const std::filesystem::path& base_dir);
Scenario load_scenario(const std::filesystem::path& path);

/// Sweepable parameters: cloud.efficiency_scale, edge.efficiency_scale,
/// workload.arrival_rate, epoch, seed.
bool is_sweep_parameter(std::string_view parameter);
Scenario with_parameter(const Scenario& base, std::string_view parameter, double value);

}  // namespace mecopt

#endif  // MECOPT_CONFIG_HPP
