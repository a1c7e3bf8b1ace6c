#ifndef MECOPT_CLI_HPP
#define MECOPT_CLI_HPP

#include "mecopt/config.hpp"

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

namespace mecopt::cli {

namespace exit_code {
inline constexpr int ok = 0;
inline constexpr int failure = 1;
inline constexpr int missing_file = 2;
inline constexpr int schema = 3;
inline constexpr int unknown_scheduler = 4;
inline constexpr int oracle_gap = 5;
inline constexpr int guard_rail = 6;
}  // namespace exit_code

/// Relative gap above which oracle-check fails.
inline constexpr double kOracleGapTolerance = 0.02;

struct RunOverrides {
  std::optional<std::uint64_t> seed;
  std::optional<std::string> scheduler;
};

struct SweepSpec {
  std::filesystem::path base;
  std::string parameter;
  std::vector<double> values;
  std::vector<std::uint64_t> seeds;
  std::vector<std::string> schedulers;
};

struct SweepRow {
  double value = 0.0;
  std::uint64_t seed = 0;
  std::string scheduler;
  RunMetrics metrics;
};

/// Columns of a sweep CSV, in order.
const std::vector<std::string>& sweep_columns();
/// Columns of the single-row run CSV, in order.
const std::vector<std::string>& run_columns();

/// Shortest decimal form that parses back to the same double.
std::string format_number(double value);

void write_run_csv(std::ostream& out, const std::string& scheduler, std::uint64_t seed, const RunMetrics& m);
void write_sweep_csv(std::ostream& out, const std::vector<SweepRow>& rows);

/// Reads a sweep file; `base` is resolved against the sweep file's directory.
SweepSpec load_sweep_spec(const std::filesystem::path& path);

/// Rows ordered by value (as listed), then seed (as listed), then scheduler name.
std::vector<SweepRow> run_sweep(const SweepSpec& spec);

/// Self-contained matplotlib script drawing energy, MEC share and mean
/// intensity against the swept parameter from `csv_path`.
std::string plot_script(const std::filesystem::path& csv_path, const std::string& parameter);

int cmd_run(const std::filesystem::path& config, const RunOverrides& overrides,
            const std::optional<std::filesystem::path>& out_path, std::ostream& out, std::ostream& err);

int cmd_sweep(const std::filesystem::path& sweep_config, const std::optional<std::filesystem::path>& out_path,
              bool emit_plot, std::ostream& out, std::ostream& err);

/// Treats the scenario's whole workload as one batch from idle queues and
/// compares schedule_optimal against brute_force_schedule.
int cmd_oracle_check(const std::filesystem::path& config, std::ostream& out, std::ostream& err);

}  // namespace mecopt::cli

#endif  // MECOPT_CLI_HPP
