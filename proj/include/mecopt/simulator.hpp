#ifndef MECOPT_SIMULATOR_HPP
#define MECOPT_SIMULATOR_HPP

#include "mecopt/scheduler.hpp"

#include <cstdint>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

namespace mecopt {

class ValidationError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct Distribution {
  enum class Kind { uniform, lognormal };
  Kind kind = Kind::uniform;
  double a = 0.0;  // uniform: low;  lognormal: median
  double b = 0.0;  // uniform: high; lognormal: sigma of the underlying normal

  static Distribution uniform(double low, double high) { return {Kind::uniform, low, high}; }
  static Distribution lognormal(double median, double sigma) { return {Kind::lognormal, median, sigma}; }

  /// Empty when the parameters describe a valid non-negative distribution.
  std::optional<std::string> check() const;
  double min_support() const { return kind == Kind::uniform ? a : 0.0; }
};

struct WorkloadSpec {
  std::optional<std::size_t> n_tasks;  // stop after this many tasks
  std::optional<double> horizon_s;     // stop at the first arrival past this time
  Distribution size_bits = Distribution::lognormal(1e6, 0.5);
  Distribution intensity = Distribution::uniform(10.0, 500.0);
  Distribution output_ratio = Distribution::uniform(0.01, 0.2);
  Distribution deadline_s = Distribution::uniform(0.05, 1.0);
  Distribution uplink_access_delay_s = Distribution::uniform(0.0, 0.002);
  double arrival_rate_per_s = 20.0;
  std::vector<std::string> origins;
  std::vector<double> origin_weights;  // empty: uniform over origins
  std::uint64_t seed = 1;
};

/// Throws ValidationError on invalid parameters.
void validate(const WorkloadSpec& spec);

/// Poisson arrivals with i.i.d. task attributes. Deterministic for a seed;
/// arrivals ascending; ids "t0", "t1", ...
std::vector<Task> generate_workload(const WorkloadSpec& spec);

struct RunParams {
  SchedulerKind scheduler = SchedulerKind::optimal;
  SchedulerOptions options;
  double epoch_s = 0.1;
};

/// Aggregates over a run. Means are over accepted tasks and absent when there
/// are none.
struct RunMetrics {
  std::size_t n_generated = 0;
  std::size_t n_accepted = 0;
  std::size_t n_rejected = 0;
  std::size_t n_mec = 0;
  std::size_t n_cloud = 0;
  std::size_t deadline_violations = 0;  // found by independent recomputation

  std::optional<double> mean_energy_per_task_j;
  std::optional<double> mec_share_pct;
  std::optional<double> mean_theta_mec;
  std::optional<double> mean_theta_cloud;
  std::optional<double> rejection_rate;

  std::optional<double> mean_compute_energy_j;
  std::optional<double> mean_comm_energy_j;
  std::optional<double> mean_frequency_hz;
  std::optional<double> mean_delay_s;
  std::optional<double> mean_uplink_access_s;
  std::optional<double> mean_transfer_s;
  std::optional<double> mean_propagation_s;
  std::optional<double> mean_queue_s;
  std::optional<double> mean_compute_s;
  std::optional<double> mean_response_access_s;

  // Accumulators; total == compute + comm up to rounding.
  double total_energy_j = 0.0;
  double total_compute_energy_j = 0.0;
  double total_comm_energy_j = 0.0;
};

struct RunResult {
  RunMetrics metrics;
  std::vector<PlacementDecision> decisions;  // arrival order
};

/// Runs the scheduler over fixed epochs of arrival time, carrying queue state
/// between epochs. Throws ValidationError for an invalid topology or tasks
/// whose origin has no paths.
RunResult simulate(const Topology& topology, std::span<const Task> tasks, const RunParams& params);

RunMetrics run(const Topology& topology, const WorkloadSpec& workload, const RunParams& params);

/// Metrics of `decisions` (matched to `tasks` by position) with deadlines
/// recomputed from scratch against `topology`.
RunMetrics summarize(const Topology& topology, std::span<const Task> tasks,
                     std::span<const PlacementDecision> decisions, double access_quantile);

}  // namespace mecopt

#endif  // MECOPT_SIMULATOR_HPP
