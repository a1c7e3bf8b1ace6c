#ifndef MECOPT_SCHEDULER_HPP
#define MECOPT_SCHEDULER_HPP

#include "mecopt/frequency.hpp"

#include <Eigen/Dense>

#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace mecopt {

enum class SchedulerKind { optimal, cloud_only, nearest_mec, brute_force };

std::string_view to_string(SchedulerKind kind);
std::optional<SchedulerKind> parse_scheduler(std::string_view name);
/// "brute_force, cloud_only, nearest_mec, optimal"
std::string scheduler_names();

struct SchedulerOptions {
  FrequencyMethod method = FrequencyMethod::sca;
  FrequencyOptions frequency;
};

struct PlacementDecision {
  std::string task_id;
  std::optional<std::string> node_id;  // nullopt: rejected
  NodeKind node_kind = NodeKind::edge;
  std::size_t server = 0;
  double frequency_hz = 0.0;
  EnergyBreakdown energy;
  DelayBreakdown delay;

  bool rejected() const { return !node_id.has_value(); }
};

struct ScheduleResult {
  std::vector<PlacementDecision> decisions;  // one per task, batch order
  NodeQueueState state;                      // after the accepted placements
};

/// Column of the cost matrix: an edge server, or the cloud clone reserved for
/// one row.
struct CostColumn {
  std::optional<std::size_t> edge_node;  // index into Topology::nodes
  std::size_t server = 0;
  std::optional<Eigen::Index> clone_row;
};

/// Rows are batch tasks; columns are every edge server followed by one cloud
/// clone per task. Entry (i, j) is the minimum feasible energy of task i in
/// column j, +inf when infeasible. A clone column is finite only in its own row
/// and holds the best cloud node for that task.
struct CostMatrix {
  Eigen::MatrixXd energy_j;
  Eigen::MatrixXd frequency_hz;  // argmin frequency per entry, NaN when infeasible
  Eigen::MatrixXi node_index;    // node used per entry, -1 when infeasible
  std::vector<CostColumn> columns;
};

class GuardRailError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

inline constexpr std::size_t kBruteForceMaxTasks = 8;
inline constexpr std::size_t kBruteForceMaxEdgeNodes = 4;

CostMatrix build_cost_matrix(std::span<const Task> batch, const Topology& topology,
                             const NodeQueueState& state, const SchedulerOptions& options = {});

/// Hungarian assignment over the per-pair frequency-optimized costs.
ScheduleResult schedule_optimal(std::span<const Task> batch, const Topology& topology,
                                const NodeQueueState& state, const SchedulerOptions& options = {});

/// Every task on its cheapest cloud node; edge nodes are never used.
ScheduleResult schedule_cloud_only(std::span<const Task> batch, const Topology& topology,
                                   const NodeQueueState& state, const SchedulerOptions& options = {});

/// Every task on the edge node nearest its origin, queued FIFO in batch order.
ScheduleResult schedule_nearest_mec(std::span<const Task> batch, const Topology& topology,
                                    const NodeQueueState& state, const SchedulerOptions& options = {});

/// Exhaustive verification oracle. Enumerates every map of tasks to edge
/// servers (at most one task each), cloud, or rejection, with per-pair costs
/// from optimize_frequency_grid(). Picks the most accepted tasks, then the
/// least energy. Throws GuardRailError beyond 8 tasks or 4 edge nodes.
ScheduleResult brute_force_schedule(std::span<const Task> batch, const Topology& topology,
                                    const NodeQueueState& state, std::size_t freq_grid_points = 512,
                                    double access_quantile = kDefaultAccessQuantile);

ScheduleResult schedule(SchedulerKind kind, std::span<const Task> batch, const Topology& topology,
                        const NodeQueueState& state, const SchedulerOptions& options = {});

/// Sum of total energy over accepted decisions, in decision order.
double accepted_energy(std::span<const PlacementDecision> decisions);
std::size_t accepted_count(std::span<const PlacementDecision> decisions);

}  // namespace mecopt

#endif  // MECOPT_SCHEDULER_HPP
