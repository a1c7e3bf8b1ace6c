#include "mecopt/scheduler.hpp"

#include "mecopt/hungarian.hpp"

#include <cmath>
#include <limits>

namespace mecopt {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

struct NodeChoice {
  std::size_t node_index;
  FrequencyChoice choice;
};

PlacementDecision rejected(const Task& task) {
  PlacementDecision d;
  d.task_id = task.id;
  return d;
}

// Commits `task` to (node, server) at f and advances the server's queue.
PlacementDecision place(const Task& task, const Topology& topology, std::size_t node_index,
                        std::size_t server, double f_hz, NodeQueueState& state,
                        double access_quantile) {
  const ComputeNode& node = topology.nodes[node_index];
  const NetworkPath& path = topology.path(task.origin, node.id);
  PlacementDecision d;
  d.task_id = task.id;
  d.node_id = node.id;
  d.node_kind = node.kind;
  d.server = server;
  d.frequency_hz = f_hz;
  d.delay = total_delay(task, node, path, f_hz, state, server, access_quantile);
  d.energy = local_node_energy(task, node, f_hz, path);
  if (node.is_edge()) {
    const double start = ready_time(task, path) + d.delay.queue_s;
    state.occupy_until(node.id, server, start + d.delay.compute_s);
  }
  return d;
}

std::optional<NodeChoice> best_cloud(const Task& task, const Topology& topology,
                                     const NodeQueueState& state, FrequencyMethod method,
                                     const FrequencyOptions& options) {
  std::optional<NodeChoice> best;
  for (std::size_t k = 0; k < topology.nodes.size(); ++k) {
    const ComputeNode& node = topology.nodes[k];
    if (!node.is_cloud()) continue;
    const NetworkPath& path = topology.path(task.origin, node.id);
    auto choice = optimize_frequency(method, task, Slot{&node, 0}, path, state, options);
    if (choice && (!best || choice->energy_j < best->choice.energy_j)) best = NodeChoice{k, *choice};
  }
  return best;
}

std::vector<std::pair<std::size_t, std::size_t>> edge_slots(const Topology& topology) {
  std::vector<std::pair<std::size_t, std::size_t>> slots;
  for (std::size_t k = 0; k < topology.nodes.size(); ++k) {
    const ComputeNode& node = topology.nodes[k];
    if (!node.is_edge()) continue;
    for (int s = 0; s < node.server_count(); ++s) slots.emplace_back(k, static_cast<std::size_t>(s));
  }
  return slots;
}

}  // namespace

std::string_view to_string(SchedulerKind kind) {
  switch (kind) {
    case SchedulerKind::optimal: return "optimal";
    case SchedulerKind::cloud_only: return "cloud_only";
    case SchedulerKind::nearest_mec: return "nearest_mec";
    case SchedulerKind::brute_force: return "brute_force";
  }
  return "unknown";
}

std::optional<SchedulerKind> parse_scheduler(std::string_view name) {
  for (auto kind : {SchedulerKind::optimal, SchedulerKind::cloud_only, SchedulerKind::nearest_mec,
                    SchedulerKind::brute_force}) {
    if (to_string(kind) == name) return kind;
  }
  return std::nullopt;
}

std::string scheduler_names() { return "brute_force, cloud_only, nearest_mec, optimal"; }

CostMatrix build_cost_matrix(std::span<const Task> batch, const Topology& topology,
                             const NodeQueueState& state, const SchedulerOptions& options) {
  const auto slots = edge_slots(topology);
  const auto rows = static_cast<Eigen::Index>(batch.size());
  const auto cols = static_cast<Eigen::Index>(slots.size()) + rows;

  CostMatrix m;
  m.energy_j = Eigen::MatrixXd::Constant(rows, cols, kInf);
  m.frequency_hz = Eigen::MatrixXd::Constant(rows, cols, std::numeric_limits<double>::quiet_NaN());
  m.node_index = Eigen::MatrixXi::Constant(rows, cols, -1);
  for (const auto& [node_index, server] : slots) m.columns.push_back({node_index, server, std::nullopt});
  for (Eigen::Index i = 0; i < rows; ++i) m.columns.push_back({std::nullopt, 0, i});

  for (Eigen::Index i = 0; i < rows; ++i) {
    const Task& task = batch[static_cast<std::size_t>(i)];
    for (std::size_t c = 0; c < slots.size(); ++c) {
      const auto [node_index, server] = slots[c];
      const ComputeNode& node = topology.nodes[node_index];
      const NetworkPath& path = topology.path(task.origin, node.id);
      if (auto choice = optimize_frequency(options.method, task, Slot{&node, server}, path, state,
                                           options.frequency)) {
        const auto j = static_cast<Eigen::Index>(c);
        m.energy_j(i, j) = choice->energy_j;
        m.frequency_hz(i, j) = choice->frequency_hz;
        m.node_index(i, j) = static_cast<int>(node_index);
      }
    }
    if (auto cloud = best_cloud(task, topology, state, options.method, options.frequency)) {
      const Eigen::Index j = static_cast<Eigen::Index>(slots.size()) + i;
      m.energy_j(i, j) = cloud->choice.energy_j;
      m.frequency_hz(i, j) = cloud->choice.frequency_hz;
      m.node_index(i, j) = static_cast<int>(cloud->node_index);
    }
  }
  return m;
}

ScheduleResult schedule_optimal(std::span<const Task> batch, const Topology& topology,
                                const NodeQueueState& state, const SchedulerOptions& options) {
  ScheduleResult result{{}, state};
  if (batch.empty()) return result;

  const CostMatrix cost = build_cost_matrix(batch, topology, state, options);
  const auto assignment = hungarian(cost.energy_j);
  for (std::size_t i = 0; i < batch.size(); ++i) {
    const auto& column = assignment.column_of_row[i];
    if (!column) {
      result.decisions.push_back(rejected(batch[i]));
      continue;
    }
    const auto row = static_cast<Eigen::Index>(i);
    const auto node_index = static_cast<std::size_t>(cost.node_index(row, *column));
    const std::size_t server = cost.columns[static_cast<std::size_t>(*column)].server;
    result.decisions.push_back(place(batch[i], topology, node_index, server,
                                     cost.frequency_hz(row, *column), result.state,
                                     options.frequency.access_quantile));
  }
  return result;
}

ScheduleResult schedule_cloud_only(std::span<const Task> batch, const Topology& topology,
                                   const NodeQueueState& state, const SchedulerOptions& options) {
  ScheduleResult result{{}, state};
  for (const Task& task : batch) {
    auto cloud = best_cloud(task, topology, result.state, options.method, options.frequency);
    result.decisions.push_back(cloud ? place(task, topology, cloud->node_index, 0,
                                             cloud->choice.frequency_hz, result.state,
                                             options.frequency.access_quantile)
                                     : rejected(task));
  }
  return result;
}

ScheduleResult schedule_nearest_mec(std::span<const Task> batch, const Topology& topology,
                                    const NodeQueueState& state, const SchedulerOptions& options) {
  ScheduleResult result{{}, state};
  for (const Task& task : batch) {
    std::optional<std::size_t> nearest;
    for (std::size_t k = 0; k < topology.nodes.size(); ++k) {
      const ComputeNode& node = topology.nodes[k];
      if (!node.is_edge()) continue;
      const double distance = topology.path(task.origin, node.id).distance_km;
      if (!nearest) {
        nearest = k;
        continue;
      }
      const ComputeNode& incumbent = topology.nodes[*nearest];
      const double best_distance = topology.path(task.origin, incumbent.id).distance_km;
      if (distance < best_distance || (distance == best_distance && node.id < incumbent.id)) nearest = k;
    }
    if (!nearest) {
      result.decisions.push_back(rejected(task));
      continue;
    }
    const ComputeNode& node = topology.nodes[*nearest];
    const std::size_t server = result.state.earliest_server(node);
    const NetworkPath& path = topology.path(task.origin, node.id);
    auto choice = optimize_frequency(options.method, task, Slot{&node, server}, path, result.state,
                                     options.frequency);
    result.decisions.push_back(choice ? place(task, topology, *nearest, server, choice->frequency_hz,
                                              result.state, options.frequency.access_quantile)
                                      : rejected(task));
  }
  return result;
}

ScheduleResult brute_force_schedule(std::span<const Task> batch, const Topology& topology,
                                    const NodeQueueState& state, std::size_t freq_grid_points,
                                    double access_quantile) {
  std::size_t edge_nodes = 0;
  for (const auto& node : topology.nodes) edge_nodes += node.is_edge();
  if (batch.size() > kBruteForceMaxTasks) {
    throw GuardRailError("brute force supports at most " + std::to_string(kBruteForceMaxTasks) +
                         " tasks, got " + std::to_string(batch.size()));
  }
  if (edge_nodes > kBruteForceMaxEdgeNodes) {
    throw GuardRailError("brute force supports at most " + std::to_string(kBruteForceMaxEdgeNodes) +
                         " edge nodes, got " + std::to_string(edge_nodes));
  }

  FrequencyOptions options;
  options.grid_points = freq_grid_points;
  options.access_quantile = access_quantile;

  const auto slots = edge_slots(topology);
  const std::size_t n = batch.size();
  std::vector<std::vector<std::optional<FrequencyChoice>>> edge_cost(n);
  std::vector<std::optional<NodeChoice>> cloud_cost(n);
  for (std::size_t i = 0; i < n; ++i) {
    const Task& task = batch[i];
    for (const auto& [node_index, server] : slots) {
      const ComputeNode& node = topology.nodes[node_index];
      edge_cost[i].push_back(optimize_frequency_grid(task, Slot{&node, server},
                                                     topology.path(task.origin, node.id), state,
                                                     options));
    }
    cloud_cost[i] = best_cloud(task, topology, state, FrequencyMethod::grid, options);
  }

  // Option per task: slot index, slots.size() for cloud, or -1 for rejection.
  constexpr long kReject = -1;
  const auto cloud_option = static_cast<long>(slots.size());
  std::vector<long> current(n, kReject), best(n, kReject);
  std::size_t best_accepted = 0;
  double best_energy = kInf;
  std::vector<bool> used(slots.size(), false);

  auto search = [&](auto&& self, std::size_t i, std::size_t accepted, double energy) -> void {
    const std::size_t reachable = accepted + (n - i);
    if (reachable < best_accepted) return;
    if (reachable == best_accepted && energy >= best_energy) return;
    if (i == n) {
      best_accepted = accepted;
      best_energy = energy;
      best = current;
      return;
    }
    for (std::size_t s = 0; s < slots.size(); ++s) {
      if (used[s] || !edge_cost[i][s]) continue;
      used[s] = true;
      current[i] = static_cast<long>(s);
      self(self, i + 1, accepted + 1, energy + edge_cost[i][s]->energy_j);
      used[s] = false;
    }
    if (cloud_cost[i]) {
      current[i] = cloud_option;
      self(self, i + 1, accepted + 1, energy + cloud_cost[i]->choice.energy_j);
    }
    current[i] = kReject;
    self(self, i + 1, accepted, energy);
  };
  search(search, 0, 0, 0.0);

  ScheduleResult result{{}, state};
  for (std::size_t i = 0; i < n; ++i) {
    const Task& task = batch[i];
    if (best[i] == kReject) {
      result.decisions.push_back(rejected(task));
    } else if (best[i] == cloud_option) {
      result.decisions.push_back(place(task, topology, cloud_cost[i]->node_index, 0,
                                       cloud_cost[i]->choice.frequency_hz, result.state,
                                       access_quantile));
    } else {
      const auto [node_index, server] = slots[static_cast<std::size_t>(best[i])];
      result.decisions.push_back(place(task, topology, node_index, server,
                                       edge_cost[i][static_cast<std::size_t>(best[i])]->frequency_hz,
                                       result.state, access_quantile));
    }
  }
  return result;
}

ScheduleResult schedule(SchedulerKind kind, std::span<const Task> batch, const Topology& topology,
                        const NodeQueueState& state, const SchedulerOptions& options) {
  switch (kind) {
    case SchedulerKind::optimal: return schedule_optimal(batch, topology, state, options);
    case SchedulerKind::cloud_only: return schedule_cloud_only(batch, topology, state, options);
    case SchedulerKind::nearest_mec: return schedule_nearest_mec(batch, topology, state, options);
    case SchedulerKind::brute_force:
      return brute_force_schedule(batch, topology, state, options.frequency.grid_points,
                                  options.frequency.access_quantile);
  }
  return {{}, state};
}

double accepted_energy(std::span<const PlacementDecision> decisions) {
  double total = 0.0;
  for (const auto& d : decisions) {
    if (!d.rejected()) total += d.energy.total_j();
  }
  return total;
}

std::size_t accepted_count(std::span<const PlacementDecision> decisions) {
  std::size_t n = 0;
  for (const auto& d : decisions) n += !d.rejected();
  return n;
}

}  // namespace mecopt
