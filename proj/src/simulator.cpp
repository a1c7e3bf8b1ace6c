#include "mecopt/simulator.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <random>
#include <set>

namespace mecopt {

std::optional<std::string> Distribution::check() const {
  if (!std::isfinite(a) || !std::isfinite(b)) return "parameters must be finite";
  if (kind == Kind::uniform) {
    if (a < 0.0) return "uniform lower bound must be non-negative";
    if (b < a) return "uniform upper bound below lower bound";
  } else {
    if (!(a > 0.0)) return "lognormal median must be positive";
    if (b < 0.0) return "lognormal sigma must be non-negative";
  }
  return std::nullopt;
}

namespace {

template <typename Rng>
double sample(const Distribution& d, Rng& rng) {
  if (d.kind == Distribution::Kind::uniform) {
    if (d.a == d.b) return d.a;
    return std::uniform_real_distribution<double>(d.a, d.b)(rng);
  }
  if (d.b == 0.0) return d.a;
  return std::lognormal_distribution<double>(std::log(d.a), d.b)(rng);
}

}  // namespace

void validate(const WorkloadSpec& spec) {
  auto require = [](const Distribution& d, const char* name, bool positive) {
    if (auto problem = d.check()) throw ValidationError(std::string(name) + ": " + *problem);
    if (positive && d.kind == Distribution::Kind::uniform && !(d.a > 0.0)) {
      throw ValidationError(std::string(name) + ": support must be positive");
    }
  };
  require(spec.size_bits, "size_bits", true);
  require(spec.intensity, "intensity", false);
  require(spec.output_ratio, "output_ratio", false);
  require(spec.deadline_s, "deadline_s", true);
  require(spec.uplink_access_delay_s, "uplink_access_delay_s", false);
  if (!(spec.arrival_rate_per_s > 0.0) || !std::isfinite(spec.arrival_rate_per_s)) {
    throw ValidationError("arrival rate must be positive");
  }
  if (!spec.n_tasks && !spec.horizon_s) throw ValidationError("workload needs n_tasks or horizon_s");
  if (spec.horizon_s && !(*spec.horizon_s >= 0.0)) throw ValidationError("horizon must be non-negative");
  if (spec.origins.empty()) throw ValidationError("workload needs at least one origin");
  if (!spec.origin_weights.empty()) {
    if (spec.origin_weights.size() != spec.origins.size()) {
      throw ValidationError("origin weights must match origins");
    }
    if (std::any_of(spec.origin_weights.begin(), spec.origin_weights.end(),
                    [](double w) { return !(w >= 0.0) || !std::isfinite(w); }) ||
        std::accumulate(spec.origin_weights.begin(), spec.origin_weights.end(), 0.0) <= 0.0) {
      throw ValidationError("origin weights must be non-negative with a positive sum");
    }
  }
}

std::vector<Task> generate_workload(const WorkloadSpec& spec) {
  validate(spec);
  std::mt19937_64 rng(spec.seed);
  std::exponential_distribution<double> gap(spec.arrival_rate_per_s);
  std::discrete_distribution<std::size_t> pick_origin =
      spec.origin_weights.empty()
          ? std::discrete_distribution<std::size_t>(spec.origins.size(), 0.0, 1.0,
                                                    [](double) { return 1.0; })
          : std::discrete_distribution<std::size_t>(spec.origin_weights.begin(),
                                                    spec.origin_weights.end());

  std::vector<Task> tasks;
  double clock = 0.0;
  for (std::size_t i = 0; !spec.n_tasks || i < *spec.n_tasks; ++i) {
    clock += gap(rng);
    if (spec.horizon_s && clock > *spec.horizon_s) break;
    Task t;
    t.id = "t" + std::to_string(i);
    t.arrival_s = clock;
    t.origin = spec.origins[pick_origin(rng)];
    t.size_bits = sample(spec.size_bits, rng);
    t.intensity = sample(spec.intensity, rng);
    t.output_ratio = sample(spec.output_ratio, rng);
    t.deadline_s = sample(spec.deadline_s, rng);
    t.uplink_access_delay_s = sample(spec.uplink_access_delay_s, rng);
    tasks.push_back(std::move(t));
  }
  return tasks;
}

RunMetrics summarize(const Topology& topology, std::span<const Task> tasks,
                     std::span<const PlacementDecision> decisions, double access_quantile) {
  RunMetrics m;
  m.n_generated = tasks.size();

  double theta_mec = 0.0, theta_cloud = 0.0, freq = 0.0;
  DelayBreakdown delay_sum;
  double delay_total = 0.0;

  NodeQueueState replay;
  for (std::size_t i = 0; i < decisions.size(); ++i) {
    const Task& task = tasks[i];
    const PlacementDecision& d = decisions[i];
    if (d.rejected()) {
      ++m.n_rejected;
      continue;
    }
    ++m.n_accepted;
    (d.node_kind == NodeKind::edge ? theta_mec : theta_cloud) += task.intensity;
    (d.node_kind == NodeKind::edge ? m.n_mec : m.n_cloud) += 1;
    m.total_energy_j += d.energy.total_j();
    m.total_compute_energy_j += d.energy.compute_j;
    m.total_comm_energy_j += d.energy.comm_j;
    freq += d.frequency_hz;

    delay_sum.uplink_access_s += d.delay.uplink_access_s;
    delay_sum.transfer_s += d.delay.transfer_s;
    delay_sum.propagation_s += d.delay.propagation_s;
    delay_sum.queue_s += d.delay.queue_s;
    delay_sum.compute_s += d.delay.compute_s;
    delay_sum.response_access_s += d.delay.response_access_s;
    delay_total += d.delay.total_s();

    // Independent deadline check: rebuild the delay from the model and a
    // replayed queue rather than trusting the scheduler's breakdown.
    const ComputeNode* node = topology.find_node(*d.node_id);
    const NetworkPath* path = node ? topology.find_path(task.origin, node->id) : nullptr;
    if (!node || !path) {
      ++m.deadline_violations;
      continue;
    }
    const DelayBreakdown check =
        total_delay(task, *node, *path, d.frequency_hz, replay, d.server, access_quantile);
    if (!(check.total_s() <= task.deadline_s)) ++m.deadline_violations;
    if (node->is_edge()) {
      replay.occupy_until(node->id, d.server, ready_time(task, *path) + check.queue_s + check.compute_s);
    }
  }
  m.n_rejected += tasks.size() - decisions.size();

  if (m.n_generated > 0) m.rejection_rate = double(m.n_rejected) / double(m.n_generated);
  if (m.n_accepted > 0) {
    const double n = double(m.n_accepted);
    m.mean_energy_per_task_j = m.total_energy_j / n;
    m.mean_compute_energy_j = m.total_compute_energy_j / n;
    m.mean_comm_energy_j = m.total_comm_energy_j / n;
    m.mec_share_pct = 100.0 * double(m.n_mec) / n;
    m.mean_frequency_hz = freq / n;
    m.mean_delay_s = delay_total / n;
    m.mean_uplink_access_s = delay_sum.uplink_access_s / n;
    m.mean_transfer_s = delay_sum.transfer_s / n;
    m.mean_propagation_s = delay_sum.propagation_s / n;
    m.mean_queue_s = delay_sum.queue_s / n;
    m.mean_compute_s = delay_sum.compute_s / n;
    m.mean_response_access_s = delay_sum.response_access_s / n;
  }
  if (m.n_mec > 0) m.mean_theta_mec = theta_mec / double(m.n_mec);
  if (m.n_cloud > 0) m.mean_theta_cloud = theta_cloud / double(m.n_cloud);
  return m;
}

RunResult simulate(const Topology& topology, std::span<const Task> tasks, const RunParams& params) {
  if (auto errors = validate(topology); !errors.empty()) {
    std::string message = "invalid topology:";
    for (const auto& e : errors) message += "\n  " + e;
    throw ValidationError(message);
  }
  if (!(params.epoch_s > 0.0)) throw ValidationError("epoch length must be positive");
  const std::set<std::string> origins(topology.origins.begin(), topology.origins.end());
  for (const Task& t : tasks) {
    if (!origins.count(t.origin)) throw ValidationError("task " + t.id + " has unknown origin '" + t.origin + "'");
  }

  std::vector<Task> ordered(tasks.begin(), tasks.end());
  std::stable_sort(ordered.begin(), ordered.end(),
                   [](const Task& x, const Task& y) { return x.arrival_s < y.arrival_s; });

  RunResult result;
  NodeQueueState state;
  std::size_t begin = 0;
  while (begin < ordered.size()) {
    const double epoch = std::floor(ordered[begin].arrival_s / params.epoch_s);
    std::size_t end = begin;
    while (end < ordered.size() && std::floor(ordered[end].arrival_s / params.epoch_s) == epoch) ++end;
    std::span<const Task> batch(ordered.data() + begin, end - begin);
    ScheduleResult scheduled = schedule(params.scheduler, batch, topology, state, params.options);
    state = std::move(scheduled.state);
    for (auto& d : scheduled.decisions) result.decisions.push_back(std::move(d));
    begin = end;
  }
  result.metrics = summarize(topology, ordered, result.decisions, params.options.frequency.access_quantile);
  return result;
}

RunMetrics run(const Topology& topology, const WorkloadSpec& workload, const RunParams& params) {
  const auto tasks = generate_workload(workload);
  return simulate(topology, tasks, params).metrics;
}

}  // namespace mecopt
