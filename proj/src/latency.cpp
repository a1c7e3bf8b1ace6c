#include "mecopt/latency.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace mecopt {

double NodeQueueState::busy_until(const std::string& node_id, std::size_t server) const {
  auto it = busy_until_.find(node_id);
  if (it == busy_until_.end() || server >= it->second.size()) return 0.0;
  return it->second[server];
}

void NodeQueueState::occupy_until(const std::string& node_id, std::size_t server, double until_s) {
  auto& servers = busy_until_[node_id];
  if (servers.size() <= server) servers.resize(server + 1, 0.0);
  servers[server] = std::max(servers[server], until_s);
}

std::size_t NodeQueueState::earliest_server(const ComputeNode& node) const {
  std::size_t best = 0;
  for (std::size_t s = 1; s < static_cast<std::size_t>(node.server_count()); ++s) {
    if (busy_until(node.id, s) < busy_until(node.id, best)) best = s;
  }
  return best;
}

double compute_delay(const Task& task, const CpuProfile& profile, double f_hz) {
  if (!profile.spans(f_hz)) {
    throw std::out_of_range("frequency " + std::to_string(f_hz) + " Hz outside profile grid");
  }
  return task.workload_flop() / (f_hz * profile.flops_per_cycle);
}

double transfer_delay(const Task& task, double rate_bps) {
  return task.size_bits * (1.0 + task.output_ratio) / rate_bps;
}

double uplink_transfer_delay(const Task& task, double rate_bps) {
  return task.size_bits / rate_bps;
}

double propagation_delay(double distance_km, double coeff_s_per_km) {
  // Coefficients like 7.5e-6 are not representable, but 7500 ns/km is; scaling
  // first keeps round distances exact (1000 km gives exactly 7.5e-3 s).
  constexpr double ns = 1e9;
  return distance_km * (coeff_s_per_km * ns) / ns;
}

double access_delay_quantile(std::span<const double> samples, double q) {
  if (!(q > 0.0 && q < 1.0)) throw std::invalid_argument("quantile must lie in (0, 1)");
  if (samples.empty()) return 0.0;

  const std::size_t n = samples.size();
  // q*n can land a rounding error above an integer (0.07 * 100); absorb that.
  double rank = std::ceil(q * static_cast<double>(n) - 1e-9);
  std::size_t k = std::clamp<std::size_t>(static_cast<std::size_t>(rank), 1, n);

  if (std::is_sorted(samples.begin(), samples.end())) return samples[k - 1];
  std::vector<double> sorted(samples.begin(), samples.end());
  std::nth_element(sorted.begin(), sorted.begin() + static_cast<std::ptrdiff_t>(k - 1), sorted.end());
  return sorted[k - 1];
}

double ready_time(const Task& task, const NetworkPath& path) {
  return task.arrival_s + task.uplink_access_delay_s + uplink_transfer_delay(task, path.rate_bps) +
         propagation_delay(path.distance_km, path.prop_coeff_s_per_km);
}

double queueing_delay(const NodeQueueState& state, const ComputeNode& node, double ready_at_s,
                      std::size_t server) {
  if (node.is_cloud()) return 0.0;
  return std::max(0.0, state.busy_until(node.id, server) - ready_at_s);
}

DelayBreakdown total_delay(const Task& task, const ComputeNode& node, const NetworkPath& path,
                           double f_hz, const NodeQueueState& state, std::size_t server,
                           double access_quantile) {
  DelayBreakdown d;
  d.uplink_access_s = task.uplink_access_delay_s;
  d.transfer_s = transfer_delay(task, path.rate_bps);
  d.propagation_s = propagation_delay(path.distance_km, path.prop_coeff_s_per_km);
  d.queue_s = queueing_delay(state, node, ready_time(task, path), server);
  d.compute_s = compute_delay(task, node.profile, f_hz);
  d.response_access_s = access_delay_quantile(path.response_access_delay, access_quantile);
  return d;
}

}  // namespace mecopt
