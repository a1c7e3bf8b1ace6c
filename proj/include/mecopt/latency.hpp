#ifndef MECOPT_LATENCY_HPP
#define MECOPT_LATENCY_HPP

#include "mecopt/model.hpp"

#include <map>
#include <span>
#include <string>
#include <vector>

namespace mecopt {

/// Response access delay is budgeted at this empirical quantile.
inline constexpr double kDefaultAccessQuantile = 0.98;

struct DelayBreakdown {
  double uplink_access_s = 0.0;
  double transfer_s = 0.0;
  double propagation_s = 0.0;
  double queue_s = 0.0;
  double compute_s = 0.0;
  double response_access_s = 0.0;

  double total_s() const {
    return uplink_access_s + transfer_s + propagation_s + queue_s + compute_s + response_access_s;
  }
};

/// Per-server FIFO availability of edge nodes. Cloud nodes carry no state.
/// `busy_until` never decreases.
class NodeQueueState {
 public:
  double busy_until(const std::string& node_id, std::size_t server = 0) const;
  void occupy_until(const std::string& node_id, std::size_t server, double until_s);

  /// Server of `node` that frees up first (lowest index on ties).
  std::size_t earliest_server(const ComputeNode& node) const;

  bool operator==(const NodeQueueState&) const = default;

 private:
  std::map<std::string, std::vector<double>> busy_until_;
};

/// L * theta / (f * s). Throws std::out_of_range outside the profile grid.
double compute_delay(const Task& task, const CpuProfile& profile, double f_hz);

/// L * (1 + o) / r; zero for an infinite rate.
double transfer_delay(const Task& task, double rate_bps);

/// Request-only share L / r of the transfer delay.
double uplink_transfer_delay(const Task& task, double rate_bps);

double propagation_delay(double distance_km, double coeff_s_per_km = kOpticalPropagationSPerKm);

/// Nearest-rank empirical quantile: the ceil(q*n)-th smallest sample. Returns 0
/// for an empty list. Throws std::invalid_argument unless 0 < q < 1.
double access_delay_quantile(std::span<const double> samples, double q);

/// Time the request is fully delivered to `path.node_id` and ready for service.
double ready_time(const Task& task, const NetworkPath& path);

/// Wait for `server` of an edge node: max(0, busy_until - ready_at). Zero on cloud.
double queueing_delay(const NodeQueueState& state, const ComputeNode& node, double ready_at_s,
                      std::size_t server = 0);

DelayBreakdown total_delay(const Task& task, const ComputeNode& node, const NetworkPath& path,
                           double f_hz, const NodeQueueState& state, std::size_t server = 0,
                           double access_quantile = kDefaultAccessQuantile);

}  // namespace mecopt

#endif  // MECOPT_LATENCY_HPP
