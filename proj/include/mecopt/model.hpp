#ifndef MECOPT_MODEL_HPP
#define MECOPT_MODEL_HPP

#include <Eigen/Dense>

#include <limits>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace mecopt {

/// Fiber propagation delay per kilometre of path length.
inline constexpr double kOpticalPropagationSPerKm = 7.5e-6;

/// One offloading request. All quantities SI (bits, seconds); intensity is
/// FLOP per input bit and the response is `output_ratio * size_bits` bits.
struct Task {
  std::string id;
  double size_bits = 0.0;
  double intensity = 0.0;
  double output_ratio = 0.0;
  double deadline_s = 0.0;
  double arrival_s = 0.0;
  std::string origin;
  double uplink_access_delay_s = 0.0;  // already incurred, measured

  double workload_flop() const { return size_bits * intensity; }
};

/// Tabulated package power against clock frequency. Power between grid
/// points is linearly interpolated; the table is the only source of truth.
struct CpuProfile {
  Eigen::VectorXd freq_grid_hz;
  Eigen::VectorXd power_w;
  double flops_per_cycle = 1.0;

  double min_frequency_hz() const { return freq_grid_hz(0); }
  double max_frequency_hz() const { return freq_grid_hz(freq_grid_hz.size() - 1); }
  bool spans(double f_hz) const { return f_hz >= min_frequency_hz() && f_hz <= max_frequency_hz(); }

  /// Piecewise-linear power at f. Throws std::out_of_range outside the grid.
  double power_at(double f_hz) const;
};

/// Profile with every power entry divided by `scale`, so efficiency at each
/// frequency grows by `scale` while speed (f*s) is unchanged.
CpuProfile with_efficiency_scale(const CpuProfile& profile, double scale);

/// Approximate Intel i5-2500K package power curve (1.6-3.7 GHz, 32 FLOP per
/// cycle). Shape-faithful: efficiency peaks at 2.7 GHz and a voltage step near
/// 3.4 GHz makes energy-per-FLOP non-convex. Not measured point values.
CpuProfile i5_2500k_like_profile();

enum class NodeKind { edge, cloud };

std::string_view to_string(NodeKind kind);

struct ComputeNode {
  std::string id;
  NodeKind kind = NodeKind::edge;
  CpuProfile profile;
  double f_min_hz = 0.0;
  double f_max_hz = 0.0;
  std::optional<int> servers = 1;  // nullopt: unbounded (cloud)

  bool is_cloud() const { return kind == NodeKind::cloud; }
  bool is_edge() const { return kind == NodeKind::edge; }
  int server_count() const { return servers.value_or(0); }
};

/// Builds a node whose frequency range is the full profile span.
ComputeNode make_edge_node(std::string id, CpuProfile profile, int servers = 1);
ComputeNode make_cloud_node(std::string id, CpuProfile profile);

struct NetworkPath {
  std::string origin;
  std::string node_id;
  double gamma_wired_j_per_bit = 0.0;
  double gamma_wireless_j_per_bit = 0.0;
  double rate_bps = std::numeric_limits<double>::infinity();  // inf: on-device
  double distance_km = 0.0;
  double prop_coeff_s_per_km = kOpticalPropagationSPerKm;
  std::vector<double> response_access_delay;  // seconds, empirical samples
};

struct Topology {
  std::vector<std::string> origins;
  std::vector<ComputeNode> nodes;
  std::vector<NetworkPath> paths;

  const ComputeNode* find_node(std::string_view id) const;
  const NetworkPath* find_path(std::string_view origin, std::string_view node_id) const;
  /// Throws std::out_of_range if the pair has no path.
  const NetworkPath& path(std::string_view origin, std::string_view node_id) const;
};

/// Invariant violations of a profile, each as a readable message.
std::vector<std::string> validate(const CpuProfile& profile);

/// Every invariant violation in the topology; empty means valid. A path must
/// exist for each (origin, node) pair.
std::vector<std::string> validate(const Topology& topology);

}  // namespace mecopt

#endif  // MECOPT_MODEL_HPP
