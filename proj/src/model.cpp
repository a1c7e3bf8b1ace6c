#include "mecopt/model.hpp"

#include <algorithm>
#include <cmath>
#include <set>
#include <stdexcept>
#include <utility>

namespace mecopt {

double CpuProfile::power_at(double f_hz) const {
  const Eigen::Index n = freq_grid_hz.size();
  if (n < 2 || !spans(f_hz)) {
    throw std::out_of_range("frequency " + std::to_string(f_hz) + " Hz outside profile grid");
  }
  const double* begin = freq_grid_hz.data();
  // First grid point strictly greater than f; clamp so f_max maps to the last segment.
  auto upper = std::upper_bound(begin, begin + n, f_hz);
  Eigen::Index hi = std::clamp<Eigen::Index>(upper - begin, 1, n - 1);
  Eigen::Index lo = hi - 1;
  const double f0 = freq_grid_hz(lo), f1 = freq_grid_hz(hi);
  if (f_hz == f0) return power_w(lo);
  if (f_hz == f1) return power_w(hi);
  const double w = (f_hz - f0) / (f1 - f0);
  return power_w(lo) + w * (power_w(hi) - power_w(lo));
}

CpuProfile with_efficiency_scale(const CpuProfile& profile, double scale) {
  if (!(scale > 0.0) || !std::isfinite(scale)) {
    throw std::invalid_argument("efficiency scale must be positive and finite");
  }
  CpuProfile scaled = profile;
  scaled.power_w = profile.power_w / scale;
  return scaled;
}

CpuProfile i5_2500k_like_profile() {
  CpuProfile p;
  p.freq_grid_hz = Eigen::VectorXd::LinSpaced(22, 1.6, 3.7) * 1e9;
  // Keep grid points exact multiples of 100 MHz.
  p.freq_grid_hz = (p.freq_grid_hz / 1e8).array().round() * 1e8;
  p.power_w.resize(22);
  p.power_w << 34.1, 34.6, 35.3, 36.0, 36.8, 37.8, 38.7, 39.8, 41.0, 42.2, 43.6, 45.2, 47.0, 49.1,
      51.3, 53.8, 56.4, 59.3, 63.3, 66.3, 69.6, 73.1;
  p.flops_per_cycle = 32.0;
  return p;
}

std::string_view to_string(NodeKind kind) {
  return kind == NodeKind::edge ? "edge" : "cloud";
}

ComputeNode make_edge_node(std::string id, CpuProfile profile, int servers) {
  ComputeNode node;
  node.id = std::move(id);
  node.kind = NodeKind::edge;
  node.f_min_hz = profile.min_frequency_hz();
  node.f_max_hz = profile.max_frequency_hz();
  node.profile = std::move(profile);
  node.servers = servers;
  return node;
}

ComputeNode make_cloud_node(std::string id, CpuProfile profile) {
  ComputeNode node;
  node.id = std::move(id);
  node.kind = NodeKind::cloud;
  node.f_min_hz = profile.min_frequency_hz();
  node.f_max_hz = profile.max_frequency_hz();
  node.profile = std::move(profile);
  node.servers = std::nullopt;
  return node;
}

const ComputeNode* Topology::find_node(std::string_view id) const {
  auto it = std::find_if(nodes.begin(), nodes.end(), [&](const ComputeNode& n) { return n.id == id; });
  return it == nodes.end() ? nullptr : &*it;
}

const NetworkPath* Topology::find_path(std::string_view origin, std::string_view node_id) const {
  auto it = std::find_if(paths.begin(), paths.end(), [&](const NetworkPath& p) {
    return p.origin == origin && p.node_id == node_id;
  });
  return it == paths.end() ? nullptr : &*it;
}

const NetworkPath& Topology::path(std::string_view origin, std::string_view node_id) const {
  if (const NetworkPath* p = find_path(origin, node_id)) return *p;
  throw std::out_of_range("missing path (" + std::string(origin) + ", " + std::string(node_id) + ")");
}

std::vector<std::string> validate(const CpuProfile& profile) {
  std::vector<std::string> errors;
  const auto& f = profile.freq_grid_hz;
  const auto& p = profile.power_w;
  if (f.size() < 2) errors.emplace_back("frequency grid needs at least 2 points");
  if (f.size() != p.size()) errors.emplace_back("frequency and power columns differ in length");
  for (Eigen::Index i = 0; i < f.size(); ++i) {
    if (!std::isfinite(f(i)) || f(i) <= 0.0) {
      errors.emplace_back("frequency grid entries must be positive and finite");
      break;
    }
  }
  for (Eigen::Index i = 1; i < f.size(); ++i) {
    if (!(f(i) > f(i - 1))) {
      errors.emplace_back("frequency grid not strictly increasing");
      break;
    }
  }
  for (Eigen::Index i = 0; i < p.size(); ++i) {
    if (!std::isfinite(p(i)) || p(i) <= 0.0) {
      errors.emplace_back("power entries must be positive and finite");
      break;
    }
  }
  if (!std::isfinite(profile.flops_per_cycle) || profile.flops_per_cycle <= 0.0) {
    errors.emplace_back("flops_per_cycle must be positive");
  }
  return errors;
}

std::vector<std::string> validate(const Topology& topology) {
  std::vector<std::string> errors;
  std::set<std::string> ids;
  for (const auto& node : topology.nodes) {
    const std::string where = "node '" + node.id + "': ";
    if (!ids.insert(node.id).second) errors.push_back("duplicate node id '" + node.id + "'");
    auto profile_errors = validate(node.profile);
    for (auto& e : profile_errors) errors.push_back(where + e);
    if (profile_errors.empty()) {
      if (!(node.f_min_hz <= node.f_max_hz)) errors.push_back(where + "f_min exceeds f_max");
      if (!node.profile.spans(node.f_min_hz) || !node.profile.spans(node.f_max_hz)) {
        errors.push_back(where + "frequency range outside profile grid");
      }
    }
    if (node.is_cloud() && node.servers.has_value()) {
      errors.push_back(where + "cloud nodes have unbounded servers");
    }
    if (node.is_edge() && (!node.servers.has_value() || *node.servers < 1)) {
      errors.push_back(where + "edge nodes need a finite positive server count");
    }
  }

  std::set<std::string> origins;
  for (const auto& o : topology.origins) {
    if (!origins.insert(o).second) errors.push_back("duplicate origin '" + o + "'");
  }

  std::set<std::pair<std::string, std::string>> seen;
  for (const auto& path : topology.paths) {
    const std::string where = "path (" + path.origin + ", " + path.node_id + "): ";
    if (!seen.emplace(path.origin, path.node_id).second) errors.push_back(where + "duplicate path");
    if (!ids.count(path.node_id)) errors.push_back(where + "unknown node");
    if (!origins.count(path.origin)) errors.push_back(where + "unknown origin");
    if (!(path.rate_bps > 0.0)) errors.push_back(where + "rate must be positive");
    if (!(path.gamma_wired_j_per_bit >= 0.0) || !(path.gamma_wireless_j_per_bit >= 0.0)) {
      errors.push_back(where + "per-bit energies must be non-negative");
    }
    if (!(path.distance_km >= 0.0) || !(path.prop_coeff_s_per_km >= 0.0)) {
      errors.push_back(where + "distance and propagation coefficient must be non-negative");
    }
    if (std::any_of(path.response_access_delay.begin(), path.response_access_delay.end(),
                    [](double d) { return !(d >= 0.0) || !std::isfinite(d); })) {
      errors.push_back(where + "access delay samples must be non-negative");
    }
  }

  for (const auto& o : topology.origins) {
    for (const auto& node : topology.nodes) {
      if (!seen.count({o, node.id})) errors.push_back("missing path (" + o + ", " + node.id + ")");
    }
  }
  return errors;
}

}  // namespace mecopt
