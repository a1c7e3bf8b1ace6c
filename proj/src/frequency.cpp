#include "mecopt/frequency.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

namespace mecopt {

std::string_view to_string(FrequencyMethod method) {
  return method == FrequencyMethod::sca ? "sca" : "grid";
}

std::optional<FrequencyMethod> parse_frequency_method(std::string_view name) {
  if (name == "sca") return FrequencyMethod::sca;
  if (name == "grid") return FrequencyMethod::grid;
  return std::nullopt;
}

std::optional<std::pair<double, double>> deadline_feasible_range(const Task& task, Slot slot,
                                                                 const NetworkPath& path,
                                                                 const NodeQueueState& state,
                                                                 double access_quantile) {
  const ComputeNode& node = *slot.node;
  auto fits = [&](double f) {
    return total_delay(task, node, path, f, state, slot.server, access_quantile).total_s() <=
           task.deadline_s;
  };
  // Delay is non-increasing in f, so the fastest clock decides feasibility.
  const DelayBreakdown fastest =
      total_delay(task, node, path, node.f_max_hz, state, slot.server, access_quantile);
  if (!(fastest.total_s() <= task.deadline_s)) return std::nullopt;

  const double flop = task.workload_flop();
  if (flop == 0.0) return std::make_pair(node.f_min_hz, node.f_max_hz);

  const double slack = task.deadline_s - (fastest.total_s() - fastest.compute_s);
  double f_lo = slack > 0.0 ? flop / (node.profile.flops_per_cycle * slack) : node.f_max_hz;
  f_lo = std::clamp(f_lo, node.f_min_hz, node.f_max_hz);
  for (int ulps = 0; !fits(f_lo); ++ulps) {
    f_lo = ulps < 64 ? std::nextafter(f_lo, node.f_max_hz) : node.f_max_hz;
  }
  return std::make_pair(f_lo, node.f_max_hz);
}

std::optional<FrequencyChoice> optimize_frequency_grid(const Task& task, Slot slot,
                                                       const NetworkPath& path,
                                                       const NodeQueueState& state,
                                                       const FrequencyOptions& options) {
  const ComputeNode& node = *slot.node;
  const CpuProfile& profile = node.profile;

  std::vector<double> candidates;
  const Eigen::VectorXd dense = Eigen::VectorXd::LinSpaced(
      static_cast<Eigen::Index>(std::max<std::size_t>(options.grid_points, 2)), node.f_min_hz,
      node.f_max_hz);
  candidates.assign(dense.data(), dense.data() + dense.size());
  for (Eigen::Index i = 0; i < profile.freq_grid_hz.size(); ++i) {
    const double f = profile.freq_grid_hz(i);
    if (f >= node.f_min_hz && f <= node.f_max_hz) candidates.push_back(f);
  }
  if (auto range = deadline_feasible_range(task, slot, path, state, options.access_quantile)) {
    candidates.push_back(range->first);
  }
  std::sort(candidates.begin(), candidates.end());
  candidates.erase(std::unique(candidates.begin(), candidates.end()), candidates.end());

  // Only the compute term depends on f; the rest is evaluated once.
  DelayBreakdown delay =
      total_delay(task, node, path, node.f_max_hz, state, slot.server, options.access_quantile);

  std::optional<FrequencyChoice> best;
  for (double f : candidates) {
    delay.compute_s = compute_delay(task, profile, f);
    if (!(delay.total_s() <= task.deadline_s)) continue;
    const double energy = local_node_energy(task, node, f, path).total_j();
    if (!best || energy < best->energy_j) best = FrequencyChoice{f, energy};
  }
  return best;
}

namespace {

// P = A - B over the profile grid, A and B convex piecewise-linear.
class PowerSplit {
 public:
  explicit PowerSplit(const CpuProfile& profile)
      : f0_(profile.freq_grid_hz(0)), p0_(profile.power_w(0)) {
    const Eigen::Index n = profile.freq_grid_hz.size();
    const Eigen::VectorXd slopes = (profile.power_w.tail(n - 1) - profile.power_w.head(n - 1)).array() /
                                   (profile.freq_grid_hz.tail(n - 1) - profile.freq_grid_hz.head(n - 1)).array();
    slope0_ = slopes(0);
    for (Eigen::Index i = 1; i + 1 < n; ++i) {
      const double change = slopes(i) - slopes(i - 1);
      if (change > 0.0) convex_kinks_.push_back({profile.freq_grid_hz(i), change});
      if (change < 0.0) concave_kinks_.push_back({profile.freq_grid_hz(i), -change});
    }
  }

  double convex_part(double f) const {
    double value = p0_ + slope0_ * (f - f0_);
    for (const auto& k : convex_kinks_) value += k.weight * std::max(0.0, f - k.f_hz);
    return value;
  }

  double concave_part(double f) const {
    double value = 0.0;
    for (const auto& k : concave_kinks_) value += k.weight * std::max(0.0, f - k.f_hz);
    return value;
  }

  // Left derivative of the concave part: a valid subgradient everywhere.
  double concave_slope(double f) const {
    double slope = 0.0;
    for (const auto& k : concave_kinks_) {
      if (k.f_hz < f) slope += k.weight;
    }
    return slope;
  }

  template <typename Fn>
  void for_each_convex_kink(Fn&& fn) const {
    for (const auto& k : convex_kinks_) fn(k.f_hz);
  }

 private:
  struct Kink {
    double f_hz;
    double weight;
  };
  double f0_, p0_, slope0_ = 0.0;
  std::vector<Kink> convex_kinks_;
  std::vector<Kink> concave_kinks_;
};

}  // namespace

std::optional<FrequencyChoice> optimize_frequency_sca(const Task& task, Slot slot,
                                                      const NetworkPath& path,
                                                      const NodeQueueState& state,
                                                      const FrequencyOptions& options,
                                                      ScaTrace* trace) {
  if (!(options.sca_tol_hz > 0.0)) throw std::invalid_argument("SCA tolerance must be positive");
  const ComputeNode& node = *slot.node;
  const auto range = deadline_feasible_range(task, slot, path, state, options.access_quantile);
  if (!range) return std::nullopt;
  const auto [f_lo, f_hi] = *range;

  auto true_energy = [&](double f) { return local_node_energy(task, node, f, path).total_j(); };
  auto record = [&](double f, double e) {
    if (trace) {
      trace->frequency_hz.push_back(f);
      trace->energy_j.push_back(e);
    }
  };

  if (task.workload_flop() == 0.0) {
    const double e = true_energy(f_lo);
    record(f_lo, e);
    return FrequencyChoice{f_lo, e};
  }

  const PowerSplit split(node.profile);
  const double scale = task.workload_flop() / node.profile.flops_per_cycle;

  std::vector<double> candidates{f_lo, f_hi};
  split.for_each_convex_kink([&](double f) {
    if (f > f_lo && f < f_hi) candidates.push_back(f);
  });
  std::sort(candidates.begin(), candidates.end());

  double f_k = f_hi;
  double e_k = true_energy(f_k);
  record(f_k, e_k);
  for (int iter = 0; iter < options.sca_max_iter; ++iter) {
    const double anchor = split.concave_part(f_k);
    const double slope = split.concave_slope(f_k);
    auto surrogate = [&](double f) {
      return scale * (split.convex_part(f) - anchor - slope * (f - f_k)) / f;
    };

    double f_next = candidates.front();
    double best = surrogate(f_next);
    for (double f : candidates) {
      const double s = surrogate(f);
      if (s < best) {
        best = s;
        f_next = f;
      }
    }

    const double e_next = true_energy(f_next);
    if (e_next > e_k) break;  // majorization guarantees descent up to rounding
    const double step = std::abs(f_next - f_k);
    f_k = f_next;
    e_k = e_next;
    record(f_k, e_k);
    if (step <= options.sca_tol_hz) break;
  }
  return FrequencyChoice{f_k, e_k};
}

std::optional<FrequencyChoice> optimize_frequency(FrequencyMethod method, const Task& task,
                                                  Slot slot, const NetworkPath& path,
                                                  const NodeQueueState& state,
                                                  const FrequencyOptions& options) {
  return method == FrequencyMethod::sca ? optimize_frequency_sca(task, slot, path, state, options)
                                        : optimize_frequency_grid(task, slot, path, state, options);
}

}  // namespace mecopt
