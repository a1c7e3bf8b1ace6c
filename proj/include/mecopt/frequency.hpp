#ifndef MECOPT_FREQUENCY_HPP
#define MECOPT_FREQUENCY_HPP

#include "mecopt/energetics.hpp"
#include "mecopt/latency.hpp"

#include <optional>
#include <string_view>
#include <utility>
#include <vector>

namespace mecopt {

enum class FrequencyMethod { sca, grid };

std::string_view to_string(FrequencyMethod method);
std::optional<FrequencyMethod> parse_frequency_method(std::string_view name);

struct FrequencyOptions {
  std::size_t grid_points = 512;
  double sca_tol_hz = 1.0;
  int sca_max_iter = 50;
  double access_quantile = kDefaultAccessQuantile;
};

struct FrequencyChoice {
  double frequency_hz = 0.0;
  double energy_j = 0.0;  // compute + communication
};

/// Where a task would run: a node and, for edge nodes, one of its servers.
struct Slot {
  const ComputeNode* node = nullptr;
  std::size_t server = 0;
};

/// Closed interval of node frequencies meeting the deadline, or nullopt. The
/// lower end is nudged up until the recomputed delay fits the deadline.
std::optional<std::pair<double, double>> deadline_feasible_range(const Task& task, Slot slot,
                                                                 const NetworkPath& path,
                                                                 const NodeQueueState& state,
                                                                 double access_quantile);

/// Exhaustive search over a dense frequency grid. Candidates are
/// `grid_points` evenly spaced frequencies over [f_min, f_max], every profile
/// grid point inside that range, and the deadline boundary frequency. Each
/// candidate is checked against the deadline with total_delay(); the cheapest
/// feasible one wins, ties toward lower f.
std::optional<FrequencyChoice> optimize_frequency_grid(const Task& task, Slot slot,
                                                       const NetworkPath& path,
                                                       const NodeQueueState& state,
                                                       const FrequencyOptions& options = {});

/// Iterates of one SCA solve, for inspection in tests.
struct ScaTrace {
  std::vector<double> frequency_hz;
  std::vector<double> energy_j;
};

/// Successive convex approximation of min E(f) = L*theta*P(f)/(f*s) + E_comm
/// over the deadline-feasible interval.
///
/// The interpolated power curve is split as P = A - B with A and B convex
/// piecewise-linear (A collects the upward slope changes, B the downward ones).
/// At iterate f_k the concave part -B is replaced by its tangent, which gives a
/// convex majorant S_k >= P tight at f_k. In t = 1/f the surrogate objective
/// t*S_k(1/t) is convex (perspective of a convex function) and piecewise
/// linear, so its exact minimizer is an interval end or a kink of A. The
/// sequence of true energies is non-increasing.
std::optional<FrequencyChoice> optimize_frequency_sca(const Task& task, Slot slot,
                                                      const NetworkPath& path,
                                                      const NodeQueueState& state,
                                                      const FrequencyOptions& options = {},
                                                      ScaTrace* trace = nullptr);

std::optional<FrequencyChoice> optimize_frequency(FrequencyMethod method, const Task& task,
                                                  Slot slot, const NetworkPath& path,
                                                  const NodeQueueState& state,
                                                  const FrequencyOptions& options = {});

}  // namespace mecopt

#endif  // MECOPT_FREQUENCY_HPP
