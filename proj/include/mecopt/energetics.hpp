#ifndef MECOPT_ENERGETICS_HPP
#define MECOPT_ENERGETICS_HPP

#include "mecopt/model.hpp"

namespace mecopt {

/// Per-task energy in Joules. The computation term is L*theta/beta(f); the
/// communication term covers request and response over every link segment.
struct EnergyBreakdown {
  double compute_j = 0.0;
  double comm_j = 0.0;

  double total_j() const { return compute_j + comm_j; }
};

/// beta(f) = f * s / P(f) in FLOP per Joule, with P piecewise-linear over the
/// profile grid. Throws std::out_of_range when f is outside the grid span.
double efficiency_at(const CpuProfile& profile, double f_hz);

/// L * theta / beta(f).
double compute_energy(const Task& task, const CpuProfile& profile, double f_hz);

/// L * (1 + o) * (gamma_wired + gamma_wireless).
double comm_energy(const Task& task, const NetworkPath& path);

/// Both terms for running `task` on `node` at `f_hz`. Throws std::out_of_range
/// when f is outside the node's allowed range.
EnergyBreakdown local_node_energy(const Task& task, const ComputeNode& node, double f_hz,
                                  const NetworkPath& path);

}  // namespace mecopt

#endif  // MECOPT_ENERGETICS_HPP
