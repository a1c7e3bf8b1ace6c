#include "mecopt/energetics.hpp"

#include <stdexcept>
#include <string>

namespace mecopt {

double efficiency_at(const CpuProfile& profile, double f_hz) {
  return f_hz * profile.flops_per_cycle / profile.power_at(f_hz);
}

double compute_energy(const Task& task, const CpuProfile& profile, double f_hz) {
  return task.workload_flop() / efficiency_at(profile, f_hz);
}

double comm_energy(const Task& task, const NetworkPath& path) {
  return task.size_bits * (1.0 + task.output_ratio) *
         (path.gamma_wired_j_per_bit + path.gamma_wireless_j_per_bit);
}

EnergyBreakdown local_node_energy(const Task& task, const ComputeNode& node, double f_hz,
                                  const NetworkPath& path) {
  if (f_hz < node.f_min_hz || f_hz > node.f_max_hz) {
    throw std::out_of_range("frequency " + std::to_string(f_hz) + " Hz outside range of node '" +
                            node.id + "'");
  }
  return {compute_energy(task, node.profile, f_hz), comm_energy(task, path)};
}

}  // namespace mecopt
