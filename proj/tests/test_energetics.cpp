#include "mecopt/energetics.hpp"
#include "test_support.hpp"

#include <doctest.h>

#include <random>

using namespace mecopt;
using testing::rel_close;

TEST_CASE("efficiency of a flat profile") {
  const CpuProfile p = testing::flat_profile(10.0, 4.0);
  CHECK(rel_close(efficiency_at(p, 1e9), 4e8, 1e-12));
  CHECK(rel_close(efficiency_at(p, 2e9), 8e8, 1e-12));
  CHECK_THROWS_AS(efficiency_at(p, 5e9), std::out_of_range);
}

TEST_CASE("compute energy example") {
  // beta = 4 * 2.5e9 / 10 = 1e9 FLOP/J
  const CpuProfile p = testing::flat_profile(10.0, 4.0);
  const Task t = testing::task("t", 1e6, 100.0, 1.0);
  CHECK(rel_close(compute_energy(t, p, 2.5e9), 1e6 * 100.0 / 1e9, 1e-12));
  CHECK(rel_close(compute_energy(t, p, 2.5e9), 0.1, 1e-12));
}

TEST_CASE("communication energy examples") {
  const Task t = testing::task("t", 1e3, 100.0, 1.0, "dev1", 0.1);
  const NetworkPath p = testing::path("dev1", "n", 1e8, 1.0, 1e-10, 4e-8);
  CHECK(rel_close(comm_energy(t, p), 1e3 * 1.1 * (1e-10 + 4e-8), 1e-12));
  CHECK(rel_close(comm_energy(t, p), 4.411e-5, 1e-12));
  Task no_response = t;
  no_response.output_ratio = 0.0;
  CHECK(rel_close(comm_energy(no_response, p), 1e3 * (1e-10 + 4e-8), 1e-12));
  CHECK(rel_close(comm_energy(no_response, p), 4.01e-5, 1e-12));
}

TEST_CASE("composition of the compute and communication examples") {
  const CpuProfile prof = testing::flat_profile(10.0, 4.0);
  const NetworkPath p = testing::path("dev1", "n", 1e8, 1.0, 1e-10, 4e-8);
  const EnergyBreakdown e{compute_energy(testing::task("a", 1e6, 100.0, 1.0), prof, 2.5e9),
                          comm_energy(testing::task("b", 1e3, 100.0, 1.0, "dev1", 0.1), p)};
  CHECK(rel_close(e.total_j(), 0.1 + 4.411e-5, 1e-12));
}

TEST_CASE("local node energy composes both terms") {
  const ComputeNode node = make_edge_node("n", testing::flat_profile(10.0, 4.0));
  const NetworkPath p = testing::path("dev1", "n", 1e8, 1.0, 1e-10, 4e-8);
  Task t = testing::task("t", 1e6, 100.0, 1.0, "dev1", 0.1);
  const EnergyBreakdown e = local_node_energy(t, node, 2.5e9, p);
  CHECK(rel_close(e.compute_j, 0.1, 1e-12));
  CHECK(rel_close(e.comm_j, 1e6 * 1.1 * 4.01e-8, 1e-12));
  CHECK(e.total_j() == e.compute_j + e.comm_j);

  ComputeNode narrow = node;
  narrow.f_min_hz = 2e9;
  narrow.f_max_hz = 3e9;
  CHECK_THROWS_AS(local_node_energy(t, narrow, 3.5e9, p), std::out_of_range);
}

TEST_CASE("energy identities over random tasks") {
  const CpuProfile prof = i5_2500k_like_profile();
  std::mt19937_64 rng(42);
  std::uniform_real_distribution<double> L(1e4, 1e7), theta(10, 500), o(0.01, 0.2), f(1.6e9, 3.7e9),
      g(0.0, 1e-7), k(1.5, 10.0);
  for (int i = 0; i < 500; ++i) {
    Task t = testing::task("t", L(rng), theta(rng), 1.0, "dev1", o(rng));
    const double fi = f(rng);
    const NetworkPath p = testing::path("dev1", "n", 1e8, 1.0, g(rng), g(rng));

    // E_cp * beta == L * theta
    CHECK(rel_close(compute_energy(t, prof, fi) * efficiency_at(prof, fi), t.size_bits * t.intensity, 1e-12));
    // comm energy is linear in L and zero with zero gammas
    Task scaled = t;
    const double factor = k(rng);
    scaled.size_bits *= factor;
    CHECK(rel_close(comm_energy(scaled, p), factor * comm_energy(t, p), 1e-12));
    CHECK(comm_energy(t, testing::path("dev1", "n", 1e8, 1.0)) == 0.0);
    // theta = 0 leaves only communication
    Task idle = t;
    idle.intensity = 0.0;
    CHECK(compute_energy(idle, prof, fi) == 0.0);
  }
}
