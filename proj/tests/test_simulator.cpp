#include "mecopt/config.hpp"
#include "mecopt/simulator.hpp"
#include "test_support.hpp"

#include <doctest.h>

using namespace mecopt;
using testing::rel_close;

namespace {

Scenario default_scenario() { return load_scenario(testing::source_dir() / "configs" / "default.json"); }

bool same_tasks(const std::vector<Task>& a, const std::vector<Task>& b) {
  if (a.size() != b.size()) return false;
  for (std::size_t i = 0; i < a.size(); ++i) {
    if (a[i].id != b[i].id || a[i].size_bits != b[i].size_bits || a[i].intensity != b[i].intensity ||
        a[i].output_ratio != b[i].output_ratio || a[i].deadline_s != b[i].deadline_s ||
        a[i].arrival_s != b[i].arrival_s || a[i].origin != b[i].origin ||
        a[i].uplink_access_delay_s != b[i].uplink_access_delay_s)
      return false;
  }
  return true;
}

}  // namespace

TEST_CASE("workload generation is deterministic per seed") {
  WorkloadSpec spec;
  spec.n_tasks = 200;
  spec.origins = {"dev1", "dev2"};
  spec.seed = 5;
  const auto a = generate_workload(spec);
  CHECK(same_tasks(a, generate_workload(spec)));
  spec.seed = 6;
  CHECK(!same_tasks(a, generate_workload(spec)));
  for (std::size_t i = 1; i < a.size(); ++i) CHECK(a[i].arrival_s >= a[i - 1].arrival_s);
  CHECK(a[7].id == "t7");
}

TEST_CASE("degenerate uniform gives a constant") {
  WorkloadSpec spec;
  spec.n_tasks = 50;
  spec.origins = {"dev1"};
  spec.size_bits = Distribution::uniform(1e5, 1e5);
  for (const Task& t : generate_workload(spec)) CHECK(t.size_bits == 1e5);
}

TEST_CASE("Poisson arrival count over a horizon") {
  WorkloadSpec spec;
  spec.horizon_s = 100.0;
  spec.arrival_rate_per_s = 10.0;
  spec.origins = {"dev1"};
  double total = 0.0;
  for (std::uint64_t seed = 1; seed <= 20; ++seed) {
    spec.seed = seed;
    const auto tasks = generate_workload(spec);
    for (const Task& t : tasks) CHECK(t.arrival_s <= 100.0);
    total += double(tasks.size());
  }
  CHECK(total / 20.0 >= 800.0);
  CHECK(total / 20.0 <= 1200.0);
}

TEST_CASE("attribute ranges and origin weights") {
  WorkloadSpec spec;
  spec.n_tasks = 2000;
  spec.origins = {"a", "b"};
  spec.origin_weights = {1.0, 0.0};
  for (const Task& t : generate_workload(spec)) {
    CHECK(t.origin == "a");
    CHECK(t.intensity >= 10.0);
    CHECK(t.intensity <= 500.0);
    CHECK(t.deadline_s >= 0.05);
    CHECK(t.deadline_s <= 1.0);
    CHECK(t.size_bits > 0.0);
  }
}

TEST_CASE("invalid workload parameters are rejected") {
  WorkloadSpec spec;
  spec.n_tasks = 5;
  spec.origins = {"dev1"};
  SUBCASE("inverted range") { spec.intensity = Distribution::uniform(5.0, 1.0); }
  SUBCASE("negative support") { spec.deadline_s = Distribution::uniform(-1.0, 1.0); }
  SUBCASE("bad rate") { spec.arrival_rate_per_s = 0.0; }
  SUBCASE("no stop rule") { spec.n_tasks.reset(); }
  SUBCASE("weights mismatch") { spec.origin_weights = {1.0, 2.0}; }
  CHECK_THROWS_AS(validate(spec), ValidationError);
}

TEST_CASE("empty workload gives empty metrics") {
  const Scenario s = default_scenario();
  const RunResult r = simulate(s.topology, std::vector<Task>{}, s.params);
  CHECK(r.metrics.n_generated == 0);
  CHECK(!r.metrics.mean_energy_per_task_j);
  CHECK(!r.metrics.mec_share_pct);
  CHECK(!r.metrics.rejection_rate);
}

TEST_CASE("cloud only never uses the edge") {
  Scenario s = default_scenario();
  s.workload.n_tasks = 100;
  s.params.scheduler = SchedulerKind::cloud_only;
  const RunMetrics m = run(s.topology, s.workload, s.params);
  CHECK(m.n_mec == 0);
  REQUIRE(m.mec_share_pct);
  CHECK(*m.mec_share_pct == 0.0);
  CHECK(!m.mean_theta_mec);
}

TEST_CASE("single accepted task metrics equal its decision") {
  Scenario s = default_scenario();
  const Task t = testing::task("only", 1e6, 100.0, 0.5, "dev1", 0.1, 0.0);
  const RunResult r = simulate(s.topology, std::vector{t}, s.params);
  REQUIRE(r.metrics.n_accepted == 1);
  CHECK(*r.metrics.mean_energy_per_task_j == r.decisions[0].energy.total_j());
  CHECK(*r.metrics.mean_delay_s == r.decisions[0].delay.total_s());
}

TEST_CASE("metric accounting closes and deadlines hold") {
  Scenario s = default_scenario();
  s.workload.n_tasks = 300;
  for (auto kind : {SchedulerKind::optimal, SchedulerKind::cloud_only, SchedulerKind::nearest_mec}) {
    s.params.scheduler = kind;
    const RunMetrics m = run(s.topology, s.workload, s.params);
    CHECK(m.n_accepted + m.n_rejected == m.n_generated);
    CHECK(m.n_mec + m.n_cloud == m.n_accepted);
    CHECK(rel_close(m.total_energy_j, m.total_compute_energy_j + m.total_comm_energy_j, 1e-9));
    CHECK(m.deadline_violations == 0);
  }
}

TEST_CASE("summarize catches a forged deadline miss") {
  const Scenario s = default_scenario();
  const Task t = testing::task("only", 1e6, 100.0, 0.5, "dev1", 0.1, 0.0);
  RunResult r = simulate(s.topology, std::vector{t}, s.params);
  REQUIRE(!r.decisions[0].rejected());
  Task tighter = t;
  tighter.deadline_s = r.decisions[0].delay.total_s() * 0.5;
  const RunMetrics m = summarize(s.topology, std::vector{tighter}, r.decisions, s.params.options.frequency.access_quantile);
  CHECK(m.deadline_violations == 1);
}

TEST_CASE("heavy tasks go to the efficient cloud") {
  Scenario base = default_scenario();
  base = with_parameter(base, "cloud.efficiency_scale", 32.0);
  base.workload.n_tasks = 200;
  for (std::uint64_t seed = 1; seed <= 10; ++seed) {
    base.workload.seed = seed;
    const RunMetrics m = run(base.topology, base.workload, base.params);
    REQUIRE(m.mean_theta_cloud);
    REQUIRE(m.mean_theta_mec);
    CHECK(*m.mean_theta_cloud > *m.mean_theta_mec);
  }
}

TEST_CASE("runs are bit-reproducible") {
  Scenario s = default_scenario();
  s.workload.n_tasks = 150;
  const RunResult a = simulate(s.topology, generate_workload(s.workload), s.params);
  const RunResult b = simulate(s.topology, generate_workload(s.workload), s.params);
  REQUIRE(a.decisions.size() == b.decisions.size());
  for (std::size_t i = 0; i < a.decisions.size(); ++i) {
    CHECK(a.decisions[i].node_id == b.decisions[i].node_id);
    CHECK(a.decisions[i].frequency_hz == b.decisions[i].frequency_hz);
    CHECK(a.decisions[i].energy.total_j() == b.decisions[i].energy.total_j());
  }
  CHECK(a.metrics.total_energy_j == b.metrics.total_energy_j);
}
