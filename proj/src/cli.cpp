#include "mecopt/cli.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <iostream>
#include <sstream>

namespace mecopt::cli {

namespace {

std::string field(const std::optional<double>& v) { return v ? format_number(*v) : std::string(); }

template <typename Fn>
int guarded(std::ostream& err, Fn&& body) {
  try {
    return body();
  } catch (const MissingFileError& e) {
    err << "error: " << e.what() << "\n";
    return exit_code::missing_file;
  } catch (const UnknownSchedulerError& e) {
    err << "error: " << e.what() << "\n";
    return exit_code::unknown_scheduler;
  } catch (const GuardRailError& e) {
    err << "error: guard rail: " << e.what() << "\n";
    return exit_code::guard_rail;
  } catch (const ConfigError& e) {
    err << "error: " << e.what() << "\n";
    return exit_code::schema;
  } catch (const ValidationError& e) {
    err << "error: " << e.what() << "\n";
    return exit_code::schema;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return exit_code::failure;
  }
}

SchedulerKind require_scheduler(const std::string& name) {
  auto kind = parse_scheduler(name);
  if (!kind) throw UnknownSchedulerError("unknown scheduler '" + name + "'; valid options: " + scheduler_names());
  return *kind;
}

// Writes through `out` unless a file path is given.
template <typename Fn>
void emit(const std::optional<std::filesystem::path>& path, std::ostream& out, Fn&& write) {
  if (!path) {
    write(out);
    return;
  }
  std::ofstream file(*path);
  if (!file) throw std::runtime_error("cannot write '" + path->string() + "'");
  write(file);
}

}  // namespace

const std::vector<std::string>& sweep_columns() {
  static const std::vector<std::string> columns{
      "sweep_value",      "seed",         "scheduler",    "mean_energy_per_task_j", "mec_share_pct",
      "mean_theta_mec",   "mean_theta_cloud", "rejection_rate", "n_accepted"};
  return columns;
}

const std::vector<std::string>& run_columns() {
  static const std::vector<std::string> columns{
      "scheduler",          "seed",
      "n_generated",        "n_accepted",
      "n_rejected",         "n_mec",
      "n_cloud",            "deadline_violations",
      "mean_energy_per_task_j", "mec_share_pct",
      "mean_theta_mec",     "mean_theta_cloud",
      "rejection_rate",     "mean_compute_energy_j",
      "mean_comm_energy_j", "mean_frequency_hz",
      "mean_delay_s",       "mean_uplink_access_s",
      "mean_transfer_s",    "mean_propagation_s",
      "mean_queue_s",       "mean_compute_s",
      "mean_response_access_s", "total_energy_j"};
  return columns;
}

std::string format_number(double value) {
  char buf[64];
  auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, value);
  return ec == std::errc{} ? std::string(buf, ptr) : std::string("nan");
}

namespace {

void write_header(std::ostream& out, const std::vector<std::string>& columns) {
  for (std::size_t i = 0; i < columns.size(); ++i) out << (i ? "," : "") << columns[i];
  out << "\n";
}

}  // namespace

void write_run_csv(std::ostream& out, const std::string& scheduler, std::uint64_t seed, const RunMetrics& m) {
  write_header(out, run_columns());
  out << scheduler << ',' << seed << ',' << m.n_generated << ',' << m.n_accepted << ',' << m.n_rejected << ','
      << m.n_mec << ',' << m.n_cloud << ',' << m.deadline_violations << ',' << field(m.mean_energy_per_task_j)
      << ',' << field(m.mec_share_pct) << ',' << field(m.mean_theta_mec) << ',' << field(m.mean_theta_cloud)
      << ',' << field(m.rejection_rate) << ',' << field(m.mean_compute_energy_j) << ','
      << field(m.mean_comm_energy_j) << ',' << field(m.mean_frequency_hz) << ',' << field(m.mean_delay_s)
      << ',' << field(m.mean_uplink_access_s) << ',' << field(m.mean_transfer_s) << ','
      << field(m.mean_propagation_s) << ',' << field(m.mean_queue_s) << ',' << field(m.mean_compute_s) << ','
      << field(m.mean_response_access_s) << ',' << format_number(m.total_energy_j) << "\n";
}

void write_sweep_csv(std::ostream& out, const std::vector<SweepRow>& rows) {
  write_header(out, sweep_columns());
  for (const auto& r : rows) {
    const RunMetrics& m = r.metrics;
    out << format_number(r.value) << ',' << r.seed << ',' << r.scheduler << ',' << field(m.mean_energy_per_task_j)
        << ',' << field(m.mec_share_pct) << ',' << field(m.mean_theta_mec) << ',' << field(m.mean_theta_cloud)
        << ',' << field(m.rejection_rate) << ',' << m.n_accepted << "\n";
  }
}

SweepSpec load_sweep_spec(const std::filesystem::path& path) {
  const nlohmann::json doc = read_json_file(path);
  if (!doc.is_object()) throw ConfigError("sweep: expected an object");
  for (const auto& [key, value] : doc.items()) {
    if (key != "base" && key != "parameter" && key != "values" && key != "seeds" && key != "schedulers") {
      throw ConfigError("sweep: unknown key '" + key + "'");
    }
  }
  SweepSpec spec;
  try {
    spec.base = path.parent_path() / doc.at("base").get<std::string>();
    spec.parameter = doc.at("parameter").get<std::string>();
    spec.values = doc.at("values").get<std::vector<double>>();
    spec.seeds = doc.at("seeds").get<std::vector<std::uint64_t>>();
    spec.schedulers = doc.at("schedulers").get<std::vector<std::string>>();
  } catch (const nlohmann::json::exception& e) {
    throw ConfigError(std::string("sweep: ") + e.what());
  }
  if (!is_sweep_parameter(spec.parameter)) {
    throw ConfigError("sweep: unknown parameter '" + spec.parameter + "'");
  }
  if (spec.values.empty() || spec.seeds.empty() || spec.schedulers.empty()) {
    throw ConfigError("sweep: values, seeds and schedulers must be non-empty");
  }
  for (const auto& name : spec.schedulers) require_scheduler(name);
  return spec;
}

std::vector<SweepRow> run_sweep(const SweepSpec& spec) {
  const Scenario base = load_scenario(spec.base);
  std::vector<std::string> schedulers = spec.schedulers;
  std::sort(schedulers.begin(), schedulers.end());

  std::vector<SweepRow> rows;
  for (double value : spec.values) {
    const Scenario point = with_parameter(base, spec.parameter, value);
    for (std::uint64_t seed : spec.seeds) {
      WorkloadSpec workload = point.workload;
      workload.seed = seed;
      const auto tasks = generate_workload(workload);
      for (const auto& name : schedulers) {
        RunParams params = point.params;
        params.scheduler = require_scheduler(name);
        try {
          rows.push_back({value, seed, name, simulate(point.topology, tasks, params).metrics});
        } catch (const std::exception& e) {
          throw std::runtime_error("sweep row (value=" + format_number(value) + ", seed=" + std::to_string(seed) +
                                   ", scheduler=" + name + "): " + e.what());
        }
      }
    }
  }
  return rows;
}

std::string plot_script(const std::filesystem::path& csv_path, const std::string& parameter) {
  std::ostringstream s;
  s << R"(#!/usr/bin/env python3
"""Plots a mecopt sweep CSV: mean energy per task, MEC share and mean task
intensity by placement, each against the swept parameter."""
import csv
import sys
from collections import defaultdict

import matplotlib
matplotlib.use("Agg")
import matplotlib.pyplot as plt

CSV = sys.argv[1] if len(sys.argv) > 1 else )"
    << '"' << csv_path.generic_string() << '"' << R"(
XLABEL = ")" << parameter << R"("


def mean(xs):
    xs = [x for x in xs if x is not None]
    return sum(xs) / len(xs) if xs else float("nan")


def num(text):
    return float(text) if text != "" else None


series = defaultdict(lambda: defaultdict(list))
with open(CSV, newline="") as fh:
    for row in csv.DictReader(fh):
        key = (row["scheduler"], float(row["sweep_value"]))
        for col in ("mean_energy_per_task_j", "mec_share_pct", "mean_theta_mec", "mean_theta_cloud"):
            series[key][col].append(num(row[col]))

schedulers = sorted({k[0] for k in series})


def curve(scheduler, col):
    xs = sorted(v for s, v in series if s == scheduler)
    ys = []
    for x in xs:
        present = [v for v in series[(scheduler, x)][col] if v is not None]
        ys.append(mean(present) if present else float("nan"))
    return xs, ys


fig, ax = plt.subplots()
for name in schedulers:
    xs, ys = curve(name, "mean_energy_per_task_j")
    ax.plot(xs, ys, marker="o", label=name)
ax.set_xscale("log")
ax.set_yscale("log")
ax.set_xlabel(XLABEL)
ax.set_ylabel("mean energy per task [J]")
ax.legend()
fig.tight_layout()
fig.savefig(CSV + ".energy.png", dpi=150)

if "optimal" in schedulers:
    fig, ax = plt.subplots()
    xs, ys = curve("optimal", "mec_share_pct")
    ax.plot(xs, ys, marker="o")
    ax.set_xscale("log")
    ax.set_ylim(0, 105)
    ax.set_xlabel(XLABEL)
    ax.set_ylabel("tasks executed on MEC nodes [%]")
    fig.tight_layout()
    fig.savefig(CSV + ".mec_share.png", dpi=150)

    fig, ax = plt.subplots()
    for col, label in (("mean_theta_cloud", "cloud"), ("mean_theta_mec", "MEC")):
        xs, ys = curve("optimal", col)
        ax.plot(xs, ys, marker="o", label=label)
    ax.set_xscale("log")
    ax.set_xlabel(XLABEL)
    ax.set_ylabel("mean task intensity [FLOP/bit]")
    ax.legend()
    fig.tight_layout()
    fig.savefig(CSV + ".intensity.png", dpi=150)
)";
  return s.str();
}

int cmd_run(const std::filesystem::path& config, const RunOverrides& overrides,
            const std::optional<std::filesystem::path>& out_path, std::ostream& out, std::ostream& err) {
  return guarded(err, [&] {
    Scenario sc = load_scenario(config);
    if (overrides.seed) sc.workload.seed = *overrides.seed;
    if (overrides.scheduler) sc.params.scheduler = require_scheduler(*overrides.scheduler);
    const RunMetrics metrics = run(sc.topology, sc.workload, sc.params);
    emit(out_path, out, [&](std::ostream& os) {
      write_run_csv(os, std::string(to_string(sc.params.scheduler)), sc.workload.seed, metrics);
    });
    return exit_code::ok;
  });
}

int cmd_sweep(const std::filesystem::path& sweep_config, const std::optional<std::filesystem::path>& out_path,
              bool emit_plot, std::ostream& out, std::ostream& err) {
  return guarded(err, [&] {
    const SweepSpec spec = load_sweep_spec(sweep_config);
    const auto rows = run_sweep(spec);
    emit(out_path, out, [&](std::ostream& os) { write_sweep_csv(os, rows); });
    if (emit_plot) {
      const std::filesystem::path csv = out_path ? *out_path : std::filesystem::path("sweep.csv");
      std::filesystem::path script = csv;
      script += ".plot.py";
      std::ofstream file(script);
      if (!file) throw std::runtime_error("cannot write '" + script.string() + "'");
      file << plot_script(csv, spec.parameter);
      err << "plot script written to " << script.string() << "\n";
    }
    return exit_code::ok;
  });
}

int cmd_oracle_check(const std::filesystem::path& config, std::ostream& out, std::ostream& err) {
  return guarded(err, [&] {
    const Scenario sc = load_scenario(config);
    const auto tasks = generate_workload(sc.workload);
    if (auto errors = validate(sc.topology); !errors.empty()) throw ValidationError(errors.front());
    const auto& freq = sc.params.options.frequency;
    const ScheduleResult oracle =
        brute_force_schedule(tasks, sc.topology, NodeQueueState{}, freq.grid_points, freq.access_quantile);
    const ScheduleResult optimal = schedule_optimal(tasks, sc.topology, NodeQueueState{}, sc.params.options);

    const double oracle_total = accepted_energy(oracle.decisions);
    const double optimal_total = accepted_energy(optimal.decisions);
    const std::size_t oracle_n = accepted_count(oracle.decisions);
    const std::size_t optimal_n = accepted_count(optimal.decisions);
    const double gap = oracle_total > 0.0 ? (optimal_total - oracle_total) / oracle_total
                                          : (optimal_total > 0.0 ? INFINITY : 0.0);

    out << "tasks," << tasks.size() << "\n"
        << "optimal_method," << to_string(sc.params.options.method) << "\n"
        << "optimal_accepted," << optimal_n << "\n"
        << "brute_force_accepted," << oracle_n << "\n"
        << "optimal_total_j," << format_number(optimal_total) << "\n"
        << "brute_force_total_j," << format_number(oracle_total) << "\n"
        << "relative_gap," << format_number(gap) << "\n";

    if (optimal_n != oracle_n) {
      err << "error: accepted task counts differ\n";
      return exit_code::oracle_gap;
    }
    if (std::abs(gap) > kOracleGapTolerance) {
      err << "error: relative gap " << format_number(gap) << " exceeds " << format_number(kOracleGapTolerance)
          << "\n";
      return exit_code::oracle_gap;
    }
    return exit_code::ok;
  });
}

}  // namespace mecopt::cli
