/*
 * Copyright 2026 The vanetsim Authors.
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 *     https://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */

#pragma once

// KPI aggregation, analytic throughput models and report emission.

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <string>
#include <string_view>
#include <vector>

#include "vanetsim/config.hpp"
#include "vanetsim/gas.hpp"
#include "vanetsim/sim.hpp"

namespace vanetsim {

/// Analytic throughput (Mbps) from cluster size C and per-vehicle data D (Mbit):
/// C * D / (t_b + t_s + t_n + t_c).
template <typename Scalar>
Scalar throughput_by_cluster(Scalar cluster_size, Scalar data_mbit, Scalar t_b, Scalar t_s, Scalar t_n, Scalar t_c) {
  return cluster_size * data_mbit / (t_b + t_s + t_n + t_c);
}

/// Analytic throughput (Mbps) from vehicle count V: V * D / (t_b + t_s + t_n + t_v).
template <typename Scalar>
Scalar throughput_by_vehicles(Scalar vehicles, Scalar data_mbit, Scalar t_b, Scalar t_s, Scalar t_n, Scalar t_v) {
  return vehicles * data_mbit / (t_b + t_s + t_n + t_v);
}

/// Throws std::invalid_argument for C < 1, D < 0 or a zero denominator.
double throughput_by_cluster(double cluster_size, double data_mbit, const DelayModel& d);
double throughput_by_vehicles(double vehicles, double data_mbit, const DelayModel& d);

struct MetricsRow {
  std::uint64_t vehicles = 0;
  std::uint64_t cluster_size = 0;
  std::uint64_t nlt_rounds = 0;
  double pdr_pct = 0.0;
  double thrpt_kbps = 0.0;
  double eted_s = 0.0;
  double ecm_mj = 0.0;
  std::uint64_t overhead_msgs = 0;

  friend bool operator==(const MetricsRow&, const MetricsRow&) = default;
};

inline constexpr std::string_view kKpiHeader =
    "vehicles,cluster_size,nlt_rounds,pdr_pct,thrpt_kbps,eted_s,ecm_mj,overhead_msgs";

/// KPIs from the report counters. Throws std::invalid_argument when the
/// report covers fewer rounds than configured.
MetricsRow compute_kpis(const RunReport& run);

/// Mean members per cluster over all snapshots (0 without clusters).
double mean_cluster_size(const RunReport& run);

/// Mean generated Mbit per vehicle per 10-round window.
double data_per_vehicle_mbit(const RunReport& run);

/// Delay model with t_n replaced by the mean effective t_n of delivered
/// messages.
DelayModel effective_delays(const RunReport& run);

/// Analytic throughputs for a run. The cluster-size model uses the
/// configured size target when set, else the realized mean cluster size.
double model_throughput_by_cluster(const RunReport& run);
double model_throughput_by_vehicles(const RunReport& run);

/// One sweep cell with its KPI row and analytic throughputs.
struct SweepCell {
  std::uint32_t vehicles = 0;
  std::uint32_t cluster_size = 0;
  std::uint64_t seed = 0;
  MetricsRow row;
  double model_thrpt_cluster_mbps = 0.0;
  double model_thrpt_vehicles_mbps = 0.0;
};

std::string kpi_csv(const std::vector<MetricsRow>& rows);
std::vector<MetricsRow> parse_kpi_csv(std::string_view text);

struct ReportFiles {
  std::vector<std::filesystem::path> written;
};

/// Writes kpi.csv, the plot series (fig4_throughput_c<size>.csv per cluster
/// size, fig5_overhead.csv) and, when given, gas_table.csv and gas_fit.csv.
/// Throws std::invalid_argument on empty input and std::runtime_error when
/// the destination cannot be written.
ReportFiles emit_report(const std::vector<SweepCell>& cells, const std::filesystem::path& out_dir,
                        const GasTable* gas_table = nullptr);

/// The fixed gas table bundled with the project (transactions, gas units).
const GasTable& reference_gas_table();

/// Seed for a sweep cell, independent of the other cells in the grid.
std::uint64_t sweep_cell_seed(std::uint64_t base_seed, std::uint32_t vehicles, std::uint32_t cluster_size);
ScenarioConfig sweep_cell_config(const ScenarioConfig& base, std::uint32_t vehicles, std::uint32_t cluster_size);
/// KPIs and model throughputs of a finished run, keyed by its own config.
SweepCell cell_from_report(const RunReport& report);
SweepCell run_cell(const ScenarioConfig& base, std::uint32_t vehicles, std::uint32_t cluster_size);

/// Grid in (vehicles, cluster size) order; cells run in parallel.
std::vector<SweepCell> run_sweep(const ScenarioConfig& base, const std::vector<std::uint32_t>& vehicles,
                                 const std::vector<std::uint32_t>& cluster_sizes);

}  // namespace vanetsim
