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

#include "vanetsim/metrics.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <future>
#include <map>
#include <sstream>
#include <stdexcept>
#include <thread>

#include "vanetsim/csv.hpp"
#include "vanetsim/rng.hpp"

namespace vanetsim {
namespace {

constexpr double kDataWindowRounds = 10.0;

void write_file(const std::filesystem::path& path, const std::string& content, ReportFiles& files) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot write " + path.string());
  out << content;
  if (!out) throw std::runtime_error("failed writing " + path.string());
  files.written.push_back(path);
}

std::string series_csv(std::string_view x_name, std::string_view y_name,
                       const std::vector<std::pair<double, double>>& points) {
  std::ostringstream os;
  os << x_name << ',' << y_name << '\n';
  for (const auto& [x, y] : points) os << format_double(x) << ',' << format_double(y) << '\n';
  return os.str();
}

std::uint64_t parse_count(const std::string& s) {
  const auto v = parse_double(s);
  if (!v || *v < 0 || std::floor(*v) != *v) throw std::invalid_argument("bad count field '" + s + "'");
  return static_cast<std::uint64_t>(*v);
}

double parse_real(const std::string& s) {
  const auto v = parse_double(s);
  if (!v) throw std::invalid_argument("bad numeric field '" + s + "'");
  return *v;
}

}  // namespace

double throughput_by_cluster(double cluster_size, double data_mbit, const DelayModel& d) {
  const double denom = d.t_b + d.t_s + d.t_n + d.t_c;
  if (cluster_size < 1.0) throw std::invalid_argument("cluster size must be >= 1");
  if (data_mbit < 0.0) throw std::invalid_argument("data volume must be >= 0");
  if (!(denom > 0.0)) throw std::invalid_argument("t_b + t_s + t_n + t_c must be > 0");
  return throughput_by_cluster<double>(cluster_size, data_mbit, d.t_b, d.t_s, d.t_n, d.t_c);
}

double throughput_by_vehicles(double vehicles, double data_mbit, const DelayModel& d) {
  const double denom = d.t_b + d.t_s + d.t_n + d.t_v;
  if (vehicles < 1.0) throw std::invalid_argument("vehicle count must be >= 1");
  if (data_mbit < 0.0) throw std::invalid_argument("data volume must be >= 0");
  if (!(denom > 0.0)) throw std::invalid_argument("t_b + t_s + t_n + t_v must be > 0");
  return throughput_by_vehicles<double>(vehicles, data_mbit, d.t_b, d.t_s, d.t_n, d.t_v);
}

double mean_cluster_size(const RunReport& run) {
  if (run.snapshots.empty()) return 0.0;
  double total = 0.0;
  for (const auto& s : run.snapshots) total += static_cast<double>(s.member_count);
  return total / static_cast<double>(run.snapshots.size());
}

MetricsRow compute_kpis(const RunReport& run) {
  if (run.rounds_completed != run.config.rounds)
    throw std::invalid_argument("run incomplete: " + std::to_string(run.rounds_completed) + " of " +
                                std::to_string(run.config.rounds) + " rounds");
  const Counters& c = run.counters;
  MetricsRow row;
  row.vehicles = run.config.n_vehicles;
  row.cluster_size = run.config.cluster_size_target
                         ? *run.config.cluster_size_target
                         : static_cast<std::uint64_t>(std::llround(mean_cluster_size(run)));
  row.nlt_rounds = c.first_depletion_round.value_or(run.rounds_completed);
  row.pdr_pct = c.sent == 0 ? 0.0 : 100.0 * static_cast<double>(c.delivered) / static_cast<double>(c.sent);
  row.thrpt_kbps = run.rounds_completed == 0 ? 0.0 : c.delivered_bits / static_cast<double>(run.rounds_completed) / 1000.0;
  row.eted_s = c.delivered == 0 ? 0.0 : c.total_delay_s / static_cast<double>(c.delivered);
  row.ecm_mj = c.energy_consumed_mj / static_cast<double>(run.config.n_vehicles);
  row.overhead_msgs = c.exchanged;
  return row;
}

double data_per_vehicle_mbit(const RunReport& run) {
  if (run.rounds_completed == 0) return 0.0;
  const double windows = static_cast<double>(run.rounds_completed) / kDataWindowRounds;
  return run.counters.generated_bits / 1e6 / static_cast<double>(run.config.n_vehicles) / windows;
}

DelayModel effective_delays(const RunReport& run) {
  DelayModel d = run.config.delay_model;
  if (run.counters.delivered > 0)
    d.t_n = run.counters.total_t_n_effective / static_cast<double>(run.counters.delivered);
  return d;
}

double model_throughput_by_cluster(const RunReport& run) {
  const double size = run.config.cluster_size_target ? static_cast<double>(*run.config.cluster_size_target)
                                                     : std::max(1.0, mean_cluster_size(run));
  return throughput_by_cluster(size, data_per_vehicle_mbit(run), effective_delays(run));
}

double model_throughput_by_vehicles(const RunReport& run) {
  return throughput_by_vehicles(run.config.n_vehicles, data_per_vehicle_mbit(run), effective_delays(run));
}

std::string kpi_csv(const std::vector<MetricsRow>& rows) {
  std::ostringstream os;
  os << kKpiHeader << '\n';
  for (const auto& r : rows)
    os << r.vehicles << ',' << r.cluster_size << ',' << r.nlt_rounds << ',' << format_double(r.pdr_pct) << ','
       << format_double(r.thrpt_kbps) << ',' << format_double(r.eted_s) << ',' << format_double(r.ecm_mj) << ','
       << r.overhead_msgs << '\n';
  return os.str();
}

std::vector<MetricsRow> parse_kpi_csv(std::string_view text) {
  const CsvTable t = parse_csv(text);
  std::string header;
  for (std::size_t i = 0; i < t.header.size(); ++i) header += (i ? "," : "") + t.header[i];
  if (header != kKpiHeader) throw std::invalid_argument("unexpected KPI header: " + header);
  std::vector<MetricsRow> rows;
  for (const auto& f : t.rows) {
    if (f.size() != 8) throw std::invalid_argument("KPI row needs 8 fields");
    rows.push_back({parse_count(f[0]), parse_count(f[1]), parse_count(f[2]), parse_real(f[3]), parse_real(f[4]),
                    parse_real(f[5]), parse_real(f[6]), parse_count(f[7])});
  }
  return rows;
}

ReportFiles emit_report(const std::vector<SweepCell>& cells, const std::filesystem::path& out_dir,
                        const GasTable* gas_table) {
  if (cells.empty()) throw std::invalid_argument("emit_report needs at least one row");
  std::error_code ec;
  std::filesystem::create_directories(out_dir, ec);
  if (ec) throw std::runtime_error("cannot create " + out_dir.string() + ": " + ec.message());

  ReportFiles files;
  std::vector<MetricsRow> rows;
  for (const auto& c : cells) rows.push_back(c.row);
  write_file(out_dir / "kpi.csv", kpi_csv(rows), files);

  std::map<std::uint32_t, std::vector<std::pair<double, double>>> by_size;
  std::map<std::uint32_t, std::pair<double, int>> overhead, by_vehicles;
  for (const auto& c : cells) {
    by_size[c.cluster_size].emplace_back(c.vehicles, c.model_thrpt_cluster_mbps);
    auto& o = overhead[c.vehicles];
    o.first += static_cast<double>(c.row.overhead_msgs);
    o.second += 1;
    auto& t = by_vehicles[c.vehicles];
    t.first += c.model_thrpt_vehicles_mbps;
    t.second += 1;
  }
  for (const auto& [size, pts] : by_size)
    write_file(out_dir / ("fig4_throughput_c" + std::to_string(size) + ".csv"),
               series_csv("vehicles", "throughput_mbps", pts), files);

  std::vector<std::pair<double, double>> overhead_pts, tv;
  for (const auto& [v, acc] : overhead) overhead_pts.emplace_back(v, acc.first / acc.second);
  for (const auto& [v, acc] : by_vehicles) tv.emplace_back(v, acc.first / acc.second);
  write_file(out_dir / "fig5_overhead.csv", series_csv("vehicles", "overhead_msgs", overhead_pts), files);
  write_file(out_dir / "throughput_vs_vehicles.csv", series_csv("vehicles", "throughput_mbps", tv), files);

  if (gas_table && gas_table->size() >= 2) {
    write_file(out_dir / "gas_table.csv", series_csv("tx_count", "gas", *gas_table), files);
    const GasFit fit = fit_gas_table(*gas_table);
    std::vector<std::pair<double, double>> fitted;
    for (const auto& [x, y] : *gas_table) fitted.emplace_back(x, fit.slope * x + fit.intercept);
    write_file(out_dir / "gas_fit.csv", series_csv("tx_count", "gas_fitted", fitted), files);
  }
  return files;
}

const GasTable& reference_gas_table() {
  static const GasTable table = {{5, 27000}, {8, 36000},  {10, 41000}, {14, 55000},
                                 {17, 66000}, {22, 78000}, {26, 89000}, {30, 100000}};
  return table;
}

std::uint64_t sweep_cell_seed(std::uint64_t base_seed, std::uint32_t vehicles, std::uint32_t cluster_size) {
  return derive_seed(base_seed, {vehicles, cluster_size});
}

ScenarioConfig sweep_cell_config(const ScenarioConfig& base, std::uint32_t vehicles, std::uint32_t cluster_size) {
  ScenarioConfig cfg = base;
  cfg.n_vehicles = vehicles;
  cfg.cluster_size_target = cluster_size;
  cfg.seed = sweep_cell_seed(base.seed, vehicles, cluster_size);
  return cfg;
}

SweepCell cell_from_report(const RunReport& report) {
  SweepCell cell;
  cell.row = compute_kpis(report);
  cell.vehicles = report.config.n_vehicles;
  cell.cluster_size = static_cast<std::uint32_t>(cell.row.cluster_size);
  cell.seed = report.config.seed;
  cell.model_thrpt_cluster_mbps = report.rounds_completed ? model_throughput_by_cluster(report) : 0.0;
  cell.model_thrpt_vehicles_mbps = report.rounds_completed ? model_throughput_by_vehicles(report) : 0.0;
  return cell;
}

SweepCell run_cell(const ScenarioConfig& base, std::uint32_t vehicles, std::uint32_t cluster_size) {
  return cell_from_report(run(sweep_cell_config(base, vehicles, cluster_size)));
}

std::vector<SweepCell> run_sweep(const ScenarioConfig& base, const std::vector<std::uint32_t>& vehicles,
                                 const std::vector<std::uint32_t>& cluster_sizes) {
  if (vehicles.empty() || cluster_sizes.empty()) throw std::invalid_argument("sweep lists must be non-empty");
  std::vector<std::pair<std::uint32_t, std::uint32_t>> grid;
  for (auto v : vehicles)
    for (auto c : cluster_sizes) grid.emplace_back(v, c);

  std::vector<SweepCell> cells(grid.size());
  const std::size_t workers = std::max(1u, std::thread::hardware_concurrency());
  for (std::size_t start = 0; start < grid.size(); start += workers) {
    std::vector<std::future<SweepCell>> batch;
    for (std::size_t i = start; i < std::min(grid.size(), start + workers); ++i)
      batch.push_back(std::async(std::launch::async, run_cell, std::cref(base), grid[i].first, grid[i].second));
    for (std::size_t k = 0; k < batch.size(); ++k) cells[start + k] = batch[k].get();
  }
  return cells;
}

}  // namespace vanetsim
