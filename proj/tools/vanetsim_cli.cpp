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

// vanetsim command-line entry point.
//
// Exit codes: 0 success, 1 runtime failure, 2 input or configuration error.

#include <CLI11.hpp>
#include <json.hpp>

#include <cstdint>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include "vanetsim/config.hpp"
#include "vanetsim/csv.hpp"
#include "vanetsim/gas.hpp"
#include "vanetsim/ids/flows.hpp"
#include "vanetsim/ids/iforest.hpp"
#include "vanetsim/metrics.hpp"
#include "vanetsim/sim.hpp"

#ifndef VANETSIM_DATA_DIR
#define VANETSIM_DATA_DIR "data"
#endif

namespace fs = std::filesystem;
using namespace vanetsim;

namespace {

constexpr int kExitOk = 0;
constexpr int kExitRuntime = 1;
constexpr int kExitInput = 2;

class InputError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct Common {
  std::string config;
  std::optional<std::uint64_t> seed;
  std::string out = "out";
  bool verbose = false;
};

void require_file(const fs::path& p, const std::string& what) {
  if (!fs::is_regular_file(p)) throw InputError(what + " not found: " + p.string());
}

fs::path prepare_out(const std::string& dir) {
  std::error_code ec;
  fs::create_directories(dir, ec);
  if (ec) throw std::runtime_error("cannot create output directory " + dir + ": " + ec.message());
  return fs::path(dir);
}

void write_text(const fs::path& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  out << text;
  if (!out) throw std::runtime_error("cannot write " + path.string());
}

template <typename Fn>
void write_with(const fs::path& path, Fn&& fn) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot write " + path.string());
  fn(out);
  if (!out) throw std::runtime_error("failed writing " + path.string());
}

ScenarioConfig load_scenario(const Common& c) {
  ScenarioConfig cfg;
  if (!c.config.empty()) {
    require_file(c.config, "config");
    cfg = load_config(c.config);
  }
  if (c.seed) cfg.seed = *c.seed;
  if (const auto v = validate_config(cfg); !v.empty()) throw ConfigError(format_violations(v));
  return cfg;
}

ids::IsolationForest read_forest(const fs::path& path) {
  require_file(path, "forest");
  std::ifstream in(path, std::ios::binary);
  try {
    return ids::load_forest(in);
  } catch (const std::runtime_error& e) {
    throw InputError(e.what());
  }
}

void write_ledgers(const RunReport& report, const fs::path& out) {
  write_with(out / "cluster_ledgers.jsonl", [&](std::ostream& os) {
    for (const auto& [id, ledger] : report.cluster_ledgers) export_ledger(ledger, os);
  });
  write_with(out / "cloud_ledger.jsonl", [&](std::ostream& os) { export_ledger(report.cloud_ledger, os); });
}

void write_summary(const RunReport& report, const SweepCell& cell, const fs::path& out) {
  const Counters& c = report.counters;
  nlohmann::ordered_json j;
  j["seed"] = report.config.seed;
  j["rounds"] = report.rounds_completed;
  j["sent"] = c.sent;
  j["delivered"] = c.delivered;
  j["blocked"] = c.blocked;
  j["dropped"] = c.dropped;
  j["in_flight"] = c.in_flight;
  j["exchanged"] = c.exchanged;
  j["quarantined"] = report.quarantined;
  j["stored_payloads"] = report.stored_payloads;
  j["cluster_ledgers"] = report.cluster_ledgers.size();
  j["cloud_height"] = report.cloud_ledger.height();
  j["model_throughput_cluster_mbps"] = cell.model_thrpt_cluster_mbps;
  j["model_throughput_vehicles_mbps"] = cell.model_thrpt_vehicles_mbps;
  write_text(out / "summary.json", j.dump(2) + "\n");
}

int cmd_run(const Common& c, const std::string& forest_path) {
  const ScenarioConfig cfg = load_scenario(c);
  std::optional<ids::IsolationForest> forest;
  if (!forest_path.empty()) forest = read_forest(forest_path);
  const fs::path out = prepare_out(c.out);
  if (c.verbose) std::cerr << "running " << cfg.n_vehicles << " vehicles for " << cfg.rounds << " rounds\n";

  const RunReport report = run(cfg, std::move(forest));
  const SweepCell cell = cell_from_report(report);
  write_text(out / "config.yaml", dump_config(cfg));
  emit_report({cell}, out, &reference_gas_table());
  write_ledgers(report, out);
  write_summary(report, cell, out);
  if (c.verbose) {
    write_with(out / "events.jsonl", [&](std::ostream& os) { write_event_log(report, os); });
    write_with(out / "controller.jsonl", [&](std::ostream& os) { write_controller_log(report, os); });
  }
  std::cout << kpi_csv({cell.row});
  return kExitOk;
}

int cmd_sweep(const Common& c, const std::vector<std::uint32_t>& vehicles, const std::vector<std::uint32_t>& sizes) {
  if (vehicles.empty() || sizes.empty()) throw InputError("--vehicles and --cluster-sizes must be non-empty");
  const ScenarioConfig cfg = load_scenario(c);
  for (auto v : vehicles)
    for (auto s : sizes)
      if (const auto viol = validate_config(sweep_cell_config(cfg, v, s)); !viol.empty())
        throw ConfigError("cell (" + std::to_string(v) + ", " + std::to_string(s) + "): " + format_violations(viol));
  const fs::path out = prepare_out(c.out);
  if (c.verbose) std::cerr << "sweeping " << vehicles.size() * sizes.size() << " cells\n";

  const auto cells = run_sweep(cfg, vehicles, sizes);
  write_text(out / "config.yaml", dump_config(cfg));
  emit_report(cells, out, &reference_gas_table());
  std::ostringstream seeds;
  seeds << "vehicles,cluster_size,seed\n";
  for (const auto& cell : cells) seeds << cell.vehicles << ',' << cell.cluster_size << ',' << cell.seed << '\n';
  write_text(out / "sweep_seeds.csv", seeds.str());
  std::vector<MetricsRow> rows;
  for (const auto& cell : cells) rows.push_back(cell.row);
  std::cout << kpi_csv(rows);
  return kExitOk;
}

ids::FlowSchema resolve_schema(const fs::path& data, const std::vector<std::string>& features, const std::string& label,
                               bool need_label) {
  const CsvTable header_only = read_csv(data);
  if (header_only.header.empty()) throw InputError("empty data file: " + data.string());
  const bool has_label =
      std::find(header_only.header.begin(), header_only.header.end(), label) != header_only.header.end();
  if (need_label && !has_label) throw InputError("data has no label column '" + label + "'");
  ids::FlowSchema schema;
  schema.feature_columns = features;
  if (schema.feature_columns.empty())
    for (const auto& h : header_only.header)
      if (h != label) schema.feature_columns.push_back(h);
  if (has_label) schema.label_column = label;
  return schema;
}

ids::FlowSet load_flows(const fs::path& data, const ids::FlowSchema& schema) {
  ids::FlowSet set = ids::ingest_flows(data, schema);
  if (set.flows.empty()) throw InputError("no usable rows in " + data.string());
  return set;
}

struct ForestFlags {
  std::optional<std::uint32_t> trees, subsample;
  std::optional<double> threshold;
};

int cmd_ids_train(const Common& c, const std::string& data, const std::vector<std::string>& features,
                  const std::string& label, const ForestFlags& flags) {
  require_file(data, "data");
  ids::ForestParams params;
  std::uint64_t seed = 1;
  if (!c.config.empty()) {
    const ScenarioConfig cfg = load_scenario(c);
    params = cfg.ids_config.forest;
    seed = cfg.seed;
  }
  if (c.seed) seed = *c.seed;
  if (flags.trees) params.n_trees = *flags.trees;
  if (flags.subsample) params.subsample_size = *flags.subsample;
  if (flags.threshold) params.threshold = *flags.threshold;

  const auto schema = resolve_schema(data, features, label, false);
  const auto set = load_flows(data, schema);
  const fs::path out = prepare_out(c.out);
  const auto forest = ids::fit(set.matrix(), params, seed);
  write_with(out / "forest.txt", [&](std::ostream& os) { ids::save_forest(forest, os); });
  std::cout << "trained " << forest.trees().size() << " trees on " << set.flows.size() << " rows (" << set.dropped
            << " dropped), subsample " << forest.subsample_size() << ", threshold " << forest.threshold() << '\n';
  return kExitOk;
}

int cmd_ids_eval(const Common& c, const std::string& data, const std::string& model,
                 const std::vector<std::string>& features, const std::string& label,
                 const std::optional<double> threshold) {
  require_file(data, "data");
  ids::IsolationForest forest = read_forest(model);
  if (threshold) forest.set_threshold(*threshold);
  const auto schema = resolve_schema(data, features, label, true);
  const auto set = load_flows(data, schema);
  if (!set.fully_labeled()) throw InputError("evaluation data has unlabeled rows");
  if (static_cast<std::uint32_t>(schema.feature_columns.size()) != forest.dimensionality())
    throw InputError("data has " + std::to_string(schema.feature_columns.size()) + " features, forest expects " +
                     std::to_string(forest.dimensionality()));

  std::vector<ids::Verdict> preds;
  std::vector<ids::Label> labels;
  std::ostringstream scores;
  scores << "row,score,prediction,label\n";
  for (std::size_t i = 0; i < set.flows.size(); ++i) {
    const auto& f = set.flows[i];
    const double s = forest.anomaly_score(f.values);
    preds.push_back(ids::classify_score(s, forest.threshold()));
    labels.push_back(*f.label);
    scores << i << ',' << format_double(s) << ','
           << (preds.back() == ids::Verdict::kMalicious ? "malicious" : "benign") << ','
           << (labels.back() == ids::Label::kMalicious ? "malicious" : "benign") << '\n';
  }
  const auto report = ids::evaluate(preds, labels);
  const fs::path out = prepare_out(c.out);
  nlohmann::ordered_json j;
  j["rows"] = set.flows.size();
  j["dropped"] = set.dropped;
  j["threshold"] = forest.threshold();
  j["accuracy_pct"] = report.accuracy;
  j["precision_pct"] = report.precision;
  j["recall_pct"] = report.recall;
  j["f1_pct"] = report.f1;
  j["confusion"] = {{"tp", report.confusion.tp}, {"fp", report.confusion.fp}, {"tn", report.confusion.tn},
                    {"fn", report.confusion.fn}};
  write_text(out / "eval.json", j.dump(2) + "\n");
  write_text(out / "scores.csv", scores.str());
  std::cout << "accuracy " << report.accuracy << "\nprecision " << report.precision << "\nrecall " << report.recall
            << "\nf1 " << report.f1 << '\n';
  return kExitOk;
}

int cmd_gas_fit(const Common& c, const std::string& table_path) {
  require_file(table_path, "gas table");
  const GasTable table = read_gas_table(table_path);
  if (table.size() < 2) throw InputError("gas table needs at least 2 rows, got " + std::to_string(table.size()));
  const GasFit fit = fit_gas_table(table);
  const GasModel model = gas_model_from_fit(fit);
  const fs::path out = prepare_out(c.out);

  std::ostringstream fitted;
  fitted << "tx_count,gas,gas_fitted\n";
  for (const auto& [x, y] : table)
    fitted << format_double(x) << ',' << format_double(y) << ',' << format_double(fit.slope * x + fit.intercept)
           << '\n';
  write_text(out / "gas_fit.csv", fitted.str());

  std::ostringstream snippet;
  snippet << "# slope " << format_double(fit.slope) << ", intercept " << format_double(fit.intercept) << ", r2 "
          << format_double(fit.r_squared) << "\n"
          << "gas_model:\n  g0: " << model.g0 << "\n  cb: " << model.cb << "\n  fixed_overhead: " << model.fixed_overhead
          << '\n';
  write_text(out / "gas_model.yaml", snippet.str());
  std::cout << "slope " << format_double(fit.slope) << "\nintercept " << format_double(fit.intercept) << "\nr2 "
            << format_double(fit.r_squared) << '\n';
  return kExitOk;
}

int cmd_validate(const Common& c) {
  ScenarioConfig cfg;
  if (!c.config.empty()) {
    require_file(c.config, "config");
    cfg = load_config(c.config);
  }
  if (c.seed) cfg.seed = *c.seed;
  const auto v = validate_config(cfg);
  if (!v.empty()) {
    std::cerr << format_violations(v) << '\n';
    return kExitInput;
  }
  std::cout << "ok\n";
  if (c.verbose) std::cout << dump_config(cfg);
  return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"vanetsim: discrete-event VANET simulator with ledger-backed clustering and an isolation-forest IDS"};
  app.require_subcommand(1);
  app.fallthrough();

  Common common;
  app.add_option("--config", common.config, "Scenario YAML file");
  app.add_option("--seed", common.seed, "Override the base seed");
  app.add_option("--out", common.out, "Output directory (created if absent)")->capture_default_str();
  app.add_flag("-v,--verbose", common.verbose, "Write event and controller logs; print progress");

  std::string forest_path;
  auto* run_cmd = app.add_subcommand("run", "Run one scenario and write KPIs, series and ledger exports");
  run_cmd->add_option("--forest", forest_path, "Use a trained forest instead of training from the scenario seed");

  std::vector<std::uint32_t> vehicles{20, 30, 40, 50}, sizes{5, 10};
  auto* sweep_cmd = app.add_subcommand("sweep", "Run a vehicles x cluster-size grid");
  sweep_cmd->add_option("--vehicles", vehicles, "Vehicle counts")->delimiter(',')->capture_default_str();
  sweep_cmd->add_option("--cluster-sizes", sizes, "Cluster size targets")->delimiter(',')->capture_default_str();

  const std::string default_fixture = std::string(VANETSIM_DATA_DIR) + "/ids_fixture.csv";
  std::string data = default_fixture, model, label = "label";
  std::vector<std::string> features;
  ForestFlags forest_flags;
  auto* train_cmd = app.add_subcommand("ids-train", "Fit an isolation forest on a flow CSV");
  train_cmd->add_option("--data", data, "Flow CSV with a header row")->capture_default_str();
  train_cmd->add_option("--features", features, "Feature columns (default: all but the label)")->delimiter(',');
  train_cmd->add_option("--label", label, "Label column name, ignored for training")->capture_default_str();
  train_cmd->add_option("--trees", forest_flags.trees, "Number of trees");
  train_cmd->add_option("--subsample", forest_flags.subsample, "Subsample size per tree");
  train_cmd->add_option("--threshold", forest_flags.threshold, "Anomaly-score cutoff in (0,1)");

  std::optional<double> eval_threshold;
  auto* eval_cmd = app.add_subcommand("ids-eval", "Score a labeled flow CSV with a saved forest");
  eval_cmd->add_option("--data", data, "Labeled flow CSV")->capture_default_str();
  eval_cmd->add_option("--model", model, "Forest file from ids-train")->required();
  eval_cmd->add_option("--features", features, "Feature columns (default: all but the label)")->delimiter(',');
  eval_cmd->add_option("--label", label, "Label column name")->capture_default_str();
  eval_cmd->add_option("--threshold", eval_threshold, "Override the stored cutoff");

  std::string gas_table = std::string(VANETSIM_DATA_DIR) + "/reference_gas.csv";
  auto* gas_cmd = app.add_subcommand("gas-fit", "Least-squares gas model from a tx_count,gas table");
  gas_cmd->add_option("--table", gas_table, "Two-column CSV")->capture_default_str();

  auto* validate_cmd = app.add_subcommand("validate", "Check a scenario config and report every violation");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kExitOk : kExitInput;
  }

  try {
    if (run_cmd->parsed()) return cmd_run(common, forest_path);
    if (sweep_cmd->parsed()) return cmd_sweep(common, vehicles, sizes);
    if (train_cmd->parsed()) return cmd_ids_train(common, data, features, label, forest_flags);
    if (eval_cmd->parsed()) return cmd_ids_eval(common, data, model, features, label, eval_threshold);
    if (gas_cmd->parsed()) return cmd_gas_fit(common, gas_table);
    if (validate_cmd->parsed()) return cmd_validate(common);
  } catch (const ConfigError& e) {
    std::cerr << "config error: " << e.what() << '\n';
    return kExitInput;
  } catch (const InputError& e) {
    std::cerr << "input error: " << e.what() << '\n';
    return kExitInput;
  } catch (const std::invalid_argument& e) {
    std::cerr << "input error: " << e.what() << '\n';
    return kExitInput;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitRuntime;
  }
  return kExitRuntime;
}
