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

// Acceptance suite. Each criterion prints one PASS/FAIL line with its wall
// time; the process exit status is non-zero if any criterion fails.

#include <chrono>
#include <cstdio>
#include <functional>
#include <iostream>
#include <random>
#include <sstream>
#include <string>

#include "support/oracles.hpp"
#include "vanetsim/cluster.hpp"
#include "vanetsim/control_plane.hpp"
#include "vanetsim/gas.hpp"
#include "vanetsim/ids/flows.hpp"
#include "vanetsim/ids/iforest.hpp"
#include "vanetsim/ledger.hpp"
#include "vanetsim/metrics.hpp"
#include "vanetsim/sim.hpp"

using namespace vanetsim;

namespace {

// Collects failed checks for one criterion.
struct Check {
  std::vector<std::string> failures;
  void expect(bool ok, const std::string& what) {
    if (!ok && failures.size() < 20) failures.push_back(what);
  }
};

double rel_err(double a, double b) { return std::abs(a - b) / std::max(std::abs(b), 1e-300); }

std::string event_log(const RunReport& r) {
  std::ostringstream os;
  write_event_log(r, os);
  return os.str();
}

std::string ledger_exports(const RunReport& r) {
  std::ostringstream os;
  for (const auto& [id, l] : r.cluster_ledgers) export_ledger(l, os);
  export_ledger(r.cloud_ledger, os);
  return os.str();
}

// ---------------------------------------------------------------------------

void gas_curve(Check& c) {
  const GasTable table = read_gas_table(std::string(VANETSIM_DATA_DIR) + "/reference_gas.csv");
  c.expect(table.size() == 8, "bundled gas table has 8 rows");
  const GasFit fit = fit_gas_table(table);
  const auto ref = oracle::ols(table);
  std::printf("    slope %.6f intercept %.6f r2 %.6f (oracle %.6f %.6f)\n", fit.slope, fit.intercept, fit.r_squared,
              ref.slope, ref.intercept);
  c.expect(fit.r_squared >= 0.99, "r2 >= 0.99");
  c.expect(rel_err(fit.slope, ref.slope) < 1e-3, "slope within 0.1% of oracle");
  c.expect(rel_err(fit.intercept, ref.intercept) < 1e-3, "intercept within 0.1% of oracle");
  c.expect(GasModel{}.per_transaction() == 5400, "default per-transaction gas is 5400");
  c.expect(gas_cost(5, GasModel{}) == 27000, "gas_cost(5) == 27000");
}

void throughput_equations(Check& c) {
  std::mt19937_64 gen(2024);
  std::uniform_real_distribution<double> size(1.0, 500.0), data(0.0, 100.0), t(1e-4, 2.0), k(1.01, 10.0);
  double worst = 0.0;
  for (int i = 0; i < 10000; ++i) {
    const double n = size(gen), m = data(gen);
    const DelayModel d{t(gen), t(gen), t(gen), t(gen), t(gen)};
    const double denom_cluster = d.t_b + d.t_s + d.t_n + d.t_c;
    const double denom_vehicles = d.t_b + d.t_s + d.t_n + d.t_v;
    const double by_cluster = throughput_by_cluster(n, m, d);
    const double by_vehicles = throughput_by_vehicles(n, m, d);
    const double ref_cluster = n * m / denom_cluster, ref_vehicles = n * m / denom_vehicles;
    if (ref_cluster > 0) worst = std::max({worst, rel_err(by_cluster, ref_cluster), rel_err(by_vehicles, ref_vehicles)});
    c.expect(ref_cluster == 0 ? by_cluster == 0 : rel_err(by_cluster, ref_cluster) <= 1e-12, "cluster model matches scalar arithmetic");
    c.expect(ref_vehicles == 0 ? by_vehicles == 0 : rel_err(by_vehicles, ref_vehicles) <= 1e-12, "vehicle model matches scalar arithmetic");

    // Linear in size / vehicle count.
    const double s = k(gen);
    c.expect(std::abs(throughput_by_cluster(s * n, m, d) - s * by_cluster) <= 1e-12 * std::max(1.0, s * by_cluster),
             "cluster model linear in cluster size");
    c.expect(std::abs(throughput_by_vehicles(s * n, m, d) - s * by_vehicles) <= 1e-12 * std::max(1.0, s * by_vehicles),
             "vehicle model linear in vehicle count");
    // Inversely proportional to the summed delay.
    DelayModel slow = d;
    slow.t_b *= s;
    slow.t_s *= s;
    slow.t_n *= s;
    slow.t_c *= s;
    slow.t_v *= s;
    c.expect(std::abs(throughput_by_cluster(n, m, slow) * s - by_cluster) <= 1e-12 * std::max(1.0, by_cluster),
             "cluster model inverse in delay");
    c.expect(std::abs(throughput_by_vehicles(n, m, slow) * s - by_vehicles) <= 1e-12 * std::max(1.0, by_vehicles),
             "vehicle model inverse in delay");
    if (m > 0) {
      c.expect(throughput_by_cluster(n, m, slow) < by_cluster, "slower path lowers by_cluster");
      c.expect(throughput_by_vehicles(n, m, slow) < by_vehicles, "slower path lowers by_vehicles");
    }
  }
  std::printf("    worst relative error %.3g over 10000 tuples\n", worst);
}

void ids_properties(Check& c) {
  using namespace vanetsim::ids;
  for (std::uint64_t n : {2u, 3u, 64u, 256u, 1000u})
    c.expect(std::abs(score_from_mean_path(avg_path_normalizer(n), n) - 0.5) < 1e-15, "score 0.5 at c(n)");

  const auto fixture = ingest_flows(std::string(VANETSIM_DATA_DIR) + "/ids_fixture.csv", {{"f0", "f1"}, "label"});
  const FeatureMatrix x = fixture.matrix();
  c.expect(x.rows() == 1000, "fixture has 1000 rows");
  std::size_t outliers = 0;
  for (const auto& f : fixture.flows) outliers += f.label == Label::kMalicious;
  c.expect(outliers == 10, "fixture has 10 outliers");

  const double threshold = ScenarioConfig{}.ids_config.forest.threshold;
  int separated = 0;
  double recall_seed42 = 0.0, worst_recall = 100.0;
  for (std::uint64_t seed = 1; seed <= 100; ++seed) {
    const auto forest = fit(x, {100, 64, threshold}, seed);
    const Eigen::VectorXd s = forest.score_all(x);
    c.expect(s.minCoeff() > 0.0 && s.maxCoeff() < 1.0, "scores in (0,1)");
    double max_in = 0.0, min_out = 1.0;
    std::vector<Verdict> pred;
    std::vector<Label> labels;
    for (Eigen::Index i = 0; i < s.size(); ++i) {
      const Label l = *fixture.flows[static_cast<std::size_t>(i)].label;
      (l == Label::kMalicious ? min_out : max_in) =
          l == Label::kMalicious ? std::min(min_out, s(i)) : std::max(max_in, s(i));
      pred.push_back(classify_score(s(i), threshold));
      labels.push_back(l);
    }
    separated += min_out > max_in;
    const double recall = evaluate(pred, labels).recall;
    worst_recall = std::min(worst_recall, recall);
    if (seed == 42) recall_seed42 = recall;
  }
  std::printf("    separated %d/100 seeds, recall at threshold %.2f: seed 42 %.1f%%, worst %.1f%%\n", separated,
              threshold, recall_seed42, worst_recall);
  c.expect(recall_seed42 >= 95.0, "fixture recall >= 95% (seed 42)");
  c.expect(separated >= 95, "full separation on >= 95 of 100 seeds");
}

void ledger_integrity(Check& c) {
  std::mt19937_64 gen(99);
  KeyPair key = generate_keypair(5, "vehicle", 1);
  ContentStore store;
  Ledger chain = make_ledger(LedgerTier::kCluster, 1, GasModel{});
  for (std::uint64_t b = 1; b < 50; ++b) {
    std::vector<Transaction> txs;
    for (std::uint64_t i = 0; i < 1 + gen() % 5; ++i) {
      Bytes payload(64 + gen() % 64);
      for (auto& byte : payload) byte = static_cast<std::uint8_t>(gen());
      txs.push_back(make_message_tx(sign_message(payload, 1, 1, b, key, store)));
    }
    append_block(chain, std::move(txs), b);
  }
  c.expect(chain.blocks.size() == 50, "chain has 50 blocks");
  c.expect(static_cast<bool>(validate_chain(chain)), "fresh chain valid");

  std::size_t detected = 0;
  std::uniform_int_distribution<int> flip(1, 255);
  for (int trial = 0; trial < 1000; ++trial) {
    Ledger t = chain;
    Block& b = t.blocks[gen() % t.blocks.size()];
    const auto mask = static_cast<std::uint8_t>(flip(gen));
    // Serialized block: header words, hashes, then transaction bodies.
    auto poke_u64 = [&](std::uint64_t& v) { v ^= static_cast<std::uint64_t>(mask) << (8 * (gen() % 8)); };
    switch (b.transactions.empty() ? gen() % 6 : gen() % 8) {
      case 0: poke_u64(b.index); break;
      case 1: poke_u64(b.timestamp); break;
      case 2: poke_u64(b.tx_count); break;
      case 3: poke_u64(b.gas_used); break;
      case 4: b.prev_hash[gen() % 32] ^= mask; break;
      case 5: b.hash[gen() % 32] ^= mask; break;
      case 6: {
        auto& tx = b.transactions[gen() % b.transactions.size()];
        tx.body[gen() % tx.body.size()] ^= mask;
        break;
      }
      default: {
        auto& tx = b.transactions[gen() % b.transactions.size()];
        tx.kind = static_cast<TxKind>(static_cast<std::uint8_t>(tx.kind) ^ mask);
        break;
      }
    }
    detected += !validate_chain(t);
  }
  std::printf("    %zu/1000 tampers detected\n", detected);
  c.expect(detected == 1000, "every tamper detected");

  const Bytes payload{'o', 'k'};
  const SignedMessage sm = sign_message(payload, 1, 1, 1, key, store);
  c.expect(static_cast<bool>(verify_message(sm, key.public_key(), store)), "sign/verify round trip");
  SignedMessage bad = sm;
  bad.signature[0] ^= 1;
  c.expect(verify_message(bad, key.public_key(), store).reason == RejectReason::kBadSignature, "bad-signature");
  ContentStore swapped = store;
  swapped.overwrite(sm.content_id, Bytes{'n', 'o'});
  c.expect(verify_message(sm, key.public_key(), swapped).reason == RejectReason::kContentMismatch,
           "content-mismatch");
  ContentStore missing = store;
  missing.erase(sm.content_id);
  c.expect(verify_message(sm, key.public_key(), missing).reason == RejectReason::kMissingContent, "missing-content");
}

void two_step(Check& c) {
  std::mt19937_64 gen(7);
  const KeyPair sender = generate_keypair(3, "vehicle", 1);
  const KeyPair cluster = generate_keypair(3, "cluster", 1, 0);
  const KeyPair rogue = generate_keypair(3, "cluster", 1, 1);
  std::size_t accepted = 0, rejected = 0, bad_accepted = 0;
  for (int trial = 0; trial < 10000; ++trial) {
    ContentStore store;
    Ledger ledger = make_ledger(LedgerTier::kCluster, 1, GasModel{});
    Bytes payload(16 + gen() % 100);
    for (auto& b : payload) b = static_cast<std::uint8_t>(gen());
    const SignedMessage sm = sign_message(payload, 1, 1, static_cast<std::uint64_t>(trial), sender, store);
    const int mode = static_cast<int>(gen() % 6);
    if (mode != 3) append_block(ledger, {make_message_tx(sm)}, 1);
    ForwardedMessage fm = endorse(sm, mode == 4 ? rogue : cluster);
    if (mode == 1) {
      Bytes tampered = payload;
      tampered[gen() % tampered.size()] ^= static_cast<std::uint8_t>(1 + gen() % 255);
      store.overwrite(sm.content_id, tampered);
    } else if (mode == 2) {
      store.erase(sm.content_id);
    } else if (mode == 5) {
      // Pointer swapped to another stored blob, re-endorsed by the real key.
      fm.message.content_id = store.put(Bytes{'x', static_cast<std::uint8_t>(trial)});
      fm.cluster_signature = cluster.sign(signing_bytes(fm.message));
    }
    const auto verdict = two_step_verify(fm, cluster.public_key(), ledger, store);
    const auto stored = store.get(fm.message.content_id);
    const bool payload_matches = stored && sha256(*stored) == sm.payload_digest && ledger.find_message(sm.payload_digest);
    if (verdict) {
      ++accepted;
      bad_accepted += !payload_matches;
    } else {
      ++rejected;
    }
    c.expect(static_cast<bool>(verdict) == (mode == 0), "verdict follows the injected fault");
  }
  std::printf("    %zu accepted, %zu rejected, %zu mismatched accepted\n", accepted, rejected, bad_accepted);
  c.expect(bad_accepted == 0, "no mismatched payload accepted");
}

void clustering(Check& c) {
  std::mt19937_64 gen(11);
  for (int scenario = 0; scenario < 100; ++scenario) {
    ScenarioConfig cfg;
    std::uniform_real_distribution<double> u(0.0, 1.0);
    const double w = 300 + 3000 * u(gen), h = 300 + 3000 * u(gen);
    const double radius = 100 + 900 * u(gen);
    std::vector<Vehicle> vehicles(5 + gen() % 120);
    for (std::size_t i = 0; i < vehicles.size(); ++i) {
      auto& v = vehicles[i];
      v.id = i;
      v.position = Position(w * u(gen), h * u(gen));
      v.processing_power = u(gen);
      v.vehicle_type_weight = u(gen);
      v.energy = u(gen) < 0.05 ? 0.0 : 10.0;
      // Occasional exact duplicates exercise the tie rule.
      if (i > 0 && gen() % 10 == 0) {
        v.processing_power = vehicles[i - 1].processing_power;
        v.vehicle_type_weight = vehicles[i - 1].vehicle_type_weight;
      }
    }
    std::vector<Rsu> rsus(1 + gen() % 12);
    for (std::size_t i = 0; i < rsus.size(); ++i) {
      rsus[i].id = i;
      rsus[i].position = Position(w * u(gen), h * u(gen));
      rsus[i].coverage_radius = radius;
    }

    ClusterLedgers ledgers;
    ledgers.seed = static_cast<std::uint64_t>(scenario);
    ledgers.gas = cfg.gas_model;
    const Clustering formed = form_clusters(vehicles, rsus, cfg, ledgers, 0);
    const auto expect = oracle::nearest_in_coverage(vehicles, rsus);

    std::map<VehicleId, RsuId> got;
    for (const auto& cl : formed.clusters)
      for (VehicleId v : cl.members) c.expect(got.emplace(v, cl.rsu_id).second, "vehicle in two clusters");
    c.expect(got == expect, "membership matches nearest-in-coverage oracle");
    std::size_t live = 0;
    for (const auto& v : vehicles) live += !v.depleted();
    c.expect(got.size() + formed.unclustered.size() == live, "clusters and unclustered partition live vehicles");
    for (VehicleId v : formed.unclustered) c.expect(!expect.contains(v), "unclustered vehicle is out of coverage");

    for (const auto& cl : formed.clusters) {
      std::vector<const Vehicle*> members;
      for (VehicleId v : cl.members) members.push_back(&vehicles[v]);
      c.expect(cl.head == oracle::elected_head(members, rsus[cl.rsu_id], cfg), "head matches brute-force argmax");

      auto scores = score_candidates(members, rsus[cl.rsu_id], cfg);
      const VehicleId winner = argmax_candidate(scores);
      for (double k : {1e-6, 0.37, 3.0, 1e6}) {
        auto scaled = scores;
        for (auto& s : scaled) s.total *= k;
        c.expect(argmax_candidate(scaled) == winner, "argmax invariant under positive scaling");
      }
    }
  }
}

void determinism_and_trends(Check& c) {
  const ScenarioConfig cfg;
  const auto t0 = std::chrono::steady_clock::now();
  const RunReport a = run(cfg);
  const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  const RunReport b = run(cfg);
  std::printf("    default run %.1f s: %s", secs, kpi_csv({compute_kpis(a)}).substr(kKpiHeader.size() + 1).c_str());
  c.expect(secs < 60.0, "default scenario under 60 s");
  c.expect(kpi_csv({compute_kpis(a)}) == kpi_csv({compute_kpis(b)}), "KPI CSV replays byte-identically");
  c.expect(event_log(a) == event_log(b), "event log replays byte-identically");
  c.expect(ledger_exports(a) == ledger_exports(b), "ledger exports replay byte-identically");

  const std::vector<std::uint32_t> vehicles{20, 30, 40, 50}, sizes{5, 10};
  const auto cells = run_sweep(cfg, vehicles, sizes);
  std::map<std::pair<std::uint32_t, std::uint32_t>, const SweepCell*> grid;
  for (const auto& cell : cells) grid[{cell.vehicles, cell.cluster_size}] = &cell;
  for (std::size_t i = 0; i < vehicles.size(); ++i) {
    const auto* c5 = grid.at({vehicles[i], 5});
    const auto* c10 = grid.at({vehicles[i], 10});
    std::printf("    %u vehicles: overhead %llu/%llu, throughput c5 %.4f c10 %.4f Mbit/s\n", vehicles[i],
                static_cast<unsigned long long>(c5->row.overhead_msgs),
                static_cast<unsigned long long>(c10->row.overhead_msgs), c5->model_thrpt_cluster_mbps,
                c10->model_thrpt_cluster_mbps);
    c.expect(c10->model_thrpt_cluster_mbps > c5->model_thrpt_cluster_mbps,
             "size-10 throughput exceeds size-5 at " + std::to_string(vehicles[i]) + " vehicles");
    if (i > 0)
      for (std::uint32_t s : sizes)
        c.expect(grid.at({vehicles[i], s})->row.overhead_msgs > grid.at({vehicles[i - 1], s})->row.overhead_msgs,
                 "overhead strictly increasing at size " + std::to_string(s));
  }
}

void conservation(Check& c) {
  std::vector<ScenarioConfig> runs;
  runs.emplace_back();  // default scenario
  auto small = [] {
    ScenarioConfig s;
    s.n_vehicles = 25;
    s.n_rsus = 4;
    s.area = {1200.0, 1200.0};
    s.rounds = 150;
    return s;
  };
  runs.push_back(small());
  runs.back().traffic.malicious_fraction = 0.6;
  runs.push_back(small());
  runs.back().traffic.tamper_fraction = 0.3;
  runs.push_back(small());
  runs.back().radio.coverage_radius = 150.0;
  runs.push_back(small());
  runs.back().energy_model.initial_energy = 60.0;
  runs.push_back(small());
  runs.back().cluster_size_target = 3;
  runs.back().seed = 77;

  for (std::size_t i = 0; i < runs.size(); ++i) {
    const RunReport r = run(runs[i]);
    const Counters& k = r.counters;
    c.expect(k.sent == k.delivered + k.blocked + k.dropped + k.in_flight, "conservation in run " + std::to_string(i));
    const auto replay = oracle::replay_events(event_log(r));
    const std::string reported = kpi_csv({compute_kpis(r)});
    const std::string recomputed = kpi_csv({oracle::kpis_from_replay(replay, r)});
    c.expect(reported == recomputed, "event-log KPIs match CSV in run " + std::to_string(i) + "\n      reported " +
                                         reported + "      replayed " + recomputed);
    std::printf("    run %zu: sent %llu delivered %llu blocked %llu dropped %llu in-flight %llu\n", i,
                static_cast<unsigned long long>(k.sent), static_cast<unsigned long long>(k.delivered),
                static_cast<unsigned long long>(k.blocked), static_cast<unsigned long long>(k.dropped),
                static_cast<unsigned long long>(k.in_flight));
  }
}

}  // namespace

int main() {
  struct Criterion {
    int id;
    const char* name;
    double budget_s;  // 0 means no time limit
    std::function<void(Check&)> body;
  };
  const std::vector<Criterion> criteria{
      {1, "gas curve fit", 1.0, gas_curve},
      {2, "throughput equations", 5.0, throughput_equations},
      {3, "IDS properties", 30.0, ids_properties},
      {4, "ledger integrity", 10.0, ledger_integrity},
      {5, "two-step verification", 0.0, two_step},
      {6, "clustering partition and election", 0.0, clustering},
      {7, "determinism and sweep trends", 0.0, determinism_and_trends},
      {8, "conservation audit", 0.0, conservation},
  };

  int failed = 0;
  for (const auto& cr : criteria) {
    std::printf("[....] %d %s\n", cr.id, cr.name);
    std::fflush(stdout);
    Check check;
    const auto t0 = std::chrono::steady_clock::now();
    try {
      cr.body(check);
    } catch (const std::exception& e) {
      check.failures.push_back(std::string("exception: ") + e.what());
    }
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    if (cr.budget_s > 0 && secs >= cr.budget_s)
      check.failures.push_back("took " + std::to_string(secs) + " s, budget " + std::to_string(cr.budget_s) + " s");
    const bool pass = check.failures.empty();
    failed += !pass;
    std::printf("[%s] %d %s (%.2f s)\n", pass ? "PASS" : "FAIL", cr.id, cr.name, secs);
    for (const auto& f : check.failures) std::printf("    - %s\n", f.c_str());
    std::fflush(stdout);
  }
  std::printf("%d/%zu criteria passed\n", static_cast<int>(criteria.size()) - failed, criteria.size());
  return failed == 0 ? 0 : 1;
}
