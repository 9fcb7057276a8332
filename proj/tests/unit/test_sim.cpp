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

#include <gtest/gtest.h>

#include <sstream>

#include "support/oracles.hpp"
#include "vanetsim/metrics.hpp"
#include "vanetsim/sim.hpp"

namespace vanetsim {
namespace {

ScenarioConfig small(std::uint32_t vehicles = 20, std::uint32_t rounds = 40) {
  ScenarioConfig cfg;
  cfg.n_vehicles = vehicles;
  cfg.n_rsus = 4;
  cfg.area = {1000.0, 1000.0};
  cfg.rounds = rounds;
  cfg.clustering.recluster_interval = 10;
  cfg.ledger.cloud_flush_interval = 5;
  cfg.ids_config.training_samples = 512;
  cfg.ids_config.forest.n_trees = 50;
  return cfg;
}

std::string event_log(const RunReport& r) {
  std::ostringstream os;
  write_event_log(r, os);
  return os.str();
}

void expect_conserved(const Counters& c) {
  EXPECT_EQ(c.sent, c.delivered + c.blocked + c.dropped + c.in_flight);
}

TEST(Sim, ZeroRounds) {
  auto cfg = small();
  cfg.rounds = 0;
  const auto r = run(cfg);
  EXPECT_EQ(r.rounds_completed, 0u);
  EXPECT_TRUE(r.events.empty());
  EXPECT_EQ(r.counters.sent, 0u);
  EXPECT_EQ(compute_kpis(r), (MetricsRow{20, 0, 0, 0.0, 0.0, 0.0, 0.0, 0}));
}

TEST(Sim, NoMaliciousTrafficMeansNothingBlocked) {
  auto cfg = small(30, 60);
  cfg.traffic.malicious_fraction = 0.0;
  const auto r = run(cfg);
  EXPECT_EQ(r.counters.blocked, 0u);
  EXPECT_GT(r.counters.delivered, 0u);
}

TEST(Sim, AllMaliciousTrafficIsBlocked) {
  auto cfg = small(20, 30);
  cfg.traffic.malicious_fraction = 1.0;
  const auto r = run(cfg);
  EXPECT_EQ(r.counters.delivered, 0u);
  EXPECT_EQ(r.counters.blocked + r.counters.dropped, r.counters.sent);
  EXPECT_EQ(r.quarantined, r.counters.blocked);
}

TEST(Sim, Deterministic) {
  const auto cfg = small();
  const auto a = run(cfg), b = run(cfg);
  EXPECT_EQ(a.events, b.events);
  EXPECT_EQ(compute_kpis(a), compute_kpis(b));
  auto other = cfg;
  other.seed = 2;
  EXPECT_NE(run(other).events, a.events);
}

TEST(Sim, ConservationEveryRound) {
  auto cfg = small(25, 50);
  cfg.traffic.tamper_fraction = 0.1;
  Simulation sim(cfg);
  for (std::uint32_t i = 0; i < cfg.rounds; ++i) {
    sim.step_round();
    expect_conserved(sim.counters());
    EXPECT_EQ(sim.counters().in_flight, 0u);
  }
}

TEST(Sim, MobilityStaysInsideAndRespectsLimits) {
  auto cfg = small(40, 0);
  cfg.mobility.max_speed = 80.0;
  Simulation sim(cfg);
  auto& vs = sim.mutable_vehicles();
  // Push some vehicles to the border heading outwards.
  vs[0].position = Position(999.0, 500.0);
  vs[0].heading = 0.0;
  vs[0].speed = 80.0;
  vs[1].position = Position(1.0, 1.0);
  vs[1].heading = -2.5;
  vs[1].speed = 80.0;
  for (int step = 0; step < 100; ++step) {
    const auto before = sim.vehicles();
    sim.step_mobility();
    for (std::size_t i = 0; i < before.size(); ++i) {
      const auto& v = sim.vehicles()[i];
      ASSERT_GE(v.position.x(), 0.0);
      ASSERT_LE(v.position.x(), 1000.0);
      ASSERT_GE(v.position.y(), 0.0);
      ASSERT_LE(v.position.y(), 1000.0);
      ASSERT_GE(v.speed, 0.0);
      ASSERT_LE(v.speed, 80.0);
      ASSERT_GE(v.speed - before[i].speed, -cfg.mobility.max_decel - 1e-12);
      ASSERT_LE(v.speed - before[i].speed, cfg.mobility.max_accel + 1e-12);
      // Reflection never moves a vehicle further than its speed.
      ASSERT_LE((v.position - before[i].position).norm(), v.speed + 1e-9);
    }
  }
}

TEST(Sim, EnergyMatchesEventSums) {
  auto cfg = small(20, 60);
  cfg.energy_model.initial_energy = 40.0;
  const auto r = run(cfg);
  const auto rep = oracle::replay_events(event_log(r));
  EXPECT_NEAR(rep.energy, r.counters.energy_consumed_mj, 1e-9 * std::max(1.0, rep.energy));
  for (const auto& v : r.vehicles) {
    const double used = rep.energy_by_vehicle.contains(v.id) ? rep.energy_by_vehicle.at(v.id) : 0.0;
    EXPECT_NEAR(cfg.energy_model.initial_energy - v.energy, used, 1e-9) << "vehicle " << v.id;
    EXPECT_GE(v.energy, 0.0);
  }
}

TEST(Sim, DepletedVehiclesFallSilent) {
  auto cfg = small(20, 80);
  cfg.energy_model.initial_energy = 30.0;
  const auto r = run(cfg);
  ASSERT_TRUE(r.counters.first_depletion_round);
  std::map<std::uint64_t, std::uint64_t> depleted_at;
  for (const auto& e : r.events)
    if (e.kind == EventKind::kDepletion) EXPECT_TRUE(depleted_at.emplace(e.subject, e.round).second);
  ASSERT_FALSE(depleted_at.empty());
  EXPECT_EQ(*r.counters.first_depletion_round, std::min_element(depleted_at.begin(), depleted_at.end(), [](auto& a, auto& b) {
                                                  return a.second < b.second;
                                                })->second + 1);
  for (const auto& e : r.events) {
    if (e.kind != EventKind::kGenerate && e.kind != EventKind::kIdle) continue;
    auto it = depleted_at.find(e.subject);
    if (it != depleted_at.end()) EXPECT_LE(e.round, it->second) << "vehicle " << e.subject;
  }
  EXPECT_EQ(compute_kpis(r).nlt_rounds, *r.counters.first_depletion_round);
}

TEST(Sim, DeliveredMessagesAreOnBothLedgerTiers) {
  const auto r = run(small(20, 30));
  ASSERT_GT(r.counters.delivered, 0u);
  std::set<std::pair<ClusterId, std::uint64_t>> anchored;
  for (const auto& b : r.cloud_ledger.blocks)
    for (const auto& tx : b.transactions)
      if (auto a = anchor_of(tx)) {
        ASSERT_TRUE(r.cluster_ledgers.contains(a->cluster_id));
        const auto& l = r.cluster_ledgers.at(a->cluster_id);
        ASSERT_LT(a->height, l.blocks.size());
        EXPECT_EQ(l.blocks[a->height].hash, a->block_hash);
        anchored.emplace(a->cluster_id, a->height);
      }
  EXPECT_TRUE(validate_chain(r.cloud_ledger));
  for (const auto& [id, l] : r.cluster_ledgers) {
    EXPECT_TRUE(validate_chain(l)) << "cluster " << id;
    for (std::size_t h = 0; h < l.blocks.size(); ++h) EXPECT_TRUE(anchored.contains({id, h})) << id << "@" << h;
  }
  // Every delivered message digest sits on some cluster ledger.
  std::set<Digest> committed;
  for (const auto& [id, l] : r.cluster_ledgers)
    for (const auto& b : l.blocks)
      for (const auto& tx : b.transactions)
        if (auto d = message_digest_of(tx)) committed.insert(*d);
  std::uint64_t delivered = 0;
  for (const auto& e : r.events) delivered += e.outcome == Outcome::kDelivered;
  EXPECT_EQ(delivered, r.counters.delivered);
  EXPECT_GE(committed.size(), delivered);
}

TEST(Sim, DelayDecomposition) {
  const DelayModel d;
  EXPECT_DOUBLE_EQ(end_to_end_delay(d, 0.05), 0.02 + 0.25 + 0.05 + 0.05 + 0.03);
  DelayModel slower = d;
  slower.t_b *= 2;
  EXPECT_DOUBLE_EQ(end_to_end_delay(slower, 0.05) - end_to_end_delay(d, 0.05), d.t_b);

  const auto r = run(small());
  for (const auto& e : r.events)
    if (e.outcome == Outcome::kDelivered) {
      EXPECT_DOUBLE_EQ(e.delay_s, end_to_end_delay(r.config.delay_model, e.t_n_effective));
      EXPECT_DOUBLE_EQ(end_to_end_delay(r, e.message_id), e.delay_s);
      EXPECT_GE(e.t_n_effective, r.config.delay_model.t_n);
    }
}

TEST(Sim, DoublingLedgerDelayShiftsMeanDelay) {
  auto cfg = small();
  const auto a = compute_kpis(run(cfg));
  cfg.delay_model.t_b *= 2;
  const auto b = compute_kpis(run(cfg));
  EXPECT_NEAR(b.eted_s - a.eted_s, 0.25, 1e-12);
}

TEST(Sim, TamperedPayloadsAreDropped) {
  auto cfg = small(20, 30);
  cfg.traffic.tamper_fraction = 1.0;
  cfg.traffic.malicious_fraction = 0.0;
  const auto r = run(cfg);
  EXPECT_EQ(r.counters.delivered, 0u);
  std::uint64_t mismatches = 0;
  for (const auto& e : r.events) mismatches += e.cause == DropCause::kContentMismatch;
  EXPECT_GT(mismatches, 0u);
  expect_conserved(r.counters);
}

TEST(Sim, SmallCoverageLeavesVehiclesUnrouted) {
  auto cfg = small(30, 20);
  cfg.radio.coverage_radius = 50.0;
  const auto r = run(cfg);
  std::uint64_t no_route = 0;
  for (const auto& e : r.events) no_route += e.cause == DropCause::kNoRoute;
  EXPECT_GT(no_route, 0u);
  expect_conserved(r.counters);
}

TEST(Sim, GridLayoutCoversDefaultArea) {
  const ScenarioConfig cfg;
  const auto sites = place_rsus(cfg);
  ASSERT_EQ(sites.size(), cfg.n_rsus);
  for (double x = 0; x <= cfg.area.width; x += 50)
    for (double y = 0; y <= cfg.area.height; y += 50) {
      double best = 1e18;
      for (const auto& s : sites) best = std::min(best, (s - Position(x, y)).norm());
      EXPECT_LE(best, cfg.radio.coverage_radius) << x << "," << y;
    }
}

TEST(Sim, UniformLayoutIsSeededAndInside) {
  ScenarioConfig cfg;
  cfg.radio.rsu_layout = RsuLayout::kUniform;
  const auto a = place_rsus(cfg);
  EXPECT_EQ(a, place_rsus(cfg));
  for (const auto& p : a) {
    EXPECT_GE(p.x(), 0.0);
    EXPECT_LE(p.x(), cfg.area.width);
  }
  cfg.seed = 5;
  EXPECT_NE(a, place_rsus(cfg));
}

TEST(Sim, MeanDelayGrowsWithVehicleCount) {
  double prev = 0.0;
  for (std::uint32_t n : {20u, 30u, 40u, 50u}) {
    ScenarioConfig cfg;
    cfg.n_vehicles = n;
    cfg.rounds = 100;
    const double eted = compute_kpis(run(cfg)).eted_s;
    EXPECT_GT(eted, prev) << n;
    prev = eted;
  }
}

TEST(Sim, Errors) {
  auto cfg = small();
  cfg.n_vehicles = 0;
  EXPECT_THROW(Simulation{cfg}, ConfigError);
  ids::FeatureMatrix data = ids::FeatureMatrix::Random(50, 2);
  EXPECT_THROW(Simulation(small(), ids::fit(data, {10, 32, 0.5}, 1)), std::invalid_argument);
  Simulation sim(small(5, 1));
  sim.step_round();
  sim.finish();
  EXPECT_THROW(sim.step_round(), std::logic_error);
  EXPECT_THROW(sim.finish(), std::logic_error);
}

TEST(Flows, FeatureRanges) {
  Rng rng(3);
  const PacketSizeRange range{100, 512};
  for (int i = 0; i < 1000; ++i) {
    const auto b = benign_flow(rng, 300, range);
    const auto m = malicious_flow(rng, range);
    ASSERT_EQ(b.size(), kFlowFeatureDims);
    ASSERT_EQ(m.size(), kFlowFeatureDims);
    EXPECT_TRUE(b.allFinite());
    EXPECT_LT(m(0), 60.0 / 512.0 + 1e-12);
  }
}

}  // namespace
}  // namespace vanetsim
