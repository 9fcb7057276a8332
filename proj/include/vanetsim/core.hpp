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

// Shared domain types: vehicles, roadside units and the radio model.

#include <Eigen/Core>

#include <cmath>
#include <cstdint>
#include <optional>
#include <set>

#include "vanetsim/crypto.hpp"

namespace vanetsim {

using VehicleId = std::uint64_t;
using RsuId = std::uint64_t;
using ClusterId = std::uint64_t;

/// Planar position in meters.
template <typename Scalar>
using Point2 = Eigen::Matrix<Scalar, 2, 1>;
using Position = Point2<double>;

struct Vehicle {
  VehicleId id = 0;
  Position position = Position::Zero();
  double speed = 0.0;    // m/s
  double heading = 0.0;  // rad
  double max_speed = 50.0;
  double max_accel = 3.6;
  double max_decel = 5.0;
  double processing_power = 0.5;     // [0,1]
  double vehicle_type_weight = 0.5;  // [0,1]
  double energy = 0.0;               // mJ remaining
  KeyPair key_pair;
  std::optional<ClusterId> cluster_id;

  bool depleted() const noexcept { return energy <= 0.0; }
};

struct Rsu {
  RsuId id = 0;
  Position position = Position::Zero();
  double coverage_radius = 500.0;
  std::set<ClusterId> cluster_ids;
};

/// Log-distance path loss with the distance clamped to at least one meter:
/// tx_power_dbm - 10 * exponent * log10(max(d, 1)).
template <typename Scalar>
Scalar received_power_dbm(Scalar distance_m, Scalar tx_power_dbm, Scalar path_loss_exp) {
  using std::log10;
  using std::max;
  return tx_power_dbm - Scalar(10) * path_loss_exp * log10(max(distance_m, Scalar(1)));
}

template <typename Scalar>
Scalar signal_strength(const Point2<Scalar>& from, const Point2<Scalar>& to, Scalar tx_power_dbm,
                       Scalar path_loss_exp) {
  return received_power_dbm((from - to).norm(), tx_power_dbm, path_loss_exp);
}

inline double signal_strength(const Vehicle& v, const Rsu& r, double tx_power_dbm, double path_loss_exp) {
  return signal_strength<double>(v.position, r.position, tx_power_dbm, path_loss_exp);
}

inline double distance(const Vehicle& v, const Rsu& r) { return (v.position - r.position).norm(); }

}  // namespace vanetsim
