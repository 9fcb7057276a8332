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

#include <cstdint>
#include <filesystem>
#include <utility>
#include <vector>

namespace vanetsim {

/// Per-transaction gas cost model.
///
/// Gas is charged as (g0 + cb) per transaction plus a fixed per-block
/// overhead. With the default zero overhead this is the strictly
/// proportional form G(Tx) = G0*Tx + Cb*Tx; a non-zero overhead gives the
/// affine calibrated form produced by `gas_model_from_fit`. Gas is counted
/// in whole units so block gas recomputes exactly.
struct GasModel {
  std::uint64_t g0 = 4000;
  std::uint64_t cb = 1400;
  std::uint64_t fixed_overhead = 0;

  std::uint64_t per_transaction() const noexcept { return g0 + cb; }

  friend bool operator==(const GasModel&, const GasModel&) = default;
};

std::uint64_t gas_cost(std::uint64_t tx_count, const GasModel& model) noexcept;

struct GasFit {
  double slope = 0.0;
  double intercept = 0.0;
  double r_squared = 0.0;
};

using GasTable = std::vector<std::pair<double, double>>;

/// Ordinary least squares of gas against transaction count. Throws
/// std::invalid_argument with fewer than two points or no spread in x.
GasFit fit_gas_table(const GasTable& table);

/// Affine model nearest to a fit: slope rounded into cb (g0 = 0),
/// intercept rounded and clamped at zero into fixed_overhead.
GasModel gas_model_from_fit(const GasFit& fit);

/// Two-column CSV with a header row (tx_count,gas).
GasTable read_gas_table(const std::filesystem::path& path);

}  // namespace vanetsim
