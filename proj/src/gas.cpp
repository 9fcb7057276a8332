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

#include "vanetsim/gas.hpp"

#include <Eigen/Dense>

#include <cmath>
#include <stdexcept>

#include "vanetsim/csv.hpp"

namespace vanetsim {

std::uint64_t gas_cost(std::uint64_t tx_count, const GasModel& model) noexcept {
  return model.per_transaction() * tx_count + model.fixed_overhead;
}

GasFit fit_gas_table(const GasTable& table) {
  if (table.size() < 2) throw std::invalid_argument("gas table needs at least 2 rows");
  const auto n = static_cast<Eigen::Index>(table.size());
  Eigen::MatrixXd design(n, 2);
  Eigen::VectorXd gas(n);
  for (Eigen::Index i = 0; i < n; ++i) {
    design(i, 0) = table[static_cast<std::size_t>(i)].first;
    design(i, 1) = 1.0;
    gas(i) = table[static_cast<std::size_t>(i)].second;
  }
  const Eigen::VectorXd x = design.col(0);
  if ((x.array() - x(0)).abs().maxCoeff() == 0.0)
    throw std::invalid_argument("gas table needs at least 2 distinct transaction counts");

  const Eigen::Vector2d beta = design.colPivHouseholderQr().solve(gas);
  const Eigen::VectorXd residual = gas - design * beta;
  const double ss_res = residual.squaredNorm();
  const double ss_tot = (gas.array() - gas.mean()).matrix().squaredNorm();

  GasFit fit;
  fit.slope = beta(0);
  fit.intercept = beta(1);
  fit.r_squared = ss_tot > 0.0 ? 1.0 - ss_res / ss_tot : 1.0;
  return fit;
}

GasModel gas_model_from_fit(const GasFit& fit) {
  GasModel m;
  m.g0 = 0;
  m.cb = static_cast<std::uint64_t>(std::llround(std::max(0.0, fit.slope)));
  m.fixed_overhead = static_cast<std::uint64_t>(std::llround(std::max(0.0, fit.intercept)));
  return m;
}

GasTable read_gas_table(const std::filesystem::path& path) {
  const CsvTable csv = read_csv(path);
  if (csv.header.size() < 2) throw std::invalid_argument("gas table needs two columns");
  GasTable table;
  for (std::size_t r = 0; r < csv.rows.size(); ++r) {
    const auto& row = csv.rows[r];
    if (row.size() < 2) throw std::invalid_argument("gas table row " + std::to_string(r + 2) + " is short");
    const auto x = parse_double(row[0]);
    const auto y = parse_double(row[1]);
    if (!x || !y || !std::isfinite(*x) || !std::isfinite(*y))
      throw std::invalid_argument("gas table row " + std::to_string(r + 2) + " is not numeric");
    table.emplace_back(*x, *y);
  }
  return table;
}

}  // namespace vanetsim
