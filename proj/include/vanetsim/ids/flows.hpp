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
#include <optional>
#include <string>
#include <vector>

#include "vanetsim/ids/iforest.hpp"

namespace vanetsim {
class Rng;
}

namespace vanetsim::ids {

enum class Label { kBenign, kMalicious };

inline Verdict to_verdict(Label l) { return l == Label::kMalicious ? Verdict::kMalicious : Verdict::kBenign; }

struct FlowFeatures {
  FeatureVector values;
  std::optional<Label> label;
};

/// Column mapping for CSV ingestion.
struct FlowSchema {
  std::vector<std::string> feature_columns;
  std::optional<std::string> label_column;
};

struct FlowSet {
  std::vector<FlowFeatures> flows;
  std::size_t dropped = 0;

  FeatureMatrix matrix() const;
  bool fully_labeled() const;
};

/// Reads a headered CSV. Rows where a mapped feature is unparseable or not
/// finite are dropped and counted. A label cell equal to "benign" (any case)
/// is benign, anything else malicious. Throws std::runtime_error when the
/// file is missing and std::invalid_argument when the schema names a column
/// the header lacks.
FlowSet ingest_flows(const std::filesystem::path& path, const FlowSchema& schema);

struct Confusion {
  std::uint64_t tp = 0, fp = 0, tn = 0, fn = 0;
  std::uint64_t total() const noexcept { return tp + fp + tn + fn; }
};

/// Percentages with malicious as the positive class. Ratios with a zero
/// denominator are reported as 0.
struct EvalReport {
  double accuracy = 0.0;
  double precision = 0.0;
  double recall = 0.0;
  double f1 = 0.0;
  Confusion confusion;
};

EvalReport report_from_confusion(const Confusion& c);

/// Throws std::invalid_argument on length mismatch or empty input.
EvalReport evaluate(const std::vector<Verdict>& predictions, const std::vector<Label>& labels);

inline constexpr double kFixtureInlierSd = 0.25;

/// Labeled 2-D fixture: `inliers` points from a tight isotropic Gaussian
/// (sd kFixtureInlierSd) and `outliers` points uniform in the annulus
/// 6 <= |x| <= 10 around the origin. Outliers come last.
std::vector<FlowFeatures> synthetic_fixture(std::uint64_t seed, std::size_t inliers = 990,
                                            std::size_t outliers = 10);

void write_flows_csv(const std::vector<FlowFeatures>& flows, const std::filesystem::path& path);

}  // namespace vanetsim::ids
