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

#include "vanetsim/ids/flows.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <fstream>
#include <stdexcept>

#include "vanetsim/csv.hpp"
#include "vanetsim/rng.hpp"

namespace vanetsim::ids {
namespace {

bool iequals(std::string_view a, std::string_view b) {
  return a.size() == b.size() && std::equal(a.begin(), a.end(), b.begin(), [](char x, char y) {
           return std::tolower(static_cast<unsigned char>(x)) == std::tolower(static_cast<unsigned char>(y));
         });
}

double pct(std::uint64_t num, std::uint64_t den) {
  return den == 0 ? 0.0 : 100.0 * static_cast<double>(num) / static_cast<double>(den);
}

}  // namespace

FeatureMatrix FlowSet::matrix() const {
  if (flows.empty()) return {};
  FeatureMatrix m(static_cast<Eigen::Index>(flows.size()), flows.front().values.size());
  for (std::size_t i = 0; i < flows.size(); ++i) m.row(static_cast<Eigen::Index>(i)) = flows[i].values.transpose();
  return m;
}

bool FlowSet::fully_labeled() const {
  return std::all_of(flows.begin(), flows.end(), [](const FlowFeatures& f) { return f.label.has_value(); });
}

FlowSet ingest_flows(const std::filesystem::path& path, const FlowSchema& schema) {
  if (!std::filesystem::exists(path)) throw std::runtime_error("flow file not found: " + path.string());
  const CsvTable csv = read_csv(path);
  if (schema.feature_columns.empty()) throw std::invalid_argument("schema maps no feature columns");

  std::vector<std::size_t> feature_idx;
  for (const auto& name : schema.feature_columns) {
    const auto idx = csv.column(name);
    if (!idx) throw std::invalid_argument("schema column '" + name + "' not present in " + path.string());
    feature_idx.push_back(*idx);
  }
  std::optional<std::size_t> label_idx;
  if (schema.label_column) {
    label_idx = csv.column(*schema.label_column);
    if (!label_idx)
      throw std::invalid_argument("label column '" + *schema.label_column + "' not present in " + path.string());
  }

  FlowSet set;
  for (const auto& row : csv.rows) {
    FlowFeatures f;
    f.values.resize(static_cast<Eigen::Index>(feature_idx.size()));
    bool ok = true;
    for (std::size_t k = 0; k < feature_idx.size() && ok; ++k) {
      const auto v = feature_idx[k] < row.size() ? parse_double(row[feature_idx[k]]) : std::nullopt;
      ok = v && std::isfinite(*v);
      if (ok) f.values(static_cast<Eigen::Index>(k)) = *v;
    }
    if (ok && label_idx) {
      if (*label_idx >= row.size()) {
        ok = false;
      } else {
        f.label = iequals(row[*label_idx], "benign") ? Label::kBenign : Label::kMalicious;
      }
    }
    if (!ok) {
      ++set.dropped;
      continue;
    }
    set.flows.push_back(std::move(f));
  }
  return set;
}

EvalReport report_from_confusion(const Confusion& c) {
  EvalReport r;
  r.confusion = c;
  r.accuracy = pct(c.tp + c.tn, c.total());
  r.precision = pct(c.tp, c.tp + c.fp);
  r.recall = pct(c.tp, c.tp + c.fn);
  r.f1 = (r.precision + r.recall) > 0.0 ? 2.0 * r.precision * r.recall / (r.precision + r.recall) : 0.0;
  return r;
}

EvalReport evaluate(const std::vector<Verdict>& predictions, const std::vector<Label>& labels) {
  if (predictions.size() != labels.size())
    throw std::invalid_argument("evaluate: " + std::to_string(predictions.size()) + " predictions vs " +
                                std::to_string(labels.size()) + " labels");
  if (predictions.empty()) throw std::invalid_argument("evaluate: empty input");
  Confusion c;
  for (std::size_t i = 0; i < labels.size(); ++i) {
    const bool predicted = predictions[i] == Verdict::kMalicious;
    const bool actual = labels[i] == Label::kMalicious;
    if (predicted && actual) ++c.tp;
    else if (predicted) ++c.fp;
    else if (actual) ++c.fn;
    else ++c.tn;
  }
  return report_from_confusion(c);
}

std::vector<FlowFeatures> synthetic_fixture(std::uint64_t seed, std::size_t inliers, std::size_t outliers) {
  Rng rng = Rng(seed).split("ids-fixture");
  std::vector<FlowFeatures> out;
  out.reserve(inliers + outliers);
  for (std::size_t i = 0; i < inliers; ++i) {
    FeatureVector v(2);
    v << rng.normal(0.0, kFixtureInlierSd), rng.normal(0.0, kFixtureInlierSd);
    out.push_back({std::move(v), Label::kBenign});
  }
  for (std::size_t i = 0; i < outliers; ++i) {
    FeatureVector v(2);
    do {
      v << rng.uniform(-10.0, 10.0), rng.uniform(-10.0, 10.0);
    } while (v.norm() < 6.0 || v.norm() > 10.0);
    out.push_back({std::move(v), Label::kMalicious});
  }
  return out;
}

void write_flows_csv(const std::vector<FlowFeatures>& flows, const std::filesystem::path& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot write " + path.string());
  const Eigen::Index dims = flows.empty() ? 0 : flows.front().values.size();
  for (Eigen::Index d = 0; d < dims; ++d) out << (d ? "," : "") << "f" << d;
  out << ",label\n";
  for (const auto& f : flows) {
    for (Eigen::Index d = 0; d < dims; ++d) out << (d ? "," : "") << format_double(f.values(d));
    out << ',' << (f.label == Label::kMalicious ? "Malicious" : "Benign") << '\n';
  }
}

}  // namespace vanetsim::ids
