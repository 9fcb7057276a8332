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

// Isolation forest anomaly detector.
//
// Each tree is grown on a uniform subsample without replacement. Internal
// nodes split on a uniformly chosen dimension (among dimensions that are
// not constant on the routed points) at a uniform point between the routed
// minimum and maximum. Growth stops at ceil(log2(subsample)) or when no
// split is possible. A point's path length is its leaf depth plus c(size)
// of the leaf, and the anomaly score is 2^(-mean_path / c(subsample)).

#include <Eigen/Core>

#include <cstdint>
#include <iosfwd>
#include <span>
#include <vector>

namespace vanetsim::ids {

using FeatureMatrix = Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;
using FeatureVector = Eigen::VectorXd;

/// Expected path length of an unsuccessful BST search over n points; 0 for
/// n <= 1, 1 for n = 2, 2*H(n-1) - 2(n-1)/n otherwise.
double avg_path_normalizer(std::uint64_t n);

/// 2^(-mean_path / c(subsample)).
double score_from_mean_path(double mean_path, std::uint64_t subsample_size);

struct ForestParams {
  std::uint32_t n_trees = 100;
  std::uint32_t subsample_size = 256;
  double threshold = 0.5;
};

class IsolationTree {
 public:
  struct Node {
    // Leaf when left < 0.
    std::int32_t left = -1;
    std::int32_t right = -1;
    std::uint32_t split_dimension = 0;
    double split_value = 0.0;
    std::uint32_t size = 0;  // training points reaching a leaf

    bool is_leaf() const noexcept { return left < 0; }

    friend bool operator==(const Node&, const Node&) = default;
  };

  IsolationTree() = default;
  IsolationTree(std::vector<Node> nodes, std::uint32_t height_limit)
      : nodes_(std::move(nodes)), height_limit_(height_limit) {}

  /// Depth of the leaf reached by x plus c(leaf size).
  double path_length(const Eigen::Ref<const FeatureVector>& x) const;

  const std::vector<Node>& nodes() const noexcept { return nodes_; }
  std::uint32_t height_limit() const noexcept { return height_limit_; }
  std::uint32_t depth() const;

  friend bool operator==(const IsolationTree&, const IsolationTree&) = default;

 private:
  std::vector<Node> nodes_;
  std::uint32_t height_limit_ = 0;
};

enum class Verdict { kBenign, kMalicious };

class IsolationForest {
 public:
  IsolationForest() = default;
  IsolationForest(std::vector<IsolationTree> trees, std::uint32_t subsample_size,
                  std::uint32_t dimensionality, double threshold, std::uint64_t seed);

  /// Throws std::invalid_argument on dimensionality mismatch.
  double anomaly_score(const Eigen::Ref<const FeatureVector>& x) const;
  double mean_path_length(const Eigen::Ref<const FeatureVector>& x) const;
  /// Malicious iff score >= threshold.
  Verdict classify(const Eigen::Ref<const FeatureVector>& x) const;

  Eigen::VectorXd score_all(const FeatureMatrix& data) const;

  const std::vector<IsolationTree>& trees() const noexcept { return trees_; }
  std::uint32_t subsample_size() const noexcept { return subsample_size_; }
  std::uint32_t dimensionality() const noexcept { return dimensionality_; }
  double threshold() const noexcept { return threshold_; }
  std::uint64_t seed() const noexcept { return seed_; }
  void set_threshold(double t);

  friend bool operator==(const IsolationForest&, const IsolationForest&) = default;

 private:
  std::vector<IsolationTree> trees_;
  std::uint32_t subsample_size_ = 0;
  std::uint32_t dimensionality_ = 0;
  double threshold_ = 0.5;
  std::uint64_t seed_ = 0;
};

/// Verdict for a score: malicious when score >= threshold (ties block).
Verdict classify_score(double score, double threshold) noexcept;

/// Trains a forest. Rows of `data` are samples. Tree t is grown from the
/// stream seeded by derive_seed(seed, {t}), so the result does not depend on
/// build order. Subsample size is clamped to the row count.
/// Throws std::invalid_argument on fewer than two rows, zero columns,
/// non-finite entries or invalid params.
IsolationForest fit(const FeatureMatrix& data, const ForestParams& params, std::uint64_t seed);

/// Text serialization, format "vanetsim-iforest 1". Doubles are written as
/// hexadecimal floats so a reload is bit-identical.
void save_forest(const IsolationForest& forest, std::ostream& out);
IsolationForest load_forest(std::istream& in);

}  // namespace vanetsim::ids
