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

#include "vanetsim/ids/iforest.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <istream>
#include <numeric>
#include <ostream>
#include <sstream>
#include <stdexcept>
#include <string>

#include "vanetsim/rng.hpp"

namespace vanetsim::ids {
namespace {

constexpr double kEulerGamma = 0.5772156649;
constexpr const char* kFormatTag = "vanetsim-iforest";
constexpr int kFormatVersion = 1;

class TreeBuilder {
 public:
  TreeBuilder(const FeatureMatrix& data, Rng& rng, std::uint32_t height_limit)
      : data_(data), rng_(rng), height_limit_(height_limit) {}

  std::int32_t grow(std::span<Eigen::Index> rows, std::uint32_t depth) {
    const auto node_index = static_cast<std::int32_t>(nodes_.size());
    nodes_.emplace_back();
    if (depth >= height_limit_ || rows.size() <= 1) return make_leaf(node_index, rows.size());

    // Dimensions with spread on the routed rows.
    splittable_.clear();
    mins_.resize(static_cast<std::size_t>(data_.cols()));
    maxs_.resize(static_cast<std::size_t>(data_.cols()));
    for (Eigen::Index d = 0; d < data_.cols(); ++d) {
      double lo = data_(rows[0], d), hi = lo;
      for (Eigen::Index r : rows) {
        lo = std::min(lo, data_(r, d));
        hi = std::max(hi, data_(r, d));
      }
      mins_[static_cast<std::size_t>(d)] = lo;
      maxs_[static_cast<std::size_t>(d)] = hi;
      if (hi > lo) splittable_.push_back(static_cast<std::uint32_t>(d));
    }
    if (splittable_.empty()) return make_leaf(node_index, rows.size());

    const std::uint32_t dim = splittable_[rng_.below(splittable_.size())];
    const double lo = mins_[dim], hi = maxs_[dim];
    double split = lo + rng_.uniform_open() * (hi - lo);
    if (!(split > lo)) split = hi;  // keep both sides non-empty under rounding

    auto mid = std::partition(rows.begin(), rows.end(),
                              [&](Eigen::Index r) { return data_(r, dim) < split; });
    const auto left_count = static_cast<std::size_t>(mid - rows.begin());

    const std::int32_t left = grow(rows.first(left_count), depth + 1);
    const std::int32_t right = grow(rows.subspan(left_count), depth + 1);
    auto& node = nodes_[static_cast<std::size_t>(node_index)];
    node.left = left;
    node.right = right;
    node.split_dimension = dim;
    node.split_value = split;
    return node_index;
  }

  std::vector<IsolationTree::Node> take() { return std::move(nodes_); }

 private:
  std::int32_t make_leaf(std::int32_t index, std::size_t size) {
    nodes_[static_cast<std::size_t>(index)].size = static_cast<std::uint32_t>(size);
    return index;
  }

  const FeatureMatrix& data_;
  Rng& rng_;
  std::uint32_t height_limit_;
  std::vector<IsolationTree::Node> nodes_;
  std::vector<std::uint32_t> splittable_;
  std::vector<double> mins_, maxs_;
};

std::uint32_t depth_below(const std::vector<IsolationTree::Node>& nodes, std::int32_t i) {
  const auto& n = nodes[static_cast<std::size_t>(i)];
  if (n.is_leaf()) return 0;
  return 1 + std::max(depth_below(nodes, n.left), depth_below(nodes, n.right));
}

std::string hexfloat(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%a", v);
  return buf;
}

double parse_hexfloat(const std::string& s) {
  std::size_t used = 0;
  double v = 0.0;
  try {
    v = std::stod(s, &used);
  } catch (const std::logic_error&) {
    used = std::string::npos;
  }
  if (used != s.size()) throw std::runtime_error("malformed number in forest file: '" + s + "'");
  return v;
}

}  // namespace

double avg_path_normalizer(std::uint64_t n) {
  if (n <= 1) return 0.0;
  if (n == 2) return 1.0;
  const double m = static_cast<double>(n - 1);
  return 2.0 * (std::log(m) + kEulerGamma) - 2.0 * m / static_cast<double>(n);
}

double score_from_mean_path(double mean_path, std::uint64_t subsample_size) {
  return std::exp2(-mean_path / avg_path_normalizer(subsample_size));
}

Verdict classify_score(double score, double threshold) noexcept {
  return score >= threshold ? Verdict::kMalicious : Verdict::kBenign;
}

double IsolationTree::path_length(const Eigen::Ref<const FeatureVector>& x) const {
  std::int32_t i = 0;
  double depth = 0.0;
  while (!nodes_[static_cast<std::size_t>(i)].is_leaf()) {
    const auto& n = nodes_[static_cast<std::size_t>(i)];
    i = x(n.split_dimension) < n.split_value ? n.left : n.right;
    depth += 1.0;
  }
  return depth + avg_path_normalizer(nodes_[static_cast<std::size_t>(i)].size);
}

std::uint32_t IsolationTree::depth() const { return nodes_.empty() ? 0 : depth_below(nodes_, 0); }

IsolationForest::IsolationForest(std::vector<IsolationTree> trees, std::uint32_t subsample_size,
                                 std::uint32_t dimensionality, double threshold, std::uint64_t seed)
    : trees_(std::move(trees)),
      subsample_size_(subsample_size),
      dimensionality_(dimensionality),
      seed_(seed) {
  if (trees_.empty()) throw std::invalid_argument("forest needs at least one tree");
  if (subsample_size_ < 2) throw std::invalid_argument("subsample size must be >= 2");
  set_threshold(threshold);
}

void IsolationForest::set_threshold(double t) {
  if (!(t > 0.0 && t < 1.0)) throw std::invalid_argument("threshold must lie in (0, 1)");
  threshold_ = t;
}

double IsolationForest::mean_path_length(const Eigen::Ref<const FeatureVector>& x) const {
  if (x.size() != static_cast<Eigen::Index>(dimensionality_))
    throw std::invalid_argument("feature vector has " + std::to_string(x.size()) + " entries, forest expects " +
                                std::to_string(dimensionality_));
  double total = 0.0;
  for (const auto& t : trees_) total += t.path_length(x);
  return total / static_cast<double>(trees_.size());
}

double IsolationForest::anomaly_score(const Eigen::Ref<const FeatureVector>& x) const {
  return score_from_mean_path(mean_path_length(x), subsample_size_);
}

Verdict IsolationForest::classify(const Eigen::Ref<const FeatureVector>& x) const {
  return classify_score(anomaly_score(x), threshold_);
}

Eigen::VectorXd IsolationForest::score_all(const FeatureMatrix& data) const {
  Eigen::VectorXd scores(data.rows());
  for (Eigen::Index r = 0; r < data.rows(); ++r) scores(r) = anomaly_score(data.row(r).transpose());
  return scores;
}

IsolationForest fit(const FeatureMatrix& data, const ForestParams& params, std::uint64_t seed) {
  if (data.rows() == 0) throw std::invalid_argument("cannot fit an isolation forest on empty data");
  if (data.rows() < 2) throw std::invalid_argument("isolation forest needs at least 2 samples");
  if (data.cols() == 0) throw std::invalid_argument("feature vectors are empty");
  if (!data.allFinite()) throw std::invalid_argument("training data contains non-finite values");
  if (params.n_trees == 0) throw std::invalid_argument("n_trees must be > 0");
  if (params.subsample_size < 2) throw std::invalid_argument("subsample_size must be >= 2");

  const auto psi = static_cast<std::uint32_t>(
      std::min<Eigen::Index>(params.subsample_size, data.rows()));
  const auto height_limit = static_cast<std::uint32_t>(std::ceil(std::log2(static_cast<double>(psi))));

  std::vector<IsolationTree> trees;
  trees.reserve(params.n_trees);
  std::vector<Eigen::Index> pool(static_cast<std::size_t>(data.rows()));
  for (std::uint32_t t = 0; t < params.n_trees; ++t) {
    Rng rng(derive_seed(seed, {t}));
    std::iota(pool.begin(), pool.end(), Eigen::Index{0});
    for (std::size_t i = 0; i < psi; ++i) {
      const std::size_t j = i + rng.below(pool.size() - i);
      std::swap(pool[i], pool[j]);
    }
    std::vector<Eigen::Index> rows(pool.begin(), pool.begin() + psi);
    TreeBuilder builder(data, rng, height_limit);
    builder.grow(rows, 0);
    trees.emplace_back(builder.take(), height_limit);
  }
  return IsolationForest(std::move(trees), psi, static_cast<std::uint32_t>(data.cols()), params.threshold,
                         seed);
}

void save_forest(const IsolationForest& forest, std::ostream& out) {
  out << kFormatTag << ' ' << kFormatVersion << '\n';
  out << "trees " << forest.trees().size() << '\n';
  out << "subsample_size " << forest.subsample_size() << '\n';
  out << "dimensionality " << forest.dimensionality() << '\n';
  out << "threshold " << hexfloat(forest.threshold()) << '\n';
  out << "seed " << forest.seed() << '\n';
  for (const auto& tree : forest.trees()) {
    out << "tree " << tree.nodes().size() << ' ' << tree.height_limit() << '\n';
    for (const auto& n : tree.nodes()) {
      if (n.is_leaf())
        out << "L " << n.size << '\n';
      else
        out << "S " << n.split_dimension << ' ' << hexfloat(n.split_value) << ' ' << n.left << ' ' << n.right
            << '\n';
    }
  }
}

IsolationForest load_forest(std::istream& in) {
  auto expect = [&](const char* key) {
    std::string word;
    if (!(in >> word) || word != key) throw std::runtime_error(std::string("forest file: expected '") + key + "'");
  };
  std::string tag;
  int version = 0;
  if (!(in >> tag >> version) || tag != kFormatTag) throw std::runtime_error("not a vanetsim forest file");
  if (version != kFormatVersion) throw std::runtime_error("unsupported forest format version " + std::to_string(version));

  std::size_t n_trees = 0;
  std::uint32_t subsample = 0, dims = 0;
  std::string threshold_text;
  std::uint64_t seed = 0;
  expect("trees");
  in >> n_trees;
  expect("subsample_size");
  in >> subsample;
  expect("dimensionality");
  in >> dims;
  expect("threshold");
  in >> threshold_text;
  expect("seed");
  in >> seed;
  if (!in) throw std::runtime_error("forest file: truncated header");

  std::vector<IsolationTree> trees;
  trees.reserve(n_trees);
  for (std::size_t t = 0; t < n_trees; ++t) {
    std::size_t n_nodes = 0;
    std::uint32_t height = 0;
    expect("tree");
    in >> n_nodes >> height;
    std::vector<IsolationTree::Node> nodes(n_nodes);
    for (auto& node : nodes) {
      std::string kind;
      in >> kind;
      if (kind == "L") {
        in >> node.size;
      } else if (kind == "S") {
        std::string value;
        in >> node.split_dimension >> value >> node.left >> node.right;
        node.split_value = parse_hexfloat(value);
        const auto limit = static_cast<std::int32_t>(n_nodes);
        if (node.left <= 0 || node.right <= 0 || node.left >= limit || node.right >= limit || node.split_dimension >= dims)
          throw std::runtime_error("forest file: node reference out of range");
      } else {
        throw std::runtime_error("forest file: unknown node kind '" + kind + "'");
      }
      if (!in) throw std::runtime_error("forest file: truncated tree");
    }
    if (nodes.empty()) throw std::runtime_error("forest file: empty tree");
    trees.emplace_back(std::move(nodes), height);
  }
  return IsolationForest(std::move(trees), subsample, dims, parse_hexfloat(threshold_text), seed);
}

}  // namespace vanetsim::ids
