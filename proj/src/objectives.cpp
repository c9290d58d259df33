// Copyright 2026 The pism Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "pism/objectives.hpp"

#include <algorithm>
#include <cmath>
#include <memory>
#include <random>
#include <stdexcept>

namespace pism {

Objective::Objective(LatticeDomain domain,
                     std::function<double(const IntegerPoint&)> eval,
                     double lo, double hi)
    : domain_(std::move(domain)), eval_(std::move(eval)), lo_(lo), hi_(hi) {
  if (!eval_) throw std::invalid_argument("objective needs an evaluator");
  if (lo_ > hi_) throw std::invalid_argument("value bound is empty");
}

WeightedGraph::WeightedGraph(int n) : n_(n), rows_(n) {
  if (n < 1) throw std::invalid_argument("graph needs at least one node");
}

void WeightedGraph::add_directed(int u, int v, double w) {
  if (u < 0 || u >= n_ || v < 0 || v >= n_) {
    throw std::invalid_argument("edge endpoint out of range");
  }
  if (u == v) throw std::invalid_argument("self-loops are not allowed");
  if (w < 0) throw std::invalid_argument("edge weights must be non-negative");
  for (auto& [j, weight] : rows_[u]) {
    if (j == v) {
      weight += w;  // multi-edges collapse by summing
      return;
    }
  }
  rows_[u].emplace_back(v, w);
}

void WeightedGraph::add_undirected(int u, int v, double w) {
  add_directed(u, v, w);
  add_directed(v, u, w);
}

double WeightedGraph::total_weight() const {
  double total = 0.0;
  for (const auto& row : rows_) {
    for (const auto& [j, w] : row) total += w;
  }
  return total;
}

std::vector<double> WeightedGraph::dense() const {
  std::vector<double> out(static_cast<std::size_t>(n_) * n_, 0.0);
  for (int i = 0; i < n_; ++i) {
    for (const auto& [j, w] : rows_[i]) {
      out[static_cast<std::size_t>(i) * n_ + j] = w;
    }
  }
  return out;
}

Objective revenue_objective(WeightedGraph graph, double q, int k) {
  if (!(q > 0.0 && q < 1.0)) {
    throw std::invalid_argument("revenue objective needs 0 < q < 1");
  }
  if (k < 2) throw std::invalid_argument("revenue objective needs k >= 2");
  const int n = graph.size();
  const double total = graph.total_weight();
  // q^level lookup shared by every evaluation.
  std::vector<double> q_pow(k);
  q_pow[0] = 1.0;
  for (int l = 1; l < k; ++l) q_pow[l] = q_pow[l - 1] * q;

  auto g = std::make_shared<WeightedGraph>(std::move(graph));
  auto eval = [g, q_pow, n](const IntegerPoint& x) {
    double revenue = 0.0;
    for (int i = 0; i < n; ++i) {
      const double advocate = 1.0 - q_pow[x[i]];
      if (advocate == 0.0) continue;
      double exposure = 0.0;
      for (const auto& [j, w] : g->row(i)) exposure += w * q_pow[x[j]];
      revenue += advocate * exposure;
    }
    return revenue;
  };
  return Objective(LatticeDomain::uniform(n, k), std::move(eval), 0.0, total);
}

FacilityWeights::FacilityWeights(
    std::vector<std::vector<std::vector<double>>> table)
    : table_(std::move(table)) {
  if (table_.empty() || table_[0].empty() || table_[0][0].empty()) {
    throw std::invalid_argument("facility weight table is empty");
  }
  const std::size_t n = table_[0].size();
  const std::size_t k = table_[0][0].size();
  for (const auto& customer : table_) {
    if (customer.size() != n) {
      throw std::invalid_argument("ragged facility weight table");
    }
    for (const auto& w : customer) {
      if (w.size() != k) {
        throw std::invalid_argument("ragged facility weight table");
      }
      if (w[0] != 0.0) {
        throw std::invalid_argument("facility utility at level 0 must be 0");
      }
      for (std::size_t l = 1; l < k; ++l) {
        if (w[l] < w[l - 1]) {
          throw std::invalid_argument(
              "facility utility tables must be non-decreasing in the level");
        }
      }
    }
  }
}

Objective facility_location_objective(FacilityWeights weights) {
  const int n = weights.facilities();
  const int m = weights.customers();
  const int k = weights.levels();
  double hi = 0.0;
  for (int i = 0; i < m; ++i) {
    double best = 0.0;
    for (int j = 0; j < n; ++j) {
      best = std::max(best, weights.utility(i, j, k - 1));
    }
    hi += best;
  }
  auto w = std::make_shared<FacilityWeights>(std::move(weights));
  auto eval = [w, n, m](const IntegerPoint& x) {
    double total = 0.0;
    for (int i = 0; i < m; ++i) {
      double best = 0.0;
      for (int j = 0; j < n; ++j) {
        best = std::max(best, w->utility(i, j, x[j]));
      }
      total += best;
    }
    return total;
  };
  return Objective(LatticeDomain::uniform(n, k), std::move(eval), 0.0, hi);
}

FacilityWeights synthetic_facility_weights(int n, int m, int k,
                                           std::uint64_t seed) {
  if (n < 1 || m < 1 || k < 1) {
    throw std::invalid_argument("synthetic facility weights need n, m, k >= 1");
  }
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> normal(0.0, 1.0);
  std::vector<std::vector<std::vector<double>>> table(
      m, std::vector<std::vector<double>>(n, std::vector<double>(k, 0.0)));
  // One increment matrix per positive level: |(1/n) L L^T| restricted to
  // the m x n utility shape (columns repeat when n > m), then a cumulative
  // sum across levels keeps every table monotone.
  for (int level = 1; level < k; ++level) {
    std::vector<std::vector<double>> l_mat(m, std::vector<double>(n));
    for (auto& row : l_mat) {
      for (auto& v : row) v = normal(rng);
    }
    for (int i = 0; i < m; ++i) {
      for (int j = 0; j < n; ++j) {
        const auto& a = l_mat[i];
        const auto& b = l_mat[j % m];
        double dot = 0.0;
        for (int t = 0; t < n; ++t) dot += a[t] * b[t];
        table[i][j][level] =
            table[i][j][level - 1] + std::abs(dot / static_cast<double>(n));
      }
    }
  }
  return FacilityWeights(std::move(table));
}

Objective modular_objective(std::vector<std::vector<double>> level_values) {
  if (level_values.empty()) {
    throw std::invalid_argument("modular objective needs at least one block");
  }
  std::vector<int> levels;
  double lo = 0.0, hi = 0.0;
  for (const auto& c : level_values) {
    if (c.size() < 2) {
      throw std::invalid_argument("every block needs at least two levels");
    }
    levels.push_back(static_cast<int>(c.size()));
    lo += *std::min_element(c.begin(), c.end());
    hi += *std::max_element(c.begin(), c.end());
  }
  auto values = std::make_shared<std::vector<std::vector<double>>>(
      std::move(level_values));
  auto eval = [values](const IntegerPoint& x) {
    double total = 0.0;
    for (std::size_t i = 0; i < x.size(); ++i) total += (*values)[i][x[i]];
    return total;
  };
  return Objective(LatticeDomain(std::move(levels)), std::move(eval), lo, hi);
}

}  // namespace pism
