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

#ifndef PISM_OBJECTIVES_HPP
#define PISM_OBJECTIVES_HPP

#include <cstdint>
#include <functional>
#include <utility>
#include <vector>

#include "pism/lattice.hpp"

namespace pism {

// An integer energy function together with its domain and a bound on its
// value range. Evaluation is pure and thread-safe: all captured state is
// read-only after construction.
class Objective {
 public:
  Objective(LatticeDomain domain,
            std::function<double(const IntegerPoint&)> eval, double lo,
            double hi);

  const LatticeDomain& domain() const { return domain_; }
  double operator()(const IntegerPoint& x) const { return eval_(x); }

  double lower_bound() const { return lo_; }
  double upper_bound() const { return hi_; }
  // Width of the value range, the Hoeffding range B.
  double value_range() const { return hi_ - lo_; }

 private:
  LatticeDomain domain_;
  std::function<double(const IntegerPoint&)> eval_;
  double lo_;
  double hi_;
};

// Non-negative edge weights with zero diagonal, stored symmetrically for
// undirected inputs. Kept sparse: row i holds (j, W_ij) pairs.
class WeightedGraph {
 public:
  explicit WeightedGraph(int n);

  int size() const { return n_; }
  // Accumulates weight onto the directed entry W_uv. Rejects self-loops
  // and negative weights.
  void add_directed(int u, int v, double w);
  // Accumulates onto both W_uv and W_vu.
  void add_undirected(int u, int v, double w);

  const std::vector<std::pair<int, double>>& row(int i) const {
    return rows_[i];
  }
  double total_weight() const;
  std::vector<double> dense() const;  // row-major n*n

 private:
  int n_;
  std::vector<std::vector<std::pair<int, double>>> rows_;
};

// Per-customer, per-facility utility tables w_ij : {0,...,k-1} -> R with
// w_ij(0) = 0 and each table non-decreasing in the level.
class FacilityWeights {
 public:
  // table[i][j][l] = utility of facility j at level l for customer i.
  // Validates the zero-at-level-0 and monotonicity invariants.
  FacilityWeights(std::vector<std::vector<std::vector<double>>> table);

  int customers() const { return static_cast<int>(table_.size()); }
  int facilities() const {
    return table_.empty() ? 0 : static_cast<int>(table_[0].size());
  }
  int levels() const {
    return customers() == 0 ? 0 : static_cast<int>(table_[0][0].size());
  }
  double utility(int customer, int facility, int level) const {
    return table_[customer][facility][level];
  }

 private:
  std::vector<std::vector<std::vector<double>>> table_;
};

// Revenue objective f(x) = sum_i sum_{j != i} W_ij (1 - q^{x_i}) q^{x_j}.
// Submodular on the lattice but in general neither DR-submodular nor
// monotone. Requires 0 < q < 1.
Objective revenue_objective(WeightedGraph graph, double q, int k);

// Facility location f(x) = sum_i max_j w_ij(x_j); monotone submodular.
Objective facility_location_objective(FacilityWeights weights);

// Synthetic facility tables: per level a Gram-style product of a standard
// normal matrix, absolute values, then a cumulative sum across levels so
// each table is monotone. Deterministic in the seed.
FacilityWeights synthetic_facility_weights(int n, int m, int k,
                                           std::uint64_t seed);

// Separable objective f(x) = sum_i c_i(x_i); modular, handy as a test
// energy with exactly factorizing partition function.
Objective modular_objective(std::vector<std::vector<double>> level_values);

}  // namespace pism

#endif  // PISM_OBJECTIVES_HPP
