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

#ifndef PISM_MARGINALS_HPP
#define PISM_MARGINALS_HPP

#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

#include "pism/lattice.hpp"

namespace pism {

// n x (k-1) array of partial derivatives, one block per lattice dimension.
// Block i has length k_i - 1 (level 0 carries the residual mass and has no
// free parameter).
using GradientMatrix = std::vector<std::vector<double>>;

inline constexpr double kDefaultEntropyClip = 1e-6;
inline constexpr double kFeasibilityTolerance = 1e-12;

// Product of independent categorical marginals: block i is the vector
// (rho_i1, ..., rho_i,k-1) with rho_ij >= 0 and sum_j rho_ij <= 1; the
// level-0 probability is the residual 1 - sum_j rho_ij.
class ProductCategorical {
 public:
  ProductCategorical(LatticeDomain domain,
                     std::vector<std::vector<double>> blocks);

  static ProductCategorical uniform(const LatticeDomain& domain);
  static ProductCategorical zero(const LatticeDomain& domain);
  static ProductCategorical random(const LatticeDomain& domain,
                                   std::uint64_t seed);
  // Degenerate distribution concentrated on x.
  static ProductCategorical point_mass(const LatticeDomain& domain,
                                       const IntegerPoint& x);

  const LatticeDomain& domain() const { return domain_; }
  int blocks() const { return static_cast<int>(rho_.size()); }
  const std::vector<double>& block(int i) const { return rho_[i]; }
  const std::vector<std::vector<double>>& raw() const { return rho_; }

  // Probability of level j (0..k_i-1) in block i; level 0 is the residual.
  double prob(int i, int level) const;
  double residual(int i) const;

  // Returns a copy with block i replaced by the vertex for `level`:
  // level 0 is the zero vector, level j >= 1 is e_j.
  ProductCategorical clamp_block(int i, int level) const;
  // Returns a copy with block i replaced by an arbitrary feasible vector.
  ProductCategorical with_block(int i, std::vector<double> values) const;

  bool feasible(double tol = kFeasibilityTolerance) const;

 private:
  LatticeDomain domain_;
  std::vector<std::vector<double>> rho_;
};

// One integer draw R(rho); coordinate i uses the uniform stream keyed by
// (seed, sample_index, i), so draws are reproducible for any partitioning
// of sample indices across workers.
IntegerPoint sample(const ProductCategorical& rho, std::uint64_t seed,
                    std::uint64_t sample_index);

// Total entropy sum_i H(rho_i) with 0 log 0 := 0.
double entropy(const ProductCategorical& rho);
double block_entropy(const std::vector<double>& block);

// Entry (i,j) = log(rho_i0 / rho_ij) with every probability clipped into
// [eps, 1-eps] first; the exact gradient diverges on simplex faces and the
// Frank-Wolfe drivers need finite values there. The stored rho is never
// modified.
GradientMatrix entropy_gradient(const ProductCategorical& rho,
                                double eps = kDefaultEntropyClip);

// CSV with header `element,level,prob`, all k levels per element including
// the residual level 0, probabilities at 17 significant digits.
void write_marginals_csv(std::ostream& out, const ProductCategorical& rho);
std::string marginals_to_csv(const ProductCategorical& rho);
ProductCategorical read_marginals_csv(std::istream& in);

}  // namespace pism

#endif  // PISM_MARGINALS_HPP
