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

#include "pism/marginals.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <map>
#include <ostream>
#include <sstream>

#include "pism/rng.hpp"

namespace pism {

namespace {

void validate_blocks(const LatticeDomain& domain,
                     const std::vector<std::vector<double>>& rho) {
  if (static_cast<int>(rho.size()) != domain.size()) {
    throw std::invalid_argument("marginal block count does not match domain");
  }
  for (int i = 0; i < domain.size(); ++i) {
    if (static_cast<int>(rho[i].size()) != domain.levels(i) - 1) {
      throw std::invalid_argument("marginal block has wrong length");
    }
    double mass = 0.0;
    for (double p : rho[i]) {
      if (!(p >= -kFeasibilityTolerance)) {
        throw std::invalid_argument("negative categorical probability");
      }
      mass += p;
    }
    if (mass > 1.0 + kFeasibilityTolerance) {
      throw std::invalid_argument("categorical block mass exceeds 1");
    }
  }
}

double clip(double p, double eps) {
  return std::min(std::max(p, eps), 1.0 - eps);
}

}  // namespace

ProductCategorical::ProductCategorical(LatticeDomain domain,
                                       std::vector<std::vector<double>> blocks)
    : domain_(std::move(domain)), rho_(std::move(blocks)) {
  validate_blocks(domain_, rho_);
}

ProductCategorical ProductCategorical::uniform(const LatticeDomain& domain) {
  std::vector<std::vector<double>> rho(domain.size());
  for (int i = 0; i < domain.size(); ++i) {
    rho[i].assign(domain.levels(i) - 1, 1.0 / domain.levels(i));
  }
  return ProductCategorical(domain, std::move(rho));
}

ProductCategorical ProductCategorical::zero(const LatticeDomain& domain) {
  std::vector<std::vector<double>> rho(domain.size());
  for (int i = 0; i < domain.size(); ++i) {
    rho[i].assign(domain.levels(i) - 1, 0.0);
  }
  return ProductCategorical(domain, std::move(rho));
}

ProductCategorical ProductCategorical::random(const LatticeDomain& domain,
                                              std::uint64_t seed) {
  // Independent uniforms normalized over all k levels, residual dropped.
  std::vector<std::vector<double>> rho(domain.size());
  for (int i = 0; i < domain.size(); ++i) {
    const int k = domain.levels(i);
    std::vector<double> mass(k);
    double total = 0.0;
    for (int l = 0; l < k; ++l) {
      mass[l] = uniform01(seed, i, l) + 1e-12;
      total += mass[l];
    }
    rho[i].resize(k - 1);
    for (int j = 1; j < k; ++j) rho[i][j - 1] = mass[j] / total;
  }
  return ProductCategorical(domain, std::move(rho));
}

ProductCategorical ProductCategorical::point_mass(const LatticeDomain& domain,
                                                  const IntegerPoint& x) {
  if (!domain.contains(x)) {
    throw std::invalid_argument("point mass location outside the domain");
  }
  ProductCategorical rho = zero(domain);
  for (int i = 0; i < domain.size(); ++i) {
    if (x[i] > 0) rho.rho_[i][x[i] - 1] = 1.0;
  }
  return rho;
}

double ProductCategorical::prob(int i, int level) const {
  if (level == 0) return residual(i);
  return rho_[i][level - 1];
}

double ProductCategorical::residual(int i) const {
  double mass = 0.0;
  for (double p : rho_[i]) mass += p;
  return 1.0 - mass;
}

ProductCategorical ProductCategorical::clamp_block(int i, int level) const {
  if (i < 0 || i >= blocks()) {
    throw std::invalid_argument("block index out of range");
  }
  if (level < 0 || level >= domain_.levels(i)) {
    throw std::invalid_argument("clamp level out of range");
  }
  ProductCategorical out = *this;
  std::fill(out.rho_[i].begin(), out.rho_[i].end(), 0.0);
  if (level > 0) out.rho_[i][level - 1] = 1.0;
  return out;
}

ProductCategorical ProductCategorical::with_block(
    int i, std::vector<double> values) const {
  if (i < 0 || i >= blocks()) {
    throw std::invalid_argument("block index out of range");
  }
  ProductCategorical out = *this;
  out.rho_[i] = std::move(values);
  validate_blocks(out.domain_, out.rho_);
  return out;
}

bool ProductCategorical::feasible(double tol) const {
  for (int i = 0; i < blocks(); ++i) {
    double mass = 0.0;
    for (double p : rho_[i]) {
      if (p < -tol) return false;
      mass += p;
    }
    if (mass > 1.0 + tol) return false;
  }
  return true;
}

IntegerPoint sample(const ProductCategorical& rho, std::uint64_t seed,
                    std::uint64_t sample_index) {
  const LatticeDomain& domain = rho.domain();
  IntegerPoint x(domain.size(), 0);
  for (int i = 0; i < domain.size(); ++i) {
    const double u = uniform01(seed, sample_index, static_cast<std::uint64_t>(i));
    double cumulative = rho.residual(i);
    int level = 0;
    while (u >= cumulative && level + 1 < domain.levels(i)) {
      ++level;
      cumulative += rho.block(i)[level - 1];
    }
    x[i] = level;
  }
  return x;
}

double block_entropy(const std::vector<double>& block) {
  double mass = 0.0;
  double h = 0.0;
  auto term = [](double p) { return p > 0.0 ? -p * std::log(p) : 0.0; };
  for (double p : block) {
    mass += p;
    h += term(p);
  }
  h += term(1.0 - mass);
  return h;
}

double entropy(const ProductCategorical& rho) {
  double h = 0.0;
  for (int i = 0; i < rho.blocks(); ++i) h += block_entropy(rho.block(i));
  return h;
}

GradientMatrix entropy_gradient(const ProductCategorical& rho, double eps) {
  GradientMatrix grad(rho.blocks());
  for (int i = 0; i < rho.blocks(); ++i) {
    const double p0 = clip(rho.residual(i), eps);
    grad[i].resize(rho.block(i).size());
    for (std::size_t j = 0; j < grad[i].size(); ++j) {
      grad[i][j] = std::log(p0 / clip(rho.block(i)[j], eps));
    }
  }
  return grad;
}

void write_marginals_csv(std::ostream& out, const ProductCategorical& rho) {
  out << "element,level,prob\n";
  char buf[64];
  for (int i = 0; i < rho.blocks(); ++i) {
    for (int level = 0; level < rho.domain().levels(i); ++level) {
      std::snprintf(buf, sizeof(buf), "%.17g", rho.prob(i, level));
      out << i << "," << level << "," << buf << "\n";
    }
  }
}

std::string marginals_to_csv(const ProductCategorical& rho) {
  std::ostringstream out;
  write_marginals_csv(out, rho);
  return out.str();
}

ProductCategorical read_marginals_csv(std::istream& in) {
  std::string line;
  if (!std::getline(in, line) || line != "element,level,prob") {
    throw std::invalid_argument("marginals CSV: missing header");
  }
  std::map<int, std::map<int, double>> table;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    int element = 0, level = 0;
    double prob = 0.0;
    if (std::sscanf(line.c_str(), "%d,%d,%lf", &element, &level, &prob) != 3) {
      throw std::invalid_argument("marginals CSV: malformed row: " + line);
    }
    table[element][level] = prob;
  }
  if (table.empty()) throw std::invalid_argument("marginals CSV: no rows");
  std::vector<int> levels;
  std::vector<std::vector<double>> rho;
  int expect = 0;
  for (const auto& [element, row] : table) {
    if (element != expect++) {
      throw std::invalid_argument("marginals CSV: non-contiguous elements");
    }
    const int k = static_cast<int>(row.size());
    if (k < 2 || row.begin()->first != 0 || row.rbegin()->first != k - 1) {
      throw std::invalid_argument("marginals CSV: non-contiguous levels");
    }
    levels.push_back(k);
    std::vector<double> block(k - 1);
    for (int j = 1; j < k; ++j) block[j - 1] = row.at(j);
    rho.push_back(std::move(block));
  }
  return ProductCategorical(LatticeDomain(std::move(levels)), std::move(rho));
}

}  // namespace pism
