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

#ifndef PISM_INFERENCE_HPP
#define PISM_INFERENCE_HPP

#include <cstdint>
#include <functional>
#include <span>
#include <string>
#include <vector>

#include "pism/gme.hpp"
#include "pism/marginals.hpp"
#include "pism/objectives.hpp"

namespace pism {

enum class GradientMode { kExact, kMonteCarlo };
enum class Schedule { kCyclic, kRandom };

struct ElboConfig {
  GradientMode mode = GradientMode::kExact;
  std::uint64_t samples = 1000;       // per gradient block, MC mode
  std::uint64_t eval_samples = 10000; // trajectory ELBO estimates, MC mode
  std::uint64_t seed = 0;
  int iterations = 1;  // K: block updates for Block CA, steps for FW
  Schedule schedule = Schedule::kCyclic;
  double entropy_eps = kDefaultEntropyClip;
  int threads = 1;
  std::uint64_t enumeration_cap = kDefaultEnumerationCap;
};

// One trajectory checkpoint. Epochs are full-gradient units: a block
// gradient costs 1/n, a full gradient costs 1.
struct TrajectoryRecord {
  double epochs = 0.0;
  double elbo = 0.0;
  std::string mode;       // "exact" or "mc"
  std::string algorithm;
  double seconds = 0.0;   // wall clock since the run started
};

struct RunResult {
  ProductCategorical final_iterate;
  std::vector<TrajectoryRecord> trajectory;
  std::vector<double> step_sizes;  // FW drivers: gamma_t per iteration
};

// Per-iteration observer; iterate is the new point, step_size is the FW
// gamma (0 for Block CA).
using IterateObserver =
    std::function<void(const ProductCategorical& iterate, int iteration,
                       double step_size)>;

// ELBO(rho) = F(rho) + sum_i H(rho_i); the entropy term is always exact.
double elbo_exact(const Objective& f, const ProductCategorical& rho,
                  std::uint64_t cap = kDefaultEnumerationCap);
EstimateWithError elbo_estimate(const Objective& f,
                                const ProductCategorical& rho,
                                std::uint64_t samples, std::uint64_t seed,
                                int threads = 1);

// log sum_x exp(f(x)) by streaming max-shifted log-sum-exp over the whole
// lattice.
double log_partition_bruteforce(const Objective& f,
                                std::uint64_t cap = kDefaultEnumerationCap);

// Closed-form block maximizer of grad . xi + H(xi) over the simplex:
// rho_ij = exp(grad_j) / (1 + sum_j' exp(grad_j')), max-shifted against
// overflow (the implicit level-0 logit is 0). Output is strictly interior.
std::vector<double> block_ca_update(std::span<const double> grad_block);

// Vertex LMO over one block simplex: e_{j*} for the largest positive
// gradient entry (ties to the lowest index), the zero vertex otherwise.
std::vector<double> lmo_simplex_block(std::span<const double> grad_block);

// Fractional LMO over {0 <= v <= caps, sum v <= budget}: greedy fill in
// descending gradient order over the positive entries.
std::vector<double> lmo_shrunken_block(std::span<const double> grad_block,
                                       std::span<const double> caps,
                                       double budget);

// Block coordinate ascent: iteration k replaces block i_k with the
// closed-form maximizer given the GME gradient of that block. With exact
// gradients the ELBO is non-decreasing per iteration.
RunResult block_ca(const Objective& f, const ProductCategorical& rho0,
                   const ElboConfig& config,
                   const IterateObserver& observer = nullptr);

// Shrunken Frank-Wolfe from x_0 = 0: per step the shrunken LMO with caps
// 1 - x_t and per-block budget 1 - sum_j x_tij on the full ELBO gradient,
// then x_{t+1} = x_t + v_t / K.
RunResult shrunken_fw(const Objective& f, const ElboConfig& config,
                      const IterateObserver& observer = nullptr);

// Two-phase Frank-Wolfe with oblivious steps gamma_t = 2/(t+2): phase one
// runs the non-convex FW iteration from x0, phase two reruns it over the
// region {y : y <= 1 - z1 componentwise}; returns the better endpoint.
RunResult two_phase_fw(const Objective& f, const ElboConfig& config,
                       const ProductCategorical& x0,
                       const IterateObserver& observer = nullptr);

// Full ELBO gradient: GME part in the configured mode plus the clipped
// entropy gradient. Exposed for tests.
GradientMatrix elbo_gradient(const Objective& f, const ProductCategorical& rho,
                             const ElboConfig& config, std::uint64_t seed);

void write_trajectory_csv(std::ostream& out,
                          const std::vector<TrajectoryRecord>& trajectory,
                          bool include_timing = true);

}  // namespace pism

#endif  // PISM_INFERENCE_HPP
