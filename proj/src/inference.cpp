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

#include "pism/inference.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <limits>
#include <numeric>
#include <ostream>

#include "pism/rng.hpp"

namespace pism {

namespace {

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point t0) {
  return std::chrono::duration<double>(Clock::now() - t0).count();
}

bool enumerable(const Objective& f, std::uint64_t cap) {
  const auto card = f.domain().cardinality();
  return card && *card <= cap;
}

// GME gradient of a single block, the unit of work for Block CA (1/n of a
// full gradient evaluation).
std::vector<double> block_gme_gradient(const Objective& f,
                                       const ProductCategorical& rho, int i,
                                       const ElboConfig& config,
                                       std::uint64_t seed) {
  const int k = rho.domain().levels(i);
  std::vector<double> grad(k - 1, 0.0);
  if (config.mode == GradientMode::kExact) {
    const double base = gme_exact(f, rho.clamp_block(i, 0), config.enumeration_cap);
    for (int j = 1; j < k; ++j) {
      grad[j - 1] =
          gme_exact(f, rho.clamp_block(i, j), config.enumeration_cap) - base;
    }
    return grad;
  }
  for (std::uint64_t s = 0; s < config.samples; ++s) {
    IntegerPoint x = sample(rho, seed, s);
    x[i] = 0;
    const double base = f(x);
    for (int j = 1; j < k; ++j) {
      x[i] = j;
      grad[j - 1] += f(x) - base;
    }
  }
  for (double& g : grad) g /= static_cast<double>(config.samples);
  return grad;
}

struct ElboEvaluation {
  double value;
  std::string mode;
};

ElboEvaluation evaluate_elbo(const Objective& f, const ProductCategorical& rho,
                             const ElboConfig& config,
                             std::uint64_t checkpoint) {
  if (enumerable(f, config.enumeration_cap)) {
    return {elbo_exact(f, rho, config.enumeration_cap), "exact"};
  }
  const std::uint64_t seed = derive_seed(config.seed, 0xE1B0'0000 + checkpoint);
  return {elbo_estimate(f, rho, config.eval_samples, seed, config.threads).value,
          "mc"};
}

}  // namespace

double elbo_exact(const Objective& f, const ProductCategorical& rho,
                  std::uint64_t cap) {
  return gme_exact(f, rho, cap) + entropy(rho);
}

EstimateWithError elbo_estimate(const Objective& f,
                                const ProductCategorical& rho,
                                std::uint64_t samples, std::uint64_t seed,
                                int threads) {
  EstimateWithError est = gme_estimate(f, rho, samples, seed, threads);
  est.value += entropy(rho);  // entropy term is exact
  return est;
}

double log_partition_bruteforce(const Objective& f, std::uint64_t cap) {
  // Streaming max-shifted log-sum-exp.
  double running_max = -std::numeric_limits<double>::infinity();
  double acc = 0.0;
  f.domain().for_each_point(
      [&](const IntegerPoint& x) {
        const double v = f(x);
        if (v <= running_max) {
          acc += std::exp(v - running_max);
        } else {
          acc = acc * std::exp(running_max - v) + 1.0;
          running_max = v;
        }
      },
      cap);
  return running_max + std::log(acc);
}

std::vector<double> block_ca_update(std::span<const double> grad_block) {
  // Softmax over (0, grad_1, ..., grad_{k-1}); the implicit zero logit is
  // the residual level.
  double shift = 0.0;
  for (double g : grad_block) shift = std::max(shift, g);
  double denom = std::exp(-shift);
  for (double g : grad_block) denom += std::exp(g - shift);
  std::vector<double> out(grad_block.size());
  for (std::size_t j = 0; j < grad_block.size(); ++j) {
    out[j] = std::exp(grad_block[j] - shift) / denom;
  }
  return out;
}

std::vector<double> lmo_simplex_block(std::span<const double> grad_block) {
  std::vector<double> vertex(grad_block.size(), 0.0);
  int best = -1;
  double best_value = 0.0;
  for (std::size_t j = 0; j < grad_block.size(); ++j) {
    if (grad_block[j] > best_value) {
      best = static_cast<int>(j);
      best_value = grad_block[j];
    }
  }
  if (best >= 0) vertex[best] = 1.0;
  return vertex;
}

std::vector<double> lmo_shrunken_block(std::span<const double> grad_block,
                                       std::span<const double> caps,
                                       double budget) {
  if (caps.size() != grad_block.size()) {
    throw std::invalid_argument("cap vector has wrong length");
  }
  std::vector<std::size_t> order(grad_block.size());
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
    return grad_block[a] > grad_block[b];
  });
  std::vector<double> v(grad_block.size(), 0.0);
  double remaining = std::max(budget, 0.0);
  for (std::size_t j : order) {
    if (grad_block[j] <= 0.0 || remaining <= 0.0) break;
    const double take = std::min(std::max(caps[j], 0.0), remaining);
    v[j] = take;
    remaining -= take;
  }
  return v;
}

GradientMatrix elbo_gradient(const Objective& f, const ProductCategorical& rho,
                             const ElboConfig& config, std::uint64_t seed) {
  GradientMatrix grad;
  if (config.mode == GradientMode::kExact) {
    grad = gradient_exact(f, rho, config.enumeration_cap);
  } else {
    grad = gradient_estimate(f, rho, config.samples, seed, config.threads).value;
  }
  const GradientMatrix ent = entropy_gradient(rho, config.entropy_eps);
  for (std::size_t i = 0; i < grad.size(); ++i) {
    for (std::size_t j = 0; j < grad[i].size(); ++j) grad[i][j] += ent[i][j];
  }
  return grad;
}

RunResult block_ca(const Objective& f, const ProductCategorical& rho0,
                   const ElboConfig& config, const IterateObserver& observer) {
  if (config.iterations < 1) throw std::invalid_argument("need K >= 1");
  if (!rho0.feasible()) throw std::invalid_argument("infeasible start");
  const auto t0 = Clock::now();
  const int n = rho0.blocks();
  ProductCategorical rho = rho0;
  RunResult result{rho, {}, {}};
  double epochs = 0.0;
  std::uint64_t checkpoint = 0;
  auto record = [&] {
    const ElboEvaluation e = evaluate_elbo(f, rho, config, checkpoint++);
    result.trajectory.push_back(
        {epochs, e.value, e.mode, "block-ca", seconds_since(t0)});
  };
  record();
  for (int k = 0; k < config.iterations; ++k) {
    const int i = config.schedule == Schedule::kCyclic
                      ? k % n
                      : static_cast<int>(keyed_mix(config.seed, k, 0x5eedULL) % n);
    const std::vector<double> grad =
        block_gme_gradient(f, rho, i, config, derive_seed(config.seed, k));
    rho = rho.with_block(i, block_ca_update(grad));
    epochs += 1.0 / n;
    if (observer) observer(rho, k, 0.0);
    if ((k + 1) % n == 0 || k + 1 == config.iterations) record();
  }
  result.final_iterate = rho;
  return result;
}

namespace {

// Shared non-convex FW iteration x <- x + gamma (v - x) with oblivious
// steps gamma_t = 2/(t+2). The LMO respects a per-coordinate upper bound,
// the all-ones vector in phase one.
ProductCategorical fw_phase(const Objective& f, const ElboConfig& config,
                            const ProductCategorical& x0,
                            const GradientMatrix& upper_bound,
                            std::uint64_t phase_tag, const char* tag,
                            double epoch_offset, Clock::time_point t0,
                            RunResult& result, std::uint64_t& checkpoint,
                            const IterateObserver& observer, int iter_offset) {
  ProductCategorical x = x0;
  for (int t = 0; t < config.iterations; ++t) {
    const double gamma = 2.0 / (t + 2.0);
    const GradientMatrix grad = elbo_gradient(
        f, x, config, derive_seed(config.seed, phase_tag + t));
    ProductCategorical next = x;
    for (int i = 0; i < x.blocks(); ++i) {
      std::vector<double> v;
      if (upper_bound.empty()) {
        v = lmo_simplex_block(grad[i]);
      } else {
        v = lmo_shrunken_block(grad[i], upper_bound[i], 1.0);
      }
      std::vector<double> block = x.block(i);
      for (std::size_t j = 0; j < block.size(); ++j) {
        block[j] += gamma * (v[j] - block[j]);
      }
      next = next.with_block(i, std::move(block));
    }
    x = next;
    result.step_sizes.push_back(gamma);
    if (observer) observer(x, iter_offset + t, gamma);
    const ElboEvaluation e = evaluate_elbo(f, x, config, checkpoint++);
    result.trajectory.push_back(
        {epoch_offset + t + 1.0, e.value, e.mode, tag, seconds_since(t0)});
  }
  return x;
}

}  // namespace

RunResult shrunken_fw(const Objective& f, const ElboConfig& config,
                      const IterateObserver& observer) {
  if (config.iterations < 1) throw std::invalid_argument("need K >= 1");
  const auto t0 = Clock::now();
  const int big_k = config.iterations;
  ProductCategorical x = ProductCategorical::zero(f.domain());
  RunResult result{x, {}, {}};
  std::uint64_t checkpoint = 0;
  auto record = [&](double epochs) {
    const ElboEvaluation e = evaluate_elbo(f, x, config, checkpoint++);
    result.trajectory.push_back(
        {epochs, e.value, e.mode, "shrunken-fw", seconds_since(t0)});
  };
  record(0.0);
  for (int t = 0; t < big_k; ++t) {
    const GradientMatrix grad =
        elbo_gradient(f, x, config, derive_seed(config.seed, 0x5F00 + t));
    ProductCategorical next = x;
    for (int i = 0; i < x.blocks(); ++i) {
      std::vector<double> block = x.block(i);
      std::vector<double> caps(block.size());
      double mass = 0.0;
      for (std::size_t j = 0; j < block.size(); ++j) {
        caps[j] = 1.0 - block[j];
        mass += block[j];
      }
      const std::vector<double> v =
          lmo_shrunken_block(grad[i], caps, 1.0 - mass);
      for (std::size_t j = 0; j < block.size(); ++j) {
        block[j] += v[j] / static_cast<double>(big_k);
      }
      next = next.with_block(i, std::move(block));
    }
    x = next;
    result.step_sizes.push_back(1.0 / static_cast<double>(big_k));
    if (observer) observer(x, t, 1.0 / big_k);
    record(t + 1.0);
  }
  result.final_iterate = x;
  return result;
}

RunResult two_phase_fw(const Objective& f, const ElboConfig& config,
                       const ProductCategorical& x0,
                       const IterateObserver& observer) {
  if (config.iterations < 1) throw std::invalid_argument("need K >= 1");
  if (!x0.feasible()) throw std::invalid_argument("infeasible start");
  const auto t0 = Clock::now();
  RunResult result{x0, {}, {}};
  std::uint64_t checkpoint = 0;
  const ElboEvaluation start = evaluate_elbo(f, x0, config, checkpoint++);
  result.trajectory.push_back(
      {0.0, start.value, start.mode, "two-phase-fw", seconds_since(t0)});

  const ProductCategorical z1 =
      fw_phase(f, config, x0, {}, 0x7F10'0000, "two-phase-fw", 0.0, t0, result,
               checkpoint, observer, 0);

  // Phase two explores the componentwise complement {y : y <= 1 - z1}.
  GradientMatrix upper(z1.blocks());
  for (int i = 0; i < z1.blocks(); ++i) {
    upper[i].resize(z1.block(i).size());
    for (std::size_t j = 0; j < upper[i].size(); ++j) {
      upper[i][j] = std::max(0.0, 1.0 - z1.block(i)[j]);
    }
  }
  const ProductCategorical z2 = fw_phase(
      f, config, ProductCategorical::zero(f.domain()), upper, 0x7F20'0000,
      "two-phase-fw", config.iterations, t0, result, checkpoint, observer,
      config.iterations);

  const ElboEvaluation e1 = evaluate_elbo(f, z1, config, 0x7F30'0000);
  const ElboEvaluation e2 = evaluate_elbo(f, z2, config, 0x7F30'0001);
  result.final_iterate = e1.value >= e2.value ? z1 : z2;
  return result;
}

void write_trajectory_csv(std::ostream& out,
                          const std::vector<TrajectoryRecord>& trajectory,
                          bool include_timing) {
  out << "epoch,elbo,mode,algorithm,seconds\n";
  char buf[128];
  for (const auto& r : trajectory) {
    std::snprintf(buf, sizeof(buf), "%.17g,%.17g,%s,%s,%.6f", r.epochs, r.elbo,
                  r.mode.c_str(), r.algorithm.c_str(),
                  include_timing ? r.seconds : 0.0);
    out << buf << "\n";
  }
}

}  // namespace pism
