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

#include "pism/gme.hpp"

#include <algorithm>
#include <array>
#include <atomic>
#include <cmath>
#include <thread>

#include "pism/rng.hpp"

namespace pism {

namespace {

// Fixed accumulation granularity. Chunks are always reduced in index
// order, so estimates are bit-identical for any worker count.
constexpr std::uint64_t kChunkSize = 4096;

// Runs fn(task) for task in [0, tasks) on up to `threads` workers.
void parallel_tasks(std::uint64_t tasks, int threads,
                    const std::function<void(std::uint64_t)>& fn) {
  const int workers =
      std::max(1, std::min<int>(threads, static_cast<int>(
                                             std::min<std::uint64_t>(tasks, 256))));
  if (workers == 1) {
    for (std::uint64_t t = 0; t < tasks; ++t) fn(t);
    return;
  }
  std::atomic<std::uint64_t> next{0};
  std::vector<std::thread> pool;
  pool.reserve(workers);
  for (int w = 0; w < workers; ++w) {
    pool.emplace_back([&] {
      for (std::uint64_t t = next.fetch_add(1); t < tasks;
           t = next.fetch_add(1)) {
        fn(t);
      }
    });
  }
  for (auto& th : pool) th.join();
}

std::vector<std::vector<double>> probability_table(
    const ProductCategorical& rho) {
  std::vector<std::vector<double>> probs(rho.blocks());
  for (int i = 0; i < rho.blocks(); ++i) {
    const int k = rho.domain().levels(i);
    probs[i].resize(k);
    for (int level = 0; level < k; ++level) probs[i][level] = rho.prob(i, level);
  }
  return probs;
}

}  // namespace

double gme_exact(const Objective& f, const ProductCategorical& rho,
                 std::uint64_t cap) {
  if (f.domain() != rho.domain()) {
    throw std::invalid_argument("marginals do not match the objective domain");
  }
  const auto probs = probability_table(rho);
  double total = 0.0;
  f.domain().for_each_point(
      [&](const IntegerPoint& x) {
        double p = 1.0;
        for (std::size_t i = 0; i < x.size(); ++i) {
          p *= probs[i][x[i]];
          if (p == 0.0) return;
        }
        total += p * f(x);
      },
      cap);
  return total;
}

EstimateWithError gme_estimate(const Objective& f,
                               const ProductCategorical& rho,
                               std::uint64_t samples, std::uint64_t seed,
                               int threads) {
  if (samples < 1) throw std::invalid_argument("need at least one sample");
  if (f.domain() != rho.domain()) {
    throw std::invalid_argument("marginals do not match the objective domain");
  }
  const std::uint64_t chunks = (samples + kChunkSize - 1) / kChunkSize;
  std::vector<double> chunk_sum(chunks, 0.0), chunk_sumsq(chunks, 0.0);
  parallel_tasks(chunks, threads, [&](std::uint64_t c) {
    const std::uint64_t begin = c * kChunkSize;
    const std::uint64_t end = std::min(begin + kChunkSize, samples);
    double sum = 0.0, sumsq = 0.0;
    for (std::uint64_t s = begin; s < end; ++s) {
      const double v = f(sample(rho, seed, s));
      sum += v;
      sumsq += v * v;
    }
    chunk_sum[c] = sum;
    chunk_sumsq[c] = sumsq;
  });
  double sum = 0.0, sumsq = 0.0;
  for (std::uint64_t c = 0; c < chunks; ++c) {
    sum += chunk_sum[c];
    sumsq += chunk_sumsq[c];
  }
  EstimateWithError out;
  out.samples = samples;
  const double n = static_cast<double>(samples);
  out.value = sum / n;
  if (samples > 1) {
    const double var = std::max(0.0, (sumsq - n * out.value * out.value) / (n - 1.0));
    out.stderr_ = std::sqrt(var / n);
  }
  return out;
}

GradientMatrix gradient_exact(const Objective& f, const ProductCategorical& rho,
                              std::uint64_t cap) {
  GradientMatrix grad(rho.blocks());
  for (int i = 0; i < rho.blocks(); ++i) {
    const int k = rho.domain().levels(i);
    grad[i].resize(k - 1);
    const double base = gme_exact(f, rho.clamp_block(i, 0), cap);
    for (int j = 1; j < k; ++j) {
      grad[i][j - 1] = gme_exact(f, rho.clamp_block(i, j), cap) - base;
    }
  }
  return grad;
}

GradientEstimate gradient_estimate(const Objective& f,
                                   const ProductCategorical& rho,
                                   std::uint64_t samples, std::uint64_t seed,
                                   int threads) {
  if (samples < 1) throw std::invalid_argument("need at least one sample");
  const int n = rho.blocks();
  GradientEstimate out;
  out.samples = samples;
  out.value.resize(n);
  out.stderr_.resize(n);
  // Blocks are independent tasks; within a block the sample loop is
  // sequential, so the reduction order is fixed for any worker count.
  parallel_tasks(static_cast<std::uint64_t>(n), threads, [&](std::uint64_t bi) {
    const int i = static_cast<int>(bi);
    const int k = rho.domain().levels(i);
    std::vector<double> sum(k - 1, 0.0), sumsq(k - 1, 0.0);
    for (std::uint64_t s = 0; s < samples; ++s) {
      // Common random numbers: one draw of the other coordinates shared
      // by every level j and the zero baseline.
      IntegerPoint x = sample(rho, seed, s);
      x[i] = 0;
      const double base = f(x);
      for (int j = 1; j < k; ++j) {
        x[i] = j;
        const double d = f(x) - base;
        sum[j - 1] += d;
        sumsq[j - 1] += d * d;
      }
    }
    const double ns = static_cast<double>(samples);
    out.value[i].resize(k - 1);
    out.stderr_[i].assign(k - 1, 0.0);
    for (int j = 0; j < k - 1; ++j) {
      out.value[i][j] = sum[j] / ns;
      if (samples > 1) {
        const double var = std::max(
            0.0, (sumsq[j] - ns * out.value[i][j] * out.value[i][j]) / (ns - 1.0));
        out.stderr_[i][j] = std::sqrt(var / ns);
      }
    }
  });
  return out;
}

std::uint64_t hoeffding_samples(double range_b, double eps, double delta) {
  if (!(range_b > 0.0) || !(eps > 0.0) || !(delta > 0.0 && delta < 1.0)) {
    throw std::invalid_argument(
        "hoeffding_samples needs B > 0, eps > 0, 0 < delta < 1");
  }
  const double s = range_b * range_b * std::log(2.0 / delta) / (2.0 * eps * eps);
  return static_cast<std::uint64_t>(std::ceil(s));
}

CheckReport dr_certificate(const Objective& f, const ProductCategorical& rho,
                           int trials, std::uint64_t seed, double tol,
                           bool f_is_monotone, std::uint64_t cap) {
  CheckReport report;
  report.property = "GME DR-submodularity certificate";
  const LatticeDomain& domain = f.domain();
  const int n = domain.size();

  // Cross-block mixed second differences via the exact four-point clamped
  // identity; <= 0 is what makes the extension DR-submodular.
  std::vector<std::array<int, 4>> pairs;  // (block a, level j, block b, level l)
  for (int a = 0; a < n; ++a) {
    for (int b = a + 1; b < n; ++b) {
      for (int j = 1; j < domain.levels(a); ++j) {
        for (int l = 1; l < domain.levels(b); ++l) {
          pairs.push_back({a, j, b, l});
        }
      }
    }
  }
  std::vector<std::size_t> selected;
  if (static_cast<int>(pairs.size()) <= trials) {
    selected.resize(pairs.size());
    for (std::size_t p = 0; p < pairs.size(); ++p) selected[p] = p;
  } else {
    for (int t = 0; t < trials; ++t) {
      selected.push_back(keyed_mix(seed, t, 0) % pairs.size());
    }
  }
  for (std::size_t p : selected) {
    const auto [a, j, b, l] = pairs[p];
    const double f11 = gme_exact(f, rho.clamp_block(a, j).clamp_block(b, l), cap);
    const double f00 = gme_exact(f, rho.clamp_block(a, 0).clamp_block(b, 0), cap);
    const double f10 = gme_exact(f, rho.clamp_block(a, j).clamp_block(b, 0), cap);
    const double f01 = gme_exact(f, rho.clamp_block(a, 0).clamp_block(b, l), cap);
    const double mixed = f11 + f00 - f10 - f01;
    if (mixed > tol) {
      report.pass = false;
      report.witness_x = {a, j};
      report.witness_y = {b, l};
      report.deficit = mixed;
      return report;
    }
  }

  // Same-block second derivatives vanish: the extension is affine in each
  // block taken as a whole, so the value at a block midpoint must match the
  // average of the endpoint values.
  const double at_rho_value = gme_exact(f, rho, cap);
  for (int i = 0; i < n; ++i) {
    const std::vector<double>& here = rho.block(i);
    std::vector<double> there(domain.levels(i) - 1,
                              0.5 / static_cast<double>(domain.levels(i)));
    std::vector<double> mid(here.size());
    for (std::size_t j = 0; j < here.size(); ++j) {
      mid[j] = 0.5 * (here[j] + there[j]);
    }
    const double f_there = gme_exact(f, rho.with_block(i, std::move(there)), cap);
    const double f_mid = gme_exact(f, rho.with_block(i, std::move(mid)), cap);
    const double curvature = std::abs(f_mid - 0.5 * (at_rho_value + f_there));
    if (curvature > tol) {
      report.pass = false;
      report.witness_x = {i};
      report.witness_y = {i};
      report.deficit = curvature;
      return report;
    }
  }

  if (f_is_monotone) {
    const GradientMatrix at_rho = gradient_exact(f, rho, cap);
    for (int i = 0; i < n; ++i) {
      for (std::size_t j = 0; j < at_rho[i].size(); ++j) {
        if (at_rho[i][j] < -tol) {
          report.pass = false;
          report.witness_x = {i, static_cast<int>(j) + 1};
          report.witness_y = {};
          report.deficit = -at_rho[i][j];
          return report;
        }
      }
    }
  }
  return report;
}

}  // namespace pism
