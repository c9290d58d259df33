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

#ifndef PISM_GME_HPP
#define PISM_GME_HPP

#include <cstdint>

#include "pism/marginals.hpp"
#include "pism/objectives.hpp"

namespace pism {

struct EstimateWithError {
  double value = 0.0;
  double stderr_ = 0.0;
  std::uint64_t samples = 0;
};

struct GradientEstimate {
  GradientMatrix value;
  GradientMatrix stderr_;
  std::uint64_t samples = 0;
};

// Exact generalized multilinear extension F(rho) = E[f(R(rho))], the full
// k^n-term expectation. Throws EnumerationCapError past the cap.
double gme_exact(const Objective& f, const ProductCategorical& rho,
                 std::uint64_t cap = kDefaultEnumerationCap);

// Monte Carlo estimate of F(rho). Samples are accumulated in fixed-size
// chunks that are reduced in index order, so the result is bit-identical
// for any thread count.
EstimateWithError gme_estimate(const Objective& f,
                               const ProductCategorical& rho,
                               std::uint64_t samples, std::uint64_t seed,
                               int threads = 1);

// Exact gradient; entry (i,j) is the clamped difference
// F(rho with rho_i = e_j) - F(rho with rho_i = 0).
GradientMatrix gradient_exact(const Objective& f, const ProductCategorical& rho,
                              std::uint64_t cap = kDefaultEnumerationCap);

// Sampled clamped-difference gradient with common random numbers: per
// block, one draw of the other coordinates is reused for every level j and
// the zero baseline. Unbiased; k evaluations per (block, sample).
GradientEstimate gradient_estimate(const Objective& f,
                                   const ProductCategorical& rho,
                                   std::uint64_t samples, std::uint64_t seed,
                                   int threads = 1);

// Smallest S with 2 exp(-2 S eps^2 / B^2) <= delta.
std::uint64_t hoeffding_samples(double range_b, double eps, double delta);

// Numerical certificate of the DR-submodularity of F: cross-block mixed
// second differences (via the exact four-point clamped identity) must be
// <= tol, same-block ones zero, and for a monotone f all gradient entries
// >= -tol. Pairs are checked exhaustively when few, otherwise `trials`
// sampled pairs.
CheckReport dr_certificate(const Objective& f, const ProductCategorical& rho,
                           int trials, std::uint64_t seed,
                           double tol = kCheckTolerance,
                           bool f_is_monotone = false,
                           std::uint64_t cap = kDefaultEnumerationCap);

}  // namespace pism

#endif  // PISM_GME_HPP
