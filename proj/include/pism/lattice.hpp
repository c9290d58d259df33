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

#ifndef PISM_LATTICE_HPP
#define PISM_LATTICE_HPP

#include <cstdint>
#include <functional>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

namespace pism {

// A point on the integer lattice {0,...,k_1-1} x ... x {0,...,k_n-1},
// equivalently the multiplicity vector of a multiset.
using IntegerPoint = std::vector<int>;

// Raised when an exact (enumeration-based) path would visit more lattice
// points than the configured cap.
class EnumerationCapError : public std::runtime_error {
 public:
  explicit EnumerationCapError(const std::string& what)
      : std::runtime_error(what) {}
};

// Default cap on exact-enumeration sizes; beyond this only Monte Carlo
// paths are allowed.
inline constexpr std::uint64_t kDefaultEnumerationCap = 10'000'000;

// Bounded product of per-dimension level counts.
class LatticeDomain {
 public:
  explicit LatticeDomain(std::vector<int> levels);
  static LatticeDomain uniform(int n, int k);

  int size() const { return static_cast<int>(levels_.size()); }
  int levels(int i) const { return levels_[i]; }
  const std::vector<int>& all_levels() const { return levels_; }

  bool operator==(const LatticeDomain& other) const = default;

  // Number of lattice points, or nullopt on overflow.
  std::optional<std::uint64_t> cardinality() const;

  bool contains(const IntegerPoint& x) const;
  IntegerPoint bottom() const { return IntegerPoint(levels_.size(), 0); }
  IntegerPoint top() const;

  // Calls fn on every lattice point in lexicographic order.
  // Throws EnumerationCapError if the cardinality exceeds cap.
  void for_each_point(const std::function<void(const IntegerPoint&)>& fn,
                      std::uint64_t cap = kDefaultEnumerationCap) const;

  // Advances x to the lexicographic successor; returns false past the end.
  bool next_point(IntegerPoint& x) const;

 private:
  std::vector<int> levels_;
};

IntegerPoint join(const IntegerPoint& x, const IntegerPoint& y);
IntegerPoint meet(const IntegerPoint& x, const IntegerPoint& y);
// Clamped subtraction max(x_i - y_i, 0), the multiset difference.
IntegerPoint multiset_difference(const IntegerPoint& x, const IntegerPoint& y);

bool leq(const IntegerPoint& x, const IntegerPoint& y);

// Outcome of a brute-force property check. On failure carries the
// lexicographically first witness found by the scan.
struct CheckReport {
  bool pass = true;
  std::string property;
  IntegerPoint witness_x;
  IntegerPoint witness_y;
  int witness_coord = -1;  // -1 when the property has no coordinate
  double deficit = 0.0;    // how far the inequality was violated
  std::string describe() const;
};

inline constexpr double kCheckTolerance = 1e-9;

class Objective;  // objectives.hpp

// Exhaustive test of f(x)+f(y) >= f(x v y)+f(x ^ y) over all pairs.
CheckReport check_lattice_submodular(const Objective& f,
                                     double tol = kCheckTolerance,
                                     std::uint64_t cap = kDefaultEnumerationCap);

// Exhaustive test of the diminishing-returns inequality
// f(x+e_i)-f(x) >= f(y+e_i)-f(y) over all comparable pairs x <= y.
CheckReport check_dr_submodular(const Objective& f,
                                double tol = kCheckTolerance,
                                std::uint64_t cap = kDefaultEnumerationCap);

// Exhaustive monotonicity scan: f(x) <= f(y) whenever x <= y.
CheckReport check_monotone(const Objective& f, double tol = kCheckTolerance,
                           std::uint64_t cap = kDefaultEnumerationCap);

}  // namespace pism

#endif  // PISM_LATTICE_HPP
