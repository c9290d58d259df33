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

#include "pism/lattice.hpp"

#include <algorithm>
#include <limits>
#include <sstream>

#include "pism/objectives.hpp"

namespace pism {

namespace {

void require_same_size(const IntegerPoint& x, const IntegerPoint& y) {
  if (x.size() != y.size()) {
    throw std::invalid_argument("integer points live in different domains");
  }
}

void require_enumerable(const LatticeDomain& domain, std::uint64_t cap,
                        const char* what) {
  const auto card = domain.cardinality();
  if (!card || *card > cap) {
    std::ostringstream msg;
    msg << what << ": domain too large to enumerate (cap " << cap << ")";
    throw EnumerationCapError(msg.str());
  }
}

}  // namespace

LatticeDomain::LatticeDomain(std::vector<int> levels)
    : levels_(std::move(levels)) {
  if (levels_.empty()) {
    throw std::invalid_argument("lattice domain needs at least one dimension");
  }
  for (int k : levels_) {
    if (k < 2) throw std::invalid_argument("every dimension needs k >= 2");
  }
}

LatticeDomain LatticeDomain::uniform(int n, int k) {
  if (n < 1) throw std::invalid_argument("n must be >= 1");
  return LatticeDomain(std::vector<int>(n, k));
}

std::optional<std::uint64_t> LatticeDomain::cardinality() const {
  std::uint64_t card = 1;
  for (int k : levels_) {
    if (card > std::numeric_limits<std::uint64_t>::max() /
                   static_cast<std::uint64_t>(k)) {
      return std::nullopt;
    }
    card *= static_cast<std::uint64_t>(k);
  }
  return card;
}

bool LatticeDomain::contains(const IntegerPoint& x) const {
  if (static_cast<int>(x.size()) != size()) return false;
  for (int i = 0; i < size(); ++i) {
    if (x[i] < 0 || x[i] >= levels_[i]) return false;
  }
  return true;
}

IntegerPoint LatticeDomain::top() const {
  IntegerPoint x(levels_.size());
  for (std::size_t i = 0; i < levels_.size(); ++i) x[i] = levels_[i] - 1;
  return x;
}

bool LatticeDomain::next_point(IntegerPoint& x) const {
  for (int i = size() - 1; i >= 0; --i) {
    if (x[i] + 1 < levels_[i]) {
      ++x[i];
      std::fill(x.begin() + i + 1, x.end(), 0);
      return true;
    }
  }
  return false;
}

void LatticeDomain::for_each_point(
    const std::function<void(const IntegerPoint&)>& fn,
    std::uint64_t cap) const {
  require_enumerable(*this, cap, "for_each_point");
  IntegerPoint x = bottom();
  do {
    fn(x);
  } while (next_point(x));
}

IntegerPoint join(const IntegerPoint& x, const IntegerPoint& y) {
  require_same_size(x, y);
  IntegerPoint out(x.size());
  for (std::size_t i = 0; i < x.size(); ++i) out[i] = std::max(x[i], y[i]);
  return out;
}

IntegerPoint meet(const IntegerPoint& x, const IntegerPoint& y) {
  require_same_size(x, y);
  IntegerPoint out(x.size());
  for (std::size_t i = 0; i < x.size(); ++i) out[i] = std::min(x[i], y[i]);
  return out;
}

IntegerPoint multiset_difference(const IntegerPoint& x, const IntegerPoint& y) {
  require_same_size(x, y);
  IntegerPoint out(x.size());
  for (std::size_t i = 0; i < x.size(); ++i) out[i] = std::max(x[i] - y[i], 0);
  return out;
}

bool leq(const IntegerPoint& x, const IntegerPoint& y) {
  require_same_size(x, y);
  for (std::size_t i = 0; i < x.size(); ++i) {
    if (x[i] > y[i]) return false;
  }
  return true;
}

std::string CheckReport::describe() const {
  std::ostringstream out;
  out << property << ": " << (pass ? "pass" : "FAIL");
  if (!pass) {
    auto print = [&out](const IntegerPoint& p) {
      out << "(";
      for (std::size_t i = 0; i < p.size(); ++i) {
        if (i) out << ",";
        out << p[i];
      }
      out << ")";
    };
    out << " witness x=";
    print(witness_x);
    out << " y=";
    print(witness_y);
    if (witness_coord >= 0) out << " i=" << witness_coord;
    out << " deficit=" << deficit;
  }
  return out.str();
}

CheckReport check_lattice_submodular(const Objective& f, double tol,
                                     std::uint64_t cap) {
  const LatticeDomain& domain = f.domain();
  require_enumerable(domain, cap, "check_lattice_submodular");
  CheckReport report;
  report.property = "lattice submodularity";
  // Outer point in lexicographic order; first violating (x, y) pair wins.
  IntegerPoint x = domain.bottom();
  do {
    const double fx = f(x);
    IntegerPoint y = domain.bottom();
    do {
      const double lhs = fx + f(y);
      const double rhs = f(join(x, y)) + f(meet(x, y));
      if (lhs - rhs < -tol) {
        report.pass = false;
        report.witness_x = x;
        report.witness_y = y;
        report.deficit = rhs - lhs;
        return report;
      }
    } while (domain.next_point(y));
  } while (domain.next_point(x));
  return report;
}

CheckReport check_dr_submodular(const Objective& f, double tol,
                                std::uint64_t cap) {
  const LatticeDomain& domain = f.domain();
  require_enumerable(domain, cap, "check_dr_submodular");
  CheckReport report;
  report.property = "diminishing returns";
  const int n = domain.size();
  IntegerPoint x = domain.bottom();
  do {
    const double fx = f(x);
    IntegerPoint y = domain.bottom();
    do {
      if (!leq(x, y)) continue;
      const double fy = f(y);
      for (int i = 0; i < n; ++i) {
        if (y[i] + 1 >= domain.levels(i)) continue;  // y + e_i leaves domain
        IntegerPoint xp = x;
        ++xp[i];
        IntegerPoint yp = y;
        ++yp[i];
        const double gain_low = f(xp) - fx;
        const double gain_high = f(yp) - fy;
        if (gain_low - gain_high < -tol) {
          report.pass = false;
          report.witness_x = x;
          report.witness_y = y;
          report.witness_coord = i;
          report.deficit = gain_high - gain_low;
          return report;
        }
      }
    } while (domain.next_point(y));
  } while (domain.next_point(x));
  return report;
}

CheckReport check_monotone(const Objective& f, double tol, std::uint64_t cap) {
  const LatticeDomain& domain = f.domain();
  require_enumerable(domain, cap, "check_monotone");
  CheckReport report;
  report.property = "monotonicity";
  const int n = domain.size();
  // f(x) <= f(x + e_i) everywhere implies f(x) <= f(y) for all x <= y.
  IntegerPoint x = domain.bottom();
  do {
    const double fx = f(x);
    for (int i = 0; i < n; ++i) {
      if (x[i] + 1 >= domain.levels(i)) continue;
      IntegerPoint xp = x;
      ++xp[i];
      if (f(xp) - fx < -tol) {
        report.pass = false;
        report.witness_x = x;
        report.witness_y = xp;
        report.witness_coord = i;
        report.deficit = fx - f(xp);
        return report;
      }
    }
  } while (domain.next_point(x));
  return report;
}

}  // namespace pism
