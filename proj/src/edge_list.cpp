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

#include <algorithm>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <map>
#include <set>
#include <sstream>
#include <tuple>

#include "pism/harness.hpp"
#include "pism/rng.hpp"

namespace pism {

WeightedGraph load_edge_list(const std::filesystem::path& path,
                             const EdgeListOptions& options,
                             std::vector<std::string>* warnings) {
  std::ifstream in(path);
  if (!in) {
    throw std::runtime_error("cannot open edge list: " + path.string());
  }
  struct Edge {
    int u, v;
    double w;
  };
  std::vector<Edge> edges;
  std::map<long long, int> id_to_index;  // dense ids in first-appearance order
  auto intern = [&](long long id) {
    auto [it, inserted] = id_to_index.emplace(id, static_cast<int>(id_to_index.size()));
    return it->second;
  };

  std::string line;
  int line_number = 0;
  int self_loops = 0;
  while (std::getline(in, line)) {
    ++line_number;
    const auto first = line.find_first_not_of(" \t\r");
    if (first == std::string::npos) continue;
    if (line[first] == '%' || line[first] == '#') continue;
    std::istringstream fields(line);
    long long u, v;
    if (!(fields >> u >> v) || u < 0 || v < 0) {
      throw std::runtime_error("malformed edge list line " +
                               std::to_string(line_number) + ": " + line);
    }
    double w = 1.0;
    if (fields >> w) {
      if (w < 0) {
        throw std::runtime_error("negative weight on line " +
                                 std::to_string(line_number));
      }
    }
    std::string rest;
    if (fields >> rest) {
      // Konect files may carry a timestamp column; anything further than
      // one extra numeric token is rejected.
      char* end = nullptr;
      std::strtod(rest.c_str(), &end);
      if (end == rest.c_str() || *end != '\0') {
        throw std::runtime_error("malformed edge list line " +
                                 std::to_string(line_number) + ": " + line);
      }
    }
    if (u == v) {
      ++self_loops;
      continue;
    }
    edges.push_back({intern(u), intern(v), w});
  }
  if (edges.empty()) {
    throw std::runtime_error("edge list " + path.string() + " has no edges");
  }
  if (self_loops > 0 && warnings) {
    warnings->push_back("dropped " + std::to_string(self_loops) +
                        " self-loop(s)");
  }
  WeightedGraph graph(static_cast<int>(id_to_index.size()));
  for (const Edge& e : edges) {
    // Multi-edges collapse by summing inside the graph accumulator.
    if (options.symmetrize) {
      graph.add_undirected(e.u, e.v, e.w);
    } else {
      graph.add_directed(e.u, e.v, e.w);
    }
  }
  (void)options.collapse_multi_edges;  // summing is the only supported policy
  return graph;
}

void save_edge_list(const std::filesystem::path& path,
                    const WeightedGraph& graph) {
  std::ofstream out(path);
  if (!out) {
    throw std::runtime_error("cannot write edge list: " + path.string());
  }
  out << "% u v weight\n";
  char buf[64];
  for (int i = 0; i < graph.size(); ++i) {
    for (const auto& [j, w] : graph.row(i)) {
      if (j < i) continue;  // symmetric storage, emit each edge once
      std::snprintf(buf, sizeof(buf), "%.17g", w);
      out << i << " " << j << " " << buf << "\n";
    }
  }
}

WeightedGraph synthetic_graph(int n, int edges, std::uint64_t seed) {
  if (n < 2) throw std::invalid_argument("synthetic graph needs n >= 2");
  const long long max_edges = static_cast<long long>(n) * (n - 1) / 2;
  if (edges < 1 || edges > max_edges) {
    throw std::invalid_argument("edge count out of range");
  }
  WeightedGraph graph(n);
  std::set<std::pair<int, int>> used;
  std::uint64_t draw = 0;
  while (static_cast<int>(used.size()) < edges) {
    const int u = static_cast<int>(keyed_mix(seed, draw, 0) % n);
    const int v = static_cast<int>(keyed_mix(seed, draw, 1) % n);
    const double w = uniform01(seed, draw, 2);
    ++draw;
    if (u == v) continue;
    const auto key = std::minmax(u, v);
    if (!used.insert(key).second) continue;
    graph.add_undirected(u, v, w + 1e-3);
  }
  return graph;
}

}  // namespace pism
