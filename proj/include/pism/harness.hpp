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

#ifndef PISM_HARNESS_HPP
#define PISM_HARNESS_HPP

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "pism/inference.hpp"
#include "pism/objectives.hpp"

namespace pism {

struct EdgeListOptions {
  bool symmetrize = true;
  bool collapse_multi_edges = true;  // sum weights of repeated edges
};

// Parses whitespace-separated `u v [weight]` lines; `%` and `#` lines are
// comments. Node ids may be arbitrary non-negative integers and are
// remapped to dense 0-based indices in order of first appearance.
// Self-loops are dropped (counted in `warnings`). Malformed lines throw
// with the 1-based line number.
WeightedGraph load_edge_list(const std::filesystem::path& path,
                             const EdgeListOptions& options = {},
                             std::vector<std::string>* warnings = nullptr);
// Writes one `u v weight` line per undirected edge (u < v), suitable for
// reloading with load_edge_list.
void save_edge_list(const std::filesystem::path& path,
                    const WeightedGraph& graph);

// Seeded random undirected graph with exactly `edges` distinct edges and
// uniform (0,1] weights, for presets that ship without a dataset file.
WeightedGraph synthetic_graph(int n, int edges, std::uint64_t seed);

struct ObjectiveSpec {
  std::string type;  // "revenue" | "facility"
  // revenue
  std::string dataset;  // edge-list path; empty means synthetic
  double q = 0.5;
  int synthetic_nodes = 0;
  int synthetic_edges = 0;
  // facility
  int n = 0;
  int m = 0;  // 0 means m = n
  // shared
  int k = 2;
  std::uint64_t seed = 0;
};

struct AlgorithmSpec {
  std::string name;  // "block-ca" | "shrunken-fw" | "two-phase-fw"
  std::string init;  // empty, or the tag of an earlier algorithm entry
  int epochs = 20;
  // Filesystem-safe run tag, e.g. "block-ca_init-shrunken-fw".
  std::string tag() const;
};

struct ExperimentConfig {
  ObjectiveSpec objective;
  std::vector<AlgorithmSpec> algorithms;
  GradientMode gradient_mode = GradientMode::kMonteCarlo;
  std::uint64_t gradient_samples = 1000;
  std::uint64_t eval_samples = 10000;
  std::uint64_t seed = 0;
  int threads = 1;
  std::string output_dir;
  std::string raw_text;  // config file contents, verbatim

  static ExperimentConfig from_json_text(const std::string& text);
  static ExperimentConfig load(const std::filesystem::path& path);
  std::string to_json_text() const;
};

Objective build_objective(const ObjectiveSpec& spec);
// Stable hash of the canonical objective spec, used to refuse comparing
// bundles built from different objectives.
std::string objective_manifest_hash(const ObjectiveSpec& spec);

struct RunSummary {
  std::string tag;
  double final_elbo = 0.0;
  double epochs = 0.0;
  double wall_seconds = 0.0;
};

struct ExperimentResult {
  std::filesystem::path bundle_dir;
  std::vector<RunSummary> runs;
};

// Runs every configured algorithm (honoring init chaining), writing per-run
// trajectory and marginal CSVs plus a manifest into the output directory.
// Data CSVs carry no wall-clock content; timing lives in the manifest.
// Takes a lockfile in the output directory for the duration of the run.
ExperimentResult run_experiment(const ExperimentConfig& config);

struct CompareRow {
  std::string tag;
  double final_elbo = 0.0;
  double epochs_to_1pct = 0.0;  // epochs until within 1% of the final ELBO
  double wall_seconds = 0.0;
};

// Summarizes one or more result bundles; refuses bundles whose objective
// manifest hashes differ.
std::vector<CompareRow> compare_runs(
    const std::vector<std::filesystem::path>& bundles);
std::string format_compare_table(const std::vector<CompareRow>& rows);

}  // namespace pism

#endif  // PISM_HARNESS_HPP
