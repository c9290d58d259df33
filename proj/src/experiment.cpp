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

#include <fcntl.h>
#include <unistd.h>

#include <chrono>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>

#include <nlohmann/json.hpp>

#include "pism/harness.hpp"
#include "pism/rng.hpp"

namespace pism {

namespace {

using nlohmann::json;

constexpr const char* kVersion = "0.1.0";

// Names any failing stage in the surfaced error.
template <typename Fn>
auto run_stage(const char* stage, Fn&& fn) {
  try {
    return fn();
  } catch (const std::exception& e) {
    throw std::runtime_error(std::string("[") + stage + "] " + e.what());
  }
}

void atomic_write(const std::filesystem::path& path, const std::string& body) {
  const std::filesystem::path tmp = path.string() + ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw std::runtime_error("cannot write " + tmp.string());
    out << body;
  }
  std::filesystem::rename(tmp, path);
}

std::string read_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot open " + path.string());
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

// Single-process guard on the output directory.
class DirectoryLock {
 public:
  explicit DirectoryLock(const std::filesystem::path& dir)
      : path_(dir / ".pism.lock") {
    fd_ = ::open(path_.c_str(), O_CREAT | O_EXCL | O_WRONLY, 0644);
    if (fd_ < 0) {
      throw std::runtime_error("output directory is locked by another run: " +
                               path_.string());
    }
  }
  ~DirectoryLock() {
    if (fd_ >= 0) {
      ::close(fd_);
      std::error_code ec;
      std::filesystem::remove(path_, ec);
    }
  }
  DirectoryLock(const DirectoryLock&) = delete;
  DirectoryLock& operator=(const DirectoryLock&) = delete;

 private:
  std::filesystem::path path_;
  int fd_ = -1;
};

json objective_to_json(const ObjectiveSpec& spec) {
  json j;
  j["type"] = spec.type;
  j["k"] = spec.k;
  j["seed"] = spec.seed;
  if (spec.type == "revenue") {
    j["q"] = spec.q;
    if (!spec.dataset.empty()) {
      j["dataset"] = spec.dataset;
    } else {
      j["nodes"] = spec.synthetic_nodes;
      j["edges"] = spec.synthetic_edges;
    }
  } else if (spec.type == "facility") {
    j["n"] = spec.n;
    j["m"] = spec.m == 0 ? spec.n : spec.m;
  }
  return j;
}

ObjectiveSpec objective_from_json(const json& j) {
  ObjectiveSpec spec;
  spec.type = j.at("type").get<std::string>();
  if (spec.type != "revenue" && spec.type != "facility") {
    throw std::invalid_argument("unknown objective type: " + spec.type);
  }
  spec.k = j.at("k").get<int>();
  spec.seed = j.value("seed", 0ULL);
  if (spec.type == "revenue") {
    spec.q = j.at("q").get<double>();
    if (!(spec.q > 0.0 && spec.q < 1.0)) {
      throw std::invalid_argument("q must lie in (0, 1)");
    }
    spec.dataset = j.value("dataset", std::string());
    spec.synthetic_nodes = j.value("nodes", 0);
    spec.synthetic_edges = j.value("edges", 0);
    if (spec.dataset.empty() && spec.synthetic_nodes == 0) {
      throw std::invalid_argument(
          "revenue objective needs a dataset path or nodes/edges counts");
    }
  } else {
    spec.n = j.at("n").get<int>();
    spec.m = j.value("m", 0);
  }
  return spec;
}

ElboConfig make_elbo_config(const ExperimentConfig& config, int run_index,
                            int iterations) {
  ElboConfig c;
  c.mode = config.gradient_mode;
  c.samples = config.gradient_samples;
  c.eval_samples = config.eval_samples;
  c.seed = derive_seed(config.seed, static_cast<std::uint64_t>(run_index));
  c.iterations = iterations;
  c.threads = config.threads;
  return c;
}

}  // namespace

std::string AlgorithmSpec::tag() const {
  if (init.empty() || init == "uniform" || init == "zero" || init == "random") {
    return name;
  }
  return name + "_init-" + init;
}

ExperimentConfig ExperimentConfig::from_json_text(const std::string& text) {
  json j = json::parse(text);
  ExperimentConfig config;
  config.raw_text = text;
  config.objective = objective_from_json(j.at("objective"));
  for (const auto& a : j.at("algorithms")) {
    AlgorithmSpec alg;
    alg.name = a.at("name").get<std::string>();
    if (alg.name != "block-ca" && alg.name != "shrunken-fw" &&
        alg.name != "two-phase-fw") {
      throw std::invalid_argument("unknown algorithm: " + alg.name);
    }
    alg.init = a.value("init", std::string());
    alg.epochs = a.value("epochs", 20);
    if (alg.epochs < 1) throw std::invalid_argument("epochs must be >= 1");
    config.algorithms.push_back(std::move(alg));
  }
  if (config.algorithms.empty()) {
    throw std::invalid_argument("config lists no algorithms");
  }
  if (j.contains("gradient")) {
    const auto& g = j.at("gradient");
    const std::string mode = g.value("mode", "mc");
    if (mode == "exact") {
      config.gradient_mode = GradientMode::kExact;
    } else if (mode == "mc") {
      config.gradient_mode = GradientMode::kMonteCarlo;
      config.gradient_samples = g.value("samples", 1000ULL);
    } else {
      throw std::invalid_argument("gradient mode must be exact or mc");
    }
  }
  config.eval_samples = j.value("eval_samples", 10000ULL);
  config.seed = j.value("seed", 0ULL);
  config.threads = j.value("threads", 1);
  config.output_dir = j.value("output", std::string("pism-out"));
  return config;
}

ExperimentConfig ExperimentConfig::load(const std::filesystem::path& path) {
  return from_json_text(read_file(path));
}

std::string ExperimentConfig::to_json_text() const {
  json j;
  j["objective"] = objective_to_json(objective);
  j["algorithms"] = json::array();
  for (const auto& alg : algorithms) {
    json a;
    a["name"] = alg.name;
    if (!alg.init.empty()) a["init"] = alg.init;
    a["epochs"] = alg.epochs;
    j["algorithms"].push_back(a);
  }
  j["gradient"]["mode"] =
      gradient_mode == GradientMode::kExact ? "exact" : "mc";
  if (gradient_mode == GradientMode::kMonteCarlo) {
    j["gradient"]["samples"] = gradient_samples;
  }
  j["eval_samples"] = eval_samples;
  j["seed"] = seed;
  j["threads"] = threads;
  j["output"] = output_dir;
  return j.dump(2) + "\n";
}

Objective build_objective(const ObjectiveSpec& spec) {
  return run_stage("objective", [&] {
    if (spec.type == "revenue") {
      WeightedGraph graph =
          spec.dataset.empty()
              ? synthetic_graph(spec.synthetic_nodes, spec.synthetic_edges,
                                spec.seed)
              : load_edge_list(spec.dataset);
      return revenue_objective(std::move(graph), spec.q, spec.k);
    }
    const int m = spec.m == 0 ? spec.n : spec.m;
    return facility_location_objective(
        synthetic_facility_weights(spec.n, m, spec.k, spec.seed));
  });
}

std::string objective_manifest_hash(const ObjectiveSpec& spec) {
  const std::string canonical = objective_to_json(spec).dump();
  // FNV-1a 64.
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char c : canonical) {
    h ^= c;
    h *= 0x100000001b3ULL;
  }
  char buf[20];
  std::snprintf(buf, sizeof(buf), "%016llx",
                static_cast<unsigned long long>(h));
  return buf;
}

ExperimentResult run_experiment(const ExperimentConfig& config) {
  namespace fs = std::filesystem;
  const fs::path out_dir = config.output_dir;
  fs::create_directories(out_dir);
  DirectoryLock lock(out_dir);

  const Objective objective = build_objective(config.objective);
  const int n = objective.domain().size();

  ExperimentResult result;
  result.bundle_dir = out_dir;
  json manifest;
  manifest["version"] = kVersion;
  manifest["config"] = config.raw_text.empty() ? config.to_json_text()
                                               : config.raw_text;
  manifest["objective_hash"] = objective_manifest_hash(config.objective);
  manifest["seed"] = config.seed;
  manifest["runs"] = json::array();

  std::vector<std::pair<std::string, ProductCategorical>> finals;
  for (int run_index = 0; run_index < static_cast<int>(config.algorithms.size());
       ++run_index) {
    const AlgorithmSpec& alg = config.algorithms[run_index];
    const std::string tag = alg.tag();
    const auto t0 = std::chrono::steady_clock::now();

    RunResult run = run_stage(tag.c_str(), [&]() -> RunResult {
      if (alg.name == "shrunken-fw") {
        return shrunken_fw(objective,
                           make_elbo_config(config, run_index, alg.epochs));
      }
      if (alg.name == "two-phase-fw") {
        // Phase one plus phase two together spend the epoch budget.
        const int iters = std::max(1, alg.epochs / 2);
        return two_phase_fw(objective,
                            make_elbo_config(config, run_index, iters),
                            ProductCategorical::zero(objective.domain()));
      }
      // block-ca: one epoch is one full sweep of n block gradients.
      ProductCategorical rho0 = ProductCategorical::uniform(objective.domain());
      if (alg.init == "zero") {
        rho0 = ProductCategorical::zero(objective.domain());
      } else if (alg.init == "random") {
        rho0 = ProductCategorical::random(objective.domain(),
                                          derive_seed(config.seed, 0x1234));
      } else if (!alg.init.empty()) {
        bool found = false;
        for (const auto& [prev_tag, prev_final] : finals) {
          if (prev_tag == alg.init) {
            rho0 = prev_final;
            found = true;
            break;
          }
        }
        if (!found) {
          throw std::invalid_argument("init refers to no earlier run: " +
                                      alg.init);
        }
      }
      return block_ca(objective, rho0,
                      make_elbo_config(config, run_index, alg.epochs * n));
    });

    const double wall =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - t0)
            .count();
    for (auto& record : run.trajectory) record.algorithm = tag;

    // Data CSVs are byte-deterministic; wall clock lives in the manifest.
    std::ostringstream trajectory_csv;
    write_trajectory_csv(trajectory_csv, run.trajectory,
                         /*include_timing=*/false);
    atomic_write(out_dir / (tag + "_trajectory.csv"), trajectory_csv.str());
    atomic_write(out_dir / (tag + "_marginals.csv"),
                 marginals_to_csv(run.final_iterate));

    RunSummary summary;
    summary.tag = tag;
    summary.final_elbo = run.trajectory.back().elbo;
    summary.epochs = run.trajectory.back().epochs;
    summary.wall_seconds = wall;
    result.runs.push_back(summary);
    finals.emplace_back(tag, run.final_iterate);

    json jr;
    jr["tag"] = tag;
    jr["algorithm"] = alg.name;
    jr["init"] = alg.init;
    jr["epochs"] = summary.epochs;
    jr["final_elbo"] = summary.final_elbo;
    jr["wall_seconds"] = wall;
    jr["seed"] = derive_seed(config.seed, run_index);
    manifest["runs"].push_back(jr);
  }

  atomic_write(out_dir / "manifest.json", manifest.dump(2) + "\n");
  return result;
}

std::vector<CompareRow> compare_runs(
    const std::vector<std::filesystem::path>& bundles) {
  if (bundles.empty()) throw std::invalid_argument("no bundles given");
  std::vector<CompareRow> rows;
  std::string hash;
  for (const auto& dir : bundles) {
    const json manifest = json::parse(read_file(dir / "manifest.json"));
    const std::string this_hash = manifest.at("objective_hash");
    if (hash.empty()) {
      hash = this_hash;
    } else if (hash != this_hash) {
      throw std::invalid_argument(
          "bundles were built from different objectives: " + dir.string());
    }
    for (const auto& jr : manifest.at("runs")) {
      CompareRow row;
      row.tag = jr.at("tag").get<std::string>();
      row.wall_seconds = jr.at("wall_seconds").get<double>();

      // Re-read the trajectory for the final value and convergence epoch.
      std::ifstream in(dir / (row.tag + "_trajectory.csv"));
      if (!in) {
        throw std::runtime_error("bundle is missing trajectory for " + row.tag);
      }
      std::string line;
      std::getline(in, line);  // header
      std::vector<std::pair<double, double>> points;  // (epoch, elbo)
      while (std::getline(in, line)) {
        double epoch = 0.0, elbo = 0.0;
        if (std::sscanf(line.c_str(), "%lf,%lf", &epoch, &elbo) == 2) {
          points.emplace_back(epoch, elbo);
        }
      }
      if (points.empty()) {
        throw std::runtime_error("empty trajectory for " + row.tag);
      }
      row.final_elbo = points.back().second;
      const double band = 0.01 * std::max(std::abs(row.final_elbo), 1e-12);
      row.epochs_to_1pct = points.back().first;
      for (const auto& [epoch, elbo] : points) {
        if (std::abs(elbo - row.final_elbo) <= band) {
          row.epochs_to_1pct = epoch;
          break;
        }
      }
      rows.push_back(row);
    }
  }
  return rows;
}

std::string format_compare_table(const std::vector<CompareRow>& rows) {
  std::ostringstream out;
  out << "run,final_elbo,epochs_to_1pct,wall_seconds\n";
  char buf[160];
  for (const auto& row : rows) {
    std::snprintf(buf, sizeof(buf), "%s,%.17g,%.17g,%.3f", row.tag.c_str(),
                  row.final_elbo, row.epochs_to_1pct, row.wall_seconds);
    out << buf << "\n";
  }
  return out.str();
}

}  // namespace pism
