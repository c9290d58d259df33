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

// Command-line front end; talks to the library exclusively through the C
// API in pism/pism.h.

#include <cstdint>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "pism/pism.h"

namespace {

int report_failure(pism_status status) {
  std::cerr << "error (" << static_cast<int>(status)
            << "): " << pism_last_error() << "\n";
  return 1;
}

std::string extract_objective_spec(const std::string& config_path) {
  // The `check` and `oracle` verbs accept a full experiment config and use
  // only its objective section; pull that out without re-validating the
  // rest of the file here.
  std::ifstream in(config_path);
  if (!in) throw std::runtime_error("cannot open " + config_path);
  std::ostringstream buf;
  buf << in.rdbuf();
  const std::string text = buf.str();
  const auto key = text.find("\"objective\"");
  if (key == std::string::npos) {
    throw std::runtime_error("config has no objective section");
  }
  const auto open = text.find('{', key);
  std::size_t depth = 0;
  for (std::size_t i = open; i < text.size(); ++i) {
    if (text[i] == '{') ++depth;
    if (text[i] == '}' && --depth == 0) {
      return text.substr(open, i - open + 1);
    }
  }
  throw std::runtime_error("unbalanced objective section");
}

struct ObjectiveGuard {
  pism_objective* handle = nullptr;
  ~ObjectiveGuard() { pism_objective_free(handle); }
};

struct MarginalsGuard {
  pism_marginals* handle = nullptr;
  ~MarginalsGuard() { pism_marginals_free(handle); }
};

int cmd_run(const std::string& config) {
  const pism_status status = pism_run_experiment(config.c_str());
  if (status != PISM_OK) return report_failure(status);
  std::cout << "experiment complete\n";
  return 0;
}

int cmd_check(const std::string& config, int trials, std::uint64_t seed) {
  ObjectiveGuard objective;
  const std::string spec = extract_objective_spec(config);
  pism_status status = pism_objective_from_spec(spec.c_str(), &objective.handle);
  if (status != PISM_OK) return report_failure(status);

  char witness[512];
  int pass = 0;
  int failures = 0;

  status = pism_check_lattice_submodular(objective.handle, &pass, witness,
                                         sizeof(witness));
  if (status != PISM_OK) return report_failure(status);
  std::cout << "lattice-submodular: " << (pass ? "pass" : "FAIL") << "\n";
  if (!pass) {
    std::cout << "  " << witness << "\n";
    ++failures;
  }

  status = pism_check_dr_submodular(objective.handle, &pass, witness,
                                    sizeof(witness));
  if (status != PISM_OK) return report_failure(status);
  // DR failure of f itself is informative, not an error: the extension
  // below can still certify DR.
  std::cout << "dr-submodular (f): " << (pass ? "pass" : "fail") << "\n";
  if (!pass) std::cout << "  " << witness << "\n";

  MarginalsGuard marginals;
  status = pism_marginals_uniform(objective.handle, &marginals.handle);
  if (status != PISM_OK) return report_failure(status);
  status = pism_dr_certificate(objective.handle, marginals.handle, trials,
                               seed, /*monotone=*/0, &pass, witness,
                               sizeof(witness));
  if (status != PISM_OK) return report_failure(status);
  std::cout << "dr-certificate (extension): " << (pass ? "pass" : "FAIL")
            << "\n";
  if (!pass) {
    std::cout << "  " << witness << "\n";
    ++failures;
  }
  return failures == 0 ? 0 : 1;
}

int cmd_compare(const std::vector<std::string>& bundles) {
  std::vector<const char*> dirs;
  dirs.reserve(bundles.size());
  for (const auto& b : bundles) dirs.push_back(b.c_str());
  char* table = nullptr;
  const pism_status status =
      pism_compare_runs(dirs.data(), static_cast<int>(dirs.size()), &table);
  if (status != PISM_OK) return report_failure(status);
  std::cout << table;
  pism_string_free(table);
  return 0;
}

int cmd_oracle(const std::string& config, const std::string& marginals_csv,
               std::uint64_t samples, std::uint64_t seed) {
  ObjectiveGuard objective;
  const std::string spec = extract_objective_spec(config);
  pism_status status = pism_objective_from_spec(spec.c_str(), &objective.handle);
  if (status != PISM_OK) return report_failure(status);

  MarginalsGuard marginals;
  status = marginals_csv.empty()
               ? pism_marginals_uniform(objective.handle, &marginals.handle)
               : pism_marginals_read_csv(marginals_csv.c_str(),
                                         &marginals.handle);
  if (status != PISM_OK) return report_failure(status);

  double value = 0.0;
  if (pism_gme_exact(objective.handle, marginals.handle, &value) == PISM_OK) {
    std::printf("gme_exact %.17g\n", value);
    if (pism_elbo_exact(objective.handle, marginals.handle, &value) != PISM_OK) {
      return report_failure(PISM_ERR_INTERNAL);
    }
    std::printf("elbo_exact %.17g\n", value);
    if (pism_log_partition(objective.handle, &value) != PISM_OK) {
      return report_failure(PISM_ERR_INTERNAL);
    }
    std::printf("log_partition %.17g\n", value);
  } else {
    std::cout << "domain too large for exact evaluation, estimating\n";
  }
  double err = 0.0;
  status = pism_gme_estimate(objective.handle, marginals.handle, samples, seed,
                             &value, &err);
  if (status != PISM_OK) return report_failure(status);
  std::printf("gme_estimate %.17g stderr %.17g samples %llu\n", value, err,
              static_cast<unsigned long long>(samples));
  return 0;
}

int cmd_lmo_test(const std::vector<double>& grad,
                 const std::vector<double>& caps, double budget) {
  std::vector<double> out(grad.size());
  if (caps.empty()) {
    const pism_status status = pism_lmo_simplex(
        grad.data(), static_cast<int>(grad.size()), out.data());
    if (status != PISM_OK) return report_failure(status);
  } else {
    if (caps.size() != grad.size()) {
      std::cerr << "error: --caps must match --grad in length\n";
      return 1;
    }
    const pism_status status =
        pism_lmo_shrunken(grad.data(), caps.data(),
                          static_cast<int>(grad.size()), budget, out.data());
    if (status != PISM_OK) return report_failure(status);
  }
  for (std::size_t j = 0; j < out.size(); ++j) {
    std::printf("%s%.17g", j ? " " : "", out[j]);
  }
  std::printf("\n");
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Variational inference for probabilistic integer submodular "
               "models"};
  app.require_subcommand(1);
  app.set_version_flag("--version", std::string(pism_version()));

  std::string config;
  auto* run = app.add_subcommand("run", "Run an experiment config");
  run->add_option("config", config, "JSON config file")->required();

  std::string check_config;
  int trials = 200;
  std::uint64_t seed = 1;
  auto* check =
      app.add_subcommand("check", "Submodularity / DR certificates for the "
                                  "objective of a config");
  check->add_option("config", check_config, "JSON config file")->required();
  check->add_option("--trials", trials, "sampled coordinate pairs");
  check->add_option("--seed", seed, "sampling seed");

  std::vector<std::string> bundles;
  auto* compare = app.add_subcommand("compare", "Summarize result bundles");
  compare->add_option("bundles", bundles, "bundle directories")->required();

  std::string oracle_config, oracle_marginals;
  std::uint64_t samples = 10000;
  auto* oracle = app.add_subcommand(
      "oracle", "Evaluate GME / ELBO / log-partition for debugging");
  oracle->add_option("config", oracle_config, "JSON config file")->required();
  oracle->add_option("--marginals", oracle_marginals,
                     "marginals CSV (default: uniform)");
  oracle->add_option("--samples", samples, "Monte Carlo samples");
  oracle->add_option("--seed", seed, "sampling seed");

  std::vector<double> grad, caps;
  double budget = 1.0;
  auto* lmo = app.add_subcommand("lmo-test", "Exercise the linear oracles");
  lmo->add_option("--grad", grad, "comma-separated gradient entries")
      ->required()
      ->delimiter(',');
  lmo->add_option("--caps", caps, "per-coordinate caps (shrunken oracle)")
      ->delimiter(',');
  lmo->add_option("--budget", budget, "mass budget (shrunken oracle)");

  CLI11_PARSE(app, argc, argv);

  try {
    if (run->parsed()) return cmd_run(config);
    if (check->parsed()) return cmd_check(check_config, trials, seed);
    if (compare->parsed()) return cmd_compare(bundles);
    if (oracle->parsed()) return cmd_oracle(oracle_config, oracle_marginals,
                                            samples, seed);
    if (lmo->parsed()) return cmd_lmo_test(grad, caps, budget);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 0;
}
