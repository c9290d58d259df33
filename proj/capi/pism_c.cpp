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

#include "pism/pism.h"

#include <algorithm>
#include <cstdlib>
#include <cstring>
#include <filesystem>
#include <fstream>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "pism/gme.hpp"
#include "pism/harness.hpp"
#include "pism/inference.hpp"

struct pism_objective {
  pism::Objective impl;
};

struct pism_marginals {
  pism::ProductCategorical impl;
};

namespace {

thread_local std::string g_last_error;

pism_status fail(pism_status code, const std::string& message) {
  g_last_error = message;
  return code;
}

// Runs fn, translating exceptions into status codes.
template <typename Fn>
pism_status guarded(Fn&& fn) {
  try {
    return fn();
  } catch (const pism::EnumerationCapError& e) {
    return fail(PISM_ERR_TOO_LARGE, e.what());
  } catch (const std::invalid_argument& e) {
    return fail(PISM_ERR_INVALID_ARGUMENT, e.what());
  } catch (const std::exception& e) {
    return fail(PISM_ERR_INTERNAL, e.what());
  }
}

pism_status require(bool ok, const char* message) {
  return ok ? PISM_OK : fail(PISM_ERR_INVALID_ARGUMENT, message);
}

void copy_witness(const pism::CheckReport& report, char* witness,
                  size_t witness_len) {
  if (witness == nullptr || witness_len == 0) return;
  const std::string text = report.describe();
  std::strncpy(witness, text.c_str(), witness_len - 1);
  witness[witness_len - 1] = '\0';
}

}  // namespace

extern "C" {

const char* pism_version(void) { return "0.1.0"; }

const char* pism_last_error(void) { return g_last_error.c_str(); }

pism_status pism_objective_revenue_dense(int n, const double* weights,
                                         double q, int k,
                                         pism_objective** out) {
  if (auto s = require(weights && out && n >= 1, "bad arguments")) return s;
  return guarded([&] {
    pism::WeightedGraph graph(n);
    for (int i = 0; i < n; ++i) {
      for (int j = 0; j < n; ++j) {
        const double w = weights[static_cast<size_t>(i) * n + j];
        if (i == j) {
          if (w != 0.0) throw std::invalid_argument("diagonal must be zero");
          continue;
        }
        if (w != 0.0) graph.add_directed(i, j, w);
      }
    }
    *out = new pism_objective{pism::revenue_objective(std::move(graph), q, k)};
    return PISM_OK;
  });
}

pism_status pism_objective_revenue_from_file(const char* path, double q, int k,
                                             pism_objective** out) {
  if (auto s = require(path && out, "bad arguments")) return s;
  return guarded([&] {
    pism::WeightedGraph graph = pism::load_edge_list(path);
    *out = new pism_objective{pism::revenue_objective(std::move(graph), q, k)};
    return PISM_OK;
  });
}

pism_status pism_objective_facility_synthetic(int n, int m, int k,
                                              uint64_t seed,
                                              pism_objective** out) {
  if (auto s = require(out != nullptr, "bad arguments")) return s;
  return guarded([&] {
    *out = new pism_objective{pism::facility_location_objective(
        pism::synthetic_facility_weights(n, m, k, seed))};
    return PISM_OK;
  });
}

pism_status pism_objective_from_spec(const char* json_spec,
                                     pism_objective** out) {
  if (auto s = require(json_spec && out, "bad arguments")) return s;
  return guarded([&] {
    // Reuse the experiment-config parser with a minimal wrapper document.
    nlohmann::json doc;
    doc["objective"] = nlohmann::json::parse(json_spec);
    doc["algorithms"] = {{{"name", "block-ca"}, {"epochs", 1}}};
    const auto config =
        pism::ExperimentConfig::from_json_text(doc.dump());
    *out = new pism_objective{pism::build_objective(config.objective)};
    return PISM_OK;
  });
}

void pism_objective_free(pism_objective* objective) { delete objective; }

pism_status pism_objective_dimensions(const pism_objective* objective, int* n,
                                      int* k) {
  if (auto s = require(objective && n && k, "bad arguments")) return s;
  *n = objective->impl.domain().size();
  *k = objective->impl.domain().levels(0);
  return PISM_OK;
}

pism_status pism_objective_eval(const pism_objective* objective,
                                const int* coords, int n, double* value) {
  if (auto s = require(objective && coords && value, "bad arguments")) return s;
  return guarded([&] {
    pism::IntegerPoint x(coords, coords + n);
    if (!objective->impl.domain().contains(x)) {
      throw std::invalid_argument("point outside the objective domain");
    }
    *value = objective->impl(x);
    return PISM_OK;
  });
}

pism_status pism_objective_value_range(const pism_objective* objective,
                                       double* lo, double* hi) {
  if (auto s = require(objective && lo && hi, "bad arguments")) return s;
  *lo = objective->impl.lower_bound();
  *hi = objective->impl.upper_bound();
  return PISM_OK;
}

pism_status pism_check_lattice_submodular(const pism_objective* objective,
                                          int* pass, char* witness,
                                          size_t witness_len) {
  if (auto s = require(objective && pass, "bad arguments")) return s;
  return guarded([&] {
    const auto report = pism::check_lattice_submodular(objective->impl);
    *pass = report.pass ? 1 : 0;
    copy_witness(report, witness, witness_len);
    return PISM_OK;
  });
}

pism_status pism_check_dr_submodular(const pism_objective* objective,
                                     int* pass, char* witness,
                                     size_t witness_len) {
  if (auto s = require(objective && pass, "bad arguments")) return s;
  return guarded([&] {
    const auto report = pism::check_dr_submodular(objective->impl);
    *pass = report.pass ? 1 : 0;
    copy_witness(report, witness, witness_len);
    return PISM_OK;
  });
}

pism_status pism_marginals_uniform(const pism_objective* objective,
                                   pism_marginals** out) {
  if (auto s = require(objective && out, "bad arguments")) return s;
  return guarded([&] {
    *out = new pism_marginals{
        pism::ProductCategorical::uniform(objective->impl.domain())};
    return PISM_OK;
  });
}

pism_status pism_marginals_read_csv(const char* path, pism_marginals** out) {
  if (auto s = require(path && out, "bad arguments")) return s;
  return guarded([&] {
    std::ifstream in(path);
    if (!in) {
      g_last_error = std::string("cannot open ") + path;
      return PISM_ERR_IO;
    }
    *out = new pism_marginals{pism::read_marginals_csv(in)};
    return PISM_OK;
  });
}

pism_status pism_marginals_write_csv(const pism_marginals* marginals,
                                     const char* path) {
  if (auto s = require(marginals && path, "bad arguments")) return s;
  return guarded([&] {
    std::ofstream out(path);
    if (!out) {
      g_last_error = std::string("cannot write ") + path;
      return PISM_ERR_IO;
    }
    pism::write_marginals_csv(out, marginals->impl);
    return PISM_OK;
  });
}

pism_status pism_marginals_set_block(pism_marginals* marginals, int i,
                                     const double* block, int len) {
  if (auto s = require(marginals && block, "bad arguments")) return s;
  return guarded([&] {
    marginals->impl = marginals->impl.with_block(
        i, std::vector<double>(block, block + len));
    return PISM_OK;
  });
}

pism_status pism_marginals_get_prob(const pism_marginals* marginals, int i,
                                    int level, double* prob) {
  if (auto s = require(marginals && prob, "bad arguments")) return s;
  return guarded([&] {
    if (i < 0 || i >= marginals->impl.blocks() || level < 0 ||
        level >= marginals->impl.domain().levels(i)) {
      throw std::invalid_argument("index out of range");
    }
    *prob = marginals->impl.prob(i, level);
    return PISM_OK;
  });
}

void pism_marginals_free(pism_marginals* marginals) { delete marginals; }

pism_status pism_gme_exact(const pism_objective* objective,
                           const pism_marginals* marginals, double* value) {
  if (auto s = require(objective && marginals && value, "bad arguments")) {
    return s;
  }
  return guarded([&] {
    *value = pism::gme_exact(objective->impl, marginals->impl);
    return PISM_OK;
  });
}

pism_status pism_gme_estimate(const pism_objective* objective,
                              const pism_marginals* marginals,
                              uint64_t samples, uint64_t seed, double* value,
                              double* stderr_out) {
  if (auto s = require(objective && marginals && value, "bad arguments")) {
    return s;
  }
  return guarded([&] {
    const auto est =
        pism::gme_estimate(objective->impl, marginals->impl, samples, seed);
    *value = est.value;
    if (stderr_out) *stderr_out = est.stderr_;
    return PISM_OK;
  });
}

pism_status pism_elbo_exact(const pism_objective* objective,
                            const pism_marginals* marginals, double* value) {
  if (auto s = require(objective && marginals && value, "bad arguments")) {
    return s;
  }
  return guarded([&] {
    *value = pism::elbo_exact(objective->impl, marginals->impl);
    return PISM_OK;
  });
}

pism_status pism_log_partition(const pism_objective* objective,
                               double* value) {
  if (auto s = require(objective && value, "bad arguments")) return s;
  return guarded([&] {
    *value = pism::log_partition_bruteforce(objective->impl);
    return PISM_OK;
  });
}

pism_status pism_hoeffding_samples(double range_b, double eps, double delta,
                                   uint64_t* samples) {
  if (auto s = require(samples != nullptr, "bad arguments")) return s;
  return guarded([&] {
    *samples = pism::hoeffding_samples(range_b, eps, delta);
    return PISM_OK;
  });
}

pism_status pism_dr_certificate(const pism_objective* objective,
                                const pism_marginals* marginals, int trials,
                                uint64_t seed, int monotone, int* pass,
                                char* witness, size_t witness_len) {
  if (auto s = require(objective && marginals && pass, "bad arguments")) {
    return s;
  }
  return guarded([&] {
    const auto report =
        pism::dr_certificate(objective->impl, marginals->impl, trials, seed,
                             pism::kCheckTolerance, monotone != 0);
    *pass = report.pass ? 1 : 0;
    copy_witness(report, witness, witness_len);
    return PISM_OK;
  });
}

pism_status pism_lmo_simplex(const double* grad, int len, double* vertex) {
  if (auto s = require(grad && vertex && len >= 1, "bad arguments")) return s;
  return guarded([&] {
    const auto v = pism::lmo_simplex_block({grad, static_cast<size_t>(len)});
    std::copy(v.begin(), v.end(), vertex);
    return PISM_OK;
  });
}

pism_status pism_lmo_shrunken(const double* grad, const double* caps, int len,
                              double budget, double* point) {
  if (auto s = require(grad && caps && point && len >= 1, "bad arguments")) {
    return s;
  }
  return guarded([&] {
    const auto v =
        pism::lmo_shrunken_block({grad, static_cast<size_t>(len)},
                                 {caps, static_cast<size_t>(len)}, budget);
    std::copy(v.begin(), v.end(), point);
    return PISM_OK;
  });
}

pism_status pism_run_experiment(const char* config_path) {
  if (auto s = require(config_path != nullptr, "bad arguments")) return s;
  return guarded([&] {
    pism::run_experiment(pism::ExperimentConfig::load(config_path));
    return PISM_OK;
  });
}

pism_status pism_compare_runs(const char* const* bundle_dirs, int count,
                              char** table) {
  if (auto s = require(bundle_dirs && table && count >= 1, "bad arguments")) {
    return s;
  }
  return guarded([&] {
    std::vector<std::filesystem::path> dirs(bundle_dirs, bundle_dirs + count);
    const std::string text =
        pism::format_compare_table(pism::compare_runs(dirs));
    *table = static_cast<char*>(std::malloc(text.size() + 1));
    if (*table == nullptr) return PISM_ERR_INTERNAL;
    std::memcpy(*table, text.c_str(), text.size() + 1);
    return PISM_OK;
  });
}

void pism_string_free(char* s) { std::free(s); }

}  // extern "C"
