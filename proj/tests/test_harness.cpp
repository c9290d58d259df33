#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>

#include "pism/harness.hpp"

using namespace pism;
namespace fs = std::filesystem;

namespace {

fs::path fresh_dir(const std::string& name) {
  const fs::path dir = fs::temp_directory_path() / ("pism_test_" + name);
  fs::remove_all(dir);
  fs::create_directories(dir);
  return dir;
}

void write_file(const fs::path& path, const std::string& text) {
  std::ofstream out(path);
  out << text;
}

std::string slurp(const fs::path& path) {
  std::ifstream in(path);
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

}  // namespace

TEST_CASE("edge list parsing") {
  const fs::path dir = fresh_dir("edges");
  SUBCASE("comments, remapping, self-loops, multi-edges") {
    write_file(dir / "g.txt",
               "% comment\n"
               "# another\n"
               "10 20\n"
               "20 30 2.5\n"
               "10 10 1.0\n"
               "10 20 0.5\n"
               "\n");
    std::vector<std::string> warnings;
    const WeightedGraph g = load_edge_list(dir / "g.txt", {}, &warnings);
    CHECK(g.size() == 3);  // ids 10, 20, 30 remapped densely
    REQUIRE(warnings.size() == 1);  // the self-loop
    const auto dense = g.dense();
    CHECK(dense[0 * 3 + 1] == doctest::Approx(1.5));  // 1.0 default + 0.5
    CHECK(dense[1 * 3 + 0] == doctest::Approx(1.5));  // symmetrized
    CHECK(dense[1 * 3 + 2] == doctest::Approx(2.5));
    CHECK(dense[0 * 3 + 0] == 0.0);
  }
  SUBCASE("malformed lines report their line number") {
    write_file(dir / "bad.txt", "1 2\nnot numbers\n");
    try {
      load_edge_list(dir / "bad.txt");
      FAIL("expected a parse error");
    } catch (const std::exception& e) {
      CHECK(std::string(e.what()).find("2") != std::string::npos);
    }
  }
  SUBCASE("missing files throw") {
    CHECK_THROWS(load_edge_list(dir / "nope.txt"));
  }
  SUBCASE("save and reload round trip") {
    // Path edges keep the first-appearance id order stable on reload.
    WeightedGraph g(4);
    g.add_undirected(0, 1, 1.25);
    g.add_undirected(1, 2, 0.5);
    g.add_undirected(2, 3, 2.0);
    save_edge_list(dir / "saved.txt", g);
    const WeightedGraph back = load_edge_list(dir / "saved.txt");
    CHECK(back.dense() == g.dense());
  }
}

TEST_CASE("synthetic graphs are seeded and sized") {
  const WeightedGraph a = synthetic_graph(20, 45, 7);
  const WeightedGraph b = synthetic_graph(20, 45, 7);
  const WeightedGraph c = synthetic_graph(20, 45, 8);
  CHECK(a.dense() == b.dense());
  CHECK(a.dense() != c.dense());
  int edges = 0;
  for (int i = 0; i < 20; ++i) {
    for (const auto& [j, w] : a.row(i)) {
      CHECK(w > 0.0);
      CHECK(w < 1.01);
      if (j > i) ++edges;
    }
  }
  CHECK(edges == 45);
}

TEST_CASE("experiment config round trips through json") {
  const std::string text = R"({
    "objective": {"type": "revenue", "nodes": 8, "edges": 12, "q": 0.4,
                  "k": 3, "seed": 5},
    "algorithms": [
      {"name": "shrunken-fw", "epochs": 4},
      {"name": "block-ca", "init": "shrunken-fw", "epochs": 4}
    ],
    "gradient": {"mode": "mc", "samples": 64},
    "eval_samples": 256,
    "seed": 11,
    "threads": 2,
    "output": "unused"
  })";
  const ExperimentConfig config = ExperimentConfig::from_json_text(text);
  CHECK(config.objective.type == "revenue");
  CHECK(config.objective.synthetic_nodes == 8);
  CHECK(config.objective.q == 0.4);
  CHECK(config.objective.k == 3);
  CHECK(config.gradient_mode == GradientMode::kMonteCarlo);
  CHECK(config.gradient_samples == 64);
  CHECK(config.eval_samples == 256);
  CHECK(config.seed == 11);
  REQUIRE(config.algorithms.size() == 2);
  CHECK(config.algorithms[0].tag() == "shrunken-fw");
  CHECK(config.algorithms[1].tag() == "block-ca_init-shrunken-fw");
  const ExperimentConfig again =
      ExperimentConfig::from_json_text(config.to_json_text());
  CHECK(again.objective.q == config.objective.q);
  CHECK(again.algorithms.size() == config.algorithms.size());
  CHECK(again.eval_samples == config.eval_samples);
}

TEST_CASE("config validation") {
  CHECK_THROWS(ExperimentConfig::from_json_text("{"));
  CHECK_THROWS(ExperimentConfig::from_json_text(
      R"({"objective": {"type": "unknown", "k": 2}, "algorithms": []})"));
  CHECK_THROWS(ExperimentConfig::from_json_text(
      R"({"objective": {"type": "revenue", "nodes": 4, "edges": 2,
          "q": 1.5, "k": 2},
          "algorithms": [{"name": "block-ca"}]})"));
  CHECK_THROWS(ExperimentConfig::from_json_text(
      R"({"objective": {"type": "revenue", "nodes": 4, "edges": 2,
          "q": 0.5, "k": 2},
          "algorithms": [{"name": "downhill"}]})"));
}

TEST_CASE("objective construction and hashing") {
  ObjectiveSpec spec;
  spec.type = "facility";
  spec.n = 6;
  spec.k = 3;
  spec.seed = 2;
  const Objective f = build_objective(spec);
  CHECK(f.domain().size() == 6);
  CHECK(f.domain().levels(0) == 3);
  const std::string h1 = objective_manifest_hash(spec);
  CHECK(h1.size() == 16);
  spec.seed = 3;
  CHECK(objective_manifest_hash(spec) != h1);
  spec.seed = 2;
  CHECK(objective_manifest_hash(spec) == h1);
}

TEST_CASE("experiment bundles are complete and byte-stable") {
  const fs::path dir = fresh_dir("bundle");
  auto make_config = [&](const fs::path& out, int threads) {
    std::ostringstream text;
    text << R"({
      "objective": {"type": "revenue", "nodes": 6, "edges": 9, "q": 0.5,
                    "k": 3, "seed": 4},
      "algorithms": [
        {"name": "block-ca", "epochs": 2},
        {"name": "shrunken-fw", "epochs": 2},
        {"name": "two-phase-fw", "epochs": 2}
      ],
      "gradient": {"mode": "mc", "samples": 32},
      "eval_samples": 64,
      "seed": 21,
      "threads": )"
         << threads << R"(,
      "output": ")" << out.string() << R"("
    })";
    return ExperimentConfig::from_json_text(text.str());
  };

  const auto first = run_experiment(make_config(dir / "run1", 1));
  REQUIRE(first.runs.size() == 3);
  for (const char* tag : {"block-ca", "shrunken-fw", "two-phase-fw"}) {
    CHECK(fs::exists(dir / "run1" / (std::string(tag) + "_trajectory.csv")));
    CHECK(fs::exists(dir / "run1" / (std::string(tag) + "_marginals.csv")));
  }
  CHECK(fs::exists(dir / "run1" / "manifest.json"));
  CHECK_FALSE(fs::exists(dir / "run1" / ".pism.lock"));

  // Re-running with a different worker count gives byte-identical data.
  const auto second = run_experiment(make_config(dir / "run2", 4));
  for (const char* tag : {"block-ca", "shrunken-fw", "two-phase-fw"}) {
    const std::string t = std::string(tag) + "_trajectory.csv";
    const std::string m = std::string(tag) + "_marginals.csv";
    CHECK(slurp(dir / "run1" / t) == slurp(dir / "run2" / t));
    CHECK(slurp(dir / "run1" / m) == slurp(dir / "run2" / m));
  }

  SUBCASE("comparison accepts matching bundles") {
    const auto rows = compare_runs({dir / "run1", dir / "run2"});
    CHECK(rows.size() == 6);
    const std::string table = format_compare_table(rows);
    CHECK(table.find("block-ca") != std::string::npos);
    CHECK(table.find("two-phase-fw") != std::string::npos);
  }

  SUBCASE("comparison rejects bundles with different objectives") {
    auto other = make_config(dir / "run3", 1);
    other.objective.q = 0.25;
    run_experiment(other);
    CHECK_THROWS(compare_runs({dir / "run1", dir / "run3"}));
  }

  SUBCASE("a held lock blocks a second run") {
    auto config = make_config(dir / "run1", 1);
    std::ofstream(dir / "run1" / ".pism.lock") << "held";
    CHECK_THROWS(run_experiment(config));
    fs::remove(dir / "run1" / ".pism.lock");
  }
}

TEST_CASE("init chaining starts from the named run's endpoint") {
  const fs::path dir = fresh_dir("chain");
  const std::string text = R"({
    "objective": {"type": "revenue", "nodes": 5, "edges": 6, "q": 0.5,
                  "k": 3, "seed": 9},
    "algorithms": [
      {"name": "shrunken-fw", "epochs": 2},
      {"name": "block-ca", "init": "shrunken-fw", "epochs": 2}
    ],
    "gradient": {"mode": "exact"},
    "eval_samples": 64,
    "seed": 31,
    "threads": 1,
    "output": ")" + (dir / "out").string() + R"("
  })";
  const auto result = run_experiment(ExperimentConfig::from_json_text(text));
  REQUIRE(result.runs.size() == 2);
  // The chained run must start where the first ended: its first trajectory
  // ELBO equals the first run's final ELBO.
  const std::string fw =
      slurp(dir / "out" / "shrunken-fw_trajectory.csv");
  const std::string ca =
      slurp(dir / "out" / "block-ca_init-shrunken-fw_trajectory.csv");
  auto field = [](const std::string& csv, bool last) {
    std::istringstream in(csv);
    std::string line, keep;
    std::getline(in, line);  // header
    while (std::getline(in, line)) {
      if (line.empty()) continue;
      keep = line;
      if (!last) break;
    }
    const auto a = keep.find(',');
    return keep.substr(a + 1, keep.find(',', a + 1) - a - 1);
  };
  CHECK(field(ca, false) == field(fw, true));
}
