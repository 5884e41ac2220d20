#include <doctest.h>

#include <json.hpp>

#include <set>
#include <sstream>

#include "optalloc/benchmark.hpp"

using namespace optalloc;

TEST_CASE("generate_problem is deterministic and draws from (-1, 1)") {
  const auto a = generate_problem(10, 4, 12345);
  const auto b = generate_problem(10, 4, 12345);
  const auto c = generate_problem(10, 4, 12346);
  REQUIRE(a.has_points());
  bool differs = false;
  for (std::size_t l = 0; l < 10; ++l) {
    for (std::size_t i = 0; i < 4; ++i) {
      CHECK(a.point(l)[i] == b.point(l)[i]);
      CHECK(a.point(l)[i] > -1.0);
      CHECK(a.point(l)[i] < 1.0);
      differs = differs || a.point(l)[i] != c.point(l)[i];
    }
  }
  CHECK(differs);
  CHECK_THROWS_AS(generate_problem(4, 4, 1), Error);
}

TEST_CASE("generated k=10, p=4 problems have positive-definite uniform information") {
  for (std::uint64_t seed = 0; seed < 1000; ++seed) {
    const auto problem = generate_problem(10, 4, seed);
    CHECK(fisher_information(problem, Allocation::uniform(10)).positive_definite());
  }
}

TEST_CASE("replication seeds separate streams") {
  std::set<std::uint64_t> seen;
  for (std::size_t k : {10u, 20u})
    for (std::size_t p : {4u, 5u})
      for (std::size_t rep = 0; rep < 50; ++rep) seen.insert(replication_seed(42, k, p, rep));
  CHECK(seen.size() == 200);
  CHECK(replication_seed(42, 10, 4, 0) == replication_seed(42, 10, 4, 0));
  CHECK(replication_seed(42, 10, 4, 0) != replication_seed(43, 10, 4, 0));
}

TEST_CASE("bench spec grid keeps p < k pairs") {
  BenchSpec spec;
  CHECK(spec.grid().size() == 23);
  CHECK(spec.grid().front() == std::pair<std::size_t, std::size_t>{10, 4});
  CHECK(spec.grid().back() == std::pair<std::size_t, std::size_t>{40, 30});
  spec.k_values = {10};
  spec.p_values = {12};
  CHECK_THROWS_AS(spec.validate(), Error);
  spec.p_values = {4};
  spec.replications = 0;
  CHECK_THROWS_AS(spec.validate(), Error);
}

TEST_CASE("run_benchmark is reproducible across runs and thread counts") {
  BenchSpec spec;
  spec.k_values = {10, 20};
  spec.p_values = {4, 8};
  spec.replications = 6;
  spec.threads = 1;
  const auto serial = run_benchmark(spec);
  spec.threads = 3;
  const auto parallel = run_benchmark(spec);
  const auto again = run_benchmark(spec);
  REQUIRE(serial.size() == 4);
  for (std::size_t i = 0; i < serial.size(); ++i) {
    CHECK(serial[i].k == parallel[i].k);
    CHECK(serial[i].p == parallel[i].p);
    CHECK(serial[i].mean_iterations == parallel[i].mean_iterations);
    CHECK(serial[i].sd_iterations == parallel[i].sd_iterations);
    CHECK(again[i].mean_iterations == parallel[i].mean_iterations);
    CHECK(serial[i].failures == 0);
    CHECK(serial[i].sd_iterations >= 0.0);
  }
}

TEST_CASE("single replication has zero spread") {
  BenchSpec spec;
  spec.k_values = {10};
  spec.p_values = {4};
  spec.replications = 1;
  const auto cells = run_benchmark(spec);
  REQUIRE(cells.size() == 1);
  CHECK(cells[0].sd_iterations == 0.0);
  CHECK(cells[0].mean_iterations >= 1.0);
}

TEST_CASE("emit_table formats") {
  const BenchCell cell{10, 4, 56.8, 27.9, 0.192, 0.094, 0};
  CHECK(emit_table({}, TableFormat::Csv) == "k,p,mean_iter,sd_iter,mean_sec,sd_sec,failures\n");
  CHECK(emit_table({cell}, TableFormat::Csv) ==
        "k,p,mean_iter,sd_iter,mean_sec,sd_sec,failures\n10,4,56.8,27.9,0.192,0.094,0\n");

  const std::string md = emit_table({cell, cell, cell}, TableFormat::Markdown);
  std::istringstream lines(md);
  std::string line;
  int count = 0;
  while (std::getline(lines, line)) ++count;
  CHECK(count == 5);
  CHECK(md.find("| 10 | 4 | 56.8 (27.9) | 0.192 (0.094) | 0 |") != std::string::npos);

  const auto doc = nlohmann::json::parse(emit_table({cell}, TableFormat::Json));
  REQUIRE(doc.is_array());
  CHECK(doc[0]["k"] == 10);
  CHECK(doc[0]["mean_iterations"] == 56.8);
  CHECK(doc[0]["sd_elapsed_seconds"] == 0.094);
  CHECK(nlohmann::json::parse(emit_table({}, TableFormat::Json)).empty());
}
