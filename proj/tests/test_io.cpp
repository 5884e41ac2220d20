#include <doctest.h>

#include "optalloc/io.hpp"
#include "oracles.hpp"

using namespace optalloc;

namespace {

std::string input_code(auto&& fn) {
  try {
    fn();
  } catch (const io::InputError& e) {
    return e.code();
  }
  return "none";
}

}  // namespace

TEST_CASE("problem JSON with points") {
  const auto problem = io::problem_from_json_text(R"({"p": 2, "points": [[1, -1], [1, 1]], "labels": ["lo", "hi"]})");
  CHECK(problem.k() == 2);
  CHECK(problem.has_points());
  CHECK(problem.labels() == std::vector<std::string>{"lo", "hi"});
}

TEST_CASE("problem JSON with components") {
  const auto problem = io::problem_from_json_text(R"({"p": 1, "components": [[[1]], [[4]]]})");
  CHECK(problem.k() == 2);
  CHECK_FALSE(problem.has_points());
  CHECK(problem.component(1).matrix() == SquareMatrix{{4.0}});
}

TEST_CASE("problem JSON errors") {
  CHECK(input_code([] { io::problem_from_json_text("{"); }) == "INPUT_JSON");
  CHECK(input_code([] { io::problem_from_json_text("[]"); }) == "INPUT_SCHEMA");
  CHECK(input_code([] { io::problem_from_json_text(R"({"points": [[1]]})"); }) == "INPUT_SCHEMA");
  CHECK(input_code([] { io::problem_from_json_text(R"({"p": 1})"); }) == "INPUT_SCHEMA");
  CHECK(input_code([] { io::problem_from_json_text(R"({"p": 1, "points": [[1]], "components": [[[1]]]})"); }) ==
        "INPUT_SCHEMA");
  CHECK(input_code([] { io::problem_from_json_text(R"({"p": 2, "points": [[1, 2], [1]]})"); }) == "INPUT_DIM");
  CHECK(input_code([] { io::problem_from_json_text(R"({"p": 2, "points": [[1, "x"], [1, 2]]})"); }) ==
        "INPUT_SCHEMA");
  CHECK(input_code([] { io::problem_from_json_text(R"({"p": 2, "components": [[[1, 0]]]})"); }) == "INPUT_DIM");
  CHECK(input_code([] { io::problem_from_json_text(R"({"p": 2, "components": [[[1, 2], [0, 1]]]})"); }) ==
        "INPUT_ASYMMETRIC");
  CHECK(input_code([] { io::problem_from_json_text(R"({"p": 2, "components": [[[1, 2], [2, 1]]]})"); }) ==
        "INPUT_NOT_NND");
  CHECK(input_code([] { io::problem_from_json_text(R"({"p": 2, "points": [[1, 1], [2, 2]]})"); }) ==
        "INPUT_SINGULAR");
  CHECK(input_code([] { io::problem_from_json_text(R"({"p": 1, "points": [[1e999]]})"); }) == "INPUT_NONFINITE");
}

TEST_CASE("CSV point matrix") {
  const auto problem = io::problem_from_csv_text("# x0, x1\n1, -1\n\n1, 0\r\n1,1\n");
  CHECK(problem.k() == 3);
  CHECK(problem.p() == 2);
  CHECK(problem.point(1)[1] == 0.0);
  CHECK(input_code([] { io::problem_from_csv_text("1,2\n1\n"); }) == "INPUT_DIM");
  CHECK(input_code([] { io::problem_from_csv_text("1,abc\n"); }) == "INPUT_SCHEMA");
  CHECK(input_code([] { io::problem_from_csv_text("# nothing\n"); }) == "INPUT_SCHEMA");
}

TEST_CASE("property: problem JSON round-trips") {
  for (std::uint64_t seed = 0; seed < 5; ++seed) {
    for (const auto& problem : {oracle::random_points(7, 3, seed), oracle::random_components(4, 3, 2, seed)}) {
      const auto back = io::problem_from_json(nlohmann::json::parse(io::problem_to_json(problem).dump()));
      REQUIRE(back.k() == problem.k());
      CHECK(back.has_points() == problem.has_points());
      for (std::size_t l = 0; l < problem.k(); ++l) CHECK(back.component(l).matrix() == problem.component(l).matrix());
    }
  }
}

TEST_CASE("weights JSON") {
  CHECK(io::weights_from_json_text("[0.25, 0.75]") == std::vector<double>{0.25, 0.75});
  CHECK(input_code([] { io::weights_from_json_text("[0.5, -0.5]"); }) == "INPUT_SIMPLEX");
  CHECK(input_code([] { io::weights_from_json_text(R"({"w": 1})"); }) == "INPUT_SCHEMA");
  CHECK(input_code([] { io::weights_from_json_text("[]"); }) == "INPUT_SCHEMA");
}

TEST_CASE("solve report JSON") {
  SolverConfig config;
  config.record_trace = true;
  const SolveReport report = solve(oracle::two_point(), config);
  const auto without = io::to_json(report, false);
  CHECK_FALSE(without.contains("trace"));
  for (const char* key : {"criterion", "weights", "iterations", "converged", "objective", "kkt_residual",
                          "elapsed_seconds", "monotone_violations"})
    CHECK(without.contains(key));
  CHECK(without["criterion"] == "D");
  const auto with = io::to_json(report, true);
  REQUIRE(with.contains("trace"));
  CHECK(with["trace"].size() == report.trace.size());
  CHECK(with["trace"][0].contains("bound_slack"));
}

TEST_CASE("KKT report JSON") {
  const KktReport r = kkt_residual_d(oracle::three_point(), Allocation(std::vector<double>{0.5, 0.0, 0.5}));
  const auto j = io::to_json(r, Criterion::DOptimal);
  CHECK(j["per_condition"].size() == 3);
  CHECK(j["per_condition"][1]["active"] == false);
  CHECK(j["per_condition"][1]["weight"] == 0.0);
  CHECK(j.contains("residual"));
}
