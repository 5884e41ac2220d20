#include "optalloc/cli.hpp"

#include <CLI11.hpp>

#include <cmath>
#include <fstream>
#include <numeric>
#include <ostream>
#include <string>

#include "optalloc/benchmark.hpp"
#include "optalloc/design_model.hpp"
#include "optalloc/io.hpp"
#include "optalloc/solvers.hpp"
#include "optalloc/verification.hpp"

namespace optalloc::cli {

namespace {

// Weight files may be off the simplex by this much; they are renormalized.
constexpr double kWeightSumTolerance = 1e-6;
constexpr double kCertificationThreshold = 1e-3;

struct SolveArgs {
  std::string input;
  std::string input_format = "json";
  std::string criterion = "d";
  double tolerance = 1e-4;
  std::size_t max_iterations = 100000;
  double floor = 0.0;
  bool trace = false;
  bool timestamps = false;
  std::string output;
};

struct VerifyArgs {
  std::string input;
  std::string input_format = "json";
  std::string weights;
  std::string criterion = "d";
  double support_tolerance = kDefaultSupportTolerance;
};

struct BenchArgs {
  std::string criterion = "d";
  std::vector<std::size_t> k_values{10, 20, 30, 40};
  std::vector<std::size_t> p_values{4, 5, 8, 10, 15, 20, 25, 30};
  std::size_t replications = 50;
  double tolerance = 1e-4;
  std::uint64_t seed = 42;
  std::string format = "csv";
  std::string output;
  bool timestamps = false;
};

struct ApportionArgs {
  std::string weights;
  std::int64_t n = 0;
};

int report_error(std::ostream& err, std::string_view code, std::string_view message) {
  err << "error: " << code << ": " << message << '\n';
  return kExitInputError;
}

Criterion criterion_from(const std::string& text) {
  // CLI11's IsMember check has already run.
  return *parse_criterion(text);
}

DesignProblem load_problem(const std::string& path, const std::string& format) {
  const std::string text = io::read_file(path);
  return format == "csv" ? io::problem_from_csv_text(text) : io::problem_from_json_text(text);
}

/// Reads a weight vector and moves it onto the simplex if it is within the
/// accepted band; warns on stderr when renormalizing.
Allocation load_weights(const std::string& path, std::ostream& err) {
  std::vector<double> w = io::weights_from_json_text(io::read_file(path));
  const double sum = std::accumulate(w.begin(), w.end(), 0.0);
  if (std::fabs(sum - 1.0) > kWeightSumTolerance)
    throw io::InputError("INPUT_SIMPLEX", "weights sum to " + std::to_string(sum) + ", not 1");
  if (std::fabs(sum - 1.0) > Allocation::kSimplexTolerance) {
    err << "warning: weights sum to " << sum << "; renormalizing\n";
    for (double& x : w) x /= sum;
  }
  return Allocation(std::move(w));
}

void write_output(const std::string& path, const std::string& text, std::ostream& out) {
  if (path.empty()) {
    out << text;
    return;
  }
  std::ofstream f(path, std::ios::binary);
  if (!f) throw io::InputError("INPUT_IO", "cannot write " + path);
  f << text;
}

int cmd_solve(const SolveArgs& args, std::ostream& out, std::ostream& err) {
  const DesignProblem problem = load_problem(args.input, args.input_format);
  SolverConfig config;
  config.criterion = criterion_from(args.criterion);
  config.tolerance = args.tolerance;
  config.max_iterations = args.max_iterations;
  config.record_trace = args.trace;
  config.weight_floor = args.floor;
  SolveReport report = solve(problem, config);
  if (!args.timestamps) report.elapsed_seconds = 0.0;
  if (!report.independent)
    err << "warning: components are linearly dependent; the optimal allocation may not be unique\n";
  write_output(args.output, io::to_json(report, args.trace).dump(2) + "\n", out);
  return report.converged ? kExitOk : kExitNotConverged;
}

int cmd_verify(const VerifyArgs& args, std::ostream& out, std::ostream& err) {
  const DesignProblem problem = load_problem(args.input, args.input_format);
  const Allocation w = load_weights(args.weights, err);
  if (w.size() != problem.k())
    throw io::InputError("INPUT_DIM", "weights have " + std::to_string(w.size()) + " entries for " +
                                          std::to_string(problem.k()) + " conditions");
  const Criterion criterion = criterion_from(args.criterion);
  const KktReport report = kkt_residual(problem, w, criterion, args.support_tolerance);
  out << io::to_json(report, criterion).dump(2) << '\n';
  return report.residual < kCertificationThreshold ? kExitOk : kExitCertificationFailed;
}

int cmd_bench(const BenchArgs& args, std::ostream& out) {
  BenchSpec spec;
  spec.criterion = criterion_from(args.criterion);
  spec.k_values = args.k_values;
  spec.p_values = args.p_values;
  spec.replications = args.replications;
  spec.tolerance = args.tolerance;
  spec.seed = args.seed;
  std::vector<BenchCell> cells = run_benchmark(spec);
  if (!args.timestamps) {
    for (auto& c : cells) c.mean_elapsed_seconds = c.sd_elapsed_seconds = 0.0;
  }
  const TableFormat format = args.format == "markdown" ? TableFormat::Markdown
                             : args.format == "json"   ? TableFormat::Json
                                                       : TableFormat::Csv;
  write_output(args.output, emit_table(cells, format), out);
  return kExitOk;
}

int cmd_apportion(const ApportionArgs& args, std::ostream& out, std::ostream& err) {
  if (args.n < 1) return report_error(err, "INPUT_ARGS", "--n must be a positive integer");
  const Allocation w = load_weights(args.weights, err);
  out << nlohmann::json(apportion(w, args.n)).dump() << '\n';
  return kExitOk;
}

}  // namespace

int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Optimal allocation weights for D- and A-optimal experimental designs", "optalloc"};
  app.require_subcommand(1);

  const auto criteria = CLI::IsMember({"d", "a", "D", "A"});

  SolveArgs solve_args;
  auto* solve_cmd = app.add_subcommand("solve", "Compute the optimal allocation for a problem file");
  solve_cmd->add_option("-i,--input", solve_args.input, "Problem file")->required()->check(CLI::ExistingFile);
  solve_cmd->add_option("--input-format", solve_args.input_format, "json or csv (one design point per row)")
      ->check(CLI::IsMember({"json", "csv"}));
  solve_cmd->add_option("-c,--criterion", solve_args.criterion, "d or a")->check(criteria);
  solve_cmd->add_option("--tol", solve_args.tolerance, "Stop when max |w_h - w_{h-1}| < tol");
  solve_cmd->add_option("--max-iter", solve_args.max_iterations, "Iteration cap");
  solve_cmd->add_option("--floor", solve_args.floor, "Minimum weight kept on every condition");
  solve_cmd->add_flag("--trace", solve_args.trace, "Include the per-iteration trace");
  solve_cmd->add_flag("--timestamps", solve_args.timestamps, "Report measured elapsed time (otherwise 0)");
  solve_cmd->add_option("-o,--output", solve_args.output, "Report path (default: stdout)");

  VerifyArgs verify_args;
  auto* verify_cmd = app.add_subcommand("verify", "Check weights against the optimality conditions");
  verify_cmd->add_option("-i,--input", verify_args.input, "Problem file")->required()->check(CLI::ExistingFile);
  verify_cmd->add_option("--input-format", verify_args.input_format, "json or csv")
      ->check(CLI::IsMember({"json", "csv"}));
  verify_cmd->add_option("-w,--weights", verify_args.weights, "JSON array of weights")
      ->required()
      ->check(CLI::ExistingFile);
  verify_cmd->add_option("-c,--criterion", verify_args.criterion, "d or a")->check(criteria);
  verify_cmd->add_option("--support-tol", verify_args.support_tolerance, "Weights above this are on the support");

  BenchArgs bench_args;
  auto* bench_cmd = app.add_subcommand("bench", "Replicated solves over random problems");
  bench_cmd->add_option("-c,--criterion", bench_args.criterion, "d or a")->check(criteria);
  bench_cmd->add_option("--k", bench_args.k_values, "Comma-separated k values")->delimiter(',');
  bench_cmd->add_option("--p", bench_args.p_values, "Comma-separated p values")->delimiter(',');
  bench_cmd->add_option("--reps", bench_args.replications, "Replications per (k, p)");
  bench_cmd->add_option("--tol", bench_args.tolerance, "Stopping tolerance");
  bench_cmd->add_option("--seed", bench_args.seed, "Base seed");
  bench_cmd->add_option("--format", bench_args.format, "csv, markdown or json")
      ->check(CLI::IsMember({"csv", "markdown", "json"}));
  bench_cmd->add_option("-o,--output", bench_args.output, "Table path (default: stdout)");
  bench_cmd->add_flag("--timestamps", bench_args.timestamps, "Report measured elapsed times (otherwise 0)");

  ApportionArgs apportion_args;
  auto* apportion_cmd = app.add_subcommand("apportion", "Round weights to integer unit counts");
  apportion_cmd->add_option("-w,--weights", apportion_args.weights, "JSON array of weights")
      ->required()
      ->check(CLI::ExistingFile);
  apportion_cmd->add_option("-n,--n", apportion_args.n, "Total number of units")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e, out, err);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e, out, err);
  } catch (const CLI::ParseError& e) {
    return report_error(err, "INPUT_ARGS", e.what());
  }

  try {
    if (*solve_cmd) return cmd_solve(solve_args, out, err);
    if (*verify_cmd) return cmd_verify(verify_args, out, err);
    if (*bench_cmd) return cmd_bench(bench_args, out);
    return cmd_apportion(apportion_args, out, err);
  } catch (const io::InputError& e) {
    return report_error(err, e.code(), e.what());
  } catch (const Error& e) {
    switch (e.code()) {
      case ErrorCode::SingularInformation: return report_error(err, "SINGULAR", e.what());
      case ErrorCode::InvalidAllocation: return report_error(err, "INPUT_SIMPLEX", e.what());
      case ErrorCode::DimensionMismatch: return report_error(err, "INPUT_DIM", e.what());
      default: return report_error(err, "INPUT_ARGS", e.what());
    }
  }
}

}  // namespace optalloc::cli
