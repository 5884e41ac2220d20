#include "optalloc/benchmark.hpp"

#include <algorithm>
#include <atomic>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <random>
#include <sstream>
#include <thread>

#include <json.hpp>

namespace optalloc {

namespace {

constexpr std::uint64_t splitmix64(std::uint64_t x) noexcept {
  x += 0x9E3779B97F4A7C15ull;
  x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ull;
  x = (x ^ (x >> 27)) * 0x94D049BB133111EBull;
  return x ^ (x >> 31);
}

// Open interval (-1, 1) from the top 53 bits; std::uniform_real_distribution
// is implementation-defined, this is not.
double uniform_open_pm1(std::mt19937_64& engine) noexcept {
  const double u = (static_cast<double>(engine() >> 11) + 0.5) * 0x1.0p-53;
  return 2.0 * u - 1.0;
}

struct ReplicationResult {
  std::size_t iterations = 0;
  double elapsed = 0.0;
  bool converged = false;
};

std::pair<double, double> mean_sd(const std::vector<double>& xs) {
  if (xs.empty()) return {0.0, 0.0};
  double sum = 0.0;
  for (double x : xs) sum += x;
  const double mean = sum / static_cast<double>(xs.size());
  if (xs.size() < 2) return {mean, 0.0};
  double ss = 0.0;
  for (double x : xs) ss += (x - mean) * (x - mean);
  return {mean, std::sqrt(ss / static_cast<double>(xs.size() - 1))};
}

std::string shortest(double v) {
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, res.ptr);
}

std::string fixed(double v, int digits) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.*f", digits, v);
  return buf;
}

}  // namespace

void BenchSpec::validate() const {
  if (replications < 1) throw Error(ErrorCode::InvalidConfig, "replications must be at least 1");
  if (!(tolerance > 0.0)) throw Error(ErrorCode::InvalidConfig, "tolerance must be positive");
  for (std::size_t k : k_values)
    if (k < 1) throw Error(ErrorCode::InvalidConfig, "k values must be >= 1");
  for (std::size_t p : p_values)
    if (p < 1) throw Error(ErrorCode::InvalidConfig, "p values must be >= 1");
  if (grid().empty()) throw Error(ErrorCode::InvalidConfig, "no (k, p) pair satisfies p < k");
}

std::vector<std::pair<std::size_t, std::size_t>> BenchSpec::grid() const {
  std::vector<std::pair<std::size_t, std::size_t>> pairs;
  for (std::size_t k : k_values)
    for (std::size_t p : p_values)
      if (p < k) pairs.emplace_back(k, p);
  return pairs;
}

std::uint64_t replication_seed(std::uint64_t seed, std::size_t k, std::size_t p,
                               std::size_t replication) noexcept {
  std::uint64_t s = splitmix64(seed);
  s = splitmix64(s ^ static_cast<std::uint64_t>(k));
  s = splitmix64(s ^ static_cast<std::uint64_t>(p));
  return splitmix64(s ^ static_cast<std::uint64_t>(replication));
}

DesignProblem generate_problem(std::size_t k, std::size_t p, std::uint64_t rng_state) {
  if (p < 1 || p >= k) throw Error(ErrorCode::InvalidConfig, "generate_problem requires 1 <= p < k");
  std::mt19937_64 engine(rng_state);
  std::vector<DesignPoint> points(k);
  for (auto& pt : points) {
    pt.coordinates.resize(p);
    for (double& c : pt.coordinates) c = uniform_open_pm1(engine);
  }
  return DesignProblem::from_points(points);
}

std::size_t threads_from_environment() {
  const char* env = std::getenv("OPTALLOC_THREADS");
  if (env == nullptr) return 0;
  std::size_t n = 0;
  const std::string_view text(env);
  const auto res = std::from_chars(text.data(), text.data() + text.size(), n);
  if (res.ec != std::errc{} || res.ptr != text.data() + text.size()) return 0;
  return n;
}

std::vector<BenchCell> run_benchmark(const BenchSpec& spec) {
  spec.validate();
  const auto pairs = spec.grid();
  const std::size_t reps = spec.replications;
  const std::size_t jobs = pairs.size() * reps;

  std::size_t threads = spec.threads != 0 ? spec.threads : threads_from_environment();
  if (threads == 0) threads = std::max<std::size_t>(1, std::thread::hardware_concurrency());
  threads = std::min(threads, jobs);

  std::vector<ReplicationResult> results(jobs);
  std::atomic<std::size_t> next{0};
  auto worker = [&] {
    for (std::size_t job = next.fetch_add(1); job < jobs; job = next.fetch_add(1)) {
      const auto [k, p] = pairs[job / reps];
      const std::size_t rep = job % reps;
      SolverConfig config;
      config.criterion = spec.criterion;
      config.tolerance = spec.tolerance;
      try {
        const DesignProblem problem = generate_problem(k, p, replication_seed(spec.seed, k, p, rep));
        const SolveReport report = solve(problem, config);
        results[job] = ReplicationResult{report.iterations, report.elapsed_seconds, report.converged};
      } catch (const Error&) {
        results[job] = ReplicationResult{};
      }
    }
  };
  {
    std::vector<std::jthread> pool;
    for (std::size_t t = 1; t < threads; ++t) pool.emplace_back(worker);
    worker();
  }

  std::vector<BenchCell> cells;
  cells.reserve(pairs.size());
  for (std::size_t c = 0; c < pairs.size(); ++c) {
    std::vector<double> iterations;
    std::vector<double> elapsed;
    BenchCell cell;
    cell.k = pairs[c].first;
    cell.p = pairs[c].second;
    for (std::size_t rep = 0; rep < reps; ++rep) {
      const ReplicationResult& r = results[c * reps + rep];
      iterations.push_back(static_cast<double>(r.iterations));
      elapsed.push_back(r.elapsed);
      if (!r.converged) ++cell.failures;
    }
    std::tie(cell.mean_iterations, cell.sd_iterations) = mean_sd(iterations);
    std::tie(cell.mean_elapsed_seconds, cell.sd_elapsed_seconds) = mean_sd(elapsed);
    cells.push_back(cell);
  }
  return cells;
}

std::string emit_table(const std::vector<BenchCell>& cells, TableFormat format) {
  std::ostringstream out;
  switch (format) {
    case TableFormat::Csv:
      out << "k,p,mean_iter,sd_iter,mean_sec,sd_sec,failures\n";
      for (const auto& c : cells) {
        out << c.k << ',' << c.p << ',' << shortest(c.mean_iterations) << ',' << shortest(c.sd_iterations)
            << ',' << shortest(c.mean_elapsed_seconds) << ',' << shortest(c.sd_elapsed_seconds) << ','
            << c.failures << '\n';
      }
      break;
    case TableFormat::Markdown:
      out << "| k | p | Average no. of iterations (s.d.) | Average elapsed time in sec. (s.d.) | Failures |\n";
      out << "|---:|---:|---:|---:|---:|\n";
      for (const auto& c : cells) {
        out << "| " << c.k << " | " << c.p << " | " << fixed(c.mean_iterations, 1) << " ("
            << fixed(c.sd_iterations, 1) << ") | " << fixed(c.mean_elapsed_seconds, 3) << " ("
            << fixed(c.sd_elapsed_seconds, 3) << ") | " << c.failures << " |\n";
      }
      break;
    case TableFormat::Json: {
      nlohmann::json arr = nlohmann::json::array();
      for (const auto& c : cells) {
        arr.push_back({{"k", c.k},
                       {"p", c.p},
                       {"mean_iterations", c.mean_iterations},
                       {"sd_iterations", c.sd_iterations},
                       {"mean_elapsed_seconds", c.mean_elapsed_seconds},
                       {"sd_elapsed_seconds", c.sd_elapsed_seconds},
                       {"failures", c.failures}});
      }
      out << arr.dump(2) << '\n';
      break;
    }
  }
  return out.str();
}

}  // namespace optalloc
