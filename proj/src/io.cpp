#include "optalloc/io.hpp"

#include <charconv>
#include <cmath>
#include <fstream>
#include <sstream>

namespace optalloc::io {

namespace {

using nlohmann::json;

[[noreturn]] void fail(const char* code, const std::string& what) { throw InputError(code, what); }

std::string input_code(ErrorCode code) {
  switch (code) {
    case ErrorCode::DimensionMismatch: return "INPUT_DIM";
    case ErrorCode::NonFinite: return "INPUT_NONFINITE";
    case ErrorCode::Asymmetric: return "INPUT_ASYMMETRIC";
    case ErrorCode::NotNonnegativeDefinite: return "INPUT_NOT_NND";
    case ErrorCode::SingularInformation: return "INPUT_SINGULAR";
    default: return "INPUT_SCHEMA";
  }
}

double number_at(const json& v, const std::string& where) {
  if (!v.is_number()) fail("INPUT_SCHEMA", where + " must be a number");
  const double x = v.get<double>();
  if (!std::isfinite(x)) fail("INPUT_NONFINITE", where + " is not finite");
  return x;
}

std::vector<double> number_row(const json& row, const std::string& where) {
  if (!row.is_array()) fail("INPUT_SCHEMA", where + " must be an array of numbers");
  std::vector<double> out;
  out.reserve(row.size());
  for (std::size_t i = 0; i < row.size(); ++i) out.push_back(number_at(row[i], where + "[" + std::to_string(i) + "]"));
  return out;
}

template <class Build>
DesignProblem wrap_library_errors(Build&& build) {
  try {
    return build();
  } catch (const Error& e) {
    throw InputError(input_code(e.code()), e.what());
  }
}

}  // namespace

std::string read_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) fail("INPUT_IO", "cannot open " + path.string());
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

DesignProblem problem_from_json(const json& doc) {
  if (!doc.is_object()) fail("INPUT_SCHEMA", "problem must be a JSON object");
  if (!doc.contains("p") || !doc["p"].is_number_integer() || doc["p"].get<long long>() < 1)
    fail("INPUT_SCHEMA", "\"p\" must be a positive integer");
  const auto p = static_cast<std::size_t>(doc["p"].get<long long>());

  const bool has_points = doc.contains("points");
  const bool has_components = doc.contains("components");
  if (has_points == has_components)
    fail("INPUT_SCHEMA", "exactly one of \"points\" or \"components\" must be present");

  std::vector<std::string> labels;
  if (doc.contains("labels")) {
    const json& ls = doc["labels"];
    if (!ls.is_array()) fail("INPUT_SCHEMA", "\"labels\" must be an array of strings");
    for (const auto& l : ls) {
      if (!l.is_string()) fail("INPUT_SCHEMA", "\"labels\" must be an array of strings");
      labels.push_back(l.get<std::string>());
    }
  }

  if (has_points) {
    const json& pts = doc["points"];
    if (!pts.is_array()) fail("INPUT_SCHEMA", "\"points\" must be an array of arrays");
    std::vector<DesignPoint> points;
    for (std::size_t l = 0; l < pts.size(); ++l) {
      const std::string where = "points[" + std::to_string(l) + "]";
      DesignPoint pt{number_row(pts[l], where)};
      if (pt.coordinates.size() != p)
        fail("INPUT_DIM", where + " has " + std::to_string(pt.coordinates.size()) + " coordinates, expected " +
                              std::to_string(p));
      points.push_back(std::move(pt));
    }
    return wrap_library_errors([&] { return DesignProblem::from_points(points, labels); });
  }

  const json& comps = doc["components"];
  if (!comps.is_array()) fail("INPUT_SCHEMA", "\"components\" must be an array of matrices");
  return wrap_library_errors([&] {
    std::vector<InformationComponent> components;
    for (std::size_t l = 0; l < comps.size(); ++l) {
      const std::string where = "components[" + std::to_string(l) + "]";
      const json& rows = comps[l];
      if (!rows.is_array()) fail("INPUT_SCHEMA", where + " must be an array of rows");
      if (rows.size() != p) fail("INPUT_DIM", where + " must have " + std::to_string(p) + " rows");
      std::vector<double> flat;
      flat.reserve(p * p);
      for (std::size_t i = 0; i < p; ++i) {
        const std::vector<double> r = number_row(rows[i], where + "[" + std::to_string(i) + "]");
        if (r.size() != p) fail("INPUT_DIM", where + " row " + std::to_string(i) + " must have " + std::to_string(p) + " entries");
        flat.insert(flat.end(), r.begin(), r.end());
      }
      components.push_back(InformationComponent::from_matrix(SquareMatrix(p, std::move(flat))));
    }
    return DesignProblem::from_components(std::move(components), labels);
  });
}

DesignProblem problem_from_json_text(std::string_view text) {
  json doc;
  try {
    doc = json::parse(text);
  } catch (const json::parse_error& e) {
    fail("INPUT_JSON", e.what());
  } catch (const json::out_of_range& e) {
    fail("INPUT_NONFINITE", e.what());  // literal overflows double
  }
  return problem_from_json(doc);
}

DesignProblem problem_from_csv_text(std::string_view text) {
  std::vector<DesignPoint> points;
  std::size_t line_no = 0;
  std::istringstream in{std::string(text)};
  std::string line;
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    const auto first = line.find_first_not_of(" \t");
    if (first == std::string::npos || line[first] == '#') continue;

    DesignPoint pt;
    std::istringstream cells(line);
    std::string cell;
    while (std::getline(cells, cell, ',')) {
      const auto b = cell.find_first_not_of(" \t");
      const auto e = cell.find_last_not_of(" \t");
      const std::string_view v = b == std::string::npos ? std::string_view{} : std::string_view(cell).substr(b, e - b + 1);
      double x = 0.0;
      const auto res = std::from_chars(v.data(), v.data() + v.size(), x);
      if (v.empty() || res.ec != std::errc{} || res.ptr != v.data() + v.size())
        fail("INPUT_SCHEMA", "line " + std::to_string(line_no) + ": '" + cell + "' is not a number");
      if (!std::isfinite(x)) fail("INPUT_NONFINITE", "line " + std::to_string(line_no) + " has a non-finite value");
      pt.coordinates.push_back(x);
    }
    if (!points.empty() && pt.coordinates.size() != points.front().coordinates.size())
      fail("INPUT_DIM", "line " + std::to_string(line_no) + " has " + std::to_string(pt.coordinates.size()) +
                            " columns, expected " + std::to_string(points.front().coordinates.size()));
    points.push_back(std::move(pt));
  }
  if (points.empty()) fail("INPUT_SCHEMA", "CSV input has no design points");
  return wrap_library_errors([&] { return DesignProblem::from_points(points); });
}

nlohmann::ordered_json problem_to_json(const DesignProblem& problem) {
  nlohmann::ordered_json doc;
  doc["p"] = problem.p();
  if (problem.has_points()) {
    auto pts = nlohmann::ordered_json::array();
    for (std::size_t l = 0; l < problem.k(); ++l) {
      const auto x = problem.point(l);
      pts.push_back(std::vector<double>(x.begin(), x.end()));
    }
    doc["points"] = std::move(pts);
  } else {
    auto comps = nlohmann::ordered_json::array();
    for (std::size_t l = 0; l < problem.k(); ++l) {
      const SquareMatrix& m = problem.component(l).matrix();
      auto rows = nlohmann::ordered_json::array();
      for (std::size_t i = 0; i < m.size(); ++i) rows.push_back(std::vector<double>(m.row(i).begin(), m.row(i).end()));
      comps.push_back(std::move(rows));
    }
    doc["components"] = std::move(comps);
  }
  if (!problem.labels().empty()) doc["labels"] = problem.labels();
  return doc;
}

std::vector<double> weights_from_json_text(std::string_view text) {
  json doc;
  try {
    doc = json::parse(text);
  } catch (const json::parse_error& e) {
    fail("INPUT_JSON", e.what());
  } catch (const json::out_of_range& e) {
    fail("INPUT_NONFINITE", e.what());  // literal overflows double
  }
  if (!doc.is_array() || doc.empty()) fail("INPUT_SCHEMA", "weights must be a non-empty JSON array of numbers");
  std::vector<double> w = number_row(doc, "weights");
  for (double x : w)
    if (x < 0.0) fail("INPUT_SIMPLEX", "weights must be nonnegative");
  return w;
}

nlohmann::ordered_json to_json(const IterationRecord& record) {
  nlohmann::ordered_json j;
  j["h"] = record.h;
  j["weights"] = record.weights.values();
  j["objective"] = record.objective;
  j["max_abs_delta"] = record.max_abs_delta;
  j["l1_delta"] = record.l1_delta;
  j["bound_slack"] = record.bound_slack;
  return j;
}

nlohmann::ordered_json to_json(const SolveReport& report, bool include_trace) {
  nlohmann::ordered_json j;
  j["criterion"] = std::string(to_string(report.criterion));
  j["weights"] = report.final_weights.values();
  j["iterations"] = report.iterations;
  j["converged"] = report.converged;
  j["objective"] = report.objective;
  j["kkt_residual"] = report.kkt_residual;
  j["elapsed_seconds"] = report.elapsed_seconds;
  j["monotone_violations"] = report.monotone_violations;
  j["independent"] = report.independent;
  if (include_trace) {
    auto t = nlohmann::ordered_json::array();
    for (const auto& r : report.trace) t.push_back(to_json(r));
    j["trace"] = std::move(t);
  }
  return j;
}

nlohmann::ordered_json to_json(const KktReport& report, Criterion criterion) {
  nlohmann::ordered_json j;
  j["criterion"] = std::string(to_string(criterion));
  j["residual"] = report.residual;
  auto per = nlohmann::ordered_json::array();
  for (const auto& c : report.per_condition) {
    nlohmann::ordered_json e;
    e["sensitivity"] = c.sensitivity;
    e["weight"] = c.weight;
    e["active"] = c.active;
    per.push_back(std::move(e));
  }
  j["per_condition"] = std::move(per);
  j["support_tolerance"] = report.support_tolerance;
  return j;
}

}  // namespace optalloc::io
