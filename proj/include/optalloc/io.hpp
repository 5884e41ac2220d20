#pragma once

#include <filesystem>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include <json.hpp>

#include "optalloc/design_model.hpp"
#include "optalloc/solvers.hpp"
#include "optalloc/verification.hpp"

namespace optalloc::io {

/// Input problem; `code` is one of the INPUT_* strings printed by the CLI.
class InputError : public std::runtime_error {
 public:
  InputError(std::string code, const std::string& what)
      : std::runtime_error(what), code_(std::move(code)) {}
  const std::string& code() const noexcept { return code_; }

 private:
  std::string code_;
};

std::string read_file(const std::filesystem::path& path);

/// {"p": int, "points": [[...]]} or {"p": int, "components": [[[...]]]},
/// optional "labels". Exactly one of points/components.
DesignProblem problem_from_json(const nlohmann::json& doc);
DesignProblem problem_from_json_text(std::string_view text);

/// One design point per row, comma separated. Blank lines and lines starting
/// with '#' are skipped.
DesignProblem problem_from_csv_text(std::string_view text);

nlohmann::ordered_json problem_to_json(const DesignProblem& problem);

/// A bare JSON array of numbers. Checks finiteness and nonnegativity only.
std::vector<double> weights_from_json_text(std::string_view text);

nlohmann::ordered_json to_json(const IterationRecord& record);
nlohmann::ordered_json to_json(const SolveReport& report, bool include_trace);
nlohmann::ordered_json to_json(const KktReport& report, Criterion criterion);

}  // namespace optalloc::io
