#pragma once

#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include <dobrushin/dobrushin.hpp>

namespace dobrushin::cli {

/// Malformed or inconsistent configuration. `where` is either a
/// "line L, column C" location or a field path such as
/// "semigroup.rate_matrix[1][0]".
class ConfigError : public Error {
 public:
  ConfigError(std::string where, const std::string& what)
      : Error(where + ": " + what), where_(std::move(where)) {}
  const std::string& where() const { return where_; }

 private:
  std::string where_;
};

struct AnalysisInfo {
  std::string name;
  std::string required;
  std::string description;
};

/// The nine analyses, in a fixed order.
const std::vector<AnalysisInfo>& analyses();
std::string list_analyses();
bool is_analysis(const std::string& name);

struct SemigroupSpec {
  Semigroup semigroup;
  std::string description;
  std::optional<Semigroup> base;  // set for perturbation specs
};

struct ScenarioConfig {
  std::optional<StateSpace> space;
  std::optional<SemigroupSpec> semigroup;
  std::optional<MarkovProjection> projection;
  std::string analysis;
  Json params = Json::object();
  Json raw;
};

/// Parses and validates JSON text. Throws ConfigError.
ScenarioConfig parse_config(const std::string& text, double tol = kDefaultTol);

/// Unset seed/tol fall back to params.seed / params.tol, then to 1 / 1e-9.
struct RunOptions {
  std::optional<std::uint64_t> seed;
  std::optional<double> tol;
  bool oracle = false;
  std::optional<std::string> analysis_override;
};

struct Artifacts {
  int exit_code = 0;  // 0 success, 2 no certificate, 1 input error
  Json report;
  std::optional<std::string> curve_csv;
  std::optional<std::string> example_csv;
  std::string message;
};

/// Runs one scenario given the raw config bytes. Never throws for input
/// problems; those come back as exit code 1 with a message.
Artifacts run_scenario(const std::string& config_text, const RunOptions& options);

/// Writes report.json and any CSVs into `out_dir` (created if missing).
void write_artifacts(const Artifacts& a, const std::filesystem::path& out_dir);

/// Lowercase hex SHA-256 of the bytes.
std::string sha256_hex(const std::string& bytes);

}  // namespace dobrushin::cli
