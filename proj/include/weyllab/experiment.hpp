#pragma once

#include <cstddef>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "weyllab/model_spaces.hpp"
#include "weyllab/weyl.hpp"

namespace weyllab {

enum class Command { spectrum, heat, tauberian, criterion, weyl };

std::string command_name(Command command);
Command command_from_name(const std::string& name);

struct Tolerances {
  double criterion = 1e-3;   // criterion limit vs pointwise integral
  double consistency = 0.02; // three-way Weyl limits
  double audit = 0.05;       // one-sided Tauberian slack
  double heat = 1e-2;        // short-time limit vs omega_k / (4 pi)^{k/2}
  bool operator==(const Tolerances&) const = default;
};

struct ExperimentConfig {
  Command command = Command::weyl;
  ModelSpace space = WeightedInterval{};
  std::optional<SpectrumMethod> method;  // per-space default when absent
  double lambda_max = 1e4;
  int fd_nodes = 2049;
  std::optional<GridSpec> s_grid;
  std::optional<GridSpec> t_grid;
  std::optional<GridSpec> lambda_grid;
  Tolerances tolerances;
  std::string output = "weyl-lab-out";
  unsigned threads = 1;
  bool emit_spectrum = true;
  bool emit_curves = true;
  // heat
  std::optional<double> point;
  std::size_t modes = 2000;
  std::size_t nodes = 4097;
  // tauberian
  std::string atoms;   // CSV path
  std::string family;  // squares | linear | lacunary | dirac
  double gamma = 0.5;

  bool operator==(const ExperimentConfig&) const = default;
  /// Grid well-formedness and positive tolerances; throws config errors.
  void validate() const;
};

nlohmann::ordered_json config_to_json(const ExperimentConfig& config);
/// Missing fields keep their defaults. Throws config errors naming the field.
ExperimentConfig config_from_json(const nlohmann::json& j);
/// Parses JSON text; syntax errors report line and column.
ExperimentConfig config_from_text(const std::string& text);

/// "start:stop:count[:linear|log]".
GridSpec parse_grid_spec(const std::string& text);

struct RunResult {
  int status = 0;  // 0 success, 2 verdict failure
  std::vector<std::filesystem::path> files;
  std::string summary;
};

/// Runs the pipeline named by config.command and writes its artifacts into
/// config.output. Operational failures throw Error.
RunResult run_experiment(const ExperimentConfig& config);

}  // namespace weyllab
