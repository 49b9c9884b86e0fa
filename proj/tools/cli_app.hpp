#pragma once

#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "combqmc/qmc_engine.hpp"

namespace combqmc::cli {

enum class Command { Params, Solve, Evaluate, Correlate, Sweep, Verify };
enum class Format { Json, Csv };

std::optional<Command> parse_command(const std::string& name);

/// Inclusive arithmetic range "start:stop:step".
struct Range {
  double start = 0.0;
  double stop = 0.0;
  double step = 1.0;

  std::vector<double> values() const;
};

Range parse_range(const std::string& text);

struct RunConfig {
  Command command = Command::Params;
  double beta = 0.0;
  double J = 1.0;
  unsigned n = 2;
  unsigned d_max = 6;
  std::optional<Observable> observable;
  std::optional<Range> grid_beta;
  std::optional<Range> grid_J;
  std::string output_path;  // empty: stdout
  Format format = Format::Json;
  bool oracle = false;
};

/// RunConfig from a JSON object with the same field names; "observable" may be
/// an inline observable or a path to one, grids are "a:b:step" strings.
RunConfig config_from_json(const nlohmann::json& j, RunConfig base = {});

Observable load_observable(const std::string& path);

/// Throws Error with a one-line message when the config is inconsistent.
void validate(const RunConfig& cfg);

/// Runs the command, writing results to cfg.output_path (atomically) or to out.
/// Returns 0 iff every check the command performs passes.
int run(const RunConfig& cfg, std::ostream& out);

}  // namespace combqmc::cli
