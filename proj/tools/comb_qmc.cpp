#include <fstream>
#include <iostream>
#include <string>

#include <CLI11.hpp>

#include "cli_app.hpp"
#include "combqmc/error.hpp"

namespace {

struct Flags {
  std::string config;
  double beta = 0.0;
  double J = 1.0;
  unsigned n = 2;
  unsigned d_max = 6;
  std::string grid_beta, grid_J, observable, output, format = "json";
  bool oracle = false;
};

void add_flags(CLI::App* sub, Flags& f) {
  sub->add_option("--config", f.config, "JSON config file (flags override its values)");
  sub->add_option("--beta", f.beta, "inverse temperature (>= 0)");
  sub->add_option("--J", f.J, "coupling constant (>= 0)");
  sub->add_option("--n", f.n, "volume radius");
  sub->add_option("--d-max", f.d_max, "largest spine distance for correlations");
  sub->add_option("--grid-beta", f.grid_beta, "sweep range a:b:step");
  sub->add_option("--grid-J", f.grid_J, "sweep range a:b:step");
  sub->add_option("--observable", f.observable, "observable JSON file");
  sub->add_option("--output", f.output, "output path (default stdout)");
  sub->add_option("--format", f.format, "json or csv")->check(CLI::IsMember({"json", "csv"}));
  sub->add_flag("--oracle", f.oracle, "also run the brute-force oracle");
}

}  // namespace

int main(int argc, char** argv) {
  using namespace combqmc;
  CLI::App app{"Quantum Markov chains on the comb graph: Ising-type models"};
  app.require_subcommand(1);
  Flags f;
  const char* names[][2] = {{"params", "print the derived model coefficients"},
                            {"solve", "enumerate boundary-field fixed points"},
                            {"evaluate", "evaluate an observable by every route"},
                            {"correlate", "two-point correlation decay along the spine"},
                            {"sweep", "parameter grid: coefficients, branches, decay rate"},
                            {"verify", "run the acceptance battery"}};
  for (const auto& [name, help] : names) add_flags(app.add_subcommand(name, help), f);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e);
  }

  try {
    const auto* sub = app.get_subcommands().front();
    cli::RunConfig cfg;
    if (!f.config.empty()) {
      std::ifstream in(f.config);
      if (!in) throw Error("cannot read config file " + f.config);
      cfg = cli::config_from_json(nlohmann::json::parse(in), cfg);
    }
    cfg.command = *cli::parse_command(sub->get_name());
    auto given = [&](const char* flag) { return sub->count(flag) > 0; };
    if (given("--beta")) cfg.beta = f.beta;
    if (given("--J")) cfg.J = f.J;
    if (given("--n")) cfg.n = f.n;
    if (given("--d-max")) cfg.d_max = f.d_max;
    if (given("--grid-beta")) cfg.grid_beta = cli::parse_range(f.grid_beta);
    if (given("--grid-J")) cfg.grid_J = cli::parse_range(f.grid_J);
    if (given("--observable")) cfg.observable = cli::load_observable(f.observable);
    if (given("--output")) cfg.output_path = f.output;
    if (given("--format")) cfg.format = f.format == "csv" ? cli::Format::Csv : cli::Format::Json;
    if (given("--oracle")) cfg.oracle = f.oracle;
    if (cfg.command == cli::Command::Verify && !given("--n") && f.config.empty()) cfg.n = 3;
    return cli::run(cfg, std::cout);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << std::endl;
    return 2;
  }
}
