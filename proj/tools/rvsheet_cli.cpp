#include <iostream>
#include <utility>

#include "CLI11.hpp"
#include "run_config.hpp"

int main(int argc, char** argv) {
  CLI::App app{"Linear stability of relativistic vortex sheets"};
  app.require_subcommand(1);
  std::string config;
  std::optional<std::string> out;
  std::optional<std::uint64_t> seed;
  const std::pair<const char*, const char*> commands[] = {
      {"classify", "regime, threshold, boundary roots and ordering chain (JSON)"},
      {"sweep", "classification over a parameter grid (CSV)"},
      {"scan-delta", "Lopatinskii determinant on the frequency hemisphere (CSV)"},
      {"frozen", "frozen-coefficient symbols at a pair of front points (JSON)"},
      {"verify", "property suite; exit 1 if any property fails"},
  };
  for (const auto& [name, help] : commands) {
    CLI::App* sub = app.add_subcommand(name, help);
    sub->add_option("--config", config, "run configuration (JSON)")->required();
    sub->add_option("--out", out, "output path (default stdout)");
    sub->add_option("--seed", seed, "seed for randomized property suites");
  }
  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int code = app.exit(e);
    return code == 0 ? 0 : rvs::cli::kInvalid;
  }
  const std::string command = app.get_subcommands().front()->get_name();
  return rvs::cli::run_command(command, config, out, seed, std::cout, std::cerr);
}
