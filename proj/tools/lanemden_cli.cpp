#include <CLI11.hpp>
#include <iostream>
#include <map>
#include <string>

#include "lanemden/config.hpp"
#include "lanemden/errors.hpp"
#include "lanemden/pipeline.hpp"

namespace {

struct Command {
  const char* name;
  const char* stage;  // nullptr runs the stages listed in the config
  const char* help;
};

constexpr Command kCommands[] = {
    {"hyperbola", "hyperbola", "q from p on the critical hyperbola and the regime"},
    {"ground-state", "ground_state", "solve (or load from cache) the radial ground state"},
    {"constants", "constants", "bubble constants L1..L7 and the phi coefficient"},
    {"manifold-check", "manifold", "geodesic-sphere area ratio against scalar curvature"},
    {"reduce", "reduce", "critical points of the reduced energy"},
    {"verify-expansion", "expansion", "epsilon sweep of the energy and coefficient fit"},
    {"kernel-check", "kernel", "linearized-system residuals of the kernel elements"},
    {"run", nullptr, "every stage listed in the config"},
};

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Critical Lane-Emden systems on model manifolds: ground states, bubble constants, reduced energy"};
  app.set_version_flag("--version", lanemden::tool_version());
  app.require_subcommand(0, 1);
  bool print_schema = false;
  app.add_flag("--print-schema", print_schema, "print the JSON Schema of the config file and exit");

  std::string config_path;
  std::string output_dir;
  bool quiet = false;
  std::map<std::string, CLI::App*> subs;
  for (const auto& c : kCommands) {
    CLI::App* sub = app.add_subcommand(c.name, c.help);
    sub->add_option("config", config_path, "JSON config file (defaults apply to absent keys)");
    sub->add_option("-o,--output-dir", output_dir, "override output.dir");
    sub->add_flag("-q,--quiet", quiet, "do not print the summary");
    sub->add_flag("--print-schema", print_schema, "print the JSON Schema of the config file and exit");
    subs[c.name] = sub;
  }

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e);
  }

  if (print_schema) {
    std::cout << lanemden::config_schema();
    return 0;
  }
  const Command* chosen = nullptr;
  for (const auto& c : kCommands)
    if (subs[c.name]->parsed()) chosen = &c;
  if (!chosen) {
    std::cerr << app.help();
    return 2;
  }

  try {
    lanemden::RunConfig cfg =
        config_path.empty() ? lanemden::RunConfig{} : lanemden::load_config(config_path);
    if (!output_dir.empty()) cfg.output_dir = output_dir;
    lanemden::validate_config(cfg);
    std::vector<std::string> stages;
    if (chosen->stage) stages.push_back(chosen->stage);
    const lanemden::RunReport report = lanemden::run_pipeline(cfg, stages);
    lanemden::write_outputs(report, cfg.output_dir);
    if (!quiet) std::cout << report.summary;
    std::cerr << "outputs written to " << cfg.output_dir << "\n";
    return report.all_passed() ? 0 : 1;
  } catch (const lanemden::Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }
}
