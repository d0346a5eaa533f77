#pragma once

#include <filesystem>
#include <string>
#include <vector>

#include "lanemden/config.hpp"

namespace lanemden {

struct Verdict {
  std::string stage;
  std::string name;
  double value = 0.0;
  double threshold = 0.0;
  std::string relation;  // "<=" or ">="
  bool passed = false;
};

struct StageFailure {
  std::string stage;
  std::string code;
  std::string message;
};

struct RunReport {
  std::string config_hash;
  std::string version;
  std::string report_json;  // byte-for-byte reproducible for a given config and version
  std::string report_hash;  // FNV-1a of report_json
  std::string summary;      // human-readable, 6 significant digits
  std::string sweep_csv;    // empty unless the expansion stage ran
  std::string plot_svg;     // empty unless the expansion stage ran and plotting is on
  std::vector<Verdict> verdicts;
  std::vector<StageFailure> failures;

  bool all_passed() const;
};

const char* tool_version();

// LANEMDEN_CACHE_DIR when set, otherwise <output_dir>/cache.
std::filesystem::path cache_directory(const RunConfig& cfg);

// Runs the requested stages (cfg.stages when empty) plus their prerequisites.
// Verdicts are reported for requested stages only. Stage errors are recorded
// as failures and suppress the stages that depend on them.
RunReport run_pipeline(const RunConfig& cfg, const std::vector<std::string>& requested = {});

// Writes report.json, summary.txt and, when present, sweep.csv and plot.svg.
void write_outputs(const RunReport& report, const std::filesystem::path& dir);

}  // namespace lanemden
