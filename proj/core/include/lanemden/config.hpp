#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "lanemden/bubble_constants.hpp"
#include "lanemden/ground_state.hpp"
#include "lanemden/manifold.hpp"
#include "lanemden/potential.hpp"

namespace lanemden {

struct ManifoldConfig {
  std::string kind = "torus";   // "torus" or "sphere"
  double radius = 1.0;          // sphere
  std::vector<double> periods;  // torus; empty selects N copies of 2 pi
};

struct SearchConfig {
  int starts = 64;
  double gtol = 1e-10;
  int max_iterations = 200;
};

struct KernelConfig {
  double window = 0.8;
  std::uint64_t control_seed = 7;
};

inline const std::vector<std::string>& all_stages() {
  static const std::vector<std::string> s{"hyperbola", "ground_state", "constants", "manifold",
                                          "reduce",    "expansion",    "kernel"};
  return s;
}

struct RunConfig {
  std::string p = "3/2";
  std::optional<std::string> q;  // derived from the hyperbola when absent
  int N = 8;
  ManifoldConfig manifold;
  PotentialSpec potential = ConstantPotential{8.0};
  int k = 1;
  double alpha = 1.0;
  double beta = 1.0;
  double rho1 = 1e-3;
  double rho2 = 0.0;  // 0 selects 2.02 r0
  double r0 = 0.0;    // 0 selects injectivity/4
  SolverOptions solver;
  ConstantsOptions quadrature;
  SearchConfig search;
  KernelConfig kernel;
  std::vector<double> epsilon;  // empty selects default_epsilon_grid()
  std::vector<Point> peaks;     // expansion peaks; empty selects the base point (k = 1)
  std::vector<std::string> stages = all_stages();
  std::string output_dir = "lanemden-out";
  std::uint64_t seed = 20240601;
  bool plot = true;
};

// Throws ConfigInvalid on syntax errors, unknown keys, wrong types or values
// that fail validate_config.
RunConfig parse_config(const std::string& text);
RunConfig load_config(const std::string& path);

// Canonical JSON text: every field present, keys sorted.
std::string serialize_config(const RunConfig& cfg);

// Throws ConfigInvalid (or the hyperbola error) before any compute happens.
void validate_config(const RunConfig& cfg);

// JSON Schema describing every key and its default.
std::string config_schema();

std::uint64_t fnv1a(const std::string& bytes);
std::string hex64(std::uint64_t v);
std::string config_hash(const RunConfig& cfg);

HyperbolaPoint config_hyperbola(const RunConfig& cfg);
ModelManifold config_manifold(const RunConfig& cfg);
double config_r0(const RunConfig& cfg, const ModelManifold& m);
std::vector<double> config_epsilon(const RunConfig& cfg);

}  // namespace lanemden
