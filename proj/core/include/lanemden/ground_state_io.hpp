#pragma once

#include <filesystem>
#include <iosfwd>
#include <string>

#include "lanemden/ground_state.hpp"

namespace lanemden {

inline constexpr int kGroundStateFormatVersion = 1;

void write_ground_state(std::ostream& out, const GroundState& gs);
GroundState read_ground_state(std::istream& in);

void save_ground_state(const std::filesystem::path& path, const GroundState& gs);
GroundState load_ground_state(const std::filesystem::path& path);

// One cache file per (p, N, tolerance, r_max).
std::string cache_file_name(const HyperbolaPoint& hp, const SolverOptions& opts);

// Loads the cached profile when present, otherwise solves and stores it.
// `hit` reports which path was taken.
GroundState load_or_solve(const std::filesystem::path& cache_dir, const HyperbolaPoint& hp,
                          const SolverOptions& opts, bool* hit = nullptr);

}  // namespace lanemden
