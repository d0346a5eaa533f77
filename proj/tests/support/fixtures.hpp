#pragma once

#include <map>
#include <mutex>
#include <string>
#include <utility>

#include "lanemden/bubble_constants.hpp"
#include "lanemden/ground_state.hpp"

namespace fixture {

// Ground states and constants are solved once per test process.
inline const lanemden::GroundState& ground_state(const std::string& p, int N) {
  static std::map<std::pair<std::string, int>, lanemden::GroundState> cache;
  static std::mutex mu;
  std::lock_guard lock(mu);
  const auto key = std::make_pair(p, N);
  auto it = cache.find(key);
  if (it == cache.end())
    it = cache.emplace(key, lanemden::solve_ground_state(lanemden::make_hyperbola_point(lanemden::Exponent::parse(p), N)))
             .first;
  return it->second;
}

inline const lanemden::BubbleConstants& constants(const std::string& p, int N) {
  static std::map<std::pair<std::string, int>, lanemden::BubbleConstants> cache;
  const auto key = std::make_pair(p, N);
  auto it = cache.find(key);
  if (it == cache.end()) it = cache.emplace(key, lanemden::compute_constants(ground_state(p, N))).first;
  return it->second;
}

}  // namespace fixture
