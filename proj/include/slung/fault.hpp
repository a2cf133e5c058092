#pragma once

#include <stdexcept>
#include <string>

namespace slung {

// Faults that abort a rollout. They are caught at the rollout boundary and
// recorded in the log; they never escape the sim module.
struct SimulationFault : std::runtime_error {
  enum class Kind { IllConditioned, GimbalLock, DegenerateThrust, ApfLocalMinimum };

  SimulationFault(Kind k, const std::string& msg) : std::runtime_error(msg), kind(k) {}
  Kind kind;
};

}  // namespace slung
