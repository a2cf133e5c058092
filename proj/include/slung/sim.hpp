#pragma once

#include <optional>
#include <string>
#include <vector>

#include "slung/apf.hpp"
#include "slung/control.hpp"
#include "slung/dynamics.hpp"
#include "slung/pso.hpp"
#include "slung/world.hpp"

namespace slung {

enum class Termination { Horizon, Settled, Collision, Fault };

const char* termination_name(Termination t);

struct RolloutStep {
  double t = 0.0;
  Vec3 r_q, v_q;
  Vec3 load;    // exact chained payload position
  Vec3 leader;  // r_p
  Vec3 euler;
  Vec3 surface;    // sliding surface S
  Vec3 force_cmd;  // position-loop force U, world frame
  double thrust = 0.0;
  double min_clearance = 0.0;  // min signed clearance of vehicle and load
};

struct RolloutLog {
  std::vector<RolloutStep> steps;  // uniform grid, spacing dt, starting at 0
  double dt = 0.0;
  double horizon = 0.0;
  Termination termination = Termination::Horizon;
  std::optional<double> settle_time;  // when the error entered the hold window
  std::string fault_reason;
  bool margin_warning = false;  // reaching margin was non-positive on some axis
};

struct RolloutConfig {
  std::optional<double> dt_override;  // replaces the scenario timestep
  double settle_tolerance = 0.25;     // m
  double settle_hold = 2.0;           // s
  double stagnation_speed = 1e-3;     // leader speed below this counts as stuck
  double stagnation_hold = 5.0;       // s
};

// Closed-loop rollout: obstacles and leader advance first, then the sliding-
// mode position loop, thrust/attitude extraction and attitude PID command the
// vehicle, and the chain dynamics step. Terminates on horizon, sustained
// settling, collision (vehicle or payload touching an obstacle), leader
// stagnation, or a dynamics/attitude fault. Faults are recorded in the log,
// never thrown.
RolloutLog rollout(const Scenario& scenario, const ApfGains& gains, const SmcGains& smc,
                   const PidGains& pid, const ModelParams& model,
                   const RolloutConfig& config = {});

struct FitnessReport {
  double J = 0.0;
  double final_error = 0.0;  // m
  std::optional<double> settle_time;
  double min_clearance = 0.0;
  bool collided = false;
};

// Time-weighted tracking cost: J = integral of t * |load(t) - r_t| dt by the
// trapezoid rule on the log grid. Rollouts cut short by a collision or fault
// are charged penalty * (horizon - t_end) * horizon on top, so aborting early
// never beats flying clean.
FitnessReport fitness(const RolloutLog& log, const Vec3& r_t, double collision_penalty = 10.0);

struct TuneConfig {
  double fitness_dt = 1e-2;  // coarse timestep for the tuning rollouts
  double collision_penalty = 10.0;
};

struct TuneResult {
  ApfGains best_gains;
  OptimizationResult optimization;
};

// PSO over the six potential-field gains [k_xm, k_ym, k_zm, k_xt, k_yt, k_zt].
// base_gains supplies everything the swarm does not tune (rho0, n_exp, leader
// parameters). Deterministic given the config seed; swarm evaluation runs in
// parallel when cfg.parallel is set.
TuneResult tune(const Scenario& scenario, const ModelParams& model, const SmcGains& smc,
                const PidGains& pid, const SwarmConfig& swarm_cfg, const ApfGains& base_gains,
                const TuneConfig& tune_cfg = {});

}  // namespace slung
