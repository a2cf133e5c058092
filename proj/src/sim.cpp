#include "slung/sim.hpp"

#include <cmath>
#include <limits>

namespace slung {

const char* termination_name(Termination t) {
  switch (t) {
    case Termination::Horizon: return "horizon";
    case Termination::Settled: return "settled";
    case Termination::Collision: return "collision";
    case Termination::Fault: return "fault";
  }
  return "unknown";
}

RolloutLog rollout(const Scenario& scenario, const ApfGains& gains, const SmcGains& smc,
                   const PidGains& pid, const ModelParams& model,
                   const RolloutConfig& config) {
  model.validate();
  const double dt = config.dt_override.value_or(scenario.control_timestep);
  const double total_mass = model.total_mass();
  const Vec3 r_t = scenario.target_load_position;
  const long max_steps = std::lround(scenario.horizon / dt);

  RolloutLog log;
  log.dt = dt;
  log.horizon = scenario.horizon;
  log.margin_warning = !reaching_margin_ok(smc);
  log.steps.reserve(static_cast<std::size_t>(max_steps) + 1);

  std::vector<Obstacle> obstacles = scenario.obstacles;
  const DisturbanceSampler disturbance(scenario.disturbance, scenario.rng_seed);

  SystemState state = hanging_state(model, scenario.start_quad_position);
  LeaderState leader;
  leader.r_p = scenario.start_quad_position;
  leader.load_offset = model.chain_length() * kGravityDir;
  PidState pid_state;

  double settle_enter = -1.0;      // negative means "not inside the window"
  double stagnation_enter = -1.0;

  for (long k = 0;; ++k) {
    const double t = static_cast<double>(k) * dt;
    if (k > 0) {
      for (auto& o : obstacles) o.center += o.velocity * dt;
      leader = leader_step(leader, r_t, scenario.target_load_velocity, obstacles, gains, dt);
    }

    SmcOutput smc_out;
    ThrustAttitude ta;
    Vec3 torque;
    try {
      smc_out = smc_force(leader, state.r_q, state.v_q, smc, total_mass);
      ta = extract_thrust_attitude(smc_out.force, total_mass, model.g, 0.0);
      const Vec3 euler_rates = body_rates_to_euler_rates(state.euler, state.body_rates);
      torque = pid_attitude(state.euler, euler_rates, Vec3(ta.phi_d, ta.theta_d, 0.0), pid,
                            pid_state, dt);
    } catch (const SimulationFault& fault) {
      log.termination = Termination::Fault;
      log.fault_reason = fault.what();
      break;
    }

    const Vec3 load = load_position(state, model);
    double clearance = std::numeric_limits<double>::infinity();
    for (const auto& o : obstacles) {
      clearance = std::min(clearance, obstacle_clearance(state.r_q, o).signed_distance);
      clearance = std::min(clearance, obstacle_clearance(load, o).signed_distance);
    }

    log.steps.push_back(RolloutStep{t, state.r_q, state.v_q, load, leader.r_p, state.euler,
                                    smc_out.surface, smc_out.force, ta.thrust, clearance});

    if (clearance < 0.0) {
      log.termination = Termination::Collision;
      break;
    }

    const double err = (load - r_t).norm();
    if (err < config.settle_tolerance) {
      if (settle_enter < 0.0) settle_enter = t;
      if (t - settle_enter >= config.settle_hold) {
        log.termination = Termination::Settled;
        log.settle_time = settle_enter;
        break;
      }
    } else {
      settle_enter = -1.0;
    }

    if (leader.v_p.norm() < config.stagnation_speed && err > config.settle_tolerance) {
      if (stagnation_enter < 0.0) stagnation_enter = t;
      if (t - stagnation_enter >= config.stagnation_hold) {
        log.termination = Termination::Fault;
        log.fault_reason = "apf-local-minimum";
        break;
      }
    } else {
      stagnation_enter = -1.0;
    }

    if (k >= max_steps) {
      log.termination = Termination::Horizon;
      if (settle_enter >= 0.0 && t - settle_enter >= config.settle_hold)
        log.settle_time = settle_enter;
      break;
    }

    try {
      const WrenchInput u{ta.thrust, torque, disturbance.force_at(t), disturbance.torque_at(t)};
      state = step(state, u, model, dt);
    } catch (const SimulationFault& fault) {
      log.termination = Termination::Fault;
      log.fault_reason = fault.what();
      break;
    }
  }
  return log;
}

FitnessReport fitness(const RolloutLog& log, const Vec3& r_t, double collision_penalty) {
  FitnessReport report;
  report.settle_time = log.settle_time;
  report.collided = log.termination == Termination::Collision;
  report.min_clearance = std::numeric_limits<double>::infinity();

  double prev_integrand = 0.0;
  double prev_t = 0.0;
  bool first = true;
  for (const auto& s : log.steps) {
    const double err = (s.load - r_t).norm();
    const double integrand = s.t * err;
    if (!first) report.J += 0.5 * (integrand + prev_integrand) * (s.t - prev_t);
    prev_integrand = integrand;
    prev_t = s.t;
    first = false;
    report.final_error = err;
    report.min_clearance = std::min(report.min_clearance, s.min_clearance);
  }

  if (log.termination == Termination::Collision || log.termination == Termination::Fault) {
    const double t_end = log.steps.empty() ? 0.0 : log.steps.back().t;
    report.J += collision_penalty * (log.horizon - t_end) * log.horizon;
  }
  return report;
}

TuneResult tune(const Scenario& scenario, const ModelParams& model, const SmcGains& smc,
                const PidGains& pid, const SwarmConfig& swarm_cfg, const ApfGains& base_gains,
                const TuneConfig& tune_cfg) {
  if (swarm_cfg.dimensions != 6)
    throw std::invalid_argument("gain tuning expects a 6-dimensional swarm");

  RolloutConfig rc;
  rc.dt_override = tune_cfg.fitness_dt;
  const Vec3 r_t = scenario.target_load_position;

  FitnessFn fn = [&](const Eigen::VectorXd& x) {
    ApfGains g = base_gains;
    g.k_rep = Vec3(x[0], x[1], x[2]);
    g.k_att = Vec3(x[3], x[4], x[5]);
    const RolloutLog log = rollout(scenario, g, smc, pid, model, rc);
    return fitness(log, r_t, tune_cfg.collision_penalty).J;
  };

  TuneResult result;
  result.optimization = optimize(fn, swarm_cfg);
  result.best_gains = base_gains;
  result.best_gains.k_rep = Vec3(result.optimization.gbest_x[0], result.optimization.gbest_x[1],
                                 result.optimization.gbest_x[2]);
  result.best_gains.k_att = Vec3(result.optimization.gbest_x[3], result.optimization.gbest_x[4],
                                 result.optimization.gbest_x[5]);
  return result;
}

}  // namespace slung
