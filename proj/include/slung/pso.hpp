#pragma once

#include <cstdint>
#include <functional>
#include <span>
#include <vector>

#include <Eigen/Dense>

namespace slung {

enum class PsoVariant { Classic, Tviw, Sapso };

struct SwarmConfig {
  int particles = 50;   // N
  int iterations = 100; // K
  int dimensions = 6;   // D
  Eigen::VectorXd lower;  // box bounds, size D
  Eigen::VectorXd upper;
  Eigen::VectorXd v_max;  // velocity clamp; empty selects 0.2 * (upper - lower)

  PsoVariant variant = PsoVariant::Classic;
  double w = 0.6;                  // classic inertia
  double w_min = 0.5, w_max = 0.9; // tviw inertia bounds
  double c1 = 2.0, c2 = 2.0;       // classic / tviw acceleration coefficients
  double alpha = 4.0;              // sapso: c1 + c2 = alpha
  // The printed tviw schedule raises the inertia from w_min to w_max over the
  // run; this flag selects the conventional decreasing profile instead.
  bool tviw_decreasing = false;

  std::uint64_t seed = 0;
  bool parallel = true;  // evaluate the swarm with OpenMP; results are
                         // identical to the serial reference

  Eigen::VectorXd effective_v_max() const;
  void validate() const;  // throws std::invalid_argument
};

struct Particle {
  Eigen::VectorXd x;
  Eigen::VectorXd v;
  Eigen::VectorXd pbest_x;
  double pbest_f = 0.0;
  std::uint64_t substream = 0;  // seed of this particle's RNG stream
};

struct Coefficients {
  double w = 0.0, c1 = 0.0, c2 = 0.0;
};

struct SwarmStats {
  double mean_abs_velocity = 0.0;   // mean |v_ij| over particles and dimensions
  double mean_velocity_limit = 0.0; // mean of the per-dimension clamps
};

// Coefficient schedule at iteration k (0-based).
//   classic: constants.
//   tviw:    w = w_max - (w_max - w_min) cos(pi k / (2 K)).
//   sapso:   w = 1 - exp(-Vbar / Vmax), c1 = alpha w, c2 = alpha - c1.
Coefficients schedule(PsoVariant variant, int k, const SwarmStats& stats,
                      const SwarmConfig& cfg);

SwarmStats swarm_stats(std::span<const Particle> particles, const SwarmConfig& cfg);

// One velocity/position update with the given per-dimension draws r1, r2 in
// [0, 1]. Velocity is clamped elementwise; positions are clipped to the
// bounds with the velocity zeroed on clipped dimensions.
Particle update_particle(const Particle& p, const Eigen::VectorXd& gbest_x,
                         const Coefficients& coeffs, std::span<const double> r1,
                         std::span<const double> r2, const SwarmConfig& cfg);

struct OptimizationResult {
  Eigen::VectorXd gbest_x;
  double gbest_f = 0.0;
  std::vector<double> history;  // best fitness after each iteration, non-increasing
  long evaluations = 0;
  int nonfinite_evaluations = 0;
};

using FitnessFn = std::function<double(const Eigen::VectorXd&)>;

// Runs the swarm for K iterations. Fully deterministic in (seed, cfg,
// fitness): initialization uses per-particle substreams derived from the
// seed, evaluation order never affects the result, and best updates keep the
// incumbent on ties. Non-finite fitness values are treated as +infinity.
OptimizationResult optimize(const FitnessFn& fitness, const SwarmConfig& cfg);

}  // namespace slung
