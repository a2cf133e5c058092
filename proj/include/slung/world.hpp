#pragma once

#include <cstdint>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include "slung/math.hpp"

namespace slung {

// Clearance floor: repulsive field divides by rho^2, so surface distances are
// never reported below this.
inline constexpr double kRhoFloor = 1e-6;

enum class ObstacleShape { VerticalCylinder, Sphere };

struct Obstacle {
  int id = 0;
  ObstacleShape shape = ObstacleShape::VerticalCylinder;
  Vec3 center = Vec3::Zero();  // for cylinders, z is ignored (infinite height)
  double radius = 1.0;
  Vec3 velocity = Vec3::Zero();  // zero for static; z stays zero for cylinders

  bool moving() const { return velocity.squaredNorm() > 0.0; }
};

struct Clearance {
  double rho = 0.0;              // surface distance, clamped to kRhoFloor
  double signed_distance = 0.0;  // unclamped; negative inside the obstacle
  Vec3 grad = Vec3::UnitX();     // unit gradient of rho w.r.t. the query point
  bool degenerate = false;       // query sat exactly on the center/axis
};

enum class DisturbanceMode { None, Constant, SeededBandLimited };

struct DisturbanceSpec {
  DisturbanceMode mode = DisturbanceMode::None;
  Vec3 force_bound = Vec3::Zero();   // N, elementwise >= 0
  Vec3 torque_bound = Vec3::Zero();  // N*m, elementwise >= 0
};

struct Scenario {
  Vec3 start_quad_position = Vec3::Zero();
  Vec3 target_load_position = Vec3::Zero();
  Vec3 target_load_velocity = Vec3::Zero();
  std::vector<Obstacle> obstacles;
  double horizon = 60.0;          // s
  double control_timestep = 1e-3; // s
  DisturbanceSpec disturbance;
  std::uint64_t rng_seed = 0;
};

struct ScenarioError : std::runtime_error {
  ScenarioError(int line_arg, const std::string& field_arg, const std::string& msg)
      : std::runtime_error("scenario error (line " + std::to_string(line_arg) +
                           ", field '" + field_arg + "'): " + msg),
        line(line_arg),
        field(field_arg) {}
  int line;
  std::string field;
};

// Parses and validates a scenario file (grammar documented in README.md).
// Moving-obstacle velocities are drawn here, once, from the scenario seed:
// direction uniform in the horizontal plane, speed uniform in [0.001, 0.5] m/s.
Scenario load_scenario(const std::string& text);

// Constant-velocity kinematics; static obstacles pass through unchanged.
std::vector<Obstacle> advance_obstacles(std::span<const Obstacle> world, double dt);

// Surface distance and its unit gradient at `point`. For cylinders both are
// invariant along z. A query exactly on the center/axis gets the rho floor
// and a deterministic +x gradient, with `degenerate` set.
Clearance obstacle_clearance(const Vec3& point, const Obstacle& obstacle);

// Minimum signed surface distance from `point` over all obstacles
// (+infinity when the world is empty).
double min_signed_clearance(const Vec3& point, std::span<const Obstacle> world);

// Deterministic realization of a disturbance spec. Band-limited mode sums
// three seeded sinusoids per axis with amplitudes normalized so the bound
// holds at all times.
class DisturbanceSampler {
 public:
  DisturbanceSampler() = default;
  DisturbanceSampler(const DisturbanceSpec& spec, std::uint64_t scenario_seed);

  Vec3 force_at(double t) const;
  Vec3 torque_at(double t) const;

 private:
  struct Harmonics {
    double amplitude[3] = {0, 0, 0};
    double omega[3] = {0, 0, 0};
    double phase[3] = {0, 0, 0};
  };
  Vec3 eval(const Harmonics* h, const Vec3& bound, double t) const;

  DisturbanceSpec spec_;
  Harmonics force_h_[3];
  Harmonics torque_h_[3];
};

}  // namespace slung
