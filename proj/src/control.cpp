#include "slung/control.hpp"

#include <cmath>

namespace slung {

namespace {

constexpr double kThrustEpsilon = 1e-6;       // N
constexpr double kAngleLimitRad = 60.0 * 3.14159265358979323846 / 180.0;

double saturate(double s, double boundary_layer) {
  if (boundary_layer > 0.0) return std::clamp(s / boundary_layer, -1.0, 1.0);
  if (s > 0.0) return 1.0;
  if (s < 0.0) return -1.0;
  return 0.0;
}

}  // namespace

SmcOutput smc_force(const LeaderState& leader, const Vec3& r_q, const Vec3& v_q,
                    const SmcGains& gains, double total_mass) {
  const Vec3 e = leader.r_p - r_q;
  const Vec3 e_v = leader.v_p - v_q;
  SmcOutput out;
  out.surface = gains.lambda.cwiseProduct(e) + e_v;
  Vec3 switching;
  for (int a = 0; a < 3; ++a)
    switching[a] = gains.mu[a] * saturate(out.surface[a], gains.boundary_layer);
  out.force = total_mass * (leader.a_p + gains.lambda.cwiseProduct(e_v) + switching);
  return out;
}

ThrustAttitude extract_thrust_attitude(const Vec3& u_world, double total_mass, double g,
                                       double psi_d) {
  const Vec3 f_des = u_world - total_mass * g * kGravityDir;
  const double f = f_des.norm();
  if (f <= kThrustEpsilon)
    throw SimulationFault(SimulationFault::Kind::DegenerateThrust,
                          "commanded force cancels gravity; thrust direction undefined");

  // Desired body z-axis, then roll/pitch in the yaw-aligned frame.
  const Vec3 b3 = -f_des / f;
  const double cpsi = std::cos(psi_d), spsi = std::sin(psi_d);
  const Vec3 b3_yaw(cpsi * b3.x() + spsi * b3.y(), -spsi * b3.x() + cpsi * b3.y(), b3.z());

  ThrustAttitude out;
  out.thrust = f;
  out.phi_d = std::asin(std::clamp(-b3_yaw.y(), -1.0, 1.0));
  out.theta_d = std::atan2(b3_yaw.x(), b3_yaw.z());
  if (std::abs(out.phi_d) > kAngleLimitRad || std::abs(out.theta_d) > kAngleLimitRad) {
    out.saturated = true;
    out.phi_d = clamp_abs(out.phi_d, kAngleLimitRad);
    out.theta_d = clamp_abs(out.theta_d, kAngleLimitRad);
  }
  return out;
}

Vec3 pid_attitude(const Vec3& euler, const Vec3& euler_rates, const Vec3& desired,
                  const PidGains& gains, PidState& state, double dt) {
  Vec3 torque;
  for (int a = 0; a < 3; ++a) {
    const double err = desired[a] - euler[a];
    state.integral[a] = clamp_abs(state.integral[a] + err * dt, gains.integral_limit);
    torque[a] = gains.k_p[a] * err - gains.k_d[a] * euler_rates[a] +
                gains.k_i[a] * state.integral[a];
  }
  return torque;
}

}  // namespace slung
