#pragma once

#include "slung/apf.hpp"
#include "slung/fault.hpp"
#include "slung/math.hpp"

namespace slung {

struct SmcGains {
  Vec3 lambda{0.4, 0.4, 0.8};    // sliding-surface slopes, 1/s
  Vec3 mu{0.6, 0.6, 0.8};        // reaching gains
  double boundary_layer = 0.05;  // 0 recovers the pure switching law
  Vec3 f_d{0.01, 0.01, 0.01};    // disturbance bound
  Vec3 f_p{0.01, 0.01, 0.01};    // load-effect bound
};

// Per-axis reaching margin mu - (f_d + f_p). The closed position loop is
// asymptotically stable when every component is positive; callers surface a
// warning otherwise.
inline Vec3 reaching_margin(const SmcGains& g) { return g.mu - (g.f_d + g.f_p); }
inline bool reaching_margin_ok(const SmcGains& g) { return (reaching_margin(g).array() > 0.0).all(); }

struct SmcOutput {
  Vec3 force;    // commanded net force on the vehicle, world frame, N
  Vec3 surface;  // sliding surface S, for logging and reaching checks
};

// Sliding-mode position law tracking the virtual leader:
//   e = r_p - r_q, e_v = v_p - v_q, S = lambda o e + e_v,
//   U = M_T (a_p + lambda o e_v + mu o sat(S / phi_bl)).
// sat degenerates to sgn (with sgn(0) = 0) when the boundary layer is zero.
SmcOutput smc_force(const LeaderState& leader, const Vec3& r_q, const Vec3& v_q,
                    const SmcGains& gains, double total_mass);

struct ThrustAttitude {
  double thrust = 0.0;  // f, N
  double phi_d = 0.0;
  double theta_d = 0.0;
  bool saturated = false;  // a desired angle hit the +-60 deg clamp
};

// Maps the commanded world-frame force to thrust magnitude and desired roll/
// pitch for a given yaw. The desired force the rotors must realize is
// U - M_T g e3 (thrust cancels gravity plus the command). Throws
// SimulationFault (DegenerateThrust) when that force vanishes.
ThrustAttitude extract_thrust_attitude(const Vec3& u_world, double total_mass, double g,
                                       double psi_d);

// Defaults are shaped for the reference inertia (about 8 rad/s, critically
// damped per axis).
struct PidGains {
  Vec3 k_p{0.4, 0.4, 0.6};
  Vec3 k_d{0.09, 0.09, 0.15};
  Vec3 k_i{0.04, 0.04, 0.05};
  double integral_limit = 0.5;  // anti-windup clamp on each integral, rad*s
};

struct PidState {
  Vec3 integral = Vec3::Zero();
};

// Per-axis PID on the Euler angles with rectangle-rule integrals:
//   u = k_p (desired - actual) - k_d rate + k_i integral.
// Desired angular rates are zero. Returns the body torque command.
Vec3 pid_attitude(const Vec3& euler, const Vec3& euler_rates, const Vec3& desired,
                  const PidGains& gains, PidState& state, double dt);

}  // namespace slung
