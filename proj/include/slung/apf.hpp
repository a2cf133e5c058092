#pragma once

#include <span>

#include "slung/math.hpp"
#include "slung/world.hpp"

namespace slung {

struct ApfGains {
  Vec3 k_rep{0.065, 0.065, 0.065};  // repulsive gains (k_xm, k_ym, k_zm)
  Vec3 k_att{0.012, 0.012, 0.012};  // attractive gains (k_xt, k_yt, k_zt)
  double rho0 = 8.0;                // obstacle influence radius, m
  double n_exp = 1.0;               // goal-distance exponent: 0, 0.5, 1 or 2

  // Leader integration parameters. The damping force -c (v_p - v_t) is a
  // fixed property of the virtual point; without it a second-order point
  // under a pure spring force orbits the goal and never settles, and the
  // arrival overshoot it trades against is what keeps huge attractive gains
  // from always winning the tuning.
  double v_p_max = 3.0;         // leader speed clamp, m/s
  double leader_damping = 0.25; // c, 1/s; 0 disables damping
};

// Virtual leader the position controller tracks. r_p is the vehicle-level
// reference; the potential field is evaluated at r_p + load_offset (the
// point where the payload hangs).
struct LeaderState {
  Vec3 r_p = Vec3::Zero();
  Vec3 v_p = Vec3::Zero();
  Vec3 a_p = Vec3::Zero();
  Vec3 load_offset = Vec3::Zero();
};

struct Potential {
  double value = 0.0;
  Vec3 force = Vec3::Zero();
};

// Axis-weighted quadratic well around the target: U = 1/2 sum k (r - r_t)^2,
// F = -k o (r - r_t). Exact gradient pair for any gains.
Potential attractive(const Vec3& r_l, const Vec3& r_t, const ApfGains& gains);

// Goal-distance-weighted repulsion summed over in-range obstacles. Per
// obstacle with clearance rho <= rho0 and goal distance rho_t:
//
//   U    = 1/2 k (1/rho - 1/rho0)^2 rho_t^n
//   F    = k o [ (1/rho - 1/rho0) rho_t^n / rho^2 * grad_rho
//              - n/2 (1/rho - 1/rho0)^2 rho_t^(n-1) * grad_rho_t ]
//
// Out-of-range obstacles contribute exactly zero. The force applies each
// axis gain to its own component; the reported potential uses the mean gain,
// so the pair is an exact gradient match for isotropic gains. rho_t is
// floored at 1e-6 m inside the second term, which is singular at the goal
// for 0 < n < 1.
Potential repulsive(const Vec3& r_l, const Vec3& r_t, std::span<const Obstacle> obstacles,
                    const ApfGains& gains);

// Advances the leader one control step: total force evaluated at the
// load-reference point, semi-implicit Euler (velocity first), speed clamp.
// a_p in the result is the realized velocity change over dt, so downstream
// feedforward stays consistent when the clamp engages.
LeaderState leader_step(const LeaderState& leader, const Vec3& r_t, const Vec3& v_t,
                        std::span<const Obstacle> obstacles, const ApfGains& gains,
                        double dt);

}  // namespace slung
