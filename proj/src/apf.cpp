#include "slung/apf.hpp"

#include <cmath>

namespace slung {

namespace {
constexpr double kGoalDistanceFloor = 1e-6;
}

Potential attractive(const Vec3& r_l, const Vec3& r_t, const ApfGains& gains) {
  const Vec3 e = r_l - r_t;
  Potential p;
  p.value = 0.5 * gains.k_att.dot(e.cwiseProduct(e));
  p.force = -gains.k_att.cwiseProduct(e);
  return p;
}

Potential repulsive(const Vec3& r_l, const Vec3& r_t, std::span<const Obstacle> obstacles,
                    const ApfGains& gains) {
  Potential p;
  const Vec3 e = r_l - r_t;
  const double rho_t = e.norm();
  const double rho_t_safe = std::max(rho_t, kGoalDistanceFloor);
  const Vec3 grad_rho_t = e / rho_t_safe;
  const double mean_gain = gains.k_rep.mean();

  for (const auto& obs : obstacles) {
    const Clearance c = obstacle_clearance(r_l, obs);
    if (c.rho > gains.rho0) continue;
    const double common = 1.0 / c.rho - 1.0 / gains.rho0;
    const double goal_pow = std::pow(rho_t, gains.n_exp);

    p.value += 0.5 * mean_gain * common * common * goal_pow;

    Vec3 contribution = (common * goal_pow / (c.rho * c.rho)) * c.grad;
    if (gains.n_exp > 0.0) {
      const double goal_pow_m1 = std::pow(rho_t_safe, gains.n_exp - 1.0);
      contribution -= (0.5 * gains.n_exp * common * common * goal_pow_m1) * grad_rho_t;
    }
    p.force += gains.k_rep.cwiseProduct(contribution);
  }
  return p;
}

LeaderState leader_step(const LeaderState& leader, const Vec3& r_t, const Vec3& v_t,
                        std::span<const Obstacle> obstacles, const ApfGains& gains,
                        double dt) {
  const Vec3 load_ref = leader.r_p + leader.load_offset;
  const Vec3 force = attractive(load_ref, r_t, gains).force +
                     repulsive(load_ref, r_t, obstacles, gains).force -
                     gains.leader_damping * (leader.v_p - v_t);

  LeaderState out = leader;
  Vec3 v = leader.v_p + force * dt;
  const double speed = v.norm();
  if (speed > gains.v_p_max) v *= gains.v_p_max / speed;
  out.v_p = v;
  out.r_p = leader.r_p + v * dt;
  out.a_p = (v - leader.v_p) / dt;
  return out;
}

}  // namespace slung
