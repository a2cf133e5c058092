#pragma once

#include <vector>

#include "slung/fault.hpp"
#include "slung/math.hpp"

namespace slung {

// Chain sizes are small (the reference vehicle uses n = 3), so system
// matrices live on the stack with a compile-time capacity.
inline constexpr int kMaxLinks = 8;
inline constexpr int kMaxDim = 3 + 3 * kMaxLinks;

using ChainVec = Eigen::Matrix<double, Eigen::Dynamic, 1, 0, kMaxDim, 1>;
using ChainMat = Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, 0, kMaxDim, kMaxDim>;

struct ModelParams {
  int n = 3;         // link count; the last link carries the payload mass
  double m_q = 0.775;
  Mat3 J_q = Vec3(0.577e-2, 0.577e-2, 1.05e-2).asDiagonal();
  std::vector<double> link_masses{0.05, 0.05, 0.25};
  std::vector<double> link_lengths{0.25, 0.25, 0.25};
  double g = 9.81;

  // M_T: vehicle plus every link mass.
  double total_mass() const;
  // M_qi (0-based): sum of link masses from index i to the payload.
  double mass_from(int i) const;
  // M_cij = M_q,max(i,j): mass carried jointly by links i and j.
  double mass_pair(int i, int j) const { return mass_from(i > j ? i : j); }
  double chain_length() const;

  void validate() const;  // throws std::invalid_argument naming the violation
};

struct SystemState {
  Vec3 r_q = Vec3::Zero();
  Vec3 v_q = Vec3::Zero();
  std::vector<Vec3> q;      // unit link directions, quadrotor outward
  std::vector<Vec3> omega;  // link angular velocities, omega_i orthogonal to q_i
  Vec3 euler = Vec3::Zero();       // ZYX (phi, theta, psi)
  Vec3 body_rates = Vec3::Zero();  // Omega_q in the body frame
};

// Links hanging straight down (+e3), everything at rest.
SystemState hanging_state(const ModelParams& p, const Vec3& r_q);

struct WrenchInput {
  double thrust = 0.0;  // f >= 0; acts along -R e3 in the inertial frame
  Vec3 torque = Vec3::Zero();
  Vec3 force_disturbance = Vec3::Zero();
  Vec3 torque_disturbance = Vec3::Zero();
};

struct Accelerations {
  Vec3 linear;                  // \dot v_q
  std::vector<Vec3> omega_dot;  // per link
};

// Mass matrix of the translational/link chain, dimension d = 3 + 3n.
// Symmetric positive definite for any state satisfying the invariants.
ChainMat mass_matrix(const SystemState& state, const ModelParams& p);

// Stacked Coriolis/gravity vector C; the chain obeys M * dX = T - C with
// T = [-f R e3 + F_dis, 0, ..., 0].
ChainVec coriolis_vector(const SystemState& state, const ModelParams& p);

// Solves M dX = T - C by Cholesky factorization. Throws SimulationFault
// (IllConditioned) when the factorization degenerates.
Accelerations solve_accelerations(const SystemState& state, const WrenchInput& u,
                                  const ModelParams& p);

// One classical RK4 step of the full state (chain, attitude, Euler angles).
// Link directions are renormalized and angular velocities re-projected onto
// the tangent plane afterwards. Throws SimulationFault on gimbal proximity
// (|theta| > 80 deg) or chain solve failure.
SystemState step(const SystemState& state, const WrenchInput& u, const ModelParams& p,
                 double dt);

// Exact chained payload position r_q + sum_i l_i q_i. With
// straight_line_approx the configuration-independent hang point
// r_q + (sum_i l_i) e3 is returned instead.
Vec3 load_position(const SystemState& state, const ModelParams& p,
                   bool straight_line_approx = false);

// Kinetic energy through the same mass matrix used by solve_accelerations,
// plus rotational kinetic energy and gravitational potential (datum z = 0).
double total_energy(const SystemState& state, const ModelParams& p);

}  // namespace slung
