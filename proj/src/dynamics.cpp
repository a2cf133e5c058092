#include "slung/dynamics.hpp"

#include <cmath>

namespace slung {

double ModelParams::total_mass() const {
  double m = m_q;
  for (double mi : link_masses) m += mi;
  return m;
}

double ModelParams::mass_from(int i) const {
  double m = 0.0;
  for (int a = i; a < n; ++a) m += link_masses[static_cast<std::size_t>(a)];
  return m;
}

double ModelParams::chain_length() const {
  double l = 0.0;
  for (double li : link_lengths) l += li;
  return l;
}

void ModelParams::validate() const {
  if (n < 1 || n > kMaxLinks) throw std::invalid_argument("link count n must be in [1, 8]");
  if (link_masses.size() != static_cast<std::size_t>(n) ||
      link_lengths.size() != static_cast<std::size_t>(n))
    throw std::invalid_argument("link_masses/link_lengths must have n entries");
  if (!(m_q > 0.0)) throw std::invalid_argument("m_q must be positive");
  for (double m : link_masses)
    if (!(m > 0.0)) throw std::invalid_argument("link masses must be positive");
  for (double l : link_lengths)
    if (!(l > 0.0)) throw std::invalid_argument("link lengths must be positive");
  if (!J_q.isApprox(J_q.transpose(), 1e-12))
    throw std::invalid_argument("J_q must be symmetric");
  Eigen::SelfAdjointEigenSolver<Mat3> es(J_q);
  if (es.eigenvalues().minCoeff() <= 0.0)
    throw std::invalid_argument("J_q must be positive definite");
}

SystemState hanging_state(const ModelParams& p, const Vec3& r_q) {
  SystemState s;
  s.r_q = r_q;
  s.q.assign(static_cast<std::size_t>(p.n), kGravityDir);
  s.omega.assign(static_cast<std::size_t>(p.n), Vec3::Zero());
  return s;
}

ChainMat mass_matrix(const SystemState& state, const ModelParams& p) {
  const int n = p.n;
  const int d = 3 + 3 * n;
  ChainMat m = ChainMat::Zero(d, d);
  m.topLeftCorner<3, 3>() = p.total_mass() * Mat3::Identity();
  for (int i = 0; i < n; ++i) {
    const double li = p.link_lengths[static_cast<std::size_t>(i)];
    const Mat3 qi_hat = hat(state.q[static_cast<std::size_t>(i)]);
    const Mat3 coupling = p.mass_from(i) * li * qi_hat;
    m.block<3, 3>(0, 3 + 3 * i) = -coupling;
    m.block<3, 3>(3 + 3 * i, 0) = coupling;
    m.block<3, 3>(3 + 3 * i, 3 + 3 * i) = p.mass_from(i) * li * li * Mat3::Identity();
    for (int j = i + 1; j < n; ++j) {
      const double lj = p.link_lengths[static_cast<std::size_t>(j)];
      const Mat3 qj_hat = hat(state.q[static_cast<std::size_t>(j)]);
      const Mat3 off = -p.mass_pair(i, j) * li * lj * qi_hat * qj_hat;
      m.block<3, 3>(3 + 3 * i, 3 + 3 * j) = off;
      m.block<3, 3>(3 + 3 * j, 3 + 3 * i) = off.transpose();
    }
  }
  return m;
}

ChainVec coriolis_vector(const SystemState& state, const ModelParams& p) {
  const int n = p.n;
  const int d = 3 + 3 * n;
  ChainVec c = ChainVec::Zero(d);

  Vec3 c_rq = -p.total_mass() * p.g * kGravityDir;
  for (int i = 0; i < n; ++i) {
    const auto ui = static_cast<std::size_t>(i);
    c_rq -= p.mass_from(i) * p.link_lengths[ui] * state.omega[ui].squaredNorm() * state.q[ui];
  }
  c.head<3>() = c_rq;

  for (int i = 0; i < n; ++i) {
    const auto ui = static_cast<std::size_t>(i);
    const double li = p.link_lengths[ui];
    Vec3 inner = p.mass_from(i) * p.g * kGravityDir;
    for (int j = 0; j < n; ++j) {
      if (j == i) continue;
      const auto uj = static_cast<std::size_t>(j);
      inner += p.mass_pair(i, j) * p.link_lengths[uj] * state.omega[uj].squaredNorm() *
               state.q[uj];
    }
    c.segment<3>(3 + 3 * i) = -li * state.q[ui].cross(inner);
  }
  return c;
}

namespace {

// Factor + solve with a crude conditioning estimate from the Cholesky
// diagonal; the chain mass matrix is SPD whenever the state invariants hold.
ChainVec solve_chain(const SystemState& state, const WrenchInput& u, const ModelParams& p) {
  const ChainMat m = mass_matrix(state, p);
  ChainVec rhs = -coriolis_vector(state, p);
  rhs.head<3>() += -u.thrust * (euler_zyx_to_rotation(state.euler) * kGravityDir) +
                   u.force_disturbance;

  Eigen::LLT<ChainMat> llt(m);
  if (llt.info() != Eigen::Success)
    throw SimulationFault(SimulationFault::Kind::IllConditioned,
                          "chain mass matrix factorization failed");
  const auto diag = llt.matrixLLT().diagonal();
  const double dmax = diag.maxCoeff();
  const double dmin = diag.minCoeff();
  if (!(dmin > 0.0) || (dmax / dmin) * (dmax / dmin) > 1e12)
    throw SimulationFault(SimulationFault::Kind::IllConditioned,
                          "chain mass matrix condition estimate above 1e12");
  return llt.solve(rhs);
}

}  // namespace

Accelerations solve_accelerations(const SystemState& state, const WrenchInput& u,
                                  const ModelParams& p) {
  const ChainVec x = solve_chain(state, u, p);
  Accelerations acc;
  acc.linear = x.head<3>();
  acc.omega_dot.resize(static_cast<std::size_t>(p.n));
  for (int i = 0; i < p.n; ++i) acc.omega_dot[static_cast<std::size_t>(i)] = x.segment<3>(3 + 3 * i);
  return acc;
}

namespace {

// Packed layout for the integrator: r_q v_q | q_i | omega_i | euler Omega.
using PackedState = Eigen::Matrix<double, Eigen::Dynamic, 1, 0, 12 + 6 * kMaxLinks, 1>;

PackedState pack(const SystemState& s, int n) {
  PackedState y(12 + 6 * n);
  y.segment<3>(0) = s.r_q;
  y.segment<3>(3) = s.v_q;
  for (int i = 0; i < n; ++i) {
    y.segment<3>(6 + 3 * i) = s.q[static_cast<std::size_t>(i)];
    y.segment<3>(6 + 3 * n + 3 * i) = s.omega[static_cast<std::size_t>(i)];
  }
  y.segment<3>(6 + 6 * n) = s.euler;
  y.segment<3>(9 + 6 * n) = s.body_rates;
  return y;
}

SystemState unpack(const PackedState& y, int n) {
  SystemState s;
  s.r_q = y.segment<3>(0);
  s.v_q = y.segment<3>(3);
  s.q.resize(static_cast<std::size_t>(n));
  s.omega.resize(static_cast<std::size_t>(n));
  for (int i = 0; i < n; ++i) {
    s.q[static_cast<std::size_t>(i)] = y.segment<3>(6 + 3 * i);
    s.omega[static_cast<std::size_t>(i)] = y.segment<3>(6 + 3 * n + 3 * i);
  }
  s.euler = y.segment<3>(6 + 6 * n);
  s.body_rates = y.segment<3>(9 + 6 * n);
  return s;
}

PackedState derivative(const PackedState& y, const WrenchInput& u, const ModelParams& p,
                       const Mat3& j_inv) {
  const int n = p.n;
  const SystemState s = unpack(y, n);
  const ChainVec acc = solve_chain(s, u, p);

  PackedState dy(12 + 6 * n);
  dy.segment<3>(0) = s.v_q;
  dy.segment<3>(3) = acc.head<3>();
  for (int i = 0; i < n; ++i) {
    const auto ui = static_cast<std::size_t>(i);
    dy.segment<3>(6 + 3 * i) = s.omega[ui].cross(s.q[ui]);
    dy.segment<3>(6 + 3 * n + 3 * i) = acc.segment<3>(3 + 3 * i);
  }
  dy.segment<3>(6 + 6 * n) = body_rates_to_euler_rates(s.euler, s.body_rates);
  const Vec3 j_omega = p.J_q * s.body_rates;
  dy.segment<3>(9 + 6 * n) =
      j_inv * (s.body_rates.cross(j_omega) + u.torque + u.torque_disturbance);
  return dy;
}

constexpr double kGimbalLimitRad = 80.0 * 3.14159265358979323846 / 180.0;

}  // namespace

SystemState step(const SystemState& state, const WrenchInput& u, const ModelParams& p,
                 double dt) {
  const int n = p.n;
  const Mat3 j_inv = p.J_q.inverse();
  const PackedState y0 = pack(state, n);
  const PackedState k1 = derivative(y0, u, p, j_inv);
  const PackedState k2 = derivative(y0 + 0.5 * dt * k1, u, p, j_inv);
  const PackedState k3 = derivative(y0 + 0.5 * dt * k2, u, p, j_inv);
  const PackedState k4 = derivative(y0 + dt * k3, u, p, j_inv);
  SystemState out = unpack(y0 + (dt / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4), n);

  for (int i = 0; i < n; ++i) {
    const auto ui = static_cast<std::size_t>(i);
    out.q[ui].normalize();
    out.omega[ui] -= out.omega[ui].dot(out.q[ui]) * out.q[ui];
  }
  if (std::abs(out.euler.y()) > kGimbalLimitRad)
    throw SimulationFault(SimulationFault::Kind::GimbalLock,
                          "pitch magnitude exceeded 80 deg");
  return out;
}

Vec3 load_position(const SystemState& state, const ModelParams& p, bool straight_line_approx) {
  if (straight_line_approx) return state.r_q + p.chain_length() * kGravityDir;
  Vec3 r = state.r_q;
  for (int i = 0; i < p.n; ++i)
    r += p.link_lengths[static_cast<std::size_t>(i)] * state.q[static_cast<std::size_t>(i)];
  return r;
}

double total_energy(const SystemState& state, const ModelParams& p) {
  const int n = p.n;
  ChainVec xi(3 + 3 * n);
  xi.head<3>() = state.v_q;
  for (int i = 0; i < n; ++i) xi.segment<3>(3 + 3 * i) = state.omega[static_cast<std::size_t>(i)];
  const double kinetic = 0.5 * xi.dot(mass_matrix(state, p) * xi) +
                         0.5 * state.body_rates.dot(p.J_q * state.body_rates);

  // Gravity acts along +e3; higher altitude (more negative z) is higher potential.
  double potential = -p.m_q * p.g * state.r_q.dot(kGravityDir);
  Vec3 point = state.r_q;
  for (int i = 0; i < n; ++i) {
    const auto ui = static_cast<std::size_t>(i);
    point += p.link_lengths[ui] * state.q[ui];
    potential -= p.link_masses[ui] * p.g * point.dot(kGravityDir);
  }
  return kinetic + potential;
}

}  // namespace slung
