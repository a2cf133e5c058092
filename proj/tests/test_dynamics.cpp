#include "doctest.h"

#include <cmath>
#include <numbers>

#include "slung/dynamics.hpp"
#include "oracles.hpp"

using namespace slung;

namespace {

ModelParams paper_params() { return ModelParams{}; }

ModelParams single_link(double m_q = 1.5, double m_1 = 0.3, double l = 0.4) {
  ModelParams p;
  p.n = 1;
  p.m_q = m_q;
  p.link_masses = {m_1};
  p.link_lengths = {l};
  return p;
}

}  // namespace

TEST_CASE("hat map") {
  CHECK(hat(Vec3::Zero()) == Mat3::Zero());
  CHECK(hat(Vec3(1, 0, 0)) * Vec3(0, 1, 0) == Vec3(0, 0, 1));
  Rng rng(3);
  for (int i = 0; i < 20; ++i) {
    const Vec3 v = test::random_unit(rng) * rng.uniform(0, 4);
    const Vec3 w = test::random_unit(rng) * rng.uniform(0, 4);
    CHECK((hat(v).transpose() + hat(v)).norm() == 0.0);
    CHECK((hat(v) * w - v.cross(w)).norm() == 0.0);
  }
}

TEST_CASE("mass matrix structure") {
  SUBCASE("single link top-left block is the total mass") {
    const ModelParams p = single_link();
    const SystemState s = hanging_state(p, Vec3::Zero());
    const ChainMat m = mass_matrix(s, p);
    CHECK(m.rows() == 6);
    CHECK(m.topLeftCorner<3, 3>().isApprox((p.m_q + 0.3) * Mat3::Identity(), 1e-14));
  }
  SUBCASE("reference masses sum to 1.125 kg") {
    const ModelParams p = paper_params();
    CHECK(p.total_mass() == doctest::Approx(1.125));
    const SystemState s = hanging_state(p, Vec3::Zero());
    const ChainMat m = mass_matrix(s, p);
    for (int a = 0; a < 3; ++a) CHECK(m(a, a) == doctest::Approx(1.125));
  }
}

TEST_CASE("mass matrix is symmetric positive definite over random states") {
  const ModelParams p = paper_params();
  Rng rng(17);
  for (int trial = 0; trial < 1000; ++trial) {
    const SystemState s = test::random_chain_state(p, rng);
    const ChainMat m = mass_matrix(s, p);
    CHECK((m - m.transpose()).cwiseAbs().maxCoeff() < 1e-12);
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(m);
    CHECK(es.eigenvalues().minCoeff() > 0.0);
  }
}

TEST_CASE("coriolis vector") {
  SUBCASE("hanging chain at rest reduces to gravity") {
    const ModelParams p = paper_params();
    const SystemState s = hanging_state(p, Vec3::Zero());
    const ChainVec c = coriolis_vector(s, p);
    CHECK((c.head<3>() + p.total_mass() * p.g * kGravityDir).norm() < 1e-14);
    CHECK(c.tail(9).norm() == 0.0);
  }
  SUBCASE("single link matches the hand-expanded terms") {
    const ModelParams p = single_link();
    Rng rng(23);
    for (int trial = 0; trial < 100; ++trial) {
      const SystemState s = test::random_chain_state(p, rng);
      const ChainVec c = coriolis_vector(s, p);
      const double m1 = p.link_masses[0], l = p.link_lengths[0];
      const Vec3 expected_rq =
          -m1 * l * s.omega[0].squaredNorm() * s.q[0] - p.total_mass() * p.g * kGravityDir;
      const Vec3 expected_w = -m1 * p.g * l * s.q[0].cross(kGravityDir);
      CHECK((c.head<3>() - expected_rq).norm() < 1e-12);
      CHECK((c.tail<3>() - expected_w).norm() < 1e-12);
    }
  }
  SUBCASE("quadratic rate dependence") {
    const ModelParams p = paper_params();
    Rng rng(29);
    const SystemState s = test::random_chain_state(p, rng);
    SystemState still = s;
    for (auto& w : still.omega) w.setZero();
    const ChainVec gravity = coriolis_vector(still, p);
    const ChainVec once = coriolis_vector(s, p);
    SystemState doubled = s;
    for (auto& w : doubled.omega) w *= 2.0;
    const ChainVec quad = coriolis_vector(doubled, p);
    CHECK((quad - gravity - 4.0 * (once - gravity)).norm() < 1e-10);
  }
}

TEST_CASE("solve_accelerations") {
  const ModelParams p = paper_params();
  SUBCASE("hover equilibrium") {
    const SystemState s = hanging_state(p, Vec3(1, 2, -3));
    WrenchInput u;
    u.thrust = p.total_mass() * p.g;
    const Accelerations acc = solve_accelerations(s, u, p);
    CHECK(acc.linear.norm() < 1e-12);
    for (const auto& w : acc.omega_dot) CHECK(w.norm() < 1e-12);
  }
  SUBCASE("free fall") {
    const SystemState s = hanging_state(p, Vec3::Zero());
    const Accelerations acc = solve_accelerations(s, WrenchInput{}, p);
    CHECK((acc.linear - p.g * kGravityDir).norm() < 1e-12);
  }
  SUBCASE("residual of the linear solve") {
    Rng rng(31);
    for (int trial = 0; trial < 200; ++trial) {
      const SystemState s = test::random_chain_state(p, rng);
      WrenchInput u;
      u.thrust = rng.uniform(0, 20);
      u.force_disturbance = test::random_unit(rng) * rng.uniform(0, 1);
      const ChainMat m = mass_matrix(s, p);
      ChainVec rhs = -coriolis_vector(s, p);
      rhs.head<3>() +=
          -u.thrust * (euler_zyx_to_rotation(s.euler) * kGravityDir) + u.force_disturbance;
      const Accelerations acc = solve_accelerations(s, u, p);
      ChainVec x(3 + 3 * p.n);
      x.head<3>() = acc.linear;
      for (int i = 0; i < p.n; ++i)
        x.segment<3>(3 + 3 * i) = acc.omega_dot[static_cast<std::size_t>(i)];
      CHECK((m * x - rhs).norm() < 1e-10 * (1.0 + rhs.norm()));
    }
  }
  SUBCASE("degenerate mass ratios raise the conditioning fault") {
    ModelParams bad = single_link(1e12, 1e-3, 0.05);
    const SystemState s = hanging_state(bad, Vec3::Zero());
    CHECK_THROWS_AS(solve_accelerations(s, WrenchInput{}, bad), SimulationFault);
  }
}

TEST_CASE("step preserves hover and the unit constraints") {
  const ModelParams p = paper_params();
  SystemState s = hanging_state(p, Vec3::Zero());
  WrenchInput u;
  u.thrust = p.total_mass() * p.g;
  const SystemState next = step(s, u, p, 1e-3);
  CHECK((next.r_q - s.r_q).norm() < 1e-9);
  CHECK((next.v_q - s.v_q).norm() < 1e-9);
  for (int i = 0; i < p.n; ++i) {
    const auto ui = static_cast<std::size_t>(i);
    CHECK((next.q[ui] - s.q[ui]).norm() < 1e-9);
    CHECK(std::abs(next.q[ui].norm() - 1.0) < 1e-15);
    CHECK(std::abs(next.q[ui].dot(next.omega[ui])) < 1e-12);
  }

  Rng rng(37);
  SystemState swung = test::random_chain_state(p, rng);
  const SystemState after = step(swung, WrenchInput{}, p, 1e-3);
  for (int i = 0; i < p.n; ++i) {
    const auto ui = static_cast<std::size_t>(i);
    CHECK(std::abs(after.q[ui].norm() - 1.0) < 1e-15);
    CHECK(std::abs(after.q[ui].dot(after.omega[ui])) < 1e-12);
  }
}

TEST_CASE("unforced rollouts conserve energy") {
  for (int n = 1; n <= 3; ++n) {
    ModelParams p = paper_params();
    p.n = n;
    p.link_masses.assign(static_cast<std::size_t>(n), 0.05);
    p.link_masses.back() = 0.25;
    p.link_lengths.assign(static_cast<std::size_t>(n), 0.25);

    Rng rng(static_cast<std::uint64_t>(40 + n));
    SystemState s = test::random_chain_state(p, rng, 1.0);
    s.euler.setZero();  // keep the gimbal check out of a 2 s tumble
    s.body_rates = Vec3(0.3, -0.2, 0.4);
    const double e0 = total_energy(s, p);
    REQUIRE(std::abs(e0) > 0.05);
    double max_drift = 0.0;
    for (int k = 0; k < 2000; ++k) {
      s = step(s, WrenchInput{}, p, 1e-3);
      max_drift = std::max(max_drift, std::abs(total_energy(s, p) - e0));
    }
    CHECK(max_drift / std::abs(e0) < 1e-3);
  }
}

TEST_CASE("single-link dynamics agrees with the Newton oracle") {
  const ModelParams p = single_link(0.775, 0.25, 0.25);
  SystemState s = hanging_state(p, Vec3::Zero());
  // start mid-swing
  s.q[0] = Vec3(std::sin(0.4), 0, std::cos(0.4));
  s.omega[0] = Vec3(0, 0.8, 0);
  s.omega[0] -= s.omega[0].dot(s.q[0]) * s.q[0];

  test::PendulumOnBaseOracle oracle{p.m_q, p.link_masses[0], p.link_lengths[0], p.g};
  test::PendulumOnBaseOracle::State os{s.r_q, s.v_q, s.q[0], s.omega[0].cross(s.q[0])};

  const double dt = 1e-3;
  double max_rel = 0.0;
  for (int k = 0; k < 1000; ++k) {
    const double t = k * dt;
    WrenchInput u;
    u.thrust = p.total_mass() * p.g * (1.0 + 0.2 * std::sin(2.0 * t));
    u.force_disturbance = Vec3(0.3 * std::cos(t), 0.1, 0);
    const Vec3 applied = -u.thrust * kGravityDir + u.force_disturbance;
    s = step(s, u, p, dt);
    os = oracle.step(os, applied, dt);
    const double scale = std::max(1.0, os.r_q.norm());
    max_rel = std::max(max_rel, (s.r_q - os.r_q).norm() / scale);
    max_rel = std::max(max_rel, (s.q[0] - os.q).norm());
    max_rel = std::max(max_rel, (s.omega[0].cross(s.q[0]) - os.q_dot).norm() /
                                    std::max(1.0, os.q_dot.norm()));
  }
  CHECK(max_rel < 1e-6);
}

TEST_CASE("load position") {
  const ModelParams p = paper_params();
  SystemState s = hanging_state(p, Vec3(1, 1, 1));
  CHECK((load_position(s, p) - Vec3(1, 1, 1.75)).norm() < 1e-15);

  const ModelParams one = single_link(0.775, 0.25, 0.25);
  SystemState t = hanging_state(one, Vec3::Zero());
  t.q[0] = Vec3(1, 0, 0);
  CHECK(load_position(t, one) == Vec3(0.25, 0, 0));

  // approximation ignores the configuration entirely
  Rng rng(53);
  SystemState r = test::random_chain_state(p, rng);
  r.r_q = Vec3(2, 3, 4);
  CHECK(load_position(r, p, true) == Vec3(2, 3, 4 + 0.75));
}

TEST_CASE("total energy basics") {
  const ModelParams p = paper_params();
  SystemState s = hanging_state(p, Vec3::Zero());
  // at rest the energy is pure potential: the chain hangs below the datum
  double hang = 0.0;
  double depth = 0.0;
  for (int i = 0; i < p.n; ++i) {
    depth += p.link_lengths[static_cast<std::size_t>(i)];
    hang -= p.link_masses[static_cast<std::size_t>(i)] * p.g * depth;
  }
  CHECK(total_energy(s, p) == doctest::Approx(hang).epsilon(1e-12));

  SUBCASE("invariant under horizontal translation") {
    Rng rng(59);
    const SystemState a = test::random_chain_state(p, rng);
    SystemState b = a;
    b.r_q += Vec3(12.0, -7.5, 0.0);
    CHECK(total_energy(a, p) == doctest::Approx(total_energy(b, p)).epsilon(1e-12));
  }
}

TEST_CASE("pinned-base pendulum swing conserves energy") {
  // a huge base mass approximates a fixed pivot; unforced, so the pair
  // free-falls while the pendulum swings
  const ModelParams p = single_link(5e4, 0.25, 0.25);
  SystemState s = hanging_state(p, Vec3::Zero());
  s.q[0] = Vec3(std::sin(0.5), 0, std::cos(0.5));
  const double e0 = total_energy(s, p);
  REQUIRE(std::abs(e0) > 0.1);
  for (int k = 0; k < 3000; ++k) s = step(s, WrenchInput{}, p, 1e-3);
  CHECK(std::abs(total_energy(s, p) - e0) / std::abs(e0) < 1e-3);
}

TEST_CASE("gimbal proximity raises a fault") {
  const ModelParams p = paper_params();
  SystemState s = hanging_state(p, Vec3::Zero());
  s.euler = Vec3(0, 79.5 * std::numbers::pi / 180.0, 0);
  s.body_rates = Vec3(0, 5.0, 0);
  WrenchInput u;
  u.thrust = p.total_mass() * p.g;
  CHECK_THROWS_AS(
      [&] {
        for (int k = 0; k < 200; ++k) s = step(s, u, p, 1e-3);
      }(),
      SimulationFault);
}

TEST_CASE("model validation names the violation") {
  ModelParams p = paper_params();
  p.link_masses[1] = -0.05;
  CHECK_THROWS_WITH_AS(p.validate(), doctest::Contains("masses"), std::invalid_argument);
  ModelParams q = paper_params();
  q.n = 2;
  CHECK_THROWS_AS(q.validate(), std::invalid_argument);
}
