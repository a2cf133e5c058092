#include "doctest.h"

#include <fstream>
#include <sstream>

#include "slung/world.hpp"
#include "oracles.hpp"

using namespace slung;

namespace {

std::string preset_text() {
  std::ifstream in(SLUNG_SOURCE_DIR "/presets/paper_sec4", std::ios::binary);
  REQUIRE(in.good());
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

}  // namespace

TEST_CASE("minimal scenario with no obstacles") {
  const Scenario s = load_scenario("start 0 0 0\ntarget 1 2 3\nhorizon 10\ndt 0.01\n");
  CHECK(s.obstacles.empty());
  CHECK(s.target_load_position == Vec3(1, 2, 3));
  CHECK(s.horizon == 10.0);
}

TEST_CASE("bundled mission file parses to the reference target") {
  const Scenario s = load_scenario(preset_text());
  CHECK(s.target_load_position == Vec3(45, 60, -10));
  CHECK(s.target_load_velocity == Vec3(0, 0, 0));
  CHECK(s.obstacles.size() == 13);
  int moving = 0;
  for (const auto& o : s.obstacles) {
    if (!o.moving()) continue;
    ++moving;
    const double speed = o.velocity.norm();
    CHECK(o.velocity.z() == 0.0);
    CHECK(speed >= 0.001);
    CHECK(speed <= 0.5);
  }
  CHECK(moving == 3);
}

TEST_CASE("moving-obstacle velocities are reproducible from the seed") {
  const Scenario a = load_scenario(preset_text());
  const Scenario b = load_scenario(preset_text());
  for (std::size_t i = 0; i < a.obstacles.size(); ++i)
    CHECK(a.obstacles[i].velocity == b.obstacles[i].velocity);
}

TEST_CASE("negative radius is rejected by name") {
  const std::string text =
      "start 0 0 0\ntarget 5 0 0\nhorizon 10\ndt 0.01\n"
      "obstacle {\n shape sphere\n center 2 0 0\n radius -1\n}\n";
  CHECK_THROWS_WITH_AS(load_scenario(text), doctest::Contains("radius > 0"), ScenarioError);
}

TEST_CASE("start inside an obstacle is rejected by id") {
  const std::string text =
      "start 0 0 0\ntarget 50 0 0\nhorizon 10\ndt 0.01\n"
      "obstacle {\n shape cylinder\n center 30 0 0\n radius 1\n}\n"
      "obstacle {\n shape sphere\n center 0 0 0\n radius 2\n}\n";
  CHECK_THROWS_WITH_AS(load_scenario(text), doctest::Contains("start inside obstacle 1"),
                       ScenarioError);
}

TEST_CASE("parse errors carry the line number") {
  try {
    load_scenario("start 0 0 0\nbogus_key 1\n");
    FAIL("expected ScenarioError");
  } catch (const ScenarioError& e) {
    CHECK(e.line == 2);
    CHECK(e.field == "bogus_key");
  }
}

TEST_CASE("advance_obstacles") {
  Obstacle sphere{0, ObstacleShape::Sphere, Vec3::Zero(), 1.0, Vec3(0.5, 0, 0)};
  Obstacle tower{1, ObstacleShape::VerticalCylinder, Vec3(3, 4, 0), 2.0, Vec3::Zero()};
  const std::vector<Obstacle> world{sphere, tower};

  SUBCASE("dt = 0 is the identity") {
    const auto out = advance_obstacles(world, 0.0);
    CHECK(out[0].center == sphere.center);
    CHECK(out[1].center == tower.center);
  }
  SUBCASE("constant velocity kinematics") {
    const auto out = advance_obstacles(world, 2.0);
    CHECK(out[0].center == Vec3(1, 0, 0));
    CHECK(out[1].center == Vec3(3, 4, 0));  // static stays put
    CHECK(out[0].id == 0);
    CHECK(out[1].id == 1);
  }
  SUBCASE("two half steps match one full step") {
    Rng rng(11);
    for (int trial = 0; trial < 50; ++trial) {
      Obstacle o = sphere;
      o.velocity = Vec3(rng.uniform(-1, 1), rng.uniform(-1, 1), 0);
      const double dt = rng.uniform(0, 3);
      auto once = advance_obstacles(std::vector<Obstacle>{o}, 2 * dt);
      auto twice = advance_obstacles(advance_obstacles(std::vector<Obstacle>{o}, dt), dt);
      CHECK((once[0].center - twice[0].center).norm() < 1e-12);
    }
  }
}

TEST_CASE("obstacle_clearance geometry") {
  SUBCASE("sphere") {
    Obstacle o{0, ObstacleShape::Sphere, Vec3::Zero(), 1.0, Vec3::Zero()};
    const Clearance c = obstacle_clearance(Vec3(3, 0, 0), o);
    CHECK(c.rho == doctest::Approx(2.0));
    CHECK(c.grad == Vec3(1, 0, 0));
    CHECK_FALSE(c.degenerate);
  }
  SUBCASE("on-surface query clamps to the floor") {
    Obstacle o{0, ObstacleShape::Sphere, Vec3::Zero(), 1.0, Vec3::Zero()};
    const Clearance c = obstacle_clearance(Vec3(1, 0, 0), o);
    CHECK(c.rho == kRhoFloor);
    CHECK(c.signed_distance == doctest::Approx(0.0));
  }
  SUBCASE("cylinder ignores z") {
    Obstacle o{0, ObstacleShape::VerticalCylinder, Vec3::Zero(), 1.0, Vec3::Zero()};
    const Clearance c = obstacle_clearance(Vec3(0, 2, -50), o);
    CHECK(c.rho == doctest::Approx(1.0));
    CHECK(c.grad == Vec3(0, 1, 0));
  }
  SUBCASE("query on the axis gets the deterministic fallback") {
    Obstacle o{0, ObstacleShape::VerticalCylinder, Vec3(1, 1, 0), 0.5, Vec3::Zero()};
    const Clearance c = obstacle_clearance(Vec3(1, 1, 33), o);
    CHECK(c.degenerate);
    CHECK(c.rho == kRhoFloor);
    CHECK(c.grad == Vec3(1, 0, 0));
  }
}

TEST_CASE("clearance gradient matches finite differences away from the floor") {
  Rng rng(5);
  for (int trial = 0; trial < 200; ++trial) {
    Obstacle o;
    o.shape = trial % 2 ? ObstacleShape::Sphere : ObstacleShape::VerticalCylinder;
    o.center = Vec3(rng.uniform(-3, 3), rng.uniform(-3, 3), rng.uniform(-3, 3));
    o.radius = rng.uniform(0.5, 2.0);
    const Vec3 p = o.center + test::random_unit(rng) * rng.uniform(o.radius + 0.3, o.radius + 5);
    const Clearance c = obstacle_clearance(p, o);
    if (c.rho <= 10 * kRhoFloor) continue;
    const Vec3 fd = test::fd_gradient(
        [&](const Vec3& x) { return obstacle_clearance(x, o).rho; }, p);
    CHECK((c.grad - fd).norm() < 1e-6 * std::max(1.0, fd.norm()));
  }
}

TEST_CASE("cylinder clearance is invariant along z") {
  Obstacle o{0, ObstacleShape::VerticalCylinder, Vec3(2, -1, 0), 1.5, Vec3::Zero()};
  Rng rng(7);
  for (int trial = 0; trial < 50; ++trial) {
    const Vec3 p(rng.uniform(-5, 5), rng.uniform(-5, 5), rng.uniform(-50, 50));
    const Clearance a = obstacle_clearance(p, o);
    const Clearance b = obstacle_clearance(p + Vec3(0, 0, rng.uniform(-100, 100)), o);
    CHECK(a.rho == b.rho);
    CHECK(a.grad == b.grad);
  }
}

TEST_CASE("disturbance realizations respect their bounds") {
  DisturbanceSpec spec;
  spec.mode = DisturbanceMode::SeededBandLimited;
  spec.force_bound = Vec3(0.5, 0.2, 0.0);
  spec.torque_bound = Vec3(0.01, 0.01, 0.01);
  const DisturbanceSampler sampler(spec, 99);
  for (int k = 0; k <= 2000; ++k) {
    const double t = 0.05 * k;
    const Vec3 f = sampler.force_at(t);
    const Vec3 tau = sampler.torque_at(t);
    for (int a = 0; a < 3; ++a) {
      CHECK(std::abs(f[a]) <= spec.force_bound[a] + 1e-12);
      CHECK(std::abs(tau[a]) <= spec.torque_bound[a] + 1e-12);
    }
  }
  // same seed, same realization
  const DisturbanceSampler again(spec, 99);
  CHECK(again.force_at(1.23) == sampler.force_at(1.23));

  const DisturbanceSampler constant({DisturbanceMode::Constant, Vec3(1, 0, 0), Vec3::Zero()}, 1);
  CHECK(constant.force_at(5.0) == Vec3(1, 0, 0));
  const DisturbanceSampler none({}, 1);
  CHECK(none.force_at(2.0) == Vec3::Zero());
}
