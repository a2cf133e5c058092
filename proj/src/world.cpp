#include "slung/world.hpp"

#include <cmath>
#include <limits>
#include <numbers>
#include <sstream>

#include "slung/rng.hpp"

namespace slung {

namespace {

struct Tokenizer {
  std::istringstream in;
  int line_no;
  std::string field;

  Tokenizer(const std::string& line, int n, std::string f)
      : in(line), line_no(n), field(std::move(f)) {}

  double number(const char* what) {
    double v;
    if (!(in >> v)) throw ScenarioError(line_no, field, std::string("expected number for ") + what);
    return v;
  }

  Vec3 vec3() {
    Vec3 v;
    v.x() = number("x");
    v.y() = number("y");
    v.z() = number("z");
    return v;
  }

  std::string word(const char* what) {
    std::string w;
    if (!(in >> w)) throw ScenarioError(line_no, field, std::string("expected value for ") + what);
    return w;
  }

  bool maybe_vec3(Vec3* out) {
    double x;
    if (!(in >> x)) return false;
    out->x() = x;
    out->y() = number("y");
    out->z() = number("z");
    return true;
  }
};

std::string strip(const std::string& s) {
  auto b = s.find_first_not_of(" \t\r\n");
  if (b == std::string::npos) return "";
  auto e = s.find_last_not_of(" \t\r\n");
  return s.substr(b, e - b + 1);
}

void draw_moving_velocities(std::vector<Obstacle>& obstacles, std::uint64_t seed,
                            const std::vector<bool>& wants_draw) {
  for (std::size_t i = 0; i < obstacles.size(); ++i) {
    if (!wants_draw[i]) continue;
    Rng rng(derive_seed(seed, 0x0b57ac1e00ull + static_cast<std::uint64_t>(obstacles[i].id)));
    const double heading = rng.uniform(0.0, 2.0 * std::numbers::pi);
    const double speed = rng.uniform(0.001, 0.5);
    obstacles[i].velocity = Vec3(speed * std::cos(heading), speed * std::sin(heading), 0.0);
  }
}

void validate(const Scenario& s) {
  if (!(s.horizon > 0.0)) throw ScenarioError(0, "horizon", "horizon > 0 violated");
  if (!(s.control_timestep > 0.0)) throw ScenarioError(0, "dt", "dt > 0 violated");
  if (s.control_timestep > s.horizon) throw ScenarioError(0, "dt", "dt <= horizon violated");
  for (int a = 0; a < 3; ++a) {
    if (s.disturbance.force_bound[a] < 0.0 || s.disturbance.torque_bound[a] < 0.0)
      throw ScenarioError(0, "disturbance", "bounds must be elementwise >= 0");
  }
  for (const auto& o : s.obstacles) {
    if (!(o.radius > 0.0))
      throw ScenarioError(0, "radius", "radius > 0 violated for obstacle " + std::to_string(o.id));
    if (o.shape == ObstacleShape::VerticalCylinder && o.velocity.z() != 0.0)
      throw ScenarioError(0, "velocity",
                          "cylinder z-velocity must be zero for obstacle " + std::to_string(o.id));
    if (obstacle_clearance(s.start_quad_position, o).signed_distance <= 0.0)
      throw ScenarioError(0, "start", "start inside obstacle " + std::to_string(o.id));
    if (obstacle_clearance(s.target_load_position, o).signed_distance <= 0.0)
      throw ScenarioError(0, "target", "target inside obstacle " + std::to_string(o.id));
  }
}

}  // namespace

Scenario load_scenario(const std::string& text) {
  Scenario s;
  std::vector<bool> wants_draw;
  bool in_obstacle = false;
  Obstacle current;
  bool current_wants_draw = false;
  int next_id = 0;

  std::istringstream stream(text);
  std::string raw;
  int line_no = 0;
  while (std::getline(stream, raw)) {
    ++line_no;
    auto hash = raw.find('#');
    if (hash != std::string::npos) raw.erase(hash);
    std::string line = strip(raw);
    if (line.empty()) continue;

    std::istringstream ls(line);
    std::string key;
    ls >> key;
    std::string rest;
    std::getline(ls, rest);

    if (in_obstacle) {
      Tokenizer tok(rest, line_no, key);
      if (key == "}") {
        current.id = next_id++;
        s.obstacles.push_back(current);
        wants_draw.push_back(current_wants_draw);
        in_obstacle = false;
      } else if (key == "shape") {
        std::string w = tok.word("shape");
        if (w == "cylinder") current.shape = ObstacleShape::VerticalCylinder;
        else if (w == "sphere") current.shape = ObstacleShape::Sphere;
        else throw ScenarioError(line_no, "shape", "unknown shape '" + w + "'");
      } else if (key == "center") {
        current.center = tok.vec3();
      } else if (key == "radius") {
        current.radius = tok.number("radius");
      } else if (key == "moving") {
        std::string w = tok.word("moving");
        if (w == "true") current_wants_draw = true;
        else if (w == "false") current_wants_draw = false;
        else throw ScenarioError(line_no, "moving", "expected true or false");
      } else if (key == "velocity") {
        current.velocity = tok.vec3();
        current_wants_draw = false;
      } else {
        throw ScenarioError(line_no, key, "unknown obstacle field");
      }
      continue;
    }

    Tokenizer tok(rest, line_no, key);
    if (key == "obstacle") {
      std::string brace = tok.word("obstacle");
      if (brace != "{") throw ScenarioError(line_no, "obstacle", "expected '{'");
      current = Obstacle{};
      current_wants_draw = false;
      in_obstacle = true;
    } else if (key == "start") {
      s.start_quad_position = tok.vec3();
    } else if (key == "target") {
      s.target_load_position = tok.vec3();
    } else if (key == "target_velocity") {
      s.target_load_velocity = tok.vec3();
    } else if (key == "horizon") {
      s.horizon = tok.number("horizon");
    } else if (key == "dt") {
      s.control_timestep = tok.number("dt");
    } else if (key == "seed") {
      s.rng_seed = static_cast<std::uint64_t>(tok.number("seed"));
    } else if (key == "disturbance") {
      std::string mode = tok.word("mode");
      if (mode == "none") {
        s.disturbance.mode = DisturbanceMode::None;
      } else if (mode == "constant" || mode == "band") {
        s.disturbance.mode = mode == "constant" ? DisturbanceMode::Constant
                                                : DisturbanceMode::SeededBandLimited;
        s.disturbance.force_bound = tok.vec3();
        Vec3 torque;
        if (tok.maybe_vec3(&torque)) s.disturbance.torque_bound = torque;
      } else {
        throw ScenarioError(line_no, "disturbance", "unknown mode '" + mode + "'");
      }
    } else {
      throw ScenarioError(line_no, key, "unknown key");
    }
  }
  if (in_obstacle) throw ScenarioError(line_no, "obstacle", "unterminated obstacle block");

  draw_moving_velocities(s.obstacles, s.rng_seed, wants_draw);
  validate(s);
  return s;
}

std::vector<Obstacle> advance_obstacles(std::span<const Obstacle> world, double dt) {
  std::vector<Obstacle> out(world.begin(), world.end());
  for (auto& o : out) o.center += o.velocity * dt;
  return out;
}

Clearance obstacle_clearance(const Vec3& point, const Obstacle& obstacle) {
  Vec3 d = point - obstacle.center;
  if (obstacle.shape == ObstacleShape::VerticalCylinder) d.z() = 0.0;
  const double center_dist = d.norm();
  if (center_dist < 1e-12) {
    return Clearance{kRhoFloor, -obstacle.radius, Vec3::UnitX(), true};
  }
  const double sd = center_dist - obstacle.radius;
  return Clearance{std::max(sd, kRhoFloor), sd, d / center_dist, false};
}

double min_signed_clearance(const Vec3& point, std::span<const Obstacle> world) {
  double m = std::numeric_limits<double>::infinity();
  for (const auto& o : world) m = std::min(m, obstacle_clearance(point, o).signed_distance);
  return m;
}

DisturbanceSampler::DisturbanceSampler(const DisturbanceSpec& spec, std::uint64_t scenario_seed)
    : spec_(spec) {
  if (spec.mode != DisturbanceMode::SeededBandLimited) return;
  for (int axis = 0; axis < 3; ++axis) {
    for (Harmonics* h : {&force_h_[axis], &torque_h_[axis]}) {
      const std::uint64_t stream =
          (h == &force_h_[axis]) ? 0xd157f0 + axis : 0xd157a0 + axis;
      Rng rng(derive_seed(scenario_seed, stream));
      double total = 0.0;
      for (int k = 0; k < 3; ++k) {
        h->amplitude[k] = rng.uniform(0.2, 1.0);
        h->omega[k] = 2.0 * std::numbers::pi * rng.uniform(0.05, 0.8);
        h->phase[k] = rng.uniform(0.0, 2.0 * std::numbers::pi);
        total += h->amplitude[k];
      }
      for (int k = 0; k < 3; ++k) h->amplitude[k] /= total;
    }
  }
}

Vec3 DisturbanceSampler::eval(const Harmonics* h, const Vec3& bound, double t) const {
  Vec3 out = Vec3::Zero();
  for (int axis = 0; axis < 3; ++axis) {
    double v = 0.0;
    for (int k = 0; k < 3; ++k)
      v += h[axis].amplitude[k] * std::sin(h[axis].omega[k] * t + h[axis].phase[k]);
    out[axis] = bound[axis] * v;
  }
  return out;
}

Vec3 DisturbanceSampler::force_at(double t) const {
  switch (spec_.mode) {
    case DisturbanceMode::None: return Vec3::Zero();
    case DisturbanceMode::Constant: return spec_.force_bound;
    case DisturbanceMode::SeededBandLimited: return eval(force_h_, spec_.force_bound, t);
  }
  return Vec3::Zero();
}

Vec3 DisturbanceSampler::torque_at(double t) const {
  switch (spec_.mode) {
    case DisturbanceMode::None: return Vec3::Zero();
    case DisturbanceMode::Constant: return spec_.torque_bound;
    case DisturbanceMode::SeededBandLimited: return eval(torque_h_, spec_.torque_bound, t);
  }
  return Vec3::Zero();
}

}  // namespace slung
