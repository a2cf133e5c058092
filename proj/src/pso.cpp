#include "slung/pso.hpp"

#include <cmath>
#include <cstdio>
#include <limits>
#include <numbers>

#include "slung/rng.hpp"

namespace slung {

Eigen::VectorXd SwarmConfig::effective_v_max() const {
  if (v_max.size() > 0) return v_max;
  return 0.2 * (upper - lower);
}

void SwarmConfig::validate() const {
  if (particles < 2) throw std::invalid_argument("swarm needs at least 2 particles");
  if (iterations < 1) throw std::invalid_argument("iteration count must be >= 1");
  if (dimensions < 1) throw std::invalid_argument("dimension must be >= 1");
  if (lower.size() != dimensions || upper.size() != dimensions)
    throw std::invalid_argument("bounds must match the dimension");
  for (int j = 0; j < dimensions; ++j)
    if (!(lower[j] < upper[j])) throw std::invalid_argument("bounds require lo < hi");
  const Eigen::VectorXd vm = effective_v_max();
  for (int j = 0; j < dimensions; ++j)
    if (!(vm[j] > 0.0)) throw std::invalid_argument("v_max must be positive");
  if (!(w_min > 0.0 && w_min < w_max))
    throw std::invalid_argument("tviw requires 0 < w_min < w_max");
  if (!(alpha > 0.0)) throw std::invalid_argument("sapso alpha must be positive");
}

Coefficients schedule(PsoVariant variant, int k, const SwarmStats& stats,
                      const SwarmConfig& cfg) {
  switch (variant) {
    case PsoVariant::Classic:
      return {cfg.w, cfg.c1, cfg.c2};
    case PsoVariant::Tviw: {
      const double c = std::cos(std::numbers::pi * k / (2.0 * cfg.iterations));
      const double w = cfg.tviw_decreasing ? cfg.w_min + (cfg.w_max - cfg.w_min) * c
                                           : cfg.w_max - (cfg.w_max - cfg.w_min) * c;
      return {w, cfg.c1, cfg.c2};
    }
    case PsoVariant::Sapso: {
      const double w =
          1.0 - std::exp(-stats.mean_abs_velocity / stats.mean_velocity_limit);
      const double c1 = cfg.alpha * w;
      return {w, c1, cfg.alpha - c1};
    }
  }
  return {};
}

SwarmStats swarm_stats(std::span<const Particle> particles, const SwarmConfig& cfg) {
  SwarmStats s;
  double sum = 0.0;
  for (const auto& p : particles) sum += p.v.cwiseAbs().sum();
  s.mean_abs_velocity =
      sum / (static_cast<double>(particles.size()) * cfg.dimensions);
  s.mean_velocity_limit = cfg.effective_v_max().cwiseAbs().mean();
  return s;
}

Particle update_particle(const Particle& p, const Eigen::VectorXd& gbest_x,
                         const Coefficients& coeffs, std::span<const double> r1,
                         std::span<const double> r2, const SwarmConfig& cfg) {
  const Eigen::VectorXd vm = cfg.effective_v_max();
  Particle out = p;
  for (int j = 0; j < cfg.dimensions; ++j) {
    const auto uj = static_cast<std::size_t>(j);
    double v = coeffs.w * p.v[j] + coeffs.c1 * r1[uj] * (p.pbest_x[j] - p.x[j]) +
               coeffs.c2 * r2[uj] * (gbest_x[j] - p.x[j]);
    v = std::clamp(v, -vm[j], vm[j]);
    double x = p.x[j] + v;
    if (x < cfg.lower[j]) {
      x = cfg.lower[j];
      v = 0.0;
    } else if (x > cfg.upper[j]) {
      x = cfg.upper[j];
      v = 0.0;
    }
    out.v[j] = v;
    out.x[j] = x;
  }
  return out;
}

OptimizationResult optimize(const FitnessFn& fitness, const SwarmConfig& cfg) {
  cfg.validate();
  const int n = cfg.particles;
  const int d = cfg.dimensions;
  const Eigen::VectorXd vm = cfg.effective_v_max();

  std::vector<Particle> particles(static_cast<std::size_t>(n));
  std::vector<Rng> streams;
  streams.reserve(static_cast<std::size_t>(n));
  for (int i = 0; i < n; ++i) {
    auto& p = particles[static_cast<std::size_t>(i)];
    p.substream = derive_seed(cfg.seed, static_cast<std::uint64_t>(i));
    streams.emplace_back(p.substream);
    Rng& rng = streams.back();
    p.x.resize(d);
    p.v.resize(d);
    for (int j = 0; j < d; ++j) p.x[j] = rng.uniform(cfg.lower[j], cfg.upper[j]);
    for (int j = 0; j < d; ++j) p.v[j] = rng.uniform(-vm[j], vm[j]);
    p.pbest_x = p.x;
    p.pbest_f = std::numeric_limits<double>::infinity();
  }

  OptimizationResult result;
  result.gbest_f = std::numeric_limits<double>::infinity();
  result.gbest_x = particles[0].x;
  result.history.reserve(static_cast<std::size_t>(cfg.iterations));

  std::vector<double> values(static_cast<std::size_t>(n));
  std::vector<double> r1(static_cast<std::size_t>(d)), r2(static_cast<std::size_t>(d));

  for (int k = 0; k < cfg.iterations; ++k) {
    if (cfg.parallel) {
#pragma omp parallel for schedule(dynamic)
      for (int i = 0; i < n; ++i)
        values[static_cast<std::size_t>(i)] = fitness(particles[static_cast<std::size_t>(i)].x);
    } else {
      for (int i = 0; i < n; ++i)
        values[static_cast<std::size_t>(i)] = fitness(particles[static_cast<std::size_t>(i)].x);
    }
    result.evaluations += n;

    for (int i = 0; i < n; ++i) {
      auto& p = particles[static_cast<std::size_t>(i)];
      double f = values[static_cast<std::size_t>(i)];
      if (!std::isfinite(f)) {
        if (result.nonfinite_evaluations == 0)
          std::fprintf(stderr, "pso: non-finite fitness treated as +inf\n");
        ++result.nonfinite_evaluations;
        f = std::numeric_limits<double>::infinity();
      }
      if (f < p.pbest_f) {
        p.pbest_f = f;
        p.pbest_x = p.x;
      }
      if (f < result.gbest_f) {
        result.gbest_f = f;
        result.gbest_x = p.x;
      }
    }
    result.history.push_back(result.gbest_f);

    const Coefficients coeffs = schedule(cfg.variant, k, swarm_stats(particles, cfg), cfg);
    for (int i = 0; i < n; ++i) {
      auto& p = particles[static_cast<std::size_t>(i)];
      Rng& rng = streams[static_cast<std::size_t>(i)];
      for (int j = 0; j < d; ++j) {
        r1[static_cast<std::size_t>(j)] = rng.uniform01();
        r2[static_cast<std::size_t>(j)] = rng.uniform01();
      }
      p = update_particle(p, result.gbest_x, coeffs, r1, r2, cfg);
    }
  }
  return result;
}

}  // namespace slung
