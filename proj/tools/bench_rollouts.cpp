// Compares the serial reference swarm evaluation against the OpenMP path on
// the bundled scenario and reports the speedup. The two must agree exactly.

#include <chrono>
#include <cstdio>
#include <fstream>
#include <sstream>

#include "slung/sim.hpp"

using namespace slung;

namespace {

double seconds_since(std::chrono::steady_clock::time_point t0) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

}  // namespace

int main(int argc, char** argv) {
  const char* path = argc > 1 ? argv[1] : "presets/paper_sec4";
  std::ifstream in(path, std::ios::binary);
  if (!in) {
    std::fprintf(stderr, "cannot read scenario '%s'\n", path);
    return 1;
  }
  std::ostringstream ss;
  ss << in.rdbuf();
  const Scenario scenario = load_scenario(ss.str());

  const ModelParams model;
  const SmcGains smc;
  const PidGains pid;
  const ApfGains base;

  SwarmConfig cfg;
  cfg.particles = 16;
  cfg.iterations = 4;
  cfg.dimensions = 6;
  cfg.lower = Eigen::VectorXd::Constant(6, 0.001);
  cfg.upper = Eigen::VectorXd::Constant(6, 1.0);
  cfg.variant = PsoVariant::Sapso;
  cfg.seed = 7;

  std::printf("%-22s %10s %10s\n", "kernel", "time [s]", "rollouts/s");
  double t_serial = 0.0, t_parallel = 0.0;
  OptimizationResult serial, parallel;
  {
    cfg.parallel = false;
    const auto t0 = std::chrono::steady_clock::now();
    serial = tune(scenario, model, smc, pid, cfg, base).optimization;
    t_serial = seconds_since(t0);
    std::printf("%-22s %10.3f %10.1f\n", "swarm eval (serial)", t_serial,
                static_cast<double>(serial.evaluations) / t_serial);
  }
  {
    cfg.parallel = true;
    const auto t0 = std::chrono::steady_clock::now();
    parallel = tune(scenario, model, smc, pid, cfg, base).optimization;
    t_parallel = seconds_since(t0);
    std::printf("%-22s %10.3f %10.1f\n", "swarm eval (OpenMP)", t_parallel,
                static_cast<double>(parallel.evaluations) / t_parallel);
  }

  const bool identical = serial.gbest_f == parallel.gbest_f &&
                         serial.gbest_x == parallel.gbest_x &&
                         serial.history == parallel.history;
  std::printf("speedup: %.2fx, results identical: %s\n", t_serial / t_parallel,
              identical ? "yes" : "NO");
  return identical ? 0 : 1;
}
