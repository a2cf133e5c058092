#include <chrono>
#include <cstdio>
#include <fstream>
#include <optional>
#include <sstream>
#include <string>

#include "CLI11.hpp"

#include "slung/outputs.hpp"
#include "slung/sim.hpp"

namespace {

using namespace slung;

constexpr int kExitUsage = 1;
constexpr int kExitScenario = 2;
constexpr int kExitFault = 3;

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ScenarioError(0, "scenario", "cannot read file '" + path + "'");
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

std::string iso_timestamp() {
  const auto now = std::chrono::system_clock::now();
  const std::time_t t = std::chrono::system_clock::to_time_t(now);
  char buf[32];
  std::strftime(buf, sizeof(buf), "%Y-%m-%dT%H:%M:%SZ", std::gmtime(&t));
  return buf;
}

PsoVariant parse_variant(const std::string& name) {
  if (name == "classic") return PsoVariant::Classic;
  if (name == "tviw") return PsoVariant::Tviw;
  if (name == "sapso") return PsoVariant::Sapso;
  throw CLI::ValidationError("--variant", "expected classic, tviw or sapso");
}

struct CommonArgs {
  std::string scenario_path;
  std::string out_dir = "out";
  std::string variant = "sapso";
  int particles = 50;
  int iterations = 100;
  std::uint64_t seed = 0;
  std::optional<double> dt;
  std::optional<double> horizon;
  double rho0 = 8.0;
  double n_exp = 1.0;
  double v_p_max = 3.0;
  std::string gains_path;  // optional gains.json from a previous tune
  bool serial = false;
};

void add_common(CLI::App* cmd, CommonArgs& a, bool swarm_flags) {
  cmd->add_option("--scenario", a.scenario_path, "scenario file path")
      ->required()
      ->envname("SLUNG_SCENARIO");
  cmd->add_option("--out", a.out_dir, "output directory")->envname("SLUNG_OUT");
  cmd->add_option("--dt", a.dt, "timestep override, s")->envname("SLUNG_DT");
  cmd->add_option("--horizon", a.horizon, "horizon override, s")->envname("SLUNG_HORIZON");
  cmd->add_option("--seed", a.seed, "RNG seed")->envname("SLUNG_SEED");
  cmd->add_option("--rho0", a.rho0, "obstacle influence radius, m")->envname("SLUNG_RHO0");
  cmd->add_option("--nexp", a.n_exp, "repulsive goal-distance exponent")
      ->envname("SLUNG_NEXP");
  cmd->add_option("--vpmax", a.v_p_max, "leader speed clamp, m/s")->envname("SLUNG_VPMAX");
  cmd->add_flag("--serial", a.serial, "evaluate swarms without OpenMP")
      ->envname("SLUNG_SERIAL");
  if (swarm_flags) {
    cmd->add_option("--variant", a.variant, "classic | tviw | sapso")
        ->envname("SLUNG_VARIANT");
    cmd->add_option("--particles", a.particles, "swarm size N")->envname("SLUNG_PARTICLES");
    cmd->add_option("--iters", a.iterations, "iteration count K")->envname("SLUNG_ITERS");
  } else {
    cmd->add_option("--gains", a.gains_path, "gains.json from a previous tune")
        ->envname("SLUNG_GAINS");
  }
}

Scenario load(const CommonArgs& a) {
  Scenario s = load_scenario(read_file(a.scenario_path));
  if (a.dt) s.control_timestep = *a.dt;
  if (a.horizon) s.horizon = *a.horizon;
  return s;
}

ApfGains base_gains(const CommonArgs& a) {
  ApfGains g;
  g.rho0 = a.rho0;
  g.n_exp = a.n_exp;
  g.v_p_max = a.v_p_max;
  if (!a.gains_path.empty()) {
    const auto j = nlohmann::json::parse(read_file(a.gains_path));
    const auto& gj = j.contains("gains") ? j["gains"] : j;
    for (int i = 0; i < 3; ++i) {
      g.k_rep[i] = gj["k_rep"][static_cast<std::size_t>(i)];
      g.k_att[i] = gj["k_att"][static_cast<std::size_t>(i)];
    }
    if (gj.contains("rho0")) g.rho0 = gj["rho0"];
    if (gj.contains("n_exp")) g.n_exp = gj["n_exp"];
    if (gj.contains("v_p_max")) g.v_p_max = gj["v_p_max"];
    if (gj.contains("leader_damping")) g.leader_damping = gj["leader_damping"];
  }
  return g;
}

SwarmConfig swarm_config(const CommonArgs& a, PsoVariant variant) {
  SwarmConfig cfg;
  cfg.particles = a.particles;
  cfg.iterations = a.iterations;
  cfg.dimensions = 6;
  cfg.lower = Eigen::VectorXd::Constant(6, 0.001);
  cfg.upper = Eigen::VectorXd::Constant(6, 1.0);
  cfg.variant = variant;
  cfg.seed = a.seed;
  cfg.parallel = !a.serial;
  return cfg;
}

RunManifest make_manifest(const std::string& command, const CommonArgs& a,
                          const Scenario& s) {
  RunManifest m;
  m.command = command;
  m.scenario_path = a.scenario_path;
  if (command != "simulate")
    m.variants = command == "compare" ? std::vector<std::string>{"classic", "tviw", "sapso"}
                                      : std::vector<std::string>{a.variant};
  m.particles = a.particles;
  m.iterations = a.iterations;
  m.seed = a.seed;
  m.dt = s.control_timestep;
  m.horizon = s.horizon;
  m.out_dir = a.out_dir;
  m.timestamp = iso_timestamp();
  return m;
}

void write_manifest(const std::filesystem::path& dir, const RunManifest& m) {
  write_text_file(dir / "manifest.json", to_json(m).dump(2) + "\n");
}

int run_simulate(const CommonArgs& a) {
  const Scenario scenario = load(a);
  const ApfGains gains = base_gains(a);
  const ModelParams model;
  const SmcGains smc;
  const PidGains pid;

  const RolloutLog log = rollout(scenario, gains, smc, pid, model);
  if (log.margin_warning)
    std::fprintf(stderr, "warning: reaching margin non-positive (mu <= f_d + f_p)\n");
  const FitnessReport report = fitness(log, scenario.target_load_position);

  std::filesystem::create_directories(a.out_dir);
  const RunManifest manifest = make_manifest("simulate", a, scenario);
  write_trajectory_csv(std::filesystem::path(a.out_dir) / "trajectory.csv", log,
                       scenario.target_load_position);

  nlohmann::ordered_json summary;
  summary["fitness"] = to_json(report);
  summary["termination"] = termination_name(log.termination);
  if (!log.fault_reason.empty()) summary["fault_reason"] = log.fault_reason;
  summary["margin_warning"] = log.margin_warning;
  summary["gains"] = to_json(gains);
  summary["manifest"] = to_json(manifest);
  summary["manifest"].erase("timestamp");
  write_text_file(std::filesystem::path(a.out_dir) / "summary.json", summary.dump(2) + "\n");
  write_manifest(a.out_dir, manifest);

  if (log.termination == Termination::Fault) {
    std::fprintf(stderr, "simulation fault: %s\n", log.fault_reason.c_str());
    return kExitFault;
  }
  std::printf("termination=%s final_error=%.4f J=%.4f\n", termination_name(log.termination),
              report.final_error, report.J);
  return 0;
}

int run_tune(const CommonArgs& a) {
  const Scenario scenario = load(a);
  const ApfGains base = base_gains(a);
  const ModelParams model;
  const SmcGains smc;
  const PidGains pid;
  const SwarmConfig cfg = swarm_config(a, parse_variant(a.variant));

  TuneConfig tc;
  if (a.dt) tc.fitness_dt = *a.dt;
  const TuneResult result = tune(scenario, model, smc, pid, cfg, base, tc);

  std::filesystem::create_directories(a.out_dir);
  const RunManifest manifest = make_manifest("tune", a, scenario);
  write_convergence_csv(std::filesystem::path(a.out_dir) / "convergence.csv",
                        result.optimization);

  nlohmann::ordered_json gj;
  gj["gains"] = to_json(result.best_gains);
  gj["optimization"] = optimization_summary_json(result.optimization);
  gj["variant"] = a.variant;
  gj["manifest"] = to_json(manifest);
  gj["manifest"].erase("timestamp");
  write_text_file(std::filesystem::path(a.out_dir) / "gains.json", gj.dump(2) + "\n");
  write_manifest(a.out_dir, manifest);

  std::printf("variant=%s gbest_f=%.6f\n", a.variant.c_str(), result.optimization.gbest_f);
  return 0;
}

int run_compare(const CommonArgs& a) {
  const Scenario scenario = load(a);
  const ApfGains base = base_gains(a);
  const ModelParams model;
  const SmcGains smc;
  const PidGains pid;

  const std::vector<std::string> labels{"classic", "tviw", "sapso"};
  const PsoVariant variants[] = {PsoVariant::Classic, PsoVariant::Tviw, PsoVariant::Sapso};
  std::vector<TuneResult> results;
  TuneConfig tc;
  if (a.dt) tc.fitness_dt = *a.dt;
  for (int v = 0; v < 3; ++v) {
    CommonArgs va = a;
    va.variant = labels[static_cast<std::size_t>(v)];
    results.push_back(tune(scenario, model, smc, pid, swarm_config(va, variants[v]), base, tc));
    std::printf("%s: gbest_f=%.6f\n", labels[static_cast<std::size_t>(v)].c_str(),
                results.back().optimization.gbest_f);
  }

  std::filesystem::create_directories(a.out_dir);
  const RunManifest manifest = make_manifest("compare", a, scenario);
  write_compare_csv(std::filesystem::path(a.out_dir) / "convergence.csv", labels,
                    {&results[0].optimization, &results[1].optimization,
                     &results[2].optimization});

  std::size_t winner = 0;
  for (std::size_t v = 1; v < 3; ++v)
    if (results[v].optimization.gbest_f < results[winner].optimization.gbest_f) winner = v;

  nlohmann::ordered_json summary;
  summary["winner"] = labels[winner];
  for (std::size_t v = 0; v < 3; ++v) {
    summary[labels[v]] = optimization_summary_json(results[v].optimization);
    summary[labels[v]]["gains"] = to_json(results[v].best_gains);
  }
  summary["manifest"] = to_json(manifest);
  summary["manifest"].erase("timestamp");
  write_text_file(std::filesystem::path(a.out_dir) / "summary.json", summary.dump(2) + "\n");
  write_manifest(a.out_dir, manifest);

  std::printf("winner=%s\n", labels[winner].c_str());
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Aerial slung-load transport: simulation, gain tuning, comparison"};
  app.require_subcommand(1);

  CommonArgs sim_args, tune_args, cmp_args;
  CLI::App* sim_cmd = app.add_subcommand("simulate", "run one closed-loop rollout");
  add_common(sim_cmd, sim_args, false);
  CLI::App* tune_cmd = app.add_subcommand("tune", "tune potential-field gains with PSO");
  add_common(tune_cmd, tune_args, true);
  CLI::App* cmp_cmd = app.add_subcommand("compare", "run all three PSO variants");
  add_common(cmp_cmd, cmp_args, true);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : kExitUsage;
  }

  try {
    if (sim_cmd->parsed()) return run_simulate(sim_args);
    if (tune_cmd->parsed()) return run_tune(tune_args);
    if (cmp_cmd->parsed()) return run_compare(cmp_args);
  } catch (const ScenarioError& e) {
    std::fprintf(stderr, "%s\n", e.what());
    return kExitScenario;
  } catch (const std::exception& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return kExitFault;
  }
  return kExitUsage;
}
