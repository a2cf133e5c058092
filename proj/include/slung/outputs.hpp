#pragma once

#include <filesystem>
#include <string>
#include <vector>

#include "json.hpp"

#include "slung/sim.hpp"

namespace slung {

inline constexpr const char* kToolVersion = "slung 0.1.0";

// Everything needed to reproduce a run. Written to manifest.json in every
// output bundle; the timestamp lives only here so data files stay
// byte-identical across reruns.
struct RunManifest {
  std::string command;
  std::string scenario_path;
  std::vector<std::string> variants;
  int particles = 0;
  int iterations = 0;
  std::uint64_t seed = 0;
  double dt = 0.0;
  double horizon = 0.0;
  std::string out_dir;
  std::string tool_version = kToolVersion;
  std::string timestamp;
};

// Shortest representation that round-trips exactly.
std::string format_double(double v);

nlohmann::ordered_json to_json(const RunManifest& m);
nlohmann::ordered_json to_json(const FitnessReport& r);
nlohmann::ordered_json to_json(const ApfGains& g);
nlohmann::ordered_json optimization_summary_json(const OptimizationResult& r);

void write_text_file(const std::filesystem::path& path, const std::string& content);

// Column layout is fixed:
// t,rq_x,rq_y,rq_z,load_x,load_y,load_z,leader_x,leader_y,leader_z,
// err_norm,s_x,s_y,s_z,f,min_clearance
void write_trajectory_csv(const std::filesystem::path& path, const RolloutLog& log,
                          const Vec3& r_t);

// iter,gbest_f
void write_convergence_csv(const std::filesystem::path& path, const OptimizationResult& r);

// iter,<label_0>,<label_1>,... one column per result, shared iteration index.
void write_compare_csv(const std::filesystem::path& path,
                       const std::vector<std::string>& labels,
                       const std::vector<const OptimizationResult*>& results);

}  // namespace slung
