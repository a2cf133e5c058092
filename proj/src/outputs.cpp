#include "slung/outputs.hpp"

#include <charconv>
#include <fstream>
#include <stdexcept>

namespace slung {

std::string format_double(double v) {
  char buf[32];
  auto [ptr, ec] = std::to_chars(buf, buf + sizeof(buf), v);
  if (ec != std::errc()) throw std::runtime_error("double formatting failed");
  return std::string(buf, ptr);
}

nlohmann::ordered_json to_json(const RunManifest& m) {
  nlohmann::ordered_json j;
  j["command"] = m.command;
  j["scenario"] = m.scenario_path;
  j["variants"] = m.variants;
  j["particles"] = m.particles;
  j["iterations"] = m.iterations;
  j["seed"] = m.seed;
  j["dt"] = m.dt;
  j["horizon"] = m.horizon;
  j["out_dir"] = m.out_dir;
  j["tool_version"] = m.tool_version;
  j["timestamp"] = m.timestamp;
  return j;
}

nlohmann::ordered_json to_json(const FitnessReport& r) {
  nlohmann::ordered_json j;
  j["J"] = r.J;
  j["final_error"] = r.final_error;
  if (r.settle_time)
    j["settle_time"] = *r.settle_time;
  else
    j["settle_time"] = nullptr;
  j["min_clearance"] = r.min_clearance;
  j["collided"] = r.collided;
  return j;
}

nlohmann::ordered_json to_json(const ApfGains& g) {
  nlohmann::ordered_json j;
  j["k_rep"] = {g.k_rep.x(), g.k_rep.y(), g.k_rep.z()};
  j["k_att"] = {g.k_att.x(), g.k_att.y(), g.k_att.z()};
  j["rho0"] = g.rho0;
  j["n_exp"] = g.n_exp;
  j["v_p_max"] = g.v_p_max;
  j["leader_damping"] = g.leader_damping;
  return j;
}

nlohmann::ordered_json optimization_summary_json(const OptimizationResult& r) {
  nlohmann::ordered_json j;
  j["gbest_f"] = r.gbest_f;
  std::vector<double> x(r.gbest_x.data(), r.gbest_x.data() + r.gbest_x.size());
  j["gbest_x"] = x;
  j["evaluations"] = r.evaluations;
  j["nonfinite_evaluations"] = r.nonfinite_evaluations;
  return j;
}

void write_text_file(const std::filesystem::path& path, const std::string& content) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot open for writing: " + path.string());
  out << content;
  if (!out) throw std::runtime_error("write failed: " + path.string());
}

void write_trajectory_csv(const std::filesystem::path& path, const RolloutLog& log,
                          const Vec3& r_t) {
  std::string out =
      "t,rq_x,rq_y,rq_z,load_x,load_y,load_z,leader_x,leader_y,leader_z,"
      "err_norm,s_x,s_y,s_z,f,min_clearance\n";
  for (const auto& s : log.steps) {
    const double err = (s.load - r_t).norm();
    const double cols[] = {s.t,        s.r_q.x(),     s.r_q.y(),    s.r_q.z(),
                           s.load.x(), s.load.y(),    s.load.z(),   s.leader.x(),
                           s.leader.y(), s.leader.z(), err,          s.surface.x(),
                           s.surface.y(), s.surface.z(), s.thrust,   s.min_clearance};
    for (std::size_t i = 0; i < std::size(cols); ++i) {
      if (i) out += ',';
      out += format_double(cols[i]);
    }
    out += '\n';
  }
  write_text_file(path, out);
}

void write_convergence_csv(const std::filesystem::path& path, const OptimizationResult& r) {
  std::string out = "iter,gbest_f\n";
  for (std::size_t k = 0; k < r.history.size(); ++k) {
    out += std::to_string(k);
    out += ',';
    out += format_double(r.history[k]);
    out += '\n';
  }
  write_text_file(path, out);
}

void write_compare_csv(const std::filesystem::path& path,
                       const std::vector<std::string>& labels,
                       const std::vector<const OptimizationResult*>& results) {
  std::string out = "iter";
  for (const auto& l : labels) {
    out += ',';
    out += l;
  }
  out += '\n';
  std::size_t rows = 0;
  for (const auto* r : results) rows = std::max(rows, r->history.size());
  for (std::size_t k = 0; k < rows; ++k) {
    out += std::to_string(k);
    for (const auto* r : results) {
      out += ',';
      out += k < r->history.size() ? format_double(r->history[k]) : std::string();
    }
    out += '\n';
  }
  write_text_file(path, out);
}

}  // namespace slung
