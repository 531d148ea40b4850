#include "wkam/io.hpp"

#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <sstream>

#include <json.hpp>

namespace wkam {

std::string fmt_num(double v) {
  if (v == 0.0) v = 0.0;  // collapse negative zero
  char buf[40];
  // shortest representation that round-trips
  for (int prec = 1; prec <= 17; ++prec) {
    std::snprintf(buf, sizeof(buf), "%.*g", prec, v);
    if (std::strtod(buf, nullptr) == v) return buf;
  }
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

void write_text_file(const std::string& path, const std::string& content) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw config_error("cannot write file '" + path + "'");
  out << content;
}

void write_trajectory_csv(const std::string& path, const Trajectory& traj,
                          const TonelliSystem& sys) {
  std::ostringstream os;
  os << "t";
  for (int i = 1; i <= sys.dim; ++i) os << ",x" << i;
  for (int i = 1; i <= sys.dim; ++i) os << ",p" << i;
  os << ",H\n";
  for (std::size_t k = 0; k < traj.states.size(); ++k) {
    const auto& z = traj.states[k];
    os << fmt_num(traj.times[k]);
    for (int i = 0; i < sys.dim; ++i) os << "," << fmt_num(z.x[i]);
    for (int i = 0; i < sys.dim; ++i) os << "," << fmt_num(z.p[i]);
    os << "," << fmt_num(sys.hamiltonian(z.x, z.p)) << "\n";
  }
  write_text_file(path, os.str());
}

void write_measure_csv(const std::string& path, const EmpiricalMeasure& mu) {
  mu.validate();
  const int dim = mu.points.front().dim();
  std::ostringstream os;
  for (int i = 1; i <= dim; ++i) os << (i > 1 ? "," : "") << "x" << i;
  for (int i = 1; i <= dim; ++i) os << ",p" << i;
  os << ",w\n";
  for (std::size_t k = 0; k < mu.points.size(); ++k) {
    const auto& z = mu.points[k];
    for (int i = 0; i < dim; ++i) os << (i ? "," : "") << fmt_num(z.x[i]);
    for (int i = 0; i < dim; ++i) os << "," << fmt_num(z.p[i]);
    os << "," << fmt_num(mu.weights[k]) << "\n";
  }
  write_text_file(path, os.str());
}

void write_grid_csv(const std::string& path, const WeakKamResult& result) {
  const int dim = result.u.dim;
  std::ostringstream os;
  os << (dim == 1 ? "x1" : "x1,x2") << ",u,indicator,"
     << (dim == 1 ? "p1" : "p1,p2") << "\n";
  const bool with_aubry = result.indicator.size() == result.u.size();
  for (int node = 0; node < result.u.size(); ++node) {
    const Vec x = result.u.node_position(node);
    for (int a = 0; a < dim; ++a) os << (a ? "," : "") << fmt_num(x[a]);
    os << "," << fmt_num(result.u.values[node]);
    os << "," << fmt_num(with_aubry ? result.indicator.values[node] : 0.0);
    for (int a = 0; a < dim; ++a)
      os << ","
         << fmt_num(with_aubry ? result.momentum[a].values[node] : result.c.c[a]);
    os << "\n";
  }
  write_text_file(path, os.str());
}

void write_alpha_csv(const std::string& path, const AlphaTable& table) {
  std::ostringstream os;
  const int dim = table.rows.empty() ? 1 : static_cast<int>(table.rows.front().c.size());
  os << (dim == 1 ? "c1" : "c1,c2") << ",alpha\n";
  for (const auto& row : table.rows) {
    for (int a = 0; a < dim; ++a) os << (a ? "," : "") << fmt_num(row.c[a]);
    os << "," << fmt_num(row.alpha) << "\n";
  }
  write_text_file(path, os.str());
}

void write_beta_csv(const std::string& path, const BetaTable& table) {
  std::ostringstream os;
  const int dim = table.rows.empty() ? 1 : static_cast<int>(table.rows.front().h.size());
  os << (dim == 1 ? "h1" : "h1,h2") << ",beta,slope_gap\n";
  for (const auto& row : table.rows) {
    for (int a = 0; a < dim; ++a) os << (a ? "," : "") << fmt_num(row.h[a]);
    os << "," << fmt_num(row.beta) << "," << fmt_num(row.slope_gap) << "\n";
  }
  write_text_file(path, os.str());
}

void write_rigid_csv(const std::string& path, const RigidBodyTrajectory& traj,
                     const InertiaOperator& inertia) {
  std::ostringstream os;
  os << "t,R11,R12,R13,R21,R22,R23,R31,R32,R33,pb1,pb2,pb3,ps1,ps2,ps3,energy,casimir\n";
  for (std::size_t k = 0; k < traj.states.size(); ++k) {
    const auto& s = traj.states[k];
    os << fmt_num(traj.times[k]);
    for (int i = 0; i < 3; ++i)
      for (int j = 0; j < 3; ++j) os << "," << fmt_num(s.R(i, j));
    for (int i = 0; i < 3; ++i) os << "," << fmt_num(s.pb[i]);
    const Vec3 ps = spatial_momentum(s);
    for (int i = 0; i < 3; ++i) os << "," << fmt_num(ps[i]);
    const auto inv = rigid_body_invariants(inertia, s);
    os << "," << fmt_num(inv.energy) << "," << fmt_num(inv.casimir) << "\n";
  }
  write_text_file(path, os.str());
}

std::string weakkam_summary_json(const WeakKamResult& result,
                                 const std::string& config_hash,
                                 std::uint64_t seed, double solver_tol,
                                 double energy_tol) {
  nlohmann::ordered_json j;
  j["c"] = std::vector<double>(result.c.c.data(), result.c.c.data() + result.c.c.size());
  j["alpha"] = result.alpha;
  j["converged"] = result.converged;
  j["iterations"] = result.iterations;
  if (result.rotation_vector.size() > 0)
    j["rotation_vector"] = std::vector<double>(
        result.rotation_vector.data(),
        result.rotation_vector.data() + result.rotation_vector.size());
  else
    j["rotation_vector"] = nullptr;
  j["energy_defect"] = result.energy_defect;
  j["residual"] = result.residual;
  j["aubry_nodes"] = result.aubry_nodes.size();
  j["reach_saturated"] = result.reach_saturated;
  j["tolerances"] = {{"solver_tol", solver_tol},
                     {"tol_aubry", result.tol_aubry},
                     {"energy_tol", energy_tol}};
  j["config_hash"] = config_hash;
  j["seed"] = seed;
  return j.dump();
}

std::string verdict_json(const VerdictReport& report, const std::string& config_hash) {
  nlohmann::ordered_json j;
  j["pass"] = report.pass;
  j["config_hash"] = config_hash;
  nlohmann::ordered_json checks = nlohmann::ordered_json::array();
  for (const auto& r : report.records) {
    nlohmann::ordered_json cj;
    cj["name"] = r.name;
    cj["value"] = std::isfinite(r.value) ? nlohmann::ordered_json(r.value)
                                         : nlohmann::ordered_json(nullptr);
    cj["threshold"] = r.threshold;
    cj["pass"] = r.pass;
    cj["seed"] = r.seed;
    checks.push_back(cj);
  }
  j["checks"] = checks;
  return j.dump(2);
}

}  // namespace wkam
