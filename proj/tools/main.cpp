// Batch front door: experiment configuration, system catalog, subcommands
// wiring the library modules, machine-readable reports.
//
// Exit codes: 0 success / verdict pass, 1 verdict fail, 2 configuration
// error, 3 numerical failure.

#include <cstdint>
#include <filesystem>
#include <iostream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "wkam/config.hpp"
#include "wkam/flow.hpp"
#include "wkam/integrability.hpp"
#include "wkam/io.hpp"
#include "wkam/rigid_body.hpp"
#include "wkam/system.hpp"
#include "wkam/util.hpp"
#include "wkam/weak_kam.hpp"

namespace {

using wkam::CohomologyClass;
using wkam::ExperimentConfig;
using wkam::Vec;
using json = nlohmann::ordered_json;

struct Flag {
  std::string key;
  std::string value;
  bool provided = false;
};

// Registers --<key> on the app; provided flags override config-file keys.
class FlagSet {
 public:
  explicit FlagSet(CLI::App* app) : app_(app) {}

  void add(const std::string& key, const std::string& description) {
    flags_.push_back(std::make_unique<Flag>());
    Flag* f = flags_.back().get();
    f->key = key;
    std::string name = "--" + key;
    for (auto& ch : name)
      if (ch == '_') ch = '-';
    app_->add_option_function<std::string>(
            name,
            [f](const std::string& v) {
              f->value = v;
              f->provided = true;
            },
            description)
        ->expected(1);
  }

  void apply(ExperimentConfig& cfg) const {
    for (const auto& f : flags_)
      if (f->provided) cfg.set(f->key, f->value);
  }

 private:
  CLI::App* app_;
  std::vector<std::unique_ptr<Flag>> flags_;
};

struct CommonArgs {
  ExperimentConfig cfg;
  std::string output_dir;
  std::uint64_t seed = 12345;
  bool json_mode = false;
  std::string hash;
};

CommonArgs finalize(ExperimentConfig cfg) {
  CommonArgs args;
  args.output_dir = cfg.get_string("output_dir", ".");
  args.seed = static_cast<std::uint64_t>(cfg.get_real("seed", 12345));
  args.json_mode = cfg.get_flag("json", false);
  args.hash = cfg.hash();
  std::filesystem::create_directories(args.output_dir);
  args.cfg = std::move(cfg);
  return args;
}

std::string artifact(const CommonArgs& args, const std::string& name) {
  return (std::filesystem::path(args.output_dir) / name).string();
}

void summary_line(const CommonArgs& args, const std::string& human, json obj) {
  if (args.json_mode) {
    obj["config_hash"] = args.hash;
    obj["seed"] = args.seed;
    std::cout << obj.dump() << "\n";
  } else {
    std::cout << human << "\n";
  }
}

wkam::TonelliSystem make_system_from(const ExperimentConfig& cfg) {
  const std::string id = cfg.get_string("system", "");
  if (id.empty()) throw wkam::config_error("config: key 'system' is required");
  int dim = cfg.get_int("dim", id == "mech2d" ? 2 : 1);
  return wkam::make_system(id, dim, cfg.get_real("eps", 0.1));
}

wkam::DiscreteActionParams params_from(const ExperimentConfig& cfg, int dim) {
  wkam::DiscreteActionParams params;
  params.N = cfg.get_int("N", 256);
  params.h = cfg.get_real("h", 0.1);
  params.vmax = cfg.get_real("vmax", dim == 1 ? 4.0 : 2.0);
  params.validate(dim);
  return params;
}

wkam::SolveOptions solve_options_from(const ExperimentConfig& cfg) {
  wkam::SolveOptions opt;
  opt.tol = cfg.get_real("tol", 1e-9);
  opt.max_iter = cfg.get_int("max_iter", 30000);
  opt.tol_aubry = cfg.get_real("tol_aubry", -1.0);
  opt.energy_tol = cfg.get_real("energy_tol", 5e-2);
  if (cfg.has("steps")) opt.rotation_steps = cfg.get_int("steps", 0);
  return opt;
}

CohomologyClass class_from(const ExperimentConfig& cfg, int dim) {
  const Vec c = cfg.get_vec("c", Vec::Zero(dim));
  if (c.size() != dim) throw wkam::config_error("config: 'c' has wrong dimension");
  return CohomologyClass(c);
}

std::vector<CohomologyClass> class_list_from(const ExperimentConfig& cfg, int dim) {
  std::vector<CohomologyClass> cs;
  if (cfg.has("c_grid")) {
    if (dim != 1)
      throw wkam::config_error("config: 'c_grid' ranges are one-dimensional; use c_list");
    for (double c : ExperimentConfig::parse_range(cfg.get_string("c_grid", "")))
      cs.push_back(CohomologyClass::of(c));
    return cs;
  }
  if (cfg.has("c_list")) {
    std::string spec = cfg.get_string("c_list", "");
    std::string cur;
    auto flush = [&] {
      std::vector<double> vals;
      std::string num;
      for (char ch : cur + ",") {
        if (ch == ',') {
          if (!num.empty()) vals.push_back(std::stod(num));
          num.clear();
        } else {
          num.push_back(ch);
        }
      }
      if (static_cast<int>(vals.size()) != dim)
        throw wkam::config_error("config: c_list entry has wrong dimension");
      Vec v(dim);
      for (int i = 0; i < dim; ++i) v[i] = vals[i];
      cs.push_back(CohomologyClass(v));
      cur.clear();
    };
    for (char ch : spec) {
      if (ch == ';')
        flush();
      else
        cur.push_back(ch);
    }
    if (!cur.empty()) flush();
    return cs;
  }
  cs.push_back(class_from(cfg, dim));
  return cs;
}

// --- subcommands --------------------------------------------------------------

int run_bracket(const CommonArgs& args) {
  const auto sys = make_system_from(args.cfg);
  const auto f = wkam::parse_observable(args.cfg.get_string("f", "H"), sys);
  const auto g = wkam::parse_observable(args.cfg.get_string("g", "H"), sys);

  json out;
  out["f"] = f.name;
  out["g"] = g.name;
  if (args.cfg.has("x0") || args.cfg.has("p0")) {
    const Vec x0 = args.cfg.get_vec("x0", Vec::Zero(sys.dim));
    const Vec p0 = args.cfg.get_vec("p0", Vec::Zero(sys.dim));
    const double v = wkam::poisson_bracket(f, g, wkam::PhasePoint(x0, p0));
    out["value"] = v;
    summary_line(args, "bracket {" + f.name + "," + g.name + "} = " + wkam::fmt_num(v),
                 out);
  } else {
    const auto samples = wkam::sample_phase_points(sys.dim, 512, 3.0, args.seed);
    const double v = wkam::commutation_defect(f, g, samples);
    out["max_abs"] = v;
    out["samples"] = 512;
    summary_line(args,
                 "bracket max |{" + f.name + "," + g.name + "}| over 512 samples = " +
                     wkam::fmt_num(v),
                 out);
  }
  wkam::write_text_file(artifact(args, "bracket.json"), out.dump(2) + "\n");
  return 0;
}

int run_flow(const CommonArgs& args) {
  const auto sys = make_system_from(args.cfg);
  const Vec x0 = args.cfg.get_vec("x0", Vec::Zero(sys.dim));
  const Vec p0 = args.cfg.get_vec("p0", Vec::Zero(sys.dim));
  if (x0.size() != sys.dim || p0.size() != sys.dim)
    throw wkam::config_error("config: x0/p0 dimension mismatch");
  const double t = args.cfg.get_real("t", 1.0);
  const double dt = args.cfg.get_real("dt", 1e-3);

  const auto traj = wkam::flow(wkam::Generator(sys), wkam::PhasePoint(x0, p0), t, dt);
  wkam::write_trajectory_csv(artifact(args, "trajectory.csv"), traj, sys);

  std::vector<std::string> tokens = {"H"};
  if (args.cfg.has("observables")) tokens = args.cfg.get_list("observables");
  for (const auto& tok : tokens) {
    const auto f = wkam::parse_observable(tok, sys);
    const double defect = wkam::first_integral_defect(f, traj);
    json out;
    out["check"] = "first-integral:" + f.name;
    out["defect"] = defect;
    summary_line(args, "flow defect of " + f.name + " = " + wkam::fmt_num(defect), out);
  }
  return 0;
}

int run_alpha(const CommonArgs& args) {
  const auto sys = make_system_from(args.cfg);
  const auto params = params_from(args.cfg, sys.dim);
  const auto cs = class_list_from(args.cfg, sys.dim);
  const auto opt = solve_options_from(args.cfg);

  const auto table = wkam::alpha_table(sys, cs, params, opt);
  wkam::write_alpha_csv(artifact(args, "alpha.csv"), table);

  json full;
  full["config_hash"] = args.hash;
  full["seed"] = args.seed;
  full["tolerances"] = {{"solver_tol", opt.tol}};
  json rows = json::array();
  for (const auto& row : table.rows) {
    json r;
    r["c"] = std::vector<double>(row.c.data(), row.c.data() + row.c.size());
    r["alpha"] = row.alpha;
    r["rotation_vector"] =
        std::vector<double>(row.rotation.data(), row.rotation.data() + row.rotation.size());
    r["converged"] = row.converged;
    rows.push_back(r);
    json line = r;
    summary_line(args,
                 "alpha(" + wkam::fmt_num(row.c[0]) +
                     (row.c.size() > 1 ? "," + wkam::fmt_num(row.c[1]) : "") +
                     ") = " + wkam::fmt_num(row.alpha) +
                     (row.converged ? "" : "  [not converged]"),
                 line);
  }
  full["rows"] = rows;
  wkam::write_text_file(artifact(args, "alpha_table.json"), full.dump(2) + "\n");
  return 0;
}

int run_weakkam(const CommonArgs& args, bool aubry_focus) {
  const auto sys = make_system_from(args.cfg);
  const auto params = params_from(args.cfg, sys.dim);
  const auto c = class_from(args.cfg, sys.dim);
  const auto opt = solve_options_from(args.cfg);

  const auto result = wkam::solve_weak_kam(sys, c, params, opt);
  wkam::write_grid_csv(artifact(args, "grid.csv"), result);
  wkam::write_text_file(
      artifact(args, "weakkam.json"),
      wkam::weakkam_summary_json(result, args.hash, args.seed, opt.tol,
                                 opt.energy_tol) +
          "\n");

  json out;
  out["alpha"] = result.alpha;
  out["converged"] = result.converged;
  out["iterations"] = result.iterations;
  out["aubry_nodes"] = result.aubry_nodes.size();
  out["coverage"] = static_cast<double>(result.aubry_nodes.size()) / result.u.size();
  out["energy_defect"] = result.energy_defect;
  if (aubry_focus) {
    summary_line(args,
                 "aubry: " + std::to_string(result.aubry_nodes.size()) + " of " +
                     std::to_string(result.u.size()) + " nodes (tol " +
                     wkam::fmt_num(result.tol_aubry) + "), energy defect " +
                     wkam::fmt_num(result.energy_defect),
                 out);
  } else {
    summary_line(args,
                 "weakkam: alpha = " + wkam::fmt_num(result.alpha) +
                     (result.converged ? "" : " [not converged]") + ", aubry " +
                     std::to_string(result.aubry_nodes.size()) + "/" +
                     std::to_string(result.u.size()) + ", energy defect " +
                     wkam::fmt_num(result.energy_defect),
                 out);
  }
  return 0;
}

int run_beta(const CommonArgs& args) {
  const auto sys = make_system_from(args.cfg);
  const auto params = params_from(args.cfg, sys.dim);
  const auto cs = class_list_from(args.cfg, sys.dim);
  const auto opt = solve_options_from(args.cfg);
  if (!args.cfg.has("h_grid"))
    throw wkam::config_error("config: beta needs key 'h_grid'");
  if (sys.dim != 1)
    throw wkam::config_error("config: beta ranges are one-dimensional");

  const auto table = wkam::alpha_table(sys, cs, params, opt);
  wkam::write_alpha_csv(artifact(args, "alpha.csv"), table);
  std::vector<Vec> hs;
  for (double h : ExperimentConfig::parse_range(args.cfg.get_string("h_grid", "")))
    hs.push_back(Vec::Constant(1, h));
  const auto beta = wkam::beta_from_alpha(table, hs);
  wkam::write_beta_csv(artifact(args, "beta.csv"), beta);

  for (const auto& row : beta.rows) {
    json r;
    r["h"] = row.h[0];
    r["beta"] = row.beta;
    r["slope_gap"] = row.slope_gap;
    summary_line(args,
                 "beta(" + wkam::fmt_num(row.h[0]) + ") = " + wkam::fmt_num(row.beta) +
                     ", slope gap " + wkam::fmt_num(row.slope_gap),
                 r);
  }
  return 0;
}

int run_check(const CommonArgs& args) {
  const auto sys = make_system_from(args.cfg);
  const auto params = params_from(args.cfg, sys.dim);
  const auto cs = class_list_from(args.cfg, sys.dim);

  wkam::IntegralFamily fam;
  const auto tokens = args.cfg.get_list("integrals");
  if (tokens.empty() || (tokens.size() == 1 && tokens.front().empty()))
    throw wkam::config_error("config: check needs key 'integrals'");
  for (const auto& tok : tokens) {
    fam.members.push_back(wkam::parse_observable(tok, sys));
    fam.includes_hamiltonian = fam.includes_hamiltonian || tok == "H";
  }

  wkam::VerdictOptions vopt;
  vopt.tol_bracket = args.cfg.get_real("tol_bracket", 5e-2);
  vopt.sv_tol = args.cfg.get_real("sv_tol", 1e-8);
  vopt.flow_t = args.cfg.get_real("t", 1.0);
  vopt.flow_dt = args.cfg.get_real("dt", 1e-3);
  vopt.graph_seeds = args.cfg.get_int("n_seeds", 16);
  vopt.solve = solve_options_from(args.cfg);

  const auto report = wkam::weak_integrability_verdict(sys, fam, cs, params, vopt,
                                                       args.seed);
  wkam::write_text_file(artifact(args, "verdict.json"),
                        wkam::verdict_json(report, args.hash) + "\n");

  for (const auto& rec : report.records) {
    json r;
    r["name"] = rec.name;
    r["value"] = std::isfinite(rec.value) ? json(rec.value) : json(nullptr);
    r["threshold"] = rec.threshold;
    r["pass"] = rec.pass;
    summary_line(args,
                 std::string(rec.pass ? "[PASS] " : "[FAIL] ") + rec.name + " = " +
                     wkam::fmt_num(rec.value) + " (threshold " +
                     wkam::fmt_num(rec.threshold) + ")",
                 r);
  }
  json verdict;
  verdict["verdict"] =
      report.pass ? "weakly-integrable-consistent" : "not-weakly-integrable";
  summary_line(args,
               report.pass ? "verdict: weakly-integrable-consistent"
                           : "verdict: NOT consistent with weak integrability",
               verdict);
  return report.pass ? 0 : 1;
}

int run_rigidbody(const CommonArgs& args) {
  const Vec inertia = args.cfg.get_vec("inertia", Vec::Zero(0));
  if (inertia.size() != 3) throw wkam::config_error("config: 'inertia' needs 3 entries");
  const Vec pb0v = args.cfg.get_vec("pb0", args.cfg.get_vec("p0", Vec::Zero(0)));
  if (pb0v.size() != 3)
    throw wkam::config_error("config: rigidbody needs 'pb0' (or 'p0') with 3 entries");
  const double t = args.cfg.get_real("t", 100.0);
  const double dt = args.cfg.get_real("dt", 1e-3);

  const wkam::InertiaOperator A(inertia[0], inertia[1], inertia[2]);
  wkam::RigidBodyState s0;
  s0.pb = wkam::Vec3(pb0v[0], pb0v[1], pb0v[2]);
  if (args.cfg.has("axis")) {
    const Vec axis = args.cfg.get_vec("axis", Vec::Zero(3));
    if (axis.size() != 3) throw wkam::config_error("config: 'axis' needs 3 entries");
    const double angle = args.cfg.get_real("angle", 0.0);
    wkam::Vec3 w(axis[0], axis[1], axis[2]);
    if (w.norm() > 0) w *= angle / w.norm();
    s0.R = wkam::exp_so3(w);
  }

  const auto traj = wkam::integrate_rigid_body(A, s0, t, dt);
  wkam::write_rigid_csv(artifact(args, "rigidbody.csv"), traj, A);

  const auto inv0 = wkam::rigid_body_invariants(A, traj.states.front());
  const wkam::Vec3 ps0 = wkam::spatial_momentum(traj.states.front());
  double energy_drift = 0, casimir_drift = 0, ps_drift = 0, ortho = 0;
  for (const auto& s : traj.states) {
    const auto inv = wkam::rigid_body_invariants(A, s);
    energy_drift = std::max(energy_drift, std::abs(inv.energy - inv0.energy));
    casimir_drift = std::max(casimir_drift, std::abs(inv.casimir - inv0.casimir));
    ps_drift = std::max(ps_drift, (wkam::spatial_momentum(s) - ps0).norm());
    ortho = std::max(ortho,
                     (s.R.transpose() * s.R - wkam::Mat3::Identity()).norm());
  }
  const double erel = energy_drift / std::max(1e-300, std::abs(inv0.energy));
  const double crel = casimir_drift / std::max(1e-300, std::abs(inv0.casimir));
  const double prel = ps_drift / std::max(1e-300, ps0.norm());

  json out;
  out["energy_rel_drift"] = erel;
  out["casimir_rel_drift"] = crel;
  out["spatial_momentum_rel_drift"] = prel;
  out["orthogonality_defect"] = ortho;
  out["steps"] = traj.states.size() - 1;
  summary_line(args,
               "rigidbody: relative drifts energy " + wkam::fmt_num(erel) +
                   ", casimir " + wkam::fmt_num(crel) + ", spatial momentum " +
                   wkam::fmt_num(prel) + ", |R^T R - I| <= " + wkam::fmt_num(ortho),
               out);
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"weak-KAM laboratory for Tonelli Hamiltonians on the torus"};
  app.set_help_flag("--help", "print help");
  app.require_subcommand(1);

  const std::vector<std::pair<std::string, std::string>> subs = {
      {"bracket", "Poisson bracket of two observables"},
      {"flow", "integrate a Hamiltonian flow and report conservation defects"},
      {"alpha", "effective Hamiltonian alpha(c) over a grid of classes"},
      {"weakkam", "solve one class: alpha, subsolution, Aubry set, rotation vector"},
      {"aubry", "projected Aubry set with lifted momenta"},
      {"beta", "Legendre-Fenchel conjugate of the alpha table"},
      {"check", "weak-integrability verdict (exit 0 iff consistent)"},
      {"rigidbody", "left-invariant geodesic flow on SO(3): Euler equations"},
  };

  struct SubState {
    CLI::App* cmd = nullptr;
    std::unique_ptr<FlagSet> flags;
    std::string config_path;
  };
  std::vector<SubState> states(subs.size());

  for (std::size_t i = 0; i < subs.size(); ++i) {
    auto& st = states[i];
    st.cmd = app.add_subcommand(subs[i].first, subs[i].second);
    st.cmd->set_help_flag("--help", "print help");
    st.cmd->add_option("--config", st.config_path, "config file (key = value lines)");
    st.flags = std::make_unique<FlagSet>(st.cmd);
    for (const char* key :
         {"system", "dim", "eps", "N", "h", "vmax", "c", "c_grid", "h_grid",
          "integrals", "c_list", "t", "dt", "x0", "p0", "seed", "output_dir",
          "tol", "max_iter", "energy_tol", "tol_aubry", "sv_tol", "tol_bracket",
          "steps", "restarts", "inertia", "pb0", "axis", "angle", "json", "f",
          "g", "observables", "s", "n_seeds", "delta"})
      st.flags->add(key, "");
  }

  CLI11_PARSE(app, argc, argv);

  try {
    for (std::size_t i = 0; i < subs.size(); ++i) {
      if (!states[i].cmd->parsed()) continue;
      ExperimentConfig cfg;
      if (!states[i].config_path.empty())
        cfg = ExperimentConfig::from_file(states[i].config_path);
      states[i].flags->apply(cfg);
      const CommonArgs args = finalize(std::move(cfg));
      const std::string& name = subs[i].first;
      if (name == "bracket") return run_bracket(args);
      if (name == "flow") return run_flow(args);
      if (name == "alpha") return run_alpha(args);
      if (name == "weakkam") return run_weakkam(args, false);
      if (name == "aubry") return run_weakkam(args, true);
      if (name == "beta") return run_beta(args);
      if (name == "check") return run_check(args);
      if (name == "rigidbody") return run_rigidbody(args);
    }
    throw wkam::config_error("no subcommand selected");
  } catch (const wkam::config_error& e) {
    std::cerr << "configuration error: " << e.what() << "\n";
    return 2;
  } catch (const wkam::numerical_error& e) {
    std::cerr << "numerical failure: " << e.what() << "\n";
    return 3;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 3;
  }
  return 0;
}
