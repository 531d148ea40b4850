#pragma once

#include <string>
#include <vector>

#include "wkam/flow.hpp"
#include "wkam/integrability.hpp"
#include "wkam/rigid_body.hpp"
#include "wkam/system.hpp"
#include "wkam/weak_kam.hpp"

namespace wkam {

/// Shortest float text that round-trips; deterministic across runs.
std::string fmt_num(double v);

/// Header t,x1..xn,p1..pn,H
void write_trajectory_csv(const std::string& path, const Trajectory& traj,
                          const TonelliSystem& sys);

/// Header x1..xn,p1..pn,w
void write_measure_csv(const std::string& path, const EmpiricalMeasure& mu);

/// Header x1[,x2],u,indicator,p1[,p2]
void write_grid_csv(const std::string& path, const WeakKamResult& result);

/// Header c1[,c2],alpha
void write_alpha_csv(const std::string& path, const AlphaTable& table);

/// Header h1[,h2],beta,slope_gap
void write_beta_csv(const std::string& path, const BetaTable& table);

/// Header t,R11..R33,pb1..pb3,ps1..ps3,energy,casimir
void write_rigid_csv(const std::string& path, const RigidBodyTrajectory& traj,
                     const InertiaOperator& inertia);

/// One JSON object: {c, alpha, converged, iterations, rotation_vector,
/// energy_defect} plus provenance fields (config hash, seed, tolerances).
std::string weakkam_summary_json(const WeakKamResult& result,
                                 const std::string& config_hash,
                                 std::uint64_t seed, double solver_tol,
                                 double energy_tol);

/// One record per check: {name, value, threshold, pass, seed}.
std::string verdict_json(const VerdictReport& report, const std::string& config_hash);

void write_text_file(const std::string& path, const std::string& content);

}  // namespace wkam
