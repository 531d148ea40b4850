#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "wkam/flow.hpp"
#include "wkam/system.hpp"
#include "wkam/types.hpp"
#include "wkam/weak_kam.hpp"

namespace wkam {

/// Candidate integrals of motion F_1..F_k; at most 2n of them, all periodic.
struct IntegralFamily {
  std::vector<Observable> members;
  bool includes_hamiltonian = false;

  void validate(int dim) const;
};

/// Halton sequence over [0,1)^n x [-P, P]^n; the seed offsets the start index.
std::vector<PhasePoint> sample_phase_points(int dim, int count, double momentum_box,
                                            std::uint64_t seed);

struct RankResult {
  int min_rank = 0;
  PhasePoint worst;
  bool degenerate = false;  // a sampled gradient matrix was numerically zero
};

/// Per sample, count singular values of the k x 2n gradient matrix above
/// sv_tol * (largest singular value); matrices below degenerate_tol in norm
/// count as rank 0. Returns the minimum over samples.
RankResult independence_rank(const IntegralFamily& fam,
                             const std::vector<PhasePoint>& samples,
                             double sv_tol = 1e-8, double degenerate_tol = 1e-10);

/// max over samples of |{f, g}|.
double commutation_defect(const Observable& f, const Observable& g,
                          const std::vector<PhasePoint>& samples);

/// max over lifted Aubry points (x, c + du(x)) of |{f, g}|.
double involution_on_aubry(const Observable& f, const Observable& g,
                           const WeakKamResult& wk);

/// Push every lifted Aubry point by Phi_f^t and return the largest distance
/// to the lifted Aubry set (nearest node, phase metric).
double aubry_invariance_defect(const Generator& f, const WeakKamResult& wk,
                               double t, double dt);

/// Seed points on the graph (x, c + du(x)), flow them under Phi_H^t, and
/// return max |p(t) - (c + du(x(t)))| with du interpolated bilinearly.
/// Requires a full-support Aubry estimate ("graph-not-full" otherwise).
double graph_invariance_defect(const TonelliSystem& sys, const WeakKamResult& wk,
                               double t, double dt, int n_seeds,
                               std::uint64_t seed = 0);

/// max - min of f over the lifted graph; requires full support.
double constancy_on_graph(const Observable& f, const WeakKamResult& wk);

struct UniquenessProbe {
  double max_pairwise_sup = 0;
  bool all_converged = true;
};

/// Re-solve from n_restarts random initial grids (values uniform in [0,1]);
/// normalized solutions are compared in the sup norm.
UniquenessProbe uniqueness_probe(const TonelliSystem& sys, const CohomologyClass& c,
                                 const DiscreteActionParams& params, int n_restarts,
                                 std::uint64_t seed, const SolveOptions& opt = {});

struct CheckRecord {
  std::string name;
  double value = 0;
  double threshold = 0;
  bool pass = false;
  std::uint64_t seed = 0;
};

struct VerdictReport {
  std::vector<CheckRecord> records;  // sorted by name
  bool pass = false;

  std::vector<std::string> failing() const;
};

struct VerdictOptions {
  double tol_bracket = 5e-2;
  double sv_tol = 1e-8;
  double momentum_box = 3.0;
  int n_samples = 512;
  double flow_t = 1.0;
  double flow_dt = 1e-3;
  int graph_seeds = 16;
  SolveOptions solve;
};

/// Aggregated falsifiable checklist: commutation of each member with H,
/// independence on box samples plus Aubry lifts, and per class the
/// full-support / graph-invariance / constancy / involution / invariance
/// checks. Verdict passes iff every record passes.
VerdictReport weak_integrability_verdict(const TonelliSystem& sys,
                                         const IntegralFamily& fam,
                                         const std::vector<CohomologyClass>& cs,
                                         const DiscreteActionParams& params,
                                         const VerdictOptions& opt = {},
                                         std::uint64_t seed = 12345);

}  // namespace wkam
