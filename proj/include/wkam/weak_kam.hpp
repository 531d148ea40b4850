#pragma once

#include <vector>

#include "wkam/system.hpp"
#include "wkam/types.hpp"

namespace wkam {

/// Real values on a uniform periodic grid over T^n (n = 1 or 2), spacing 1/N.
/// 2D storage is row-major: flat = i1 * N + i2.
struct GridFunction {
  int dim = 1;
  int N = 0;
  Eigen::ArrayXd values;

  static GridFunction zeros(int dim, int N);
  static GridFunction constant(int dim, int N, double value);

  int size() const { return static_cast<int>(values.size()); }
  double spacing() const { return 1.0 / N; }
  Vec node_position(int flat) const;
  int node_index(int i1, int i2 = 0) const;

  /// Centered-difference gradient along one axis, periodic indexing.
  GridFunction centered_gradient(int axis) const;
  /// Bilinear (linear in 1D) periodic interpolation at x in [0,1)^dim.
  double interpolate(const Vec& x) const;
};

/// Discretization of the one-step action: time step h, velocity truncation
/// vmax, grid size N.
struct DiscreteActionParams {
  int N = 256;
  double h = 0.1;
  double vmax = 4.0;

  void validate(int dim) const;
};

/// h L(y, d/h) - <c, d> with d the minimal periodic representative of x - y;
/// +infinity when |d|/h exceeds vmax.
double one_step_cost(const TonelliSystem& sys, const Vec& y, const Vec& x,
                     const CohomologyClass& c, const DiscreteActionParams& params);

/// (Tu)(x) = min over grid nodes y within reach of u(y) + one_step_cost(y, x).
/// Exact discrete min, data-parallel over destination nodes.
GridFunction lax_oleinik_step(const TonelliSystem& sys, const GridFunction& u,
                              const CohomologyClass& c,
                              const DiscreteActionParams& params);

struct SolveOptions {
  double tol = 1e-9;        // sup-norm of normalized increments
  int max_iter = 30000;
  int plain_iter_cap = 0;   // plain iterations before switching to averaging
  bool with_aubry = true;
  bool with_rotation = true;
  int rotation_steps = 0;   // 0 -> 4N
  double tol_aubry = -1;    // < 0 -> 5 * spacing * max(1, Lip estimate from du)
  double energy_tol = 5e-2;
  const GridFunction* initial = nullptr;  // default: u = 0
};

struct WeakKamResult {
  CohomologyClass c;
  DiscreteActionParams params;
  double alpha = 0;
  GridFunction u;          // normalized, min u = 0
  GridFunction indicator;  // u- + u+ - min(u- + u+), when with_aubry
  std::vector<int> aubry_nodes;
  std::vector<GridFunction> momentum;  // p = c + du, one grid per axis
  Vec rotation_vector;
  bool rotation_cycle_found = true;
  double energy_defect = 0;  // max |H(x,p) - alpha| over aubry nodes
  double tol_aubry = 0;
  bool converged = false;
  int iterations = 0;
  double residual = 0;
  bool reach_saturated = false;  // a one-step minimizer touched the vmax boundary
  std::vector<int> backpointers;  // DP minimizer source per node (final sweep)

  bool full_support() const {
    return static_cast<int>(aubry_nodes.size()) == u.size();
  }
};

/// Value iteration for the normalized fixed point of T; alpha is minus the
/// node mean of (T u - u) / h at the final iterate. The default iteration is
/// the averaged map u <- (u + T u)/2 - min, which has the same fixed points
/// as u <- T u - min(T u) and still converges when the plain iteration cycles
/// forever between grid translates of a minimizing chain (the generic case
/// whenever the discrete minimizing structure is a rotating chain).
/// plain_iter_cap > 0 runs that many plain iterations first.
WeakKamResult solve_weak_kam(const TonelliSystem& sys, const CohomologyClass& c,
                             const DiscreteActionParams& params,
                             const SolveOptions& opt = {});

struct AubryEstimate {
  std::vector<int> nodes;
  GridFunction indicator;
  std::vector<GridFunction> momentum;  // p = c + du of the forward solution
  double tol_used = 0;
};

/// Conjugate forward/backward pair: the backward solution solves the reversed
/// Lagrangian L(x,-v) with class -c; Aubry nodes are the near-minima of
/// u- + u+.
AubryEstimate aubry_estimate(const TonelliSystem& sys, const CohomologyClass& c,
                             const DiscreteActionParams& params,
                             const GridFunction& forward_u, double tol_aubry = -1,
                             const SolveOptions& opt = {});

/// max over aubry nodes of |H(x, p(x)) - alpha|.
double energy_level_check(const TonelliSystem& sys, const WeakKamResult& result);

/// max over all nodes of H(x, c + du(x)) - alpha.
double subcritical_check(const TonelliSystem& sys, const GridFunction& u,
                         const CohomologyClass& c, double alpha);

struct RotationEstimate {
  Vec value;
  bool cycle_found = true;
};

/// Backtrack the DP minimizer chain from an Aubry seed; total unwrapped
/// displacement over (steps * h). Flagged when no cycle is met.
RotationEstimate rotation_vector(const WeakKamResult& result,
                                 const DiscreteActionParams& params, int steps);

struct AlphaRow {
  Vec c;
  double alpha = 0;
  Vec rotation;
  bool converged = false;
};

struct AlphaTable {
  std::vector<AlphaRow> rows;
};

AlphaTable alpha_table(const TonelliSystem& sys, const std::vector<CohomologyClass>& cs,
                       const DiscreteActionParams& params, const SolveOptions& opt = {});

struct BetaRow {
  Vec h;
  double beta = 0;
  double slope_gap = 0;
};

struct BetaTable {
  std::vector<BetaRow> rows;
};

/// Discrete Legendre-Fenchel conjugate of the alpha table on an h-grid;
/// throws config_error when the sup is attained on the c-grid boundary.
BetaTable beta_from_alpha(const AlphaTable& table, const std::vector<Vec>& h_grid);

/// Slow Peierls-barrier oracle (1-D only): min over cycle lengths k <= k_max of
/// the k-step closed-chain cost through each node, shifted by k h alpha.
GridFunction peierls_barrier(const TonelliSystem& sys, const CohomologyClass& c,
                             const DiscreteActionParams& params, double alpha,
                             int k_max);

}  // namespace wkam
