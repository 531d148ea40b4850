#include "wkam/weak_kam.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "wkam/util.hpp"

namespace wkam {

namespace {
constexpr double kInf = std::numeric_limits<double>::infinity();
}

// --- GridFunction -------------------------------------------------------------

GridFunction GridFunction::zeros(int dim, int N) { return constant(dim, N, 0.0); }

GridFunction GridFunction::constant(int dim, int N, double value) {
  if (dim < 1 || dim > 2) throw config_error("GridFunction: dim must be 1 or 2");
  if (N < 2) throw config_error("GridFunction: N must be at least 2");
  GridFunction g;
  g.dim = dim;
  g.N = N;
  g.values = Eigen::ArrayXd::Constant(dim == 1 ? N : N * N, value);
  return g;
}

Vec GridFunction::node_position(int flat) const {
  Vec x(dim);
  if (dim == 1) {
    x[0] = static_cast<double>(flat) / N;
  } else {
    x[0] = static_cast<double>(flat / N) / N;
    x[1] = static_cast<double>(flat % N) / N;
  }
  return x;
}

int GridFunction::node_index(int i1, int i2) const {
  auto wrap = [this](int i) {
    i %= N;
    return i < 0 ? i + N : i;
  };
  return dim == 1 ? wrap(i1) : wrap(i1) * N + wrap(i2);
}

GridFunction GridFunction::centered_gradient(int axis) const {
  GridFunction g = *this;
  const double scale = N / 2.0;
  if (dim == 1) {
    for (int i = 0; i < N; ++i)
      g.values[i] = (values[node_index(i + 1)] - values[node_index(i - 1)]) * scale;
  } else {
    for (int i1 = 0; i1 < N; ++i1)
      for (int i2 = 0; i2 < N; ++i2) {
        const int hi = axis == 0 ? node_index(i1 + 1, i2) : node_index(i1, i2 + 1);
        const int lo = axis == 0 ? node_index(i1 - 1, i2) : node_index(i1, i2 - 1);
        g.values[i1 * N + i2] = (values[hi] - values[lo]) * scale;
      }
  }
  return g;
}

double GridFunction::interpolate(const Vec& x) const {
  if (dim == 1) {
    const double s = wrap_unit(x[0]) * N;
    const int i = static_cast<int>(std::floor(s));
    const double f = s - i;
    return (1 - f) * values[node_index(i)] + f * values[node_index(i + 1)];
  }
  const double s1 = wrap_unit(x[0]) * N, s2 = wrap_unit(x[1]) * N;
  const int i1 = static_cast<int>(std::floor(s1)), i2 = static_cast<int>(std::floor(s2));
  const double f1 = s1 - i1, f2 = s2 - i2;
  return (1 - f1) * (1 - f2) * values[node_index(i1, i2)] +
         (1 - f1) * f2 * values[node_index(i1, i2 + 1)] +
         f1 * (1 - f2) * values[node_index(i1 + 1, i2)] +
         f1 * f2 * values[node_index(i1 + 1, i2 + 1)];
}

void DiscreteActionParams::validate(int dim) const {
  if (dim < 1 || dim > 2) throw config_error("params: grids support dim 1 or 2");
  if (N < 2) throw config_error("params: N must be at least 2");
  if (!(h > 0)) throw config_error("params: h must be positive");
  if (!(vmax > 0)) throw config_error("params: vmax must be positive");
  if (vmax * h < 1.0 / N)
    throw config_error("params: vmax*h must cover at least one grid cell (vmax*h >= 1/N)");
}

// --- stencil ------------------------------------------------------------------

namespace {

// Reach-limited offset stencil plus per-offset and per-site cost pieces.
// The one-step cost bases the Lagrangian on both endpoints (trapezoid),
// which cancels the first-order endpoint bias (h/2)[V(x) - V(y)] that a
// source-only evaluation accumulates along minimizing chains. Mechanical
// systems split the cost as
//   cost(y, x) = [h K(d/h) - c.d] + [-h V(y)/2] + [-h V(x)/2]
//              = tilt(offset) + site(y) + site(x),
// which the sweep exploits; otherwise a full source-by-offset table is built.
struct Stencil {
  int dim = 1, N = 0, nodes = 0;
  int m = 0;  // pad margin, max |cell offset|
  std::vector<int> dj1, dj2;
  std::vector<int> pad_delta;
  int pad_stride = 0;
  Eigen::ArrayXd tilt;   // per offset
  Eigen::ArrayXd site;   // per node (mechanical only)
  Eigen::ArrayXd table;  // per node*offs (general only)
  bool mechanical = false;
  bool has_site = false;
  double h = 0;

  int offs() const { return static_cast<int>(dj1.size()); }
};

Stencil build_stencil(const TonelliSystem& sys, const CohomologyClass& c,
                      const DiscreteActionParams& params) {
  params.validate(sys.dim);
  if (c.dim() != sys.dim) throw config_error("weak-kam: class dimension mismatch");

  Stencil st;
  st.dim = sys.dim;
  st.N = params.N;
  st.nodes = st.dim == 1 ? st.N : st.N * st.N;
  st.h = params.h;
  const double delta = 1.0 / st.N;
  const double reach = params.vmax * params.h * (1.0 + 1e-12);
  const int hi = std::min(static_cast<int>(std::floor(reach * st.N)), st.N / 2);
  const int lo = std::min(static_cast<int>(std::floor(reach * st.N)),
                          st.N % 2 == 0 ? st.N / 2 - 1 : st.N / 2);
  st.m = std::max(hi, lo);
  st.pad_stride = st.dim == 1 ? 1 : st.N + 2 * st.m;

  if (st.dim == 1) {
    for (int dj = -lo; dj <= hi; ++dj) {
      if (std::abs(dj * delta) > reach) continue;
      st.dj1.push_back(dj);
      st.dj2.push_back(0);
      st.pad_delta.push_back(-dj);
    }
  } else {
    for (int dj1 = -lo; dj1 <= hi; ++dj1)
      for (int dj2 = -lo; dj2 <= hi; ++dj2) {
        if (std::hypot(dj1 * delta, dj2 * delta) > reach) continue;
        st.dj1.push_back(dj1);
        st.dj2.push_back(dj2);
        st.pad_delta.push_back(-(dj1 * st.pad_stride + dj2));
      }
  }
  if (st.dj1.empty()) throw config_error("weak-kam: empty reach set");

  const int nofs = st.offs();
  st.mechanical = sys.mechanical();
  if (st.mechanical) {
    st.tilt.resize(nofs);
    Vec d(st.dim), v(st.dim);
    for (int o = 0; o < nofs; ++o) {
      d[0] = st.dj1[o] * delta;
      if (st.dim == 2) d[1] = st.dj2[o] * delta;
      v = d / params.h;
      st.tilt[o] = params.h * sys.kinetic(v) - c.c.dot(d);
    }
    st.site.resize(st.nodes);
    GridFunction probe = GridFunction::zeros(st.dim, st.N);
    bool any = false;
    for (int i = 0; i < st.nodes; ++i) {
      st.site[i] = -0.5 * params.h * sys.potential(probe.node_position(i));
      any = any || st.site[i] != 0.0;
    }
    st.has_site = any;
    return st;
  }

  // General systems: precompute the full source-by-offset cost table.
  const std::size_t entries = static_cast<std::size_t>(st.nodes) * nofs;
  if (entries > 40u * 1000 * 1000)
    throw config_error(
        "weak-kam: system lacks a mechanical split and the cost table would "
        "exceed memory at this N; reduce N or vmax");
  st.table.resize(entries);
  GridFunction probe = GridFunction::zeros(st.dim, st.N);
  parallel_for(st.nodes, [&](std::size_t y) {
    Vec d(st.dim);
    const Vec ypos = probe.node_position(static_cast<int>(y));
    for (int o = 0; o < nofs; ++o) {
      d[0] = st.dj1[o] * delta;
      if (st.dim == 2) d[1] = st.dj2[o] * delta;
      const Vec v = d / params.h;
      const Vec xpos = wrap_unit(ypos + d);
      st.table[y * nofs + o] =
          0.5 * params.h * (lagrangian_value(sys, ypos, v) + lagrangian_value(sys, xpos, v)) -
          c.c.dot(d);
    }
  });
  return st;
}

void fill_pad(const Stencil& st, const Eigen::ArrayXd& w, Eigen::ArrayXd& pad) {
  const int N = st.N, m = st.m;
  auto wrapi = [N](int i) {
    i %= N;
    return i < 0 ? i + N : i;
  };
  if (st.dim == 1) {
    pad.resize(N + 2 * m);
    for (int i = 0; i < N + 2 * m; ++i) pad[i] = w[wrapi(i - m)];
  } else {
    const int stride = st.pad_stride;
    pad.resize(stride * stride);
    for (int i1 = 0; i1 < stride; ++i1) {
      const int s1 = wrapi(i1 - m) * N;
      for (int i2 = 0; i2 < stride; ++i2) pad[i1 * stride + i2] = w[s1 + wrapi(i2 - m)];
    }
  }
}

// out = T u. Scratch arrays are owned by the caller so iterations do not
// reallocate.
void sweep(const Stencil& st, const Eigen::ArrayXd& u, Eigen::ArrayXd& out,
           Eigen::ArrayXd& w, Eigen::ArrayXd& pad) {
  const int nofs = st.offs();
  out.resize(st.nodes);
  if (st.mechanical) {
    if (st.has_site)
      w = u + st.site;
    else
      w = u;
    fill_pad(st, w, pad);
    const double* pw = pad.data();
    const double* tilt = st.tilt.data();
    const int* deltas = st.pad_delta.data();
    const int N = st.N, m = st.m, stride = st.pad_stride;
    parallel_for(st.nodes, [&, pw, tilt, deltas](std::size_t xf) {
      const int x = static_cast<int>(xf);
      const int base = st.dim == 1
                           ? x + m
                           : (x / N + m) * stride + (x % N + m);
      double best = kInf;
      for (int o = 0; o < nofs; ++o) {
        const double cand = pw[base + deltas[o]] + tilt[o];
        best = cand < best ? cand : best;
      }
      out[x] = st.has_site ? best + st.site[x] : best;
    });
    return;
  }
  const int N = st.N;
  parallel_for(st.nodes, [&](std::size_t xf) {
    const int x = static_cast<int>(xf);
    const int x1 = st.dim == 1 ? x : x / N;
    const int x2 = st.dim == 1 ? 0 : x % N;
    double best = kInf;
    for (int o = 0; o < nofs; ++o) {
      int y1 = x1 - st.dj1[o];
      y1 += y1 < 0 ? N : 0;
      y1 -= y1 >= N ? N : 0;
      int y = y1;
      if (st.dim == 2) {
        int y2 = x2 - st.dj2[o];
        y2 += y2 < 0 ? N : 0;
        y2 -= y2 >= N ? N : 0;
        y = y1 * N + y2;
      }
      const double cand = u[y] + st.table[static_cast<std::size_t>(y) * nofs + o];
      best = cand < best ? cand : best;
    }
    out[x] = best;
  });
}

// Arg-min sweep for backtracking; ties resolved to the smallest source node
// index. Also reports whether any chosen offset sits on the reach boundary.
void backpointer_sweep(const Stencil& st, const DiscreteActionParams& params,
                       const Eigen::ArrayXd& u, std::vector<int>& pred,
                       bool& reach_saturated) {
  const int nofs = st.offs();
  const int N = st.N;
  const double delta = 1.0 / N;
  pred.assign(st.nodes, 0);
  std::vector<char> boundary(st.nodes, 0);
  const double reach = params.vmax * params.h;

  parallel_for(st.nodes, [&](std::size_t xf) {
    const int x = static_cast<int>(xf);
    const int x1 = st.dim == 1 ? x : x / N;
    const int x2 = st.dim == 1 ? 0 : x % N;
    double best = kInf;
    int best_y = 0, best_o = 0;
    for (int o = 0; o < nofs; ++o) {
      int y1 = x1 - st.dj1[o];
      y1 += y1 < 0 ? N : 0;
      y1 -= y1 >= N ? N : 0;
      int y = y1;
      if (st.dim == 2) {
        int y2 = x2 - st.dj2[o];
        y2 += y2 < 0 ? N : 0;
        y2 -= y2 >= N ? N : 0;
        y = y1 * N + y2;
      }
      double cost;
      if (st.mechanical) {
        cost = st.tilt[o] + st.site[y] + st.site[x];
      } else {
        cost = st.table[static_cast<std::size_t>(y) * nofs + o];
      }
      const double cand = u[y] + cost;
      if (cand < best || (cand == best && y < best_y)) {
        best = cand;
        best_y = y;
        best_o = o;
      }
    }
    pred[x] = best_y;
    const double dlen = std::hypot(st.dj1[best_o] * delta,
                                   st.dim == 2 ? st.dj2[best_o] * delta : 0.0);
    boundary[x] = dlen > reach - 1.5 * delta ? 1 : 0;
  });
  reach_saturated = std::find(boundary.begin(), boundary.end(), 1) != boundary.end();
}

}  // namespace

// --- public operations ---------------------------------------------------------

double one_step_cost(const TonelliSystem& sys, const Vec& y, const Vec& x,
                     const CohomologyClass& c, const DiscreteActionParams& params) {
  const Vec d = wrap_signed(x - y);
  if (d.norm() / params.h > params.vmax * (1.0 + 1e-12)) return kInf;
  const Vec v = d / params.h;
  return 0.5 * params.h *
             (lagrangian_value(sys, wrap_unit(y), v) +
              lagrangian_value(sys, wrap_unit(x), v)) -
         c.c.dot(d);
}

GridFunction lax_oleinik_step(const TonelliSystem& sys, const GridFunction& u,
                              const CohomologyClass& c,
                              const DiscreteActionParams& params) {
  if (u.dim != sys.dim || u.N != params.N)
    throw config_error("lax_oleinik_step: grid/params mismatch");
  const Stencil st = build_stencil(sys, c, params);
  GridFunction out = u;
  Eigen::ArrayXd w, pad;
  sweep(st, u.values, out.values, w, pad);
  return out;
}

WeakKamResult solve_weak_kam(const TonelliSystem& sys, const CohomologyClass& c,
                             const DiscreteActionParams& params,
                             const SolveOptions& opt) {
  const Stencil st = build_stencil(sys, c, params);
  const int nodes = st.nodes;

  WeakKamResult res;
  res.c = c;
  res.params = params;
  res.u = GridFunction::zeros(sys.dim, params.N);
  if (opt.initial) {
    if (opt.initial->dim != sys.dim || opt.initial->N != params.N)
      throw config_error("solve_weak_kam: initial grid mismatch");
    res.u.values = opt.initial->values;
  }
  Eigen::ArrayXd u = res.u.values;
  u -= u.minCoeff();

  Eigen::ArrayXd tu(nodes), w, pad;
  int iter = 0;
  double residual = kInf;
  for (; iter < opt.max_iter; ++iter) {
    sweep(st, u, tu, w, pad);
    if (iter >= opt.plain_iter_cap) tu = 0.5 * (u + tu);
    tu -= tu.minCoeff();
    residual = (tu - u).abs().maxCoeff();
    u.swap(tu);
    if (residual < opt.tol) {
      ++iter;
      break;
    }
  }
  res.iterations = iter;
  res.residual = residual;
  res.converged = residual < opt.tol;

  sweep(st, u, tu, w, pad);
  res.alpha = -(tu - u).mean() / params.h;
  res.u.values = u;

  backpointer_sweep(st, params, u, res.backpointers, res.reach_saturated);

  if (opt.with_aubry) {
    AubryEstimate est = aubry_estimate(sys, c, params, res.u, opt.tol_aubry, opt);
    res.indicator = std::move(est.indicator);
    res.aubry_nodes = std::move(est.nodes);
    res.momentum = std::move(est.momentum);
    res.tol_aubry = est.tol_used;
    res.energy_defect = energy_level_check(sys, res);
  }
  if (opt.with_rotation) {
    const int steps = opt.rotation_steps > 0 ? opt.rotation_steps : 4 * params.N;
    if (res.aubry_nodes.empty()) {
      // no Aubry data on this pass: seed at the grid minimum of u
      Eigen::Index seed_node = 0;
      u.minCoeff(&seed_node);
      WeakKamResult tmp = res;
      tmp.aubry_nodes.push_back(static_cast<int>(seed_node));
      const RotationEstimate rot = rotation_vector(tmp, params, steps);
      res.rotation_vector = rot.value;
      res.rotation_cycle_found = rot.cycle_found;
    } else {
      const RotationEstimate rot = rotation_vector(res, params, steps);
      res.rotation_vector = rot.value;
      res.rotation_cycle_found = rot.cycle_found;
    }
  }
  return res;
}

namespace {

TonelliSystem reversed_system(const TonelliSystem& sys) {
  TonelliSystem rev = sys;
  rev.name = sys.name + ":reversed";
  if (sys.lagrangian)
    rev.lagrangian = [inner = sys.lagrangian](const Vec& x, const Vec& v) {
      return inner(x, -v);
    };
  if (sys.kinetic)
    rev.kinetic = [inner = sys.kinetic](const Vec& v) { return inner(-v); };
  rev.hamiltonian = [inner = sys.hamiltonian](const Vec& x, const Vec& p) {
    return inner(x, -p);
  };
  if (sys.grad)
    rev.grad = [inner = sys.grad](const Vec& x, const Vec& p, Vec& gx, Vec& gp) {
      inner(x, -p, gx, gp);
      gp = -gp;
    };
  if (sys.legendre)
    rev.legendre = [inner = sys.legendre](const Vec& x, const Vec& v) {
      return Vec(-inner(x, -v));
    };
  return rev;
}

}  // namespace

AubryEstimate aubry_estimate(const TonelliSystem& sys, const CohomologyClass& c,
                             const DiscreteActionParams& params,
                             const GridFunction& forward_u, double tol_aubry,
                             const SolveOptions& opt) {
  SolveOptions back = opt;
  back.with_aubry = false;
  back.with_rotation = false;
  back.initial = nullptr;
  const TonelliSystem rev = reversed_system(sys);
  const WeakKamResult backward =
      solve_weak_kam(rev, CohomologyClass(Vec(-c.c)), params, back);

  AubryEstimate est;
  est.indicator = forward_u;
  est.indicator.values += backward.u.values;
  est.indicator.values -= est.indicator.values.minCoeff();

  est.momentum.reserve(sys.dim);
  double lip = 1.0;
  for (int axis = 0; axis < sys.dim; ++axis) {
    GridFunction du = forward_u.centered_gradient(axis);
    lip = std::max(lip, du.values.abs().maxCoeff());
    GridFunction dub = backward.u.centered_gradient(axis);
    lip = std::max(lip, dub.values.abs().maxCoeff());
    du.values += c.c[axis];
    est.momentum.push_back(std::move(du));
  }
  est.tol_used = tol_aubry >= 0 ? tol_aubry : 5.0 * forward_u.spacing() * lip;
  for (int i = 0; i < est.indicator.size(); ++i)
    if (est.indicator.values[i] <= est.tol_used) est.nodes.push_back(i);
  return est;
}

double energy_level_check(const TonelliSystem& sys, const WeakKamResult& result) {
  if (result.aubry_nodes.empty())
    throw config_error("energy_level_check: no aubry nodes");
  double defect = 0;
  Vec p(sys.dim);
  for (int node : result.aubry_nodes) {
    const Vec x = result.u.node_position(node);
    for (int a = 0; a < sys.dim; ++a) p[a] = result.momentum[a].values[node];
    defect = std::max(defect, std::abs(sys.hamiltonian(x, p) - result.alpha));
  }
  return defect;
}

double subcritical_check(const TonelliSystem& sys, const GridFunction& u,
                         const CohomologyClass& c, double alpha) {
  std::vector<GridFunction> du;
  for (int a = 0; a < u.dim; ++a) du.push_back(u.centered_gradient(a));
  double excess = -kInf;
  Vec p(u.dim);
  for (int i = 0; i < u.size(); ++i) {
    const Vec x = u.node_position(i);
    for (int a = 0; a < u.dim; ++a) p[a] = c.c[a] + du[a].values[i];
    excess = std::max(excess, sys.hamiltonian(x, p) - alpha);
  }
  return excess;
}

RotationEstimate rotation_vector(const WeakKamResult& result,
                                 const DiscreteActionParams& params, int steps) {
  if (result.backpointers.empty())
    throw config_error("rotation_vector: result carries no backpointers");
  if (result.aubry_nodes.empty())
    throw config_error("rotation_vector: no aubry seed");
  const int N = params.N;
  const int dim = result.u.dim;

  RotationEstimate rot;
  rot.value = Vec::Zero(dim);
  std::vector<int> visited(result.backpointers.size(), -1);

  int cur = result.aubry_nodes.front();
  bool cycle = false;
  Vec total = Vec::Zero(dim);
  auto cell_delta = [N](int to, int from) {
    int d = to - from;
    d -= N * static_cast<int>(std::lround(static_cast<double>(d) / N));
    return d;
  };
  for (int k = 0; k < steps; ++k) {
    if (visited[cur] >= 0) cycle = true;
    visited[cur] = k;
    const int prev = result.backpointers[cur];
    if (dim == 1) {
      total[0] += cell_delta(cur, prev);
    } else {
      total[0] += cell_delta(cur / N, prev / N);
      total[1] += cell_delta(cur % N, prev % N);
    }
    cur = prev;
  }
  rot.value = total / (static_cast<double>(N) * steps * params.h);
  rot.cycle_found = cycle;
  return rot;
}

AlphaTable alpha_table(const TonelliSystem& sys, const std::vector<CohomologyClass>& cs,
                       const DiscreteActionParams& params, const SolveOptions& opt) {
  AlphaTable table;
  table.rows.resize(cs.size());
  SolveOptions row_opt = opt;
  row_opt.with_aubry = false;
  row_opt.with_rotation = true;
  // rows are independent solves; each writes only its own slot
  for (std::size_t i = 0; i < cs.size(); ++i) {
    const WeakKamResult res = solve_weak_kam(sys, cs[i], params, row_opt);
    table.rows[i] = AlphaRow{cs[i].c, res.alpha, res.rotation_vector, res.converged};
  }
  return table;
}

BetaTable beta_from_alpha(const AlphaTable& table, const std::vector<Vec>& h_grid) {
  if (table.rows.empty()) throw config_error("beta_from_alpha: empty alpha table");
  const int dim = static_cast<int>(table.rows.front().c.size());

  // per-axis extremes of the c-grid, for the boundary test
  Vec cmin = table.rows.front().c, cmax = table.rows.front().c;
  for (const auto& row : table.rows) {
    cmin = cmin.cwiseMin(row.c);
    cmax = cmax.cwiseMax(row.c);
  }

  BetaTable beta;
  beta.rows.reserve(h_grid.size());
  for (const auto& h : h_grid) {
    if (h.size() != dim) throw config_error("beta_from_alpha: h dimension mismatch");
    double best = -kInf;
    Vec arg = table.rows.front().c;
    for (const auto& row : table.rows) {
      const double v = row.c.dot(h) - row.alpha;
      if (v > best) {
        best = v;
        arg = row.c;
      }
    }
    for (int a = 0; a < dim; ++a)
      if (arg[a] <= cmin[a] || arg[a] >= cmax[a])
        throw config_error(
            "beta_from_alpha: supremum attained on the c-grid boundary; widen the grid");
    beta.rows.push_back(BetaRow{h, best, 0.0});
  }

  if (dim == 1 && beta.rows.size() >= 3) {
    for (std::size_t i = 1; i + 1 < beta.rows.size(); ++i) {
      const double hl = beta.rows[i].h[0] - beta.rows[i - 1].h[0];
      const double hr = beta.rows[i + 1].h[0] - beta.rows[i].h[0];
      const double sl = (beta.rows[i].beta - beta.rows[i - 1].beta) / hl;
      const double sr = (beta.rows[i + 1].beta - beta.rows[i].beta) / hr;
      beta.rows[i].slope_gap = sr - sl;
    }
  }
  return beta;
}

GridFunction peierls_barrier(const TonelliSystem& sys, const CohomologyClass& c,
                             const DiscreteActionParams& params, double alpha,
                             int k_max) {
  if (sys.dim != 1)
    throw config_error("peierls_barrier: one-dimensional oracle only");
  const Stencil st = build_stencil(sys, c, params);
  const int N = st.N;
  const int nofs = st.offs();

  // cost(y -> x) for all pairs
  Eigen::ArrayXXd cost = Eigen::ArrayXXd::Constant(N, N, kInf);
  for (int y = 0; y < N; ++y)
    for (int o = 0; o < nofs; ++o) {
      const int x = (y + st.dj1[o] % N + N) % N;
      const double value = st.mechanical
                               ? st.tilt[o] + st.site[y] + st.site[x]
                               : st.table[static_cast<std::size_t>(y) * nofs + o];
      cost(y, x) = std::min(cost(y, x), value);
    }

  GridFunction barrier = GridFunction::constant(1, N, kInf);
  Eigen::ArrayXXd reach_cost = cost;  // reach_cost(s, x): min cost s -> x in k steps
  Eigen::ArrayXXd next(N, N);
  for (int k = 1; k <= k_max; ++k) {
    for (int s = 0; s < N; ++s)
      barrier.values[s] =
          std::min(barrier.values[s], reach_cost(s, s) + k * params.h * alpha);
    if (k == k_max) break;
    parallel_for(N, [&](std::size_t s) {
      for (int x = 0; x < N; ++x) {
        double best = kInf;
        for (int o = 0; o < nofs; ++o) {
          int y = x - st.dj1[o];
          y += y < 0 ? N : 0;
          y -= y >= N ? N : 0;
          const double cand = reach_cost(s, y) + cost(y, x);
          best = cand < best ? cand : best;
        }
        next(s, x) = best;
      }
    });
    reach_cost.swap(next);
  }
  return barrier;
}

}  // namespace wkam
