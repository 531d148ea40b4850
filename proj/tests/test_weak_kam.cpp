#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <numbers>
#include <random>
#include <vector>

#include "wkam/system.hpp"
#include "wkam/util.hpp"
#include "wkam/weak_kam.hpp"

using namespace wkam;

namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;

// --- quadrature + bisection oracle for the pendulum rotation regime ---------
// The invariant circle at energy E > 1 carries momentum p(x) = sqrt(2(E-V)),
// V = cos(2 pi x); its class is c(E) = integral of p and the rotation number
// is 1/T(E) with T the period integral.

double simpson(const std::function<double(double)>& f, int intervals) {
  const int n = intervals % 2 ? intervals + 1 : intervals;
  const double dx = 1.0 / n;
  double sum = f(0.0) + f(1.0);
  for (int i = 1; i < n; ++i) sum += f(i * dx) * (i % 2 ? 4.0 : 2.0);
  return sum * dx / 3.0;
}

double pendulum_class_of_energy(double e) {
  return simpson([e](double s) { return std::sqrt(2 * (e - std::cos(kTwoPi * s))); },
                 4000);
}

double pendulum_energy_of_class(double c) {
  double lo = 1.0 + 1e-12, hi = 1.0 + 0.5 * c * c + 2.0;
  for (int i = 0; i < 200; ++i) {
    const double mid = 0.5 * (lo + hi);
    (pendulum_class_of_energy(mid) < c ? lo : hi) = mid;
  }
  return 0.5 * (lo + hi);
}

double pendulum_rotation_of_energy(double e) {
  return 1.0 /
         simpson([e](double s) { return 1.0 / std::sqrt(2 * (e - std::cos(kTwoPi * s))); },
                 4000);
}

// --- Karp minimum-cycle-mean oracle ------------------------------------------
// Independent check of the discrete critical value: -h*alpha equals the
// minimum mean over cycles of the one-step cost graph. Costs are rebuilt here
// from the closed-form Lagrangian, not taken from the solver.

double karp_alpha(const TonelliSystem& sys, double c, const DiscreteActionParams& params) {
  const int n = params.N;
  const double delta = 1.0 / n;
  const int m = static_cast<int>(std::floor(params.vmax * params.h * n));
  const double inf = std::numeric_limits<double>::infinity();

  auto arc_cost = [&](int y, int dj) {
    const Vec ypos = Vec::Constant(1, y * delta);
    const Vec xpos = Vec::Constant(1, wrap_unit((y + dj) * delta));
    const Vec v = Vec::Constant(1, dj * delta / params.h);
    return 0.5 * params.h *
               (sys.lagrangian(ypos, v) + sys.lagrangian(xpos, v)) -
           c * dj * delta;
  };

  std::vector<std::vector<double>> d(n + 1, std::vector<double>(n, inf));
  d[0][0] = 0.0;  // source node 0
  for (int k = 1; k <= n; ++k)
    for (int x = 0; x < n; ++x) {
      double best = inf;
      for (int dj = -m; dj <= m; ++dj) {
        const int y = ((x - dj) % n + n) % n;
        if (d[k - 1][y] == inf) continue;
        best = std::min(best, d[k - 1][y] + arc_cost(y, dj));
      }
      d[k][x] = best;
    }

  double lambda = inf;
  for (int v = 0; v < n; ++v) {
    if (d[n][v] == inf) continue;
    double worst = -inf;
    for (int k = 0; k < n; ++k) {
      if (d[k][v] == inf) continue;
      worst = std::max(worst, (d[n][v] - d[k][v]) / (n - k));
    }
    lambda = std::min(lambda, worst);
  }
  return -lambda / params.h;
}

}  // namespace

TEST_CASE("one step cost arithmetic") {
  auto free1 = make_free(1);
  DiscreteActionParams params{256, 0.1, 4.0};
  const auto c0 = CohomologyClass::of(0.0);
  const auto c1 = CohomologyClass::of(1.0);
  const Vec y = Vec::Zero(1), x = Vec::Constant(1, 0.05);
  CHECK(one_step_cost(free1, y, x, c0, params) == doctest::Approx(0.0125));
  CHECK(one_step_cost(free1, y, x, c1, params) == doctest::Approx(-0.0375));

  auto pend = make_pendulum();
  const Vec same = Vec::Constant(1, 0.3);
  CHECK(one_step_cost(pend, same, same, c1, params) ==
        doctest::Approx(0.1 * pend.lagrangian(same, Vec::Zero(1))));

  // beyond the velocity truncation
  DiscreteActionParams tight{256, 0.1, 0.2};
  CHECK(std::isinf(one_step_cost(free1, y, Vec::Constant(1, 0.4), c0, tight)));
}

TEST_CASE("lax-oleinik step: zero fixed point and exhaustive-scan oracle") {
  auto free1 = make_free(1);
  DiscreteActionParams params{128, 0.1, 4.0};
  const auto c0 = CohomologyClass::of(0.0);
  const GridFunction zero = GridFunction::zeros(1, 128);
  const GridFunction tz = lax_oleinik_step(free1, zero, c0, params);
  CHECK(tz.values.abs().maxCoeff() == 0.0);  // minimizer y = x

  // pendulum values against a direct exhaustive scan over all nodes
  auto pend = make_pendulum();
  DiscreteActionParams p2{256, 0.2, 4.0};
  GridFunction u = GridFunction::zeros(1, 256);
  auto rng = make_rng(3, 1);
  std::uniform_real_distribution<double> uni(0.0, 1.0);
  for (int i = 0; i < u.size(); ++i) u.values[i] = uni(rng);
  const GridFunction tu = lax_oleinik_step(pend, u, c0, p2);
  for (int x = 0; x < 256; x += 37) {
    double best = std::numeric_limits<double>::infinity();
    for (int y = 0; y < 256; ++y) {
      const double cost = one_step_cost(pend, u.node_position(y), u.node_position(x),
                                        c0, p2);
      best = std::min(best, u.values[y] + cost);
    }
    CHECK(tu.values[x] == doctest::Approx(best).epsilon(1e-14));
  }
}

TEST_CASE("lax-oleinik step properties hold to rounding") {
  auto pend = make_pendulum();
  DiscreteActionParams params{128, 0.1, 4.0};
  const auto c0 = CohomologyClass::of(0.0);
  auto rng = make_rng(9, 2);
  std::uniform_real_distribution<double> uni(0.0, 1.0);
  for (int trial = 0; trial < 20; ++trial) {
    GridFunction u = GridFunction::zeros(1, 128), w = u;
    for (int i = 0; i < u.size(); ++i) {
      u.values[i] = uni(rng);
      w.values[i] = u.values[i] + uni(rng);  // w >= u
    }
    const double shift = 0.25 + uni(rng);
    const GridFunction tu = lax_oleinik_step(pend, u, c0, params);
    const GridFunction tw = lax_oleinik_step(pend, w, c0, params);
    CHECK((tu.values <= tw.values).all());  // monotone, exactly
    CHECK((tu.values - tw.values).abs().maxCoeff() <=
          (u.values - w.values).abs().maxCoeff());  // nonexpansive, exactly
    GridFunction uk = u;
    uk.values += shift;
    const GridFunction tuk = lax_oleinik_step(pend, uk, c0, params);
    // equivariance up to one floating-point rounding of the shifted sums
    CHECK((tuk.values - tu.values - shift).abs().maxCoeff() <= 1e-14);
  }
}

TEST_CASE("solve: free system, explicit minimizer") {
  auto free1 = make_free(1);
  DiscreteActionParams params{256, 0.1, 4.0};
  const auto res = solve_weak_kam(free1, CohomologyClass::of(1.0), params);
  CHECK(res.converged);
  CHECK(res.alpha == doctest::Approx(0.5).epsilon(1e-2));
  CHECK(res.u.values.maxCoeff() - res.u.values.minCoeff() <= 1e-7);  // u constant
  CHECK(res.full_support());
}

TEST_CASE("solve: pendulum critical value is max V") {
  auto pend = make_pendulum();
  DiscreteActionParams params{512, 0.1, 4.0};
  const auto res = solve_weak_kam(pend, CohomologyClass::of(0.0), params);
  CHECK(res.converged);
  CHECK(res.alpha == doctest::Approx(1.0).epsilon(2e-2));
  // the discrete critical cycle is the self-loop at the potential maximum,
  // so alpha is exact up to the solver's increment tolerance
  CHECK(res.alpha == doctest::Approx(1.0).epsilon(1e-7));
}

TEST_CASE("solve: pendulum rotation regime against the quadrature oracle") {
  // oracle self-check against an independently computed reference value
  const double estar = pendulum_energy_of_class(2.0);
  CHECK(estar == doctest::Approx(2.0637954229).epsilon(1e-7));

  auto pend = make_pendulum();
  DiscreteActionParams params{256, 0.05, 4.0};
  const auto res = solve_weak_kam(pend, CohomologyClass::of(2.0), params);
  CHECK(res.converged);
  CHECK(std::abs(res.alpha - estar) <= 2e-2);

  // rotation vector against the period integral and the alpha-table slope
  const double rot_oracle = pendulum_rotation_of_energy(estar);
  CHECK(rot_oracle == doctest::Approx(1.9334508754).epsilon(1e-7));
  CHECK(std::abs(res.rotation_vector[0] - rot_oracle) <= 2e-2);
}

TEST_CASE("solver alpha equals the Karp minimum cycle mean") {
  DiscreteActionParams params{96, 0.1, 4.0};
  SolveOptions opt;
  opt.with_aubry = false;
  opt.with_rotation = false;

  auto free1 = make_free(1);
  const double a_free = solve_weak_kam(free1, CohomologyClass::of(0.5), params, opt).alpha;
  CHECK(std::abs(a_free - karp_alpha(free1, 0.5, params)) <= 1e-7);

  auto pend = make_pendulum();
  const double a0 = solve_weak_kam(pend, CohomologyClass::of(0.0), params, opt).alpha;
  CHECK(std::abs(a0 - karp_alpha(pend, 0.0, params)) <= 1e-7);
  const double a2 = solve_weak_kam(pend, CohomologyClass::of(2.0), params, opt).alpha;
  CHECK(std::abs(a2 - karp_alpha(pend, 2.0, params)) <= 1e-7);
}

TEST_CASE("aubry estimates on the catalog") {
  auto free1 = make_free(1);
  DiscreteActionParams params{128, 0.1, 4.0};
  const auto res = solve_weak_kam(free1, CohomologyClass::of(0.3), params);
  CHECK(res.full_support());
  for (int node : res.aubry_nodes)
    CHECK(res.momentum[0].values[node] == doctest::Approx(0.3).epsilon(1e-9));

  auto pend = make_pendulum();
  DiscreteActionParams p512{512, 0.1, 4.0};
  const auto hyper = solve_weak_kam(pend, CohomologyClass::of(0.0), p512);
  CHECK_FALSE(hyper.full_support());
  CHECK(!hyper.aubry_nodes.empty());
  for (int node : hyper.aubry_nodes) {
    const double x = wrap_signed(static_cast<double>(node) / 512);
    CHECK(std::abs(x) <= 0.1);  // clustered at the potential maximum
    CHECK(std::abs(hyper.momentum[0].values[node]) <= 0.35);
  }

  DiscreteActionParams p96{96, 0.02, 4.0};
  SolveOptions o96;
  o96.tol = 1e-8;
  o96.max_iter = 80000;
  const auto circle = solve_weak_kam(pend, CohomologyClass::of(2.0), p96, o96);
  CHECK(circle.full_support());  // rotation regime: invariant circle
}

TEST_CASE("energy level check (Carneiro)") {
  auto free1 = make_free(1);
  DiscreteActionParams p500{500, 0.1, 4.0};  // c h N integer: exact graph
  const auto res = solve_weak_kam(free1, CohomologyClass::of(0.3), p500);
  CHECK(res.energy_defect <= 1e-6);

  auto pend = make_pendulum();
  DiscreteActionParams p512{512, 0.1, 4.0};
  const auto hyper = solve_weak_kam(pend, CohomologyClass::of(0.0), p512);
  CHECK(hyper.energy_defect <= 2e-2);

  DiscreteActionParams p2{512, 0.025, 4.0};
  SolveOptions opt;
  opt.tol = 1e-8;
  opt.max_iter = 60000;
  const auto rot = solve_weak_kam(pend, CohomologyClass::of(2.0), p2, opt);
  CHECK(rot.energy_defect <= 5e-2);
}

TEST_CASE("subcritical check") {
  auto free1 = make_free(1);
  DiscreteActionParams params{256, 0.1, 4.0};
  const auto res = solve_weak_kam(free1, CohomologyClass::of(0.0), params);
  CHECK(subcritical_check(free1, res.u, res.c, res.alpha) <= 1e-8);

  auto pend = make_pendulum();
  const GridFunction zero = GridFunction::zeros(1, 512);
  CHECK(subcritical_check(pend, zero, CohomologyClass::of(0.0), 1.0) <= 1e-12);

  DiscreteActionParams p512{512, 0.05, 4.0};
  const auto solved = solve_weak_kam(pend, CohomologyClass::of(0.0), p512);
  CHECK(subcritical_check(pend, solved.u, solved.c, solved.alpha) <= 2e-2);
}

TEST_CASE("rotation vectors") {
  auto free1 = make_free(1);
  DiscreteActionParams params{256, 0.1, 4.0};
  const auto res = solve_weak_kam(free1, CohomologyClass::of(0.7), params);
  CHECK(res.rotation_cycle_found);
  // minimizer cells quantize the estimate to about half a cell per step
  CHECK(std::abs(res.rotation_vector[0] - 0.7) <= 0.5 / (256 * 0.1) + 1e-9);

  auto pend = make_pendulum();
  DiscreteActionParams p512{512, 0.1, 4.0};
  const auto fixed = solve_weak_kam(pend, CohomologyClass::of(0.0), p512);
  CHECK(fixed.rotation_vector[0] == 0.0);

  // rotation at c = 2 matches the numerical derivative of the alpha table
  SolveOptions opt;
  opt.with_aubry = false;
  const auto lo = solve_weak_kam(pend, CohomologyClass::of(1.95), p512, opt);
  const auto hi = solve_weak_kam(pend, CohomologyClass::of(2.05), p512, opt);
  const auto mid = solve_weak_kam(pend, CohomologyClass::of(2.0), p512, opt);
  const double slope = (hi.alpha - lo.alpha) / 0.1;
  CHECK(std::abs(mid.rotation_vector[0] - slope) <= 5e-2);
}

TEST_CASE("alpha table: free closed form, pendulum flat piece") {
  auto free1 = make_free(1);
  DiscreteActionParams params{256, 0.1, 4.0};
  std::vector<CohomologyClass> cs;
  for (double c : {-1.0, -0.5, 0.0, 0.5, 1.0}) cs.push_back(CohomologyClass::of(c));
  const auto table = alpha_table(free1, cs, params);
  const double expect[] = {0.5, 0.125, 0.0, 0.125, 0.5};
  for (int i = 0; i < 5; ++i) {
    CHECK(table.rows[i].converged);
    CHECK(std::abs(table.rows[i].alpha - expect[i]) <= 1e-2);
  }
  // evenness: identical computation up to relabeling
  CHECK(std::abs(table.rows[0].alpha - table.rows[4].alpha) <= 1e-10);
  CHECK(std::abs(table.rows[1].alpha - table.rows[3].alpha) <= 1e-10);

  auto pend = make_pendulum();
  DiscreteActionParams p512{512, 0.1, 4.0};
  std::vector<CohomologyClass> flat;
  for (double c = -1.2; c <= 1.2 + 1e-9; c += 0.2) flat.push_back(CohomologyClass::of(c));
  flat.push_back(CohomologyClass::of(1.4));
  flat.push_back(CohomologyClass::of(1.5));
  const auto ptable = alpha_table(pend, flat, p512);
  for (std::size_t i = 0; i + 2 < ptable.rows.size(); ++i)
    CHECK(std::abs(ptable.rows[i].alpha - 1.0) <= 2e-2);
  const double a14 = ptable.rows[ptable.rows.size() - 2].alpha;
  const double a15 = ptable.rows.back().alpha;
  CHECK(a15 > a14);  // strict growth outside the flat piece

  // convexity along the table: midpoints below chords
  auto convex = [](const AlphaTable& t) {
    for (std::size_t i = 0; i + 2 < t.rows.size(); ++i) {
      const double c1 = t.rows[i].c[0], c2 = t.rows[i + 1].c[0], c3 = t.rows[i + 2].c[0];
      const double lam = (c2 - c1) / (c3 - c1);
      const double interp = (1 - lam) * t.rows[i].alpha + lam * t.rows[i + 2].alpha;
      if (t.rows[i + 1].alpha > interp + 1e-9) return false;
    }
    return true;
  };
  CHECK(convex(table));
  CHECK(convex(ptable));
}

TEST_CASE("alpha grid convergence shrinks by at least a factor two") {
  auto pend = make_pendulum();
  SolveOptions opt;
  opt.with_aubry = false;
  opt.with_rotation = false;
  double a[4];
  int i = 0;
  for (int n : {128, 256, 512, 1024}) {
    DiscreteActionParams params{n, 0.1, 4.0};
    a[i++] = solve_weak_kam(pend, CohomologyClass::of(2.0), params, opt).alpha;
  }
  const double d1 = std::abs(a[0] - a[1]), d2 = std::abs(a[1] - a[2]),
               d3 = std::abs(a[2] - a[3]);
  CHECK(d2 <= std::max(d1 / 2, 1e-9));
  CHECK(d3 <= std::max(d2 / 2, 1e-9));

  // For the free system the discrete minimizer is a single arc, so the alpha
  // error is a pure cell-quantization term whose successive differences are
  // erratic (they can vanish when the fractional part of c h N doubles
  // without wrapping); the error itself still shrinks under refinement.
  auto free1 = make_free(1);
  double f[2];
  i = 0;
  for (int n : {128, 512}) {
    DiscreteActionParams params{n, 0.1, 4.0};
    f[i++] = solve_weak_kam(free1, CohomologyClass::of(0.3), params, opt).alpha;
  }
  CHECK(std::abs(f[1] - 0.045) <= std::abs(f[0] - 0.045));
}

TEST_CASE("beta from alpha: free conjugate and fenchel at zero") {
  auto free1 = make_free(1);
  DiscreteActionParams params{256, 0.1, 4.0};
  std::vector<CohomologyClass> cs;
  for (double c = -1.5; c <= 1.5 + 1e-9; c += 0.05) cs.push_back(CohomologyClass::of(c));
  SolveOptions opt;
  opt.with_aubry = false;
  opt.with_rotation = false;
  const auto table = alpha_table(free1, cs, params, opt);

  std::vector<Vec> hs;
  for (double h = -0.8; h <= 0.8 + 1e-9; h += 0.1) hs.push_back(Vec::Constant(1, h));
  const auto beta = beta_from_alpha(table, hs);
  for (const auto& row : beta.rows)
    CHECK(std::abs(row.beta - 0.5 * row.h[0] * row.h[0]) <= 2e-2);

  // beta(0) = -min alpha
  double min_alpha = table.rows.front().alpha;
  for (const auto& r : table.rows) min_alpha = std::min(min_alpha, r.alpha);
  const auto& mid = beta.rows[beta.rows.size() / 2];
  CHECK(mid.h[0] == doctest::Approx(0.0));
  CHECK(mid.beta == doctest::Approx(-min_alpha).epsilon(1e-9));

  // a sup attained on the grid boundary is refused
  std::vector<Vec> wide = {Vec::Constant(1, 3.0)};
  CHECK_THROWS_AS(beta_from_alpha(table, wide), config_error);
}

TEST_CASE("beta from alpha: pendulum corner carries the flat piece") {
  auto pend = make_pendulum();
  DiscreteActionParams params{256, 0.1, 4.0};
  std::vector<CohomologyClass> cs;
  for (double c = -1.6; c <= 1.6 + 1e-9; c += 0.05) cs.push_back(CohomologyClass::of(c));
  SolveOptions opt;
  opt.with_aubry = false;
  opt.with_rotation = false;
  const auto table = alpha_table(pend, cs, params, opt);
  std::vector<Vec> hs;
  for (double h : {-0.2, 0.0, 0.2}) hs.push_back(Vec::Constant(1, h));
  const auto beta = beta_from_alpha(table, hs);
  CHECK(std::abs(beta.rows[1].slope_gap - 8.0 / std::numbers::pi) <= 0.1);
}

TEST_CASE("peierls barrier oracle agrees with the conjugate-pair indicator") {
  auto pend = make_pendulum();
  DiscreteActionParams params{96, 0.1, 4.0};
  const auto hyper = solve_weak_kam(pend, CohomologyClass::of(0.0), params);
  const GridFunction barrier =
      peierls_barrier(pend, CohomologyClass::of(0.0), params, hyper.alpha, 4 * 96);
  // both see the hyperbolic fixed point
  Eigen::Index bmin = 0;
  barrier.values.minCoeff(&bmin);
  CHECK(static_cast<int>(bmin) == 0);
  // the barrier at the critical node carries the alpha-extraction noise
  // amplified by the cycle length
  CHECK(std::abs(barrier.values[0]) <= 1e-6);
  std::vector<int> bnodes;
  for (int i = 0; i < 96; ++i)
    if (barrier.values[i] <= hyper.tol_aubry) bnodes.push_back(i);
  // the two estimates see the same cluster; their boundary disagreement at
  // finite N is reported, not rated
  CHECK(std::find(bnodes.begin(), bnodes.end(), 0) != bnodes.end());
  CHECK(bnodes.size() < 96);  // a proper cluster, not the whole circle
  std::vector<int> only(96, 0);
  for (int n : bnodes) only[n] += 1;
  for (int n : hyper.aubry_nodes) only[n] += 2;
  int sym_diff = 0;
  for (int i = 0; i < 96; ++i) sym_diff += only[i] == 1 || only[i] == 2;
  MESSAGE("barrier/indicator symmetric difference: ", sym_diff, " of 96 nodes");
  CHECK(sym_diff <= 96 / 3);

  CHECK_THROWS_AS(
      peierls_barrier(make_free(2), CohomologyClass::zero(2), params, 0.0, 8),
      config_error);
}

TEST_CASE("results are bitwise independent of the worker count") {
  auto pend = make_pendulum();
  DiscreteActionParams params{128, 0.1, 4.0};
  const auto c = CohomologyClass::of(0.7);
  GridFunction u = GridFunction::zeros(1, 128);
  auto rng = make_rng(31, 5);
  std::uniform_real_distribution<double> uni(0.0, 1.0);
  for (int i = 0; i < u.size(); ++i) u.values[i] = uni(rng);

  setenv("WKAM_THREADS", "1", 1);
  const GridFunction t1 = lax_oleinik_step(pend, u, c, params);
  const double a1 = solve_weak_kam(pend, c, params).alpha;
  setenv("WKAM_THREADS", "3", 1);
  const GridFunction t3 = lax_oleinik_step(pend, u, c, params);
  const double a3 = solve_weak_kam(pend, c, params).alpha;
  unsetenv("WKAM_THREADS");

  CHECK((t1.values == t3.values).all());
  CHECK(a1 == a3);
}

TEST_CASE("parameter validation") {
  DiscreteActionParams bad{256, 0.1, 0.01};  // vmax h < 1/N
  CHECK_THROWS_AS(bad.validate(1), config_error);
  DiscreteActionParams good{256, 0.1, 4.0};
  CHECK_THROWS_AS(good.validate(3), config_error);

  auto free1 = make_free(1);
  GridFunction wrong = GridFunction::zeros(1, 64);
  SolveOptions opt;
  opt.initial = &wrong;
  CHECK_THROWS_AS(solve_weak_kam(free1, CohomologyClass::of(0.0), good, opt),
                  config_error);
}

TEST_CASE("grid function helpers") {
  GridFunction g = GridFunction::zeros(2, 8);
  CHECK(g.size() == 64);
  CHECK(g.node_index(-1, 9) == g.node_index(7, 1));
  const Vec pos = g.node_position(g.node_index(3, 5));
  CHECK(pos[0] == doctest::Approx(3.0 / 8));
  CHECK(pos[1] == doctest::Approx(5.0 / 8));

  // gradient of a smooth plane-wave field
  GridFunction s = GridFunction::zeros(1, 256);
  for (int i = 0; i < 256; ++i) s.values[i] = std::sin(kTwoPi * i / 256.0);
  const GridFunction ds = s.centered_gradient(0);
  for (int i = 0; i < 256; i += 17)
    CHECK(ds.values[i] ==
          doctest::Approx(kTwoPi * std::cos(kTwoPi * i / 256.0)).epsilon(1e-3));

  // interpolation reproduces nodal values and is periodic
  CHECK(s.interpolate(Vec::Constant(1, 3.0 / 256)) == doctest::Approx(s.values[3]));
  CHECK(s.interpolate(Vec::Constant(1, 0.999999999)) ==
        doctest::Approx(s.values[0]).epsilon(1e-6));
}
