#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <numbers>
#include <random>

#include "wkam/system.hpp"
#include "wkam/util.hpp"

using namespace wkam;

namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;

std::vector<PhasePoint> sample_points(int dim, int count, std::uint64_t seed) {
  auto rng = make_rng(seed, 17);
  std::uniform_real_distribution<double> ux(0.0, 1.0), up(-2.0, 2.0);
  std::vector<PhasePoint> pts;
  for (int i = 0; i < count; ++i) {
    Vec x(dim), p(dim);
    for (int a = 0; a < dim; ++a) {
      x[a] = ux(rng);
      p[a] = up(rng);
    }
    pts.emplace_back(x, p);
  }
  return pts;
}

// numerical dual of the numerical dual, for the round-trip check
double hamiltonian_from_dual(const TonelliSystem& sys, const Vec& x, const Vec& p) {
  // sup_v (p.v - L(x,v)) by golden-ish scan + refinement is overkill; use
  // Newton on v with finite-difference derivatives of L.
  Vec v = p;
  for (int iter = 0; iter < 100; ++iter) {
    const int n = v.size();
    Vec grad(n);
    Mat hess(n, n);
    const double s = 1e-5;
    for (int i = 0; i < n; ++i) {
      Vec vp = v, vm = v;
      vp[i] += s;
      vm[i] -= s;
      grad[i] = p[i] - (lagrangian_value(sys, x, vp) - lagrangian_value(sys, x, vm)) / (2 * s);
      for (int j = 0; j < n; ++j) {
        Vec va = v, vb = v, vc = v, vd = v;
        va[i] += s; va[j] += s;
        vb[i] += s; vb[j] -= s;
        vc[i] -= s; vc[j] += s;
        vd[i] -= s; vd[j] -= s;
        hess(i, j) = (lagrangian_value(sys, x, va) - lagrangian_value(sys, x, vb) -
                      lagrangian_value(sys, x, vc) + lagrangian_value(sys, x, vd)) /
                     (4 * s * s);
      }
    }
    if (grad.norm() < 1e-9) break;
    v += hess.partialPivLu().solve(grad);
  }
  return p.dot(v) - lagrangian_value(sys, x, v);
}

}  // namespace

TEST_CASE("hamiltonian vector field on catalog systems") {
  auto free1 = make_free(1);
  auto [dx, dp] = hamiltonian_vector_field(free1, PhasePoint::make1(0.3, 1.0));
  CHECK(dx[0] == doctest::Approx(1.0).epsilon(1e-14));
  CHECK(dp[0] == doctest::Approx(0.0).epsilon(1e-14));

  auto pend = make_pendulum();
  auto [dxp, dpp] = hamiltonian_vector_field(pend, PhasePoint::make1(0.25, 0.0));
  CHECK(dxp[0] == doctest::Approx(0.0));
  CHECK(dpp[0] == doctest::Approx(kTwoPi).epsilon(1e-12));  // 6.2832…

  auto free2 = make_free(2);
  auto [dx2, dp2] = hamiltonian_vector_field(free2, PhasePoint::make2(0, 0, 0.7, -0.2));
  CHECK(dx2[0] == doctest::Approx(0.7));
  CHECK(dx2[1] == doctest::Approx(-0.2));
  CHECK(dp2.norm() == doctest::Approx(0.0));
}

TEST_CASE("poisson bracket values") {
  auto free1 = make_free(1);
  auto H = hamiltonian_observable(free1);
  CHECK(poisson_bracket(H, H, PhasePoint::make1(0.4, 1.3)) == 0.0);

  auto f = trig_observable(true, 1, 1);  // sin(2 pi x)
  Observable g;
  g.name = "p^2/2";
  g.eval = [](const Vec&, const Vec& p) { return 0.5 * p[0] * p[0]; };
  g.grad = [](const Vec&, const Vec& p, Vec& gx, Vec& gp) {
    gx = Vec::Zero(1);
    gp = p;
  };
  CHECK(poisson_bracket(f, g, PhasePoint::make1(0.0, 1.0)) ==
        doctest::Approx(kTwoPi).epsilon(1e-12));

  auto p1 = momentum_observable(1, 2), p2 = momentum_observable(2, 2);
  CHECK(poisson_bracket(p1, p2, PhasePoint::make2(0.3, 0.9, -1, 2)) == 0.0);
}

TEST_CASE("poisson bracket antisymmetry, analytic and finite differences") {
  auto pend = make_pendulum();
  auto H = hamiltonian_observable(pend);
  auto s = trig_observable(true, 1, 1);
  Observable s_fd = s;
  s_fd.grad = nullptr;  // force finite differences
  Observable H_fd = H;
  H_fd.grad = nullptr;

  for (const auto& z : sample_points(1, 24, 5)) {
    CHECK(std::abs(poisson_bracket(H, s, z) + poisson_bracket(s, H, z)) <= 1e-12);
    CHECK(std::abs(poisson_bracket(H_fd, s_fd, z) + poisson_bracket(s_fd, H_fd, z)) <= 1e-6);
    // finite differences track the analytic bracket
    CHECK(poisson_bracket(H_fd, s_fd, z) ==
          doctest::Approx(poisson_bracket(H, s, z)).epsilon(1e-8));
  }
}

TEST_CASE("leibniz rule on products") {
  auto pend = make_pendulum();
  auto f = hamiltonian_observable(pend);
  auto g = trig_observable(false, 1, 1);
  auto h = momentum_observable(1, 1);

  Observable gh;
  gh.name = "g*h";
  gh.eval = [ge = g.eval, he = h.eval](const Vec& x, const Vec& p) {
    return ge(x, p) * he(x, p);
  };

  for (const auto& z : sample_points(1, 16, 6)) {
    const double lhs = poisson_bracket(f, gh, z);
    const double rhs = poisson_bracket(f, g, z) * h.eval(z.x, z.p) +
                       g.eval(z.x, z.p) * poisson_bracket(f, h, z);
    CHECK(lhs == doctest::Approx(rhs).epsilon(1e-6));
  }
}

TEST_CASE("lagrangian values: closed forms and convex duality") {
  auto free1 = make_free(1);
  CHECK(lagrangian_value(free1, Vec::Zero(1), Vec::Constant(1, 0.5)) ==
        doctest::Approx(0.125));

  auto pend = make_pendulum();
  CHECK(lagrangian_value(pend, Vec::Zero(1), Vec::Zero(1)) == doctest::Approx(-1.0));

  // H = (p-a)^2/2 + b through the numeric dual: L(0) = -b, attained at p = a
  TonelliSystem shifted = make_system("trigpoly:p2:1,1:1;p:1:-0.7;cos:0:0.245", 1);
  // (p-0.7)^2/2 = p^2/2 - 0.7p + 0.245
  CHECK(std::abs(shifted.hamiltonian(Vec::Zero(1), Vec::Constant(1, 0.7))) <= 1e-12);
  CHECK(std::abs(lagrangian_value(shifted, Vec::Zero(1), Vec::Zero(1))) <= 1e-9);
  TonelliSystem shifted_b = make_system("trigpoly:p2:1,1:1;p:1:-0.7;cos:0:0.445", 1);
  CHECK(lagrangian_value(shifted_b, Vec::Zero(1), Vec::Zero(1)) ==
        doctest::Approx(-0.2).epsilon(1e-9));
}

TEST_CASE("legendre fiber map") {
  auto free2 = make_free(2);
  Vec x = Vec::Zero(2), v(2);
  v << 0.3, -1.1;
  const PhasePoint z = legendre_fiber_map(free2, x, v);
  CHECK((z.p - v).norm() <= 1e-12);

  // shifted quadratic: p = v + a
  TonelliSystem shifted = make_system("trigpoly:p2:1,1:1;p:1:-0.7;cos:0:0.245", 1);
  const PhasePoint zs = legendre_fiber_map(shifted, Vec::Zero(1), Vec::Constant(1, 0.4));
  CHECK(zs.p[0] == doctest::Approx(1.1).epsilon(1e-8));

  auto pend = make_pendulum();
  const PhasePoint zp = legendre_fiber_map(pend, Vec::Constant(1, 0.3), Vec::Constant(1, 0.9));
  CHECK(zp.p[0] == doctest::Approx(0.9));
}

TEST_CASE("duality round trip and gradient consistency") {
  auto pend = make_pendulum();
  TonelliSystem numeric = pend;
  numeric.lagrangian = nullptr;  // force the Newton dual
  numeric.legendre = nullptr;

  for (const auto& z : sample_points(1, 8, 7)) {
    // H -> L -> H round trip within 1e-8
    CHECK(hamiltonian_from_dual(numeric, z.x, z.p) ==
          doctest::Approx(pend.hamiltonian(z.x, z.p)).epsilon(1e-8));

    // legendre map followed by dH/dp returns v within 1e-8
    const Vec v = Vec::Constant(1, 0.8 * z.p[0]);
    const PhasePoint lift = legendre_fiber_map(numeric, z.x, v);
    Vec gx, gp;
    hamiltonian_gradient(pend, lift.x, lift.p, gx, gp);
    CHECK((gp - v).norm() <= 1e-8);
  }
}

TEST_CASE("tonelli validation on the catalog") {
  for (const auto& sys : {make_free(1), make_free(2), make_pendulum(), make_mech2d(0.1)}) {
    const auto diag = validate_tonelli(sys);
    CHECK(diag.min_fiber_hessian_eig > 0);
    CHECK(diag.superlinear);
  }
}

TEST_CASE("observable periodicity check") {
  CHECK(observable_periodic(trig_observable(true, 1, 1), 1));
  CHECK(observable_periodic(momentum_observable(1, 2), 2));
  Observable bad;
  bad.name = "x1";
  bad.eval = [](const Vec& x, const Vec&) { return x[0]; };
  CHECK_FALSE(observable_periodic(bad, 1));
}

TEST_CASE("trig-polynomial parser matches the catalog closed forms") {
  auto pend = make_pendulum();
  auto poly = make_system("trigpoly:kin:1;cos:1:1", 1);
  auto mech = make_mech2d(0.1);
  auto poly2 = make_system("trigpoly:kin:1;cos:1,0:0.1;cos:0,1:0.1", 2);

  for (const auto& z : sample_points(1, 8, 8)) {
    CHECK(poly.hamiltonian(z.x, z.p) == doctest::Approx(pend.hamiltonian(z.x, z.p)));
    Vec gx1, gp1, gx2, gp2;
    hamiltonian_gradient(pend, z.x, z.p, gx1, gp1);
    hamiltonian_gradient(poly, z.x, z.p, gx2, gp2);
    CHECK((gx1 - gx2).norm() <= 1e-12);
    CHECK((gp1 - gp2).norm() <= 1e-12);
  }
  for (const auto& z : sample_points(2, 8, 9)) {
    CHECK(poly2.hamiltonian(z.x, z.p) == doctest::Approx(mech.hamiltonian(z.x, z.p)));
  }

  CHECK_THROWS_AS(make_system("trigpoly:wat:1", 1), config_error);
  CHECK_THROWS_AS(make_system("nope", 1), config_error);
  CHECK_THROWS_AS(make_system("trigpoly:p:3:1", 2), config_error);
}

TEST_CASE("non-finite gradients are reported with the component name") {
  TonelliSystem bad = make_free(1);
  bad.grad = [](const Vec&, const Vec&, Vec& gx, Vec& gp) {
    gx = Vec::Constant(1, std::numeric_limits<double>::quiet_NaN());
    gp = Vec::Zero(1);
  };
  CHECK_THROWS_AS(hamiltonian_vector_field(bad, PhasePoint::make1(0, 0)), numerical_error);
}

TEST_CASE("torus wrapping conventions") {
  CHECK(wrap_unit(1.25) == doctest::Approx(0.25));
  CHECK(wrap_unit(-0.25) == doctest::Approx(0.75));
  CHECK(wrap_signed(0.6) == doctest::Approx(-0.4));
  CHECK(wrap_signed(0.5) == doctest::Approx(0.5));   // (-1/2, 1/2]
  CHECK(wrap_signed(-0.5) == doctest::Approx(0.5));
  const PhasePoint z(Vec::Constant(1, 1.75), Vec::Zero(1));
  CHECK(z.x[0] == doctest::Approx(0.75));
}
