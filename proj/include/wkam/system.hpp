#pragma once

#include <cstdint>
#include <functional>
#include <string>
#include <utility>

#include "wkam/types.hpp"

namespace wkam {

using ScalarField = std::function<double(const Vec& x, const Vec& p)>;
/// Writes df/dx into gx and df/dp into gp.
using GradientField = std::function<void(const Vec& x, const Vec& p, Vec& gx, Vec& gp)>;

/// A Hamiltonian on T*(T^n), strictly convex and uniformly superlinear in the
/// fibers. Analytic gradient and Lagrangian are optional; missing pieces fall
/// back to 4th-order central differences (step fd_step) and convex duality.
///
/// kinetic/potential, when set, declare the mechanical split
/// L(x,v) = kinetic(v) - potential(x); the grid solver uses it as a fast path.
struct TonelliSystem {
  std::string name;
  int dim = 1;
  ScalarField hamiltonian;
  GradientField grad;
  ScalarField lagrangian;
  std::function<Vec(const Vec& x, const Vec& v)> legendre;  // fiber map v -> p
  std::function<double(const Vec& v)> kinetic;
  std::function<double(const Vec& x)> potential;
  double fd_step = 1e-5;

  bool mechanical() const { return static_cast<bool>(kinetic); }
};

/// A candidate integral of motion: scalar observable on T*(T^n), periodic in x.
struct Observable {
  std::string name;
  ScalarField eval;
  GradientField grad;
  double fd_step = 1e-5;
};

/// 4th-order central differences of f in all 2n phase coordinates.
void gradient_fd4(const ScalarField& f, const Vec& x, const Vec& p, double step,
                  Vec& gx, Vec& gp);

void hamiltonian_gradient(const TonelliSystem& sys, const Vec& x, const Vec& p,
                          Vec& gx, Vec& gp);
void observable_gradient(const Observable& f, const Vec& x, const Vec& p,
                         Vec& gx, Vec& gp);

/// X_H(z) = (dH/dp, -dH/dx).
std::pair<Vec, Vec> hamiltonian_vector_field(const TonelliSystem& sys,
                                             const PhasePoint& z);

/// {f,g}(z) = sum_i df/dx_i dg/dp_i - df/dp_i dg/dx_i.
double poisson_bracket(const Observable& f, const Observable& g,
                       const PhasePoint& z);

/// L(x,v); analytic when supplied, otherwise sup_p(<p,v> - H) by damped
/// Newton from p0 = v (gradient tolerance 1e-10, at most 100 iterations).
double lagrangian_value(const TonelliSystem& sys, const Vec& x, const Vec& v);

/// (x, dL/dv) = (x, argmax_p <p,v> - H).
PhasePoint legendre_fiber_map(const TonelliSystem& sys, const Vec& x, const Vec& v);

// --- catalog ---------------------------------------------------------------

TonelliSystem make_free(int dim);
TonelliSystem make_pendulum();
TonelliSystem make_mech2d(double eps);

/// Catalog id ("free", "pendulum", "mech2d") or a trigonometric-polynomial
/// spec "trigpoly:<terms>". Terms are ';'-separated products of a momentum
/// polynomial and a Fourier mode:
///   kin:<coef>                    coef * |p|^2/2
///   p:<i>:<coef>                  coef * p_i
///   p2:<i>,<j>:<coef>             coef * p_i p_j / 2
///   cos:<k1,..,kn>:<coef>         coef * cos(2 pi k.x)
///   sin:<k1,..,kn>:<coef>         coef * sin(2 pi k.x)
///   pcos:<i>:<k..>:<coef>         coef * p_i cos(2 pi k.x)   (psin likewise)
///   p2cos:<i>,<j>:<k..>:<coef>    coef * p_i p_j/2 cos(2 pi k.x)  (p2sin likewise)
/// Indices are 1-based. Gradients are assembled analytically.
TonelliSystem make_system(const std::string& spec, int dim, double mech2d_eps = 0.1);

Observable momentum_observable(int axis, int dim);           // p_axis, 1-based
Observable hamiltonian_observable(const TonelliSystem& sys);  // H itself
Observable trig_observable(bool use_sin, int axis, int dim);  // sin/cos(2 pi x_axis)

/// "H", "p<i>", "sinx<i>", "cosx<i>".
Observable parse_observable(const std::string& token, const TonelliSystem& sys);

// --- diagnostics ------------------------------------------------------------

struct SystemDiagnostics {
  double min_fiber_hessian_eig = 0;  // over sampled (x,p), finite differences
  bool superlinear = false;          // H(x, R phat)/R increasing over R in {10,100,1000}
};

SystemDiagnostics validate_tonelli(const TonelliSystem& sys, int n_samples = 32,
                                   std::uint64_t seed = 0);

/// Samples x and x + e_i and compares evaluations.
bool observable_periodic(const Observable& f, int dim, int n_samples = 16,
                         std::uint64_t seed = 0, double tol = 1e-9);

}  // namespace wkam
