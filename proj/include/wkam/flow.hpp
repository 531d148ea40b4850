#pragma once

#include <utility>
#include <vector>

#include "wkam/system.hpp"
#include "wkam/types.hpp"

namespace wkam {

/// Uniform-step orbit samples of a Hamiltonian flow; x reduced mod 1.
struct Trajectory {
  std::vector<double> times;
  std::vector<PhasePoint> states;
  double dt = 0;

  const PhasePoint& final_state() const { return states.back(); }
};

/// Discrete surrogate for an invariant probability measure.
struct EmpiricalMeasure {
  std::vector<PhasePoint> points;
  Vec weights;  // nonnegative, summing to 1 within 1e-12

  void validate() const;
  static EmpiricalMeasure uniform(std::vector<PhasePoint> pts);
};

/// Anything whose Hamiltonian flow we integrate: a Tonelli system or an
/// observable used as a flow generator.
struct Generator {
  std::string name;
  ScalarField eval;
  GradientField grad;  // optional; finite differences otherwise
  double fd_step = 1e-5;

  Generator(const TonelliSystem& sys)
      : name(sys.name), eval(sys.hamiltonian), grad(sys.grad), fd_step(sys.fd_step) {}
  Generator(const Observable& f)
      : name(f.name), eval(f.eval), grad(f.grad), fd_step(f.fd_step) {}
};

/// Implicit-midpoint integration of X_gen from z0 over time t (t may be
/// negative). Inner Newton tolerance 1e-12, at most 50 iterations per step.
Trajectory flow(const Generator& gen, const PhasePoint& z0, double t, double dt);

/// max over samples of |f(z(t)) - f(z(0))|.
double first_integral_defect(const Observable& f, const Trajectory& traj);

/// Phase-space distance between Phi_a^s Phi_b^t z0 and Phi_b^t Phi_a^s z0.
double flow_commutator_defect(const Generator& a, const Generator& b,
                              const PhasePoint& z0, double s, double t, double dt);

/// Advance every support point by Phi_f^t; weights unchanged.
EmpiricalMeasure pushforward(const Generator& f, const EmpiricalMeasure& mu,
                             double t, double dt);

/// sum_i w_i (p_i . H_p(z_i) - H(z_i) - c . H_p(z_i)).
double action_average(const TonelliSystem& sys, const EmpiricalMeasure& mu,
                      const CohomologyClass& c);

/// |mean of p.H_p - H over mu  -  same over pushforward(f, mu, t)|.
double exact_symplecto_action_defect(const TonelliSystem& sys, const Generator& f,
                                     const EmpiricalMeasure& mu, double t, double dt);

}  // namespace wkam
