#include "wkam/flow.hpp"

#include <cmath>
#include <sstream>

#include "wkam/util.hpp"

namespace wkam {

void EmpiricalMeasure::validate() const {
  if (static_cast<Eigen::Index>(points.size()) != weights.size())
    throw config_error("EmpiricalMeasure: points/weights size mismatch");
  if (weights.size() == 0) throw config_error("EmpiricalMeasure: empty");
  if (weights.minCoeff() < 0) throw config_error("EmpiricalMeasure: negative weight");
  if (std::abs(weights.sum() - 1.0) > 1e-12)
    throw config_error("EmpiricalMeasure: weights do not sum to 1");
}

EmpiricalMeasure EmpiricalMeasure::uniform(std::vector<PhasePoint> pts) {
  EmpiricalMeasure mu;
  mu.weights = Vec::Constant(pts.size(), 1.0 / static_cast<double>(pts.size()));
  mu.points = std::move(pts);
  return mu;
}

namespace {

struct Field {
  const Generator& gen;
  int n;

  // X = (dF/dp, -dF/dx), packed as a 2n vector (dx first).
  Vec operator()(const Vec& z) const {
    Vec x = z.head(n), p = z.tail(n), gx, gp;
    if (gen.grad) {
      gen.grad(x, p, gx, gp);
    } else {
      gradient_fd4(gen.eval, x, p, gen.fd_step, gx, gp);
    }
    Vec out(2 * n);
    out.head(n) = gp;
    out.tail(n) = -gx;
    return out;
  }
};

// One implicit-midpoint step from z (packed), Newton with a finite-difference
// Jacobian of the field, explicit Euler predictor.
Vec midpoint_step(const Field& field, const Vec& z, double sdt, long step_index) {
  const auto m = z.size();
  const double tol = 1e-12 * (1.0 + z.cwiseAbs().maxCoeff());
  Vec w = z + sdt * field(z);
  for (int iter = 0; iter < 50; ++iter) {
    const Vec mid = 0.5 * (z + w);
    const Vec fx = field(mid);
    const Vec resid = w - z - sdt * fx;
    if (!resid.allFinite()) {
      std::ostringstream os;
      os << "flow: blow-up at step " << step_index;
      throw numerical_error(os.str());
    }
    if (resid.cwiseAbs().maxCoeff() <= tol) return w;

    Mat jac = Mat::Identity(m, m);
    const double fd = 1e-7 * (1.0 + mid.cwiseAbs().maxCoeff());
    Vec ms = mid;
    for (Eigen::Index j = 0; j < m; ++j) {
      const double mj = mid[j];
      ms[j] = mj + fd;
      const Vec hi = field(ms);
      ms[j] = mj - fd;
      const Vec lo = field(ms);
      ms[j] = mj;
      jac.col(j) -= sdt * 0.5 * (hi - lo) / (2 * fd);
    }
    const Vec delta = jac.partialPivLu().solve(resid);
    if (!delta.allFinite()) {
      std::ostringstream os;
      os << "flow: Newton failure at step " << step_index;
      throw numerical_error(os.str());
    }
    w -= delta;
  }
  std::ostringstream os;
  os << "flow: Newton did not converge at step " << step_index;
  throw numerical_error(os.str());
}

}  // namespace

Trajectory flow(const Generator& gen, const PhasePoint& z0, double t, double dt) {
  if (!(dt > 0)) throw config_error("flow: dt must be positive");
  if (std::abs(t) / dt > 1e8) throw config_error("flow: |t|/dt exceeds 1e8");
  if (!z0.finite()) throw config_error("flow: non-finite initial state");

  const int n = z0.dim();
  const long nsteps = std::lround(std::abs(t) / dt);
  const double sdt = t < 0 ? -dt : dt;
  const Field field{gen, n};

  Trajectory traj;
  traj.dt = dt;
  traj.times.reserve(nsteps + 1);
  traj.states.reserve(nsteps + 1);
  traj.times.push_back(0.0);
  traj.states.push_back(z0);

  Vec z(2 * n);
  z.head(n) = z0.x;
  z.tail(n) = z0.p;
  for (long k = 0; k < nsteps; ++k) {
    z = midpoint_step(field, z, sdt, k);
    if (!z.allFinite()) {
      std::ostringstream os;
      os << "flow: blow-up at step " << k;
      throw numerical_error(os.str());
    }
    z.head(n) = wrap_unit(Vec(z.head(n)));
    traj.times.push_back(static_cast<double>(k + 1) * sdt);
    traj.states.emplace_back(Vec(z.head(n)), Vec(z.tail(n)));
  }
  return traj;
}

double first_integral_defect(const Observable& f, const Trajectory& traj) {
  if (traj.states.empty()) throw config_error("first_integral_defect: empty trajectory");
  const double f0 = f.eval(traj.states.front().x, traj.states.front().p);
  double defect = 0;
  for (const auto& s : traj.states)
    defect = std::max(defect, std::abs(f.eval(s.x, s.p) - f0));
  return defect;
}

double flow_commutator_defect(const Generator& a, const Generator& b,
                              const PhasePoint& z0, double s, double t, double dt) {
  const PhasePoint ab = flow(a, flow(b, z0, t, dt).final_state(), s, dt).final_state();
  const PhasePoint ba = flow(b, flow(a, z0, s, dt).final_state(), t, dt).final_state();
  return phase_distance(ab, ba);
}

EmpiricalMeasure pushforward(const Generator& f, const EmpiricalMeasure& mu,
                             double t, double dt) {
  mu.validate();
  EmpiricalMeasure out;
  out.weights = mu.weights;
  out.points.resize(mu.points.size());
  if (t == 0.0) {
    out.points = mu.points;
    return out;
  }
  parallel_for(mu.points.size(), [&](std::size_t i) {
    out.points[i] = flow(f, mu.points[i], t, dt).final_state();
  });
  return out;
}

double action_average(const TonelliSystem& sys, const EmpiricalMeasure& mu,
                      const CohomologyClass& c) {
  mu.validate();
  double sum = 0;
  Vec gx, gp;
  for (std::size_t i = 0; i < mu.points.size(); ++i) {
    const auto& z = mu.points[i];
    hamiltonian_gradient(sys, z.x, z.p, gx, gp);
    sum += mu.weights[i] *
           (z.p.dot(gp) - sys.hamiltonian(z.x, z.p) - c.c.dot(gp));
  }
  return sum;
}

double exact_symplecto_action_defect(const TonelliSystem& sys, const Generator& f,
                                     const EmpiricalMeasure& mu, double t, double dt) {
  const CohomologyClass c0 = CohomologyClass::zero(sys.dim);
  const double before = action_average(sys, mu, c0);
  const double after = action_average(sys, pushforward(f, mu, t, dt), c0);
  return std::abs(before - after);
}

}  // namespace wkam
