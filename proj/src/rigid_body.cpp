#include "wkam/rigid_body.hpp"

#include <cmath>
#include <sstream>

#include "wkam/util.hpp"

namespace wkam {

Mat3 hat(const Vec3& w) {
  Mat3 m;
  m << 0, -w.z(), w.y(), w.z(), 0, -w.x(), -w.y(), w.x(), 0;
  return m;
}

Mat3 exp_so3(const Vec3& w) {
  const double theta = w.norm();
  const Mat3 k = hat(w);
  double a, b;  // sin(t)/t, (1-cos(t))/t^2
  if (theta < 1e-8) {
    a = 1.0 - theta * theta / 6.0;
    b = 0.5 - theta * theta / 24.0;
  } else {
    a = std::sin(theta) / theta;
    b = (1.0 - std::cos(theta)) / (theta * theta);
  }
  return Mat3::Identity() + a * k + b * k * k;
}

Mat3 project_so3(const Mat3& m) {
  Eigen::JacobiSVD<Mat3> svd(m, Eigen::ComputeFullU | Eigen::ComputeFullV);
  Mat3 r = svd.matrixU() * svd.matrixV().transpose();
  if (r.determinant() < 0) {
    Mat3 u = svd.matrixU();
    u.col(2) *= -1.0;
    r = u * svd.matrixV().transpose();
  }
  return r;
}

Vec3 euler_rhs(const InertiaOperator& A, const Vec3& pb) {
  return pb.cross(A.omega(pb));
}

namespace {

// Solve p+ = p + dt (pm x A^{-1} pm), pm = (p + p+)/2, with an analytic-
// Jacobian Newton iteration. Returns pm.
Vec3 midpoint_momentum(const InertiaOperator& A, const Vec3& p, double dt,
                       long step_index, Vec3& p_next) {
  p_next = p + dt * euler_rhs(A, p);
  const double tol = 1e-13 * (1.0 + p.cwiseAbs().maxCoeff());
  for (int iter = 0; iter < 50; ++iter) {
    const Vec3 pm = 0.5 * (p + p_next);
    const Vec3 resid = p_next - p - dt * euler_rhs(A, pm);
    if (resid.cwiseAbs().maxCoeff() <= tol) return pm;
    // d/dq (q x A^{-1} q) = -hat(A^{-1} q) + hat(q) A^{-1}
    const Mat3 drhs = -hat(A.omega(pm)) + hat(pm) * A.moments.cwiseInverse().asDiagonal();
    const Mat3 jac = Mat3::Identity() - 0.5 * dt * drhs;
    const Vec3 delta = jac.partialPivLu().solve(resid);
    if (!delta.allFinite()) {
      std::ostringstream os;
      os << "rigid body: Newton failure at step " << step_index;
      throw numerical_error(os.str());
    }
    p_next -= delta;
  }
  std::ostringstream os;
  os << "rigid body: Newton did not converge at step " << step_index;
  throw numerical_error(os.str());
}

}  // namespace

RigidBodyTrajectory integrate_rigid_body(const InertiaOperator& A,
                                         const RigidBodyState& s0, double t,
                                         double dt) {
  if (!(dt > 0)) throw config_error("rigid body: dt must be positive");
  if (t < 0) throw config_error("rigid body: t must be nonnegative");
  const long nsteps = std::lround(t / dt);

  RigidBodyTrajectory traj;
  traj.times.reserve(nsteps + 1);
  traj.states.reserve(nsteps + 1);
  traj.times.push_back(0.0);
  traj.states.push_back(s0);

  RigidBodyState s = s0;
  for (long k = 0; k < nsteps; ++k) {
    Vec3 p_next;
    const Vec3 pm = midpoint_momentum(A, s.pb, dt, k, p_next);
    s.R = project_so3(s.R * exp_so3(dt * A.omega(pm)));
    s.pb = p_next;
    traj.times.push_back(static_cast<double>(k + 1) * dt);
    traj.states.push_back(s);
  }
  return traj;
}

Vec3 spatial_momentum(const RigidBodyState& s) { return s.R * s.pb; }

RigidBodyInvariants rigid_body_invariants(const InertiaOperator& A,
                                          const RigidBodyState& s) {
  RigidBodyInvariants inv;
  inv.energy = 0.5 * s.pb.dot(A.omega(s.pb));
  inv.casimir = s.pb.squaredNorm();
  return inv;
}

int momentum_independence_check(const std::vector<RigidBodyState>& samples,
                                double sv_tol) {
  int min_rank = 3;
  for (const auto& s : samples) {
    Mat deriv(3, 6);
    deriv.leftCols<3>() = -s.R * hat(s.pb);
    deriv.rightCols<3>() = s.R;
    Eigen::JacobiSVD<Mat> svd(deriv);
    const auto& sv = svd.singularValues();
    int rank = 0;
    for (int i = 0; i < sv.size(); ++i)
      if (sv[i] > sv_tol * sv[0]) ++rank;
    min_rank = std::min(min_rank, rank);
  }
  return min_rank;
}

double momentum_flow_commutator_defect(const RigidBodyState& s0, double s, double t) {
  double defect = 0;
  for (int i = 0; i < 3; ++i)
    for (int j = i + 1; j < 3; ++j) {
      const Mat3 gi = exp_so3(s * Vec3::Unit(i));
      const Mat3 gj = exp_so3(t * Vec3::Unit(j));
      const Vec3 fa = (gi * gj * s0.R) * s0.pb;
      const Vec3 fb = (gj * gi * s0.R) * s0.pb;
      defect = std::max(defect, (fa - fb).cwiseAbs().maxCoeff());
    }
  return defect;
}

ZeroSectionCheck zero_section_involution_check(const std::vector<Mat3>& attitudes,
                                               double s, double t) {
  ZeroSectionCheck check;
  for (const auto& R : attitudes) {
    RigidBodyState state;
    state.R = R;
    state.pb = Vec3::Zero();
    check.max_momentum_at_zero = std::max(
        check.max_momentum_at_zero, spatial_momentum(state).cwiseAbs().maxCoeff());
    check.max_commutator_defect = std::max(
        check.max_commutator_defect, momentum_flow_commutator_defect(state, s, t));
  }
  return check;
}

Mat3 random_rotation(std::mt19937_64& rng) {
  std::normal_distribution<double> gauss(0.0, 1.0);
  Eigen::Quaterniond q(gauss(rng), gauss(rng), gauss(rng), gauss(rng));
  q.normalize();
  return q.toRotationMatrix();
}

std::vector<RigidBodyState> random_states(int count, std::uint64_t seed,
                                          double momentum_scale) {
  auto rng = make_rng(seed, 0x50e3);
  std::normal_distribution<double> gauss(0.0, 1.0);
  std::vector<RigidBodyState> states(count);
  for (auto& s : states) {
    s.R = random_rotation(rng);
    s.pb = momentum_scale * Vec3(gauss(rng), gauss(rng), gauss(rng));
  }
  return states;
}

}  // namespace wkam
