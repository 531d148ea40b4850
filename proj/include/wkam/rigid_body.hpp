#pragma once

#include <Eigen/Dense>

#include <cstdint>
#include <random>
#include <vector>

#include "wkam/types.hpp"

namespace wkam {

using Vec3 = Eigen::Vector3d;
using Mat3 = Eigen::Matrix3d;

/// Diagonal form of the inertia operator A: g -> g* on so(3).
struct InertiaOperator {
  Vec3 moments;  // I1, I2, I3, all > 0

  InertiaOperator(double i1, double i2, double i3) : moments(i1, i2, i3) {
    if (!(i1 > 0 && i2 > 0 && i3 > 0))
      throw config_error("InertiaOperator: moments must be positive");
  }
  Vec3 omega(const Vec3& pb) const { return pb.cwiseQuotient(moments); }
};

/// Attitude in SO(3) plus body angular momentum.
struct RigidBodyState {
  Mat3 R = Mat3::Identity();
  Vec3 pb = Vec3::Zero();
};

struct RigidBodyTrajectory {
  std::vector<double> times;
  std::vector<RigidBodyState> states;

  const RigidBodyState& final_state() const { return states.back(); }
};

struct RigidBodyInvariants {
  double energy = 0;   // p . A^{-1} p / 2
  double casimir = 0;  // |p|^2
};

Mat3 hat(const Vec3& w);
Mat3 exp_so3(const Vec3& w);  // Rodrigues closed form
Mat3 project_so3(const Mat3& m);  // polar factor via SVD

/// dp/dt = p x Omega with Omega = A^{-1} p.
Vec3 euler_rhs(const InertiaOperator& A, const Vec3& pb);

/// Implicit midpoint on the momentum equation; the attitude follows the
/// Rodrigues exponential of the midpoint body velocity,
/// R <- R exp(dt hat(Omega_m)), then a polar re-orthonormalization. Energy
/// and Casimir are quadratic invariants of the midpoint step; the momentum
/// update is an exact rotation by the Cayley transform of -dt hat(Omega_m),
/// so the spatial momentum R p drifts only by the exp/Cayley angle mismatch,
/// (dt |Omega|)^3/12 per step.
RigidBodyTrajectory integrate_rigid_body(const InertiaOperator& A,
                                         const RigidBodyState& s0, double t,
                                         double dt);

Vec3 spatial_momentum(const RigidBodyState& s);  // R pb
RigidBodyInvariants rigid_body_invariants(const InertiaOperator& A,
                                          const RigidBodyState& s);

/// Rank of the derivative of (R, pb) -> R pb in the left-trivialized chart,
/// d(R pb)[dtheta, dp] = R (dp - pb x dtheta); minimum over the samples.
int momentum_independence_check(const std::vector<RigidBodyState>& samples,
                                double sv_tol = 1e-8);

/// Largest difference, over axis pairs (i,j) and spatial-momentum components,
/// between F_k after Phi_i^s Phi_j^t and after Phi_j^t Phi_i^s, where Phi_i is
/// the (closed-form) Hamiltonian flow of the i-th spatial momentum component:
/// left multiplication of the attitude, body momentum unchanged.
double momentum_flow_commutator_defect(const RigidBodyState& s0, double s, double t);

struct ZeroSectionCheck {
  double max_momentum_at_zero = 0;    // max |F_i| over samples at pb = 0
  double max_commutator_defect = 0;   // momentum-flow commutator defect at pb = 0
};

ZeroSectionCheck zero_section_involution_check(const std::vector<Mat3>& attitudes,
                                               double s = 0.3, double t = 0.4);

Mat3 random_rotation(std::mt19937_64& rng);
std::vector<RigidBodyState> random_states(int count, std::uint64_t seed,
                                          double momentum_scale = 1.0);

}  // namespace wkam
