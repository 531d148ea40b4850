#pragma once

#include <Eigen/Dense>

#include <cmath>
#include <stdexcept>
#include <string>
#include <utility>

namespace wkam {

using Vec = Eigen::VectorXd;
using Mat = Eigen::MatrixXd;

/// A computation left its numerical domain (non-finite values, failed Newton
/// solves, blow-ups). The message names the offending stage or component.
class numerical_error : public std::runtime_error {
 public:
  explicit numerical_error(const std::string& what) : std::runtime_error(what) {}
};

/// Inputs or parameters violate a documented precondition.
class config_error : public std::runtime_error {
 public:
  explicit config_error(const std::string& what) : std::runtime_error(what) {}
};

/// Reduce a coordinate to the fundamental domain [0, 1).
inline double wrap_unit(double x) {
  double w = x - std::floor(x);
  if (w >= 1.0) w = 0.0;
  return w;
}

inline Vec wrap_unit(Vec x) {
  for (Eigen::Index i = 0; i < x.size(); ++i) x[i] = wrap_unit(x[i]);
  return x;
}

/// Minimal signed representative of a displacement, in (-1/2, 1/2].
inline double wrap_signed(double d) { return d - std::ceil(d - 0.5); }

inline Vec wrap_signed(Vec d) {
  for (Eigen::Index i = 0; i < d.size(); ++i) d[i] = wrap_signed(d[i]);
  return d;
}

inline double torus_distance(const Vec& a, const Vec& b) {
  return wrap_signed(a - b).norm();
}

/// Point of T*(T^n): torus position (coordinates in [0,1)) plus momentum.
struct PhasePoint {
  Vec x;
  Vec p;

  PhasePoint() = default;
  PhasePoint(Vec x_, Vec p_) : x(wrap_unit(std::move(x_))), p(std::move(p_)) {}

  static PhasePoint make1(double x, double p) {
    return PhasePoint{Vec::Constant(1, x), Vec::Constant(1, p)};
  }
  static PhasePoint make2(double x1, double x2, double p1, double p2) {
    Vec x(2), p(2);
    x << x1, x2;
    p << p1, p2;
    return PhasePoint{std::move(x), std::move(p)};
  }

  int dim() const { return static_cast<int>(x.size()); }
  bool finite() const { return x.allFinite() && p.allFinite(); }
};

/// Distance on T*(T^n): torus metric in x, Euclidean in p.
inline double phase_distance(const PhasePoint& a, const PhasePoint& b) {
  const double dx = torus_distance(a.x, b.x);
  return std::sqrt(dx * dx + (a.p - b.p).squaredNorm());
}

/// A class in H^1(T^n; R) ~ R^n, represented by the constant 1-form c.dx.
struct CohomologyClass {
  Vec c;

  CohomologyClass() = default;
  explicit CohomologyClass(Vec c_) : c(std::move(c_)) {
    if (!c.allFinite()) throw config_error("CohomologyClass: non-finite entries");
  }
  static CohomologyClass zero(int n) { return CohomologyClass(Vec::Zero(n)); }
  static CohomologyClass of(double c1) { return CohomologyClass(Vec::Constant(1, c1)); }
  static CohomologyClass of(double c1, double c2) {
    Vec v(2);
    v << c1, c2;
    return CohomologyClass(std::move(v));
  }
  int dim() const { return static_cast<int>(c.size()); }
};

}  // namespace wkam
