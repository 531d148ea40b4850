#include "wkam/system.hpp"

#include <cmath>
#include <memory>
#include <numbers>
#include <sstream>
#include <vector>

#include "wkam/util.hpp"

namespace wkam {

namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;

double fd4(const std::function<double(double)>& f, double step) {
  return (-f(2 * step) + 8 * f(step) - 8 * f(-step) + f(-2 * step)) / (12 * step);
}

void check_finite(const Vec& g, const char* what, const char* var) {
  for (Eigen::Index i = 0; i < g.size(); ++i) {
    if (!std::isfinite(g[i])) {
      std::ostringstream os;
      os << what << ": non-finite gradient component d/d" << var << "[" << i + 1 << "]";
      throw numerical_error(os.str());
    }
  }
}

}  // namespace

void gradient_fd4(const ScalarField& f, const Vec& x, const Vec& p, double step,
                  Vec& gx, Vec& gp) {
  const auto n = x.size();
  gx.resize(n);
  gp.resize(p.size());
  Vec xs = x, ps = p;
  for (Eigen::Index i = 0; i < n; ++i) {
    const double xi = x[i];
    gx[i] = fd4(
        [&](double d) {
          xs[i] = xi + d;
          const double v = f(xs, p);
          xs[i] = xi;
          return v;
        },
        step);
  }
  for (Eigen::Index i = 0; i < p.size(); ++i) {
    const double pi = p[i];
    gp[i] = fd4(
        [&](double d) {
          ps[i] = pi + d;
          const double v = f(x, ps);
          ps[i] = pi;
          return v;
        },
        step);
  }
}

void hamiltonian_gradient(const TonelliSystem& sys, const Vec& x, const Vec& p,
                          Vec& gx, Vec& gp) {
  if (sys.grad) {
    sys.grad(x, p, gx, gp);
  } else {
    gradient_fd4(sys.hamiltonian, x, p, sys.fd_step, gx, gp);
  }
}

void observable_gradient(const Observable& f, const Vec& x, const Vec& p,
                         Vec& gx, Vec& gp) {
  if (f.grad) {
    f.grad(x, p, gx, gp);
  } else {
    gradient_fd4(f.eval, x, p, f.fd_step, gx, gp);
  }
}

std::pair<Vec, Vec> hamiltonian_vector_field(const TonelliSystem& sys,
                                             const PhasePoint& z) {
  Vec gx, gp;
  hamiltonian_gradient(sys, z.x, z.p, gx, gp);
  check_finite(gp, "hamiltonian_vector_field", "p");
  check_finite(gx, "hamiltonian_vector_field", "x");
  return {gp, -gx};
}

double poisson_bracket(const Observable& f, const Observable& g,
                       const PhasePoint& z) {
  Vec fx, fp, gx, gp;
  observable_gradient(f, z.x, z.p, fx, fp);
  observable_gradient(g, z.x, z.p, gx, gp);
  double sum = 0;
  for (Eigen::Index i = 0; i < fx.size(); ++i) sum += fx[i] * gp[i] - fp[i] * gx[i];
  if (!std::isfinite(sum))
    throw numerical_error("poisson_bracket: non-finite value at sampled point");
  return sum;
}

namespace {

// Maximize <p,v> - H(x,p) by damped Newton from p0 = v. Returns the argmax.
Vec dual_argmax(const TonelliSystem& sys, const Vec& x, const Vec& v) {
  const auto n = v.size();
  Vec p = v;
  Vec gx, gp;
  const auto objective = [&](const Vec& q) { return q.dot(v) - sys.hamiltonian(x, q); };
  const double hess_step = 1e-5;

  for (int iter = 0; iter < 100; ++iter) {
    hamiltonian_gradient(sys, x, p, gx, gp);
    Vec resid = v - gp;  // gradient of the objective
    if (resid.norm() <= 1e-10) return p;

    // p-Hessian of H by central differences of dH/dp.
    Mat hess(n, n);
    Vec ps = p, gx2, gp_hi, gp_lo;
    for (Eigen::Index j = 0; j < n; ++j) {
      const double pj = p[j];
      ps[j] = pj + hess_step;
      hamiltonian_gradient(sys, x, ps, gx2, gp_hi);
      ps[j] = pj - hess_step;
      hamiltonian_gradient(sys, x, ps, gx2, gp_lo);
      ps[j] = pj;
      hess.col(j) = (gp_hi - gp_lo) / (2 * hess_step);
    }
    Vec step = hess.partialPivLu().solve(resid);
    if (!step.allFinite())
      throw numerical_error("lagrangian_value: convexity violation (singular fiber Hessian)");

    double tau = 1.0;
    const double f0 = objective(p);
    int backtracks = 0;
    while (backtracks < 40 && objective(p + tau * step) < f0) {
      tau *= 0.5;
      ++backtracks;
    }
    p += tau * step;
  }
  throw numerical_error("lagrangian_value: convexity violation (Newton did not converge)");
}

}  // namespace

double lagrangian_value(const TonelliSystem& sys, const Vec& x, const Vec& v) {
  if (sys.lagrangian) return sys.lagrangian(x, v);
  const Vec p = dual_argmax(sys, x, v);
  return p.dot(v) - sys.hamiltonian(x, p);
}

PhasePoint legendre_fiber_map(const TonelliSystem& sys, const Vec& x, const Vec& v) {
  if (sys.legendre) return PhasePoint{x, sys.legendre(x, v)};
  return PhasePoint{x, dual_argmax(sys, x, v)};
}

// --- catalog -----------------------------------------------------------------

TonelliSystem make_free(int dim) {
  TonelliSystem sys;
  sys.name = "free";
  sys.dim = dim;
  sys.hamiltonian = [](const Vec&, const Vec& p) { return 0.5 * p.squaredNorm(); };
  sys.grad = [](const Vec& x, const Vec& p, Vec& gx, Vec& gp) {
    gx = Vec::Zero(x.size());
    gp = p;
  };
  sys.lagrangian = [](const Vec&, const Vec& v) { return 0.5 * v.squaredNorm(); };
  sys.legendre = [](const Vec&, const Vec& v) { return v; };
  sys.kinetic = [](const Vec& v) { return 0.5 * v.squaredNorm(); };
  sys.potential = [](const Vec& x) { return 0.0 * x[0]; };
  return sys;
}

TonelliSystem make_pendulum() {
  TonelliSystem sys;
  sys.name = "pendulum";
  sys.dim = 1;
  sys.hamiltonian = [](const Vec& x, const Vec& p) {
    return 0.5 * p[0] * p[0] + std::cos(kTwoPi * x[0]);
  };
  sys.grad = [](const Vec& x, const Vec& p, Vec& gx, Vec& gp) {
    gx = Vec::Constant(1, -kTwoPi * std::sin(kTwoPi * x[0]));
    gp = p;
  };
  sys.lagrangian = [](const Vec& x, const Vec& v) {
    return 0.5 * v[0] * v[0] - std::cos(kTwoPi * x[0]);
  };
  sys.legendre = [](const Vec&, const Vec& v) { return v; };
  sys.kinetic = [](const Vec& v) { return 0.5 * v[0] * v[0]; };
  sys.potential = [](const Vec& x) { return std::cos(kTwoPi * x[0]); };
  return sys;
}

TonelliSystem make_mech2d(double eps) {
  TonelliSystem sys;
  sys.name = "mech2d";
  sys.dim = 2;
  sys.hamiltonian = [eps](const Vec& x, const Vec& p) {
    return 0.5 * p.squaredNorm() +
           eps * (std::cos(kTwoPi * x[0]) + std::cos(kTwoPi * x[1]));
  };
  sys.grad = [eps](const Vec& x, const Vec& p, Vec& gx, Vec& gp) {
    gx.resize(2);
    gx[0] = -eps * kTwoPi * std::sin(kTwoPi * x[0]);
    gx[1] = -eps * kTwoPi * std::sin(kTwoPi * x[1]);
    gp = p;
  };
  sys.lagrangian = [eps](const Vec& x, const Vec& v) {
    return 0.5 * v.squaredNorm() -
           eps * (std::cos(kTwoPi * x[0]) + std::cos(kTwoPi * x[1]));
  };
  sys.legendre = [](const Vec&, const Vec& v) { return v; };
  sys.kinetic = [](const Vec& v) { return 0.5 * v.squaredNorm(); };
  sys.potential = [eps](const Vec& x) {
    return eps * (std::cos(kTwoPi * x[0]) + std::cos(kTwoPi * x[1]));
  };
  return sys;
}

// --- trigonometric-polynomial family -----------------------------------------

namespace {

struct TrigTerm {
  double coef = 0;
  int pi = -1, pj = -1;       // 0-based momentum indices; -1 means absent
  Eigen::VectorXi k;          // wave vector; zero means no Fourier factor
  int trig = 0;               // 0 none, 1 cos, 2 sin

  double momentum_part(const Vec& p) const {
    if (pi < 0) return 1.0;
    if (pj < 0) return p[pi];
    return 0.5 * p[pi] * p[pj];
  }
  void momentum_grad(const Vec& p, Vec& out) const {
    out.setZero();
    if (pi < 0) return;
    if (pj < 0) {
      out[pi] = 1.0;
      return;
    }
    out[pi] += 0.5 * p[pj];
    out[pj] += 0.5 * p[pi];
  }
  double angle(const Vec& x) const { return kTwoPi * k.cast<double>().dot(x); }
  double trig_part(const Vec& x) const {
    if (trig == 0) return 1.0;
    return trig == 1 ? std::cos(angle(x)) : std::sin(angle(x));
  }
  double trig_deriv(const Vec& x) const {  // d/d(angle)
    if (trig == 0) return 0.0;
    return trig == 1 ? -std::sin(angle(x)) : std::cos(angle(x));
  }
};

std::vector<std::string> split(const std::string& s, char sep) {
  std::vector<std::string> parts;
  std::string cur;
  for (char ch : s) {
    if (ch == sep) {
      parts.push_back(cur);
      cur.clear();
    } else {
      cur.push_back(ch);
    }
  }
  parts.push_back(cur);
  return parts;
}

double parse_num(const std::string& s, const std::string& ctx) {
  try {
    std::size_t pos = 0;
    const double v = std::stod(s, &pos);
    if (pos != s.size()) throw std::invalid_argument(s);
    return v;
  } catch (const std::exception&) {
    throw config_error("trigpoly: bad number '" + s + "' in term '" + ctx + "'");
  }
}

int parse_index(const std::string& s, int dim, const std::string& ctx) {
  const double v = parse_num(s, ctx);
  const int i = static_cast<int>(v);
  if (i < 1 || i > dim || i != v)
    throw config_error("trigpoly: momentum index out of range in term '" + ctx + "'");
  return i - 1;
}

Eigen::VectorXi parse_wave(const std::string& s, int dim, const std::string& ctx) {
  const auto parts = split(s, ',');
  if (static_cast<int>(parts.size()) != dim)
    throw config_error("trigpoly: wave vector has wrong dimension in term '" + ctx + "'");
  Eigen::VectorXi k(dim);
  for (int i = 0; i < dim; ++i) k[i] = static_cast<int>(parse_num(parts[i], ctx));
  return k;
}

std::vector<TrigTerm> parse_terms(const std::string& body, int dim) {
  std::vector<TrigTerm> terms;
  for (const auto& raw : split(body, ';')) {
    if (raw.empty()) continue;
    const auto f = split(raw, ':');
    const std::string& kind = f[0];
    TrigTerm t;
    t.k = Eigen::VectorXi::Zero(dim);
    if (kind == "kin" && f.size() == 2) {
      const double coef = parse_num(f[1], raw);
      for (int i = 0; i < dim; ++i) {
        TrigTerm q = t;
        q.coef = coef;
        q.pi = q.pj = i;
        terms.push_back(q);
      }
      continue;
    }
    if (kind == "p" && f.size() == 3) {
      t.pi = parse_index(f[1], dim, raw);
      t.coef = parse_num(f[2], raw);
    } else if (kind == "p2" && f.size() == 3) {
      const auto ij = split(f[1], ',');
      if (ij.size() != 2) throw config_error("trigpoly: bad p2 indices in '" + raw + "'");
      t.pi = parse_index(ij[0], dim, raw);
      t.pj = parse_index(ij[1], dim, raw);
      t.coef = parse_num(f[2], raw);
    } else if ((kind == "cos" || kind == "sin") && f.size() == 3) {
      t.k = parse_wave(f[1], dim, raw);
      t.trig = kind == "cos" ? 1 : 2;
      t.coef = parse_num(f[2], raw);
    } else if ((kind == "pcos" || kind == "psin") && f.size() == 4) {
      t.pi = parse_index(f[1], dim, raw);
      t.k = parse_wave(f[2], dim, raw);
      t.trig = kind == "pcos" ? 1 : 2;
      t.coef = parse_num(f[3], raw);
    } else if ((kind == "p2cos" || kind == "p2sin") && f.size() == 5) {
      const auto ij = split(f[1], ',');
      if (ij.size() != 2) throw config_error("trigpoly: bad p2 indices in '" + raw + "'");
      t.pi = parse_index(ij[0], dim, raw);
      t.pj = parse_index(ij[1], dim, raw);
      t.k = parse_wave(f[2], dim, raw);
      t.trig = kind == "p2cos" ? 1 : 2;
      t.coef = parse_num(f[3], raw);
    } else {
      throw config_error("trigpoly: unrecognized term '" + raw + "'");
    }
    terms.push_back(t);
  }
  if (terms.empty()) throw config_error("trigpoly: empty term list");
  return terms;
}

}  // namespace

TonelliSystem make_system(const std::string& spec, int dim, double mech2d_eps) {
  if (dim < 1) throw config_error("system: dim must be >= 1");
  if (spec == "free") return make_free(dim);
  if (spec == "pendulum") {
    if (dim != 1) throw config_error("system: pendulum is one-dimensional");
    return make_pendulum();
  }
  if (spec == "mech2d") {
    if (dim != 2) throw config_error("system: mech2d is two-dimensional");
    return make_mech2d(mech2d_eps);
  }
  const std::string prefix = "trigpoly:";
  if (spec.rfind(prefix, 0) != 0)
    throw config_error("system: unknown catalog id '" + spec + "'");

  auto terms = std::make_shared<std::vector<TrigTerm>>(
      parse_terms(spec.substr(prefix.size()), dim));
  TonelliSystem sys;
  sys.name = spec;
  sys.dim = dim;
  sys.hamiltonian = [terms](const Vec& x, const Vec& p) {
    double sum = 0;
    for (const auto& t : *terms) sum += t.coef * t.momentum_part(p) * t.trig_part(x);
    return sum;
  };
  sys.grad = [terms, dim](const Vec& x, const Vec& p, Vec& gx, Vec& gp) {
    gx = Vec::Zero(dim);
    gp = Vec::Zero(dim);
    Vec mg(dim);
    for (const auto& t : *terms) {
      const double trig = t.trig_part(x);
      t.momentum_grad(p, mg);
      gp += t.coef * trig * mg;
      if (t.trig != 0) {
        const double d = t.coef * t.momentum_part(p) * t.trig_deriv(x) * kTwoPi;
        gx += d * t.k.cast<double>();
      }
    }
  };
  return sys;
}

Observable momentum_observable(int axis, int dim) {
  if (axis < 1 || axis > dim) throw config_error("momentum observable: axis out of range");
  Observable f;
  f.name = "p" + std::to_string(axis);
  const int i = axis - 1;
  f.eval = [i](const Vec&, const Vec& p) { return p[i]; };
  f.grad = [i, dim](const Vec&, const Vec&, Vec& gx, Vec& gp) {
    gx = Vec::Zero(dim);
    gp = Vec::Zero(dim);
    gp[i] = 1.0;
  };
  return f;
}

Observable hamiltonian_observable(const TonelliSystem& sys) {
  Observable f;
  f.name = "H";
  f.eval = sys.hamiltonian;
  if (sys.grad) f.grad = sys.grad;
  f.fd_step = sys.fd_step;
  return f;
}

Observable trig_observable(bool use_sin, int axis, int dim) {
  if (axis < 1 || axis > dim) throw config_error("trig observable: axis out of range");
  Observable f;
  f.name = (use_sin ? "sinx" : "cosx") + std::to_string(axis);
  const int i = axis - 1;
  if (use_sin) {
    f.eval = [i](const Vec& x, const Vec&) { return std::sin(kTwoPi * x[i]); };
    f.grad = [i, dim](const Vec& x, const Vec&, Vec& gx, Vec& gp) {
      gx = Vec::Zero(dim);
      gp = Vec::Zero(dim);
      gx[i] = kTwoPi * std::cos(kTwoPi * x[i]);
    };
  } else {
    f.eval = [i](const Vec& x, const Vec&) { return std::cos(kTwoPi * x[i]); };
    f.grad = [i, dim](const Vec& x, const Vec&, Vec& gx, Vec& gp) {
      gx = Vec::Zero(dim);
      gp = Vec::Zero(dim);
      gx[i] = -kTwoPi * std::sin(kTwoPi * x[i]);
    };
  }
  return f;
}

Observable parse_observable(const std::string& token, const TonelliSystem& sys) {
  if (token == "H") return hamiltonian_observable(sys);
  if (token.rfind("p", 0) == 0 && token.size() > 1) {
    const int axis = std::atoi(token.c_str() + 1);
    if (axis >= 1 && axis <= sys.dim) return momentum_observable(axis, sys.dim);
  }
  if (token.rfind("sinx", 0) == 0)
    return trig_observable(true, std::atoi(token.c_str() + 4), sys.dim);
  if (token.rfind("cosx", 0) == 0)
    return trig_observable(false, std::atoi(token.c_str() + 4), sys.dim);
  throw config_error("observable: unknown token '" + token + "'");
}

SystemDiagnostics validate_tonelli(const TonelliSystem& sys, int n_samples,
                                   std::uint64_t seed) {
  auto rng = make_rng(seed, 0x70e11);
  std::uniform_real_distribution<double> ux(0.0, 1.0), up(-2.0, 2.0);
  SystemDiagnostics diag;
  diag.min_fiber_hessian_eig = std::numeric_limits<double>::infinity();
  diag.superlinear = true;
  const double hs = 1e-4;
  for (int s = 0; s < n_samples; ++s) {
    Vec x(sys.dim), p(sys.dim);
    for (int i = 0; i < sys.dim; ++i) {
      x[i] = ux(rng);
      p[i] = up(rng);
    }
    // fiber Hessian by second differences of H
    Mat hess(sys.dim, sys.dim);
    for (int i = 0; i < sys.dim; ++i)
      for (int j = 0; j < sys.dim; ++j) {
        Vec q = p;
        q[i] += hs;
        q[j] += hs;
        double v = sys.hamiltonian(x, q);
        q[j] -= 2 * hs;
        v -= sys.hamiltonian(x, q);
        q[i] -= 2 * hs;
        v += sys.hamiltonian(x, q);
        q[j] += 2 * hs;
        v -= sys.hamiltonian(x, q);
        hess(i, j) = v / (4 * hs * hs);
      }
    Eigen::SelfAdjointEigenSolver<Mat> es(0.5 * (hess + hess.transpose()));
    diag.min_fiber_hessian_eig =
        std::min(diag.min_fiber_hessian_eig, es.eigenvalues().minCoeff());

    Vec dir = p;
    if (dir.norm() < 1e-12) dir = Vec::Ones(sys.dim);
    dir.normalize();
    double prev = -std::numeric_limits<double>::infinity();
    for (double radius : {10.0, 100.0, 1000.0}) {
      const double val = sys.hamiltonian(x, radius * dir) / radius;
      if (val <= prev) diag.superlinear = false;
      prev = val;
    }
  }
  return diag;
}

bool observable_periodic(const Observable& f, int dim, int n_samples,
                         std::uint64_t seed, double tol) {
  auto rng = make_rng(seed, 0x9e12);
  std::uniform_real_distribution<double> ux(0.0, 1.0), up(-3.0, 3.0);
  for (int s = 0; s < n_samples; ++s) {
    Vec x(dim), p(dim);
    for (int i = 0; i < dim; ++i) {
      x[i] = ux(rng);
      p[i] = up(rng);
    }
    const double base = f.eval(x, p);
    for (int i = 0; i < dim; ++i) {
      Vec xs = x;
      xs[i] += 1.0;
      if (std::abs(f.eval(xs, p) - base) > tol * (1.0 + std::abs(base))) return false;
    }
  }
  return true;
}

}  // namespace wkam
