#include "wkam/integrability.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "wkam/util.hpp"

namespace wkam {

void IntegralFamily::validate(int dim) const {
  if (members.empty()) throw config_error("IntegralFamily: no members");
  if (static_cast<int>(members.size()) > 2 * dim)
    throw config_error("IntegralFamily: more than 2n members");
  for (const auto& f : members)
    if (!observable_periodic(f, dim))
      throw config_error("IntegralFamily: member '" + f.name + "' is not periodic in x");
}

namespace {

double halton(std::uint64_t index, int base) {
  double f = 1.0, r = 0.0;
  while (index > 0) {
    f /= base;
    r += f * static_cast<double>(index % base);
    index /= base;
  }
  return r;
}

}  // namespace

std::vector<PhasePoint> sample_phase_points(int dim, int count, double momentum_box,
                                            std::uint64_t seed) {
  static const int bases[] = {2, 3, 5, 7, 11, 13, 17, 19};
  const std::uint64_t start = 1 + (seed % 8191);
  std::vector<PhasePoint> pts;
  pts.reserve(count);
  for (int i = 0; i < count; ++i) {
    Vec x(dim), p(dim);
    for (int a = 0; a < dim; ++a) {
      x[a] = halton(start + i, bases[a]);
      p[a] = momentum_box * (2.0 * halton(start + i, bases[dim + a]) - 1.0);
    }
    pts.emplace_back(std::move(x), std::move(p));
  }
  return pts;
}

RankResult independence_rank(const IntegralFamily& fam,
                             const std::vector<PhasePoint>& samples,
                             double sv_tol, double degenerate_tol) {
  if (samples.empty()) throw config_error("independence_rank: no samples");
  const int k = static_cast<int>(fam.members.size());
  const int dim = samples.front().dim();

  RankResult result;
  result.min_rank = 2 * dim + 1;
  Vec gx, gp;
  Mat grads(k, 2 * dim);
  for (const auto& z : samples) {
    for (int i = 0; i < k; ++i) {
      observable_gradient(fam.members[i], z.x, z.p, gx, gp);
      grads.row(i).head(dim) = gx.transpose();
      grads.row(i).tail(dim) = gp.transpose();
    }
    int rank = 0;
    Eigen::JacobiSVD<Mat> svd(grads);
    const auto& sv = svd.singularValues();
    if (sv.size() == 0 || sv[0] <= degenerate_tol) {
      rank = 0;
      result.degenerate = true;
    } else {
      for (Eigen::Index i = 0; i < sv.size(); ++i)
        if (sv[i] > sv_tol * sv[0]) ++rank;
    }
    if (rank < result.min_rank) {
      result.min_rank = rank;
      result.worst = z;
    }
  }
  return result;
}

double commutation_defect(const Observable& f, const Observable& g,
                          const std::vector<PhasePoint>& samples) {
  double defect = 0;
  for (const auto& z : samples)
    defect = std::max(defect, std::abs(poisson_bracket(f, g, z)));
  return defect;
}

namespace {

std::vector<PhasePoint> lifted_aubry_points(const WeakKamResult& wk) {
  std::vector<PhasePoint> pts;
  pts.reserve(wk.aubry_nodes.size());
  const int dim = wk.u.dim;
  for (int node : wk.aubry_nodes) {
    Vec x = wk.u.node_position(node);
    Vec p(dim);
    for (int a = 0; a < dim; ++a) p[a] = wk.momentum[a].values[node];
    pts.emplace_back(std::move(x), std::move(p));
  }
  return pts;
}

void require_full_support(const WeakKamResult& wk, const char* op) {
  if (!wk.full_support()) {
    std::ostringstream os;
    os << op << ": graph-not-full (" << wk.aubry_nodes.size() << " of "
       << wk.u.size() << " nodes)";
    throw numerical_error(os.str());
  }
}

}  // namespace

double involution_on_aubry(const Observable& f, const Observable& g,
                           const WeakKamResult& wk) {
  if (wk.aubry_nodes.empty()) throw config_error("involution_on_aubry: empty aubry set");
  double defect = 0;
  for (const auto& z : lifted_aubry_points(wk))
    defect = std::max(defect, std::abs(poisson_bracket(f, g, z)));
  return defect;
}

namespace {

// Distance from a point to the lifted Aubry set. The lift is at most one
// point per grid node, so the search expands Chebyshev rings of x-cells
// around the query and stops once the ring's base distance alone exceeds the
// best candidate.
double distance_to_lift(const PhasePoint& z, const WeakKamResult& wk,
                        const std::vector<char>& on_lift) {
  const int N = wk.u.N;
  const int dim = wk.u.dim;
  const double delta = 1.0 / N;
  double best = std::numeric_limits<double>::infinity();
  Vec p(dim);

  auto consider = [&](int i1, int i2) {
    const int node = wk.u.node_index(i1, i2);
    if (!on_lift[node]) return;
    for (int a = 0; a < dim; ++a) p[a] = wk.momentum[a].values[node];
    best = std::min(best, phase_distance(z, PhasePoint(wk.u.node_position(node), p)));
  };

  const int c1 = static_cast<int>(std::floor(z.x[0] * N));
  const int c2 = dim == 2 ? static_cast<int>(std::floor(z.x[1] * N)) : 0;
  const int max_ring = N / 2 + 1;
  for (int ring = 0; ring <= max_ring; ++ring) {
    if (best < (ring - 1) * delta) break;  // x-distance alone already exceeds best
    if (dim == 1) {
      consider(c1 + ring, 0);
      if (ring > 0) consider(c1 - ring, 0);
    } else {
      for (int j = -ring; j <= ring; ++j) {
        consider(c1 - ring, c2 + j);
        if (ring > 0) consider(c1 + ring, c2 + j);
        if (std::abs(j) != ring) {
          consider(c1 + j, c2 - ring);
          consider(c1 + j, c2 + ring);
        }
      }
    }
  }
  return best;
}

}  // namespace

double aubry_invariance_defect(const Generator& f, const WeakKamResult& wk,
                               double t, double dt) {
  const auto lifted = lifted_aubry_points(wk);
  if (lifted.empty()) throw config_error("aubry_invariance_defect: empty aubry set");
  if (t == 0.0) return 0.0;

  std::vector<char> on_lift(wk.u.size(), 0);
  for (int node : wk.aubry_nodes) on_lift[node] = 1;

  std::vector<double> dist(lifted.size(), 0.0);
  parallel_for(lifted.size(), [&](std::size_t i) {
    const PhasePoint pushed = flow(f, lifted[i], t, dt).final_state();
    dist[i] = distance_to_lift(pushed, wk, on_lift);
  });
  return *std::max_element(dist.begin(), dist.end());
}

double graph_invariance_defect(const TonelliSystem& sys, const WeakKamResult& wk,
                               double t, double dt, int n_seeds,
                               std::uint64_t seed) {
  require_full_support(wk, "graph_invariance_defect");
  if (n_seeds < 1) throw config_error("graph_invariance_defect: need at least one seed");

  const int dim = wk.u.dim;
  auto rng = make_rng(seed, 0x6a0f);
  std::uniform_int_distribution<int> pick(0, wk.u.size() - 1);
  std::vector<int> nodes(n_seeds);
  for (auto& n : nodes) n = pick(rng);

  std::vector<double> defects(n_seeds, 0.0);
  parallel_for(nodes.size(), [&](std::size_t i) {
    Vec x = wk.u.node_position(nodes[i]);
    Vec p(dim);
    for (int a = 0; a < dim; ++a) p[a] = wk.momentum[a].values[nodes[i]];
    const PhasePoint end = flow(Generator(sys), PhasePoint(x, p), t, dt).final_state();
    double d2 = 0;
    for (int a = 0; a < dim; ++a) {
      const double pa = wk.momentum[a].interpolate(end.x);
      d2 += (end.p[a] - pa) * (end.p[a] - pa);
    }
    defects[i] = std::sqrt(d2);
  });
  return *std::max_element(defects.begin(), defects.end());
}

double constancy_on_graph(const Observable& f, const WeakKamResult& wk) {
  require_full_support(wk, "constancy_on_graph");
  double lo = std::numeric_limits<double>::infinity(), hi = -lo;
  for (const auto& z : lifted_aubry_points(wk)) {
    const double v = f.eval(z.x, z.p);
    lo = std::min(lo, v);
    hi = std::max(hi, v);
  }
  return hi - lo;
}

UniquenessProbe uniqueness_probe(const TonelliSystem& sys, const CohomologyClass& c,
                                 const DiscreteActionParams& params, int n_restarts,
                                 std::uint64_t seed, const SolveOptions& opt) {
  if (n_restarts < 2) throw config_error("uniqueness_probe: need at least two restarts");
  UniquenessProbe probe;
  std::vector<GridFunction> solutions;
  solutions.reserve(n_restarts);
  for (int r = 0; r < n_restarts; ++r) {
    GridFunction u0 = GridFunction::zeros(sys.dim, params.N);
    auto rng = make_rng(seed, 0xab170 + r);
    std::uniform_real_distribution<double> uni(0.0, 1.0);
    for (int i = 0; i < u0.size(); ++i) u0.values[i] = uni(rng);
    SolveOptions ropt = opt;
    ropt.initial = &u0;
    ropt.with_aubry = false;
    ropt.with_rotation = false;
    WeakKamResult res = solve_weak_kam(sys, c, params, ropt);
    probe.all_converged = probe.all_converged && res.converged;
    solutions.push_back(std::move(res.u));
  }
  for (std::size_t i = 0; i < solutions.size(); ++i)
    for (std::size_t j = i + 1; j < solutions.size(); ++j)
      probe.max_pairwise_sup =
          std::max(probe.max_pairwise_sup,
                   (solutions[i].values - solutions[j].values).abs().maxCoeff());
  return probe;
}

std::vector<std::string> VerdictReport::failing() const {
  std::vector<std::string> out;
  for (const auto& r : records)
    if (!r.pass) out.push_back(r.name);
  return out;
}

namespace {

std::string class_label(const Vec& c) {
  std::ostringstream os;
  os << "c=(";
  for (Eigen::Index i = 0; i < c.size(); ++i) os << (i ? "," : "") << c[i];
  os << ")";
  return os.str();
}

}  // namespace

VerdictReport weak_integrability_verdict(const TonelliSystem& sys,
                                         const IntegralFamily& fam,
                                         const std::vector<CohomologyClass>& cs,
                                         const DiscreteActionParams& params,
                                         const VerdictOptions& opt,
                                         std::uint64_t seed) {
  fam.validate(sys.dim);
  if (cs.empty()) throw config_error("verdict: no cohomology classes");
  const int n = sys.dim;
  const Observable h_obs = hamiltonian_observable(sys);
  const auto box = sample_phase_points(n, opt.n_samples, opt.momentum_box, seed);

  VerdictReport report;
  auto add = [&](const std::string& name, double value, double threshold, bool pass) {
    report.records.push_back(CheckRecord{name, value, threshold, pass, seed});
  };

  for (const auto& f : fam.members)
    if (!(f.name == "H" && fam.includes_hamiltonian)) {
      const double defect = commutation_defect(h_obs, f, box);
      add("commutation:H," + f.name, defect, opt.tol_bracket, defect <= opt.tol_bracket);
    }

  // weak-KAM solves per class
  std::vector<WeakKamResult> results;
  results.reserve(cs.size());
  SolveOptions sopt = opt.solve;
  sopt.with_aubry = true;
  sopt.with_rotation = false;
  for (const auto& c : cs) results.push_back(solve_weak_kam(sys, c, params, sopt));

  // independence over box samples plus every lifted Aubry point
  {
    std::vector<PhasePoint> samples = box;
    for (const auto& wk : results) {
      const int dim = wk.u.dim;
      for (int node : wk.aubry_nodes) {
        Vec x = wk.u.node_position(node);
        Vec p(dim);
        for (int a = 0; a < dim; ++a) p[a] = wk.momentum[a].values[node];
        samples.emplace_back(std::move(x), std::move(p));
      }
    }
    const RankResult rank = independence_rank(fam, samples, opt.sv_tol);
    add("independence:rank", static_cast<double>(rank.min_rank),
        static_cast<double>(n), rank.min_rank >= n);
  }

  const double spacing = 1.0 / params.N;
  for (std::size_t ci = 0; ci < cs.size(); ++ci) {
    const auto& wk = results[ci];
    const std::string label = class_label(cs[ci].c);
    const double coverage =
        static_cast<double>(wk.aubry_nodes.size()) / wk.u.size();
    add("aubry-full-support:" + label, coverage, 1.0, wk.full_support());

    if (wk.full_support()) {
      const double graph_defect = graph_invariance_defect(
          sys, wk, opt.flow_t, opt.flow_dt, opt.graph_seeds, seed);
      add("graph-invariance:" + label, graph_defect, 3.0 * spacing,
          graph_defect <= 3.0 * spacing);
      for (const auto& f : fam.members) {
        const double spread = constancy_on_graph(f, wk);
        add("constancy:" + f.name + ":" + label, spread, opt.tol_bracket,
            spread <= opt.tol_bracket);
      }
    } else {
      add("graph-invariance:" + label,
          std::numeric_limits<double>::quiet_NaN(), 3.0 * spacing, false);
    }

    for (std::size_t i = 0; i < fam.members.size(); ++i)
      for (std::size_t j = i + 1; j < fam.members.size(); ++j) {
        const double defect =
            involution_on_aubry(fam.members[i], fam.members[j], wk);
        add("involution:" + fam.members[i].name + "," + fam.members[j].name + ":" + label,
            defect, opt.tol_bracket, defect <= opt.tol_bracket);
      }

    for (const auto& f : fam.members) {
      const double defect =
          aubry_invariance_defect(Generator(f), wk, opt.flow_t, opt.flow_dt);
      add("aubry-invariance:" + f.name + ":" + label, defect, 2.0 * spacing,
          defect <= 2.0 * spacing);
    }
  }

  std::sort(report.records.begin(), report.records.end(),
            [](const CheckRecord& a, const CheckRecord& b) { return a.name < b.name; });
  report.pass = std::all_of(report.records.begin(), report.records.end(),
                            [](const CheckRecord& r) { return r.pass; });
  return report;
}

}  // namespace wkam
