#include "domlab/bochner.hpp"

#include "domlab/error.hpp"
#include "domlab/parallel.hpp"

#include <Eigen/Sparse>
#include <Eigen/SparseLU>

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <ostream>
#include <sstream>

namespace domlab::bochner {

namespace {

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();
constexpr double kInf = std::numeric_limits<double>::infinity();
constexpr double kMaxHyperbolicRadius = 0.95;

double singular_part(const std::vector<DivisorPoint>& divisor, cplx z) {
  double total = 0.0;
  for (const auto& p : divisor) total += 2.0 * p.m * std::log(std::abs(z - p.z));
  return total;
}

int divisor_mult_at(const std::vector<DivisorPoint>& divisor, cplx z) {
  for (const auto& p : divisor) {
    if (std::abs(p.z - z) <= 1e-12) return p.m;
  }
  return 0;
}

// Five-point Laplacian on the unknowns (interior nodes) with Shortley-Weller
// arms wherever a neighbour is not interior.  Dirichlet contributions are
// folded into `constant`.
struct Stencil {
  std::vector<std::size_t> node_of;    // unknown -> node
  std::vector<std::ptrdiff_t> unknown_of;  // node -> unknown or -1
  std::vector<double> diag;
  std::vector<std::array<std::ptrdiff_t, 4>> nbr;  // unknown index or -1
  std::vector<std::array<double, 4>> coef;
  std::vector<double> constant;        // sum of Dirichlet terms acting on s
  std::vector<double> dirichlet_u;     // u at every Dirichlet point, in visit order
};

double crossing_fraction(const Grid& g, cplx z0, cplx dir) {
  const auto& circle = g.circle();
  if (!circle) return 1.0;
  cplx w = z0 - circle->center;
  double b = (w * std::conj(dir)).real();
  double disc = b * b + circle->radius * circle->radius - std::norm(w);
  double t = (-b + std::sqrt(std::max(disc, 0.0))) / g.spacing();
  return std::clamp(t, 1e-12, 1.0);
}

Stencil build_stencil(const BochnerProblem& p) {
  const Grid& g = p.grid;
  Stencil st;
  st.unknown_of.assign(g.size(), -1);
  for (std::size_t k = 0; k < g.size(); ++k) {
    if (g.kind(k) == NodeKind::interior) {
      st.unknown_of[k] = static_cast<std::ptrdiff_t>(st.node_of.size());
      st.node_of.push_back(k);
    }
  }
  std::map<std::size_t, double> node_value;
  if (p.boundary.per_node()) {
    const auto& vals = p.boundary.node_values();
    std::size_t next = 0;
    for (std::size_t k = 0; k < g.size(); ++k) {
      if (g.kind(k) != NodeKind::boundary) continue;
      if (next >= vals.size()) throw Error(ErrorKind::invalid_problem, "too few boundary values");
      node_value[k] = vals[next++];
    }
    if (next != vals.size()) throw Error(ErrorKind::invalid_problem, "too many boundary values");
  }

  std::size_t n = st.node_of.size();
  st.diag.assign(n, 0.0);
  st.nbr.assign(n, {-1, -1, -1, -1});
  st.coef.assign(n, {0.0, 0.0, 0.0, 0.0});
  st.constant.assign(n, 0.0);
  const double h = g.spacing();
  const int di[4] = {-1, 1, 0, 0};
  const int dj[4] = {0, 0, -1, 1};
  const cplx dirs[4] = {cplx(-1, 0), cplx(1, 0), cplx(0, -1), cplx(0, 1)};

  for (std::size_t u = 0; u < n; ++u) {
    std::size_t k = st.node_of[u];
    int i = g.col(k);
    int j = g.row(k);
    cplx z0 = g.node(k);
    double arm[4];
    double value[4];
    for (int d = 0; d < 4; ++d) {
      int a = i + di[d];
      int b = j + dj[d];
      std::size_t nk = g.index(a, b);
      if (g.kind(nk) == NodeKind::interior) {
        arm[d] = h;
        st.nbr[u][d] = st.unknown_of[nk];
        continue;
      }
      if (g.kind(nk) != NodeKind::boundary) {
        throw Error(ErrorKind::invalid_problem, "interior node borders an excluded node");
      }
      double t = crossing_fraction(g, z0, dirs[d]);
      cplx zc = z0 + t * h * dirs[d];
      double uc = p.boundary.per_node() ? node_value.at(nk) : p.boundary.at(zc);
      if (!std::isfinite(uc)) throw Error(ErrorKind::invalid_problem, "boundary trace is not finite");
      st.dirichlet_u.push_back(uc);
      arm[d] = t * h;
      value[d] = uc - singular_part(p.divisor, zc);
    }
    for (int axis = 0; axis < 2; ++axis) {
      int lo = 2 * axis;
      int hi = lo + 1;
      double a = arm[lo];
      double b = arm[hi];
      double cl = 2.0 / (a * (a + b));
      double ch = 2.0 / (b * (a + b));
      st.diag[u] -= 2.0 / (a * b);
      if (st.nbr[u][lo] >= 0) st.coef[u][lo] = cl; else st.constant[u] += cl * value[lo];
      if (st.nbr[u][hi] >= 0) st.coef[u][hi] = ch; else st.constant[u] += ch * value[hi];
    }
  }
  return st;
}

double apply_laplacian(const Stencil& st, const std::vector<double>& x, std::size_t u) {
  double lap = st.diag[u] * x[u] + st.constant[u];
  for (int d = 0; d < 4; ++d) {
    if (st.nbr[u][d] >= 0) lap += st.coef[u][d] * x[static_cast<std::size_t>(st.nbr[u][d])];
  }
  return lap;
}

struct NodeData {
  std::vector<double> nu, E, W;
  std::vector<std::uint8_t> divisor;
  double kappa = 0.0;
};

NodeData node_data(const BochnerProblem& p, const Stencil& st) {
  NodeData nd;
  std::size_t n = st.node_of.size();
  nd.nu.resize(n);
  nd.E.resize(n);
  nd.W.resize(n);
  nd.divisor.assign(n, 0);
  nd.kappa = p.nu.curvature();
  for (std::size_t u = 0; u < n; ++u) {
    cplx z = p.grid.node(st.node_of[u]);
    nd.nu[u] = p.nu.factor(z);
    Coefficients c = coefficients(p, z);
    nd.E[u] = c.E;
    nd.W[u] = c.W;
    nd.divisor[u] = divisor_mult_at(p.divisor, z) > 0;
  }
  return nd;
}

// Residual in Bochner units: Lap s / (2 nu) - (E e^s - W e^{-s} + kappa).
void residual(const Stencil& st, const NodeData& nd, const std::vector<double>& x, std::vector<double>& r) {
  r.resize(x.size());
  parallel_for(x.size(), [&](std::size_t begin, std::size_t end) {
    for (std::size_t u = begin; u < end; ++u) {
      double lap = apply_laplacian(st, x, u);
      r[u] = lap / (2.0 * nd.nu[u]) - (nd.E[u] * std::exp(x[u]) - nd.W[u] * std::exp(-x[u]) + nd.kappa);
    }
  });
}

double sup_norm(const std::vector<double>& r) {
  double m = 0.0;
  for (double v : r) {
    if (!std::isfinite(v)) return kInf;
    m = std::max(m, std::abs(v));
  }
  return m;
}

double two_norm(const std::vector<double>& r) {
  double s = 0.0;
  for (double v : r) s += v * v;
  return std::isfinite(s) ? std::sqrt(s) : kInf;
}

bool same_phi(const PolyQD& a, const PolyQD& b) {
  if (std::abs(a.leading - b.leading) > 1e-14 * std::max(1.0, std::abs(a.leading))) return false;
  if (a.roots.size() != b.roots.size()) return false;
  for (const auto& r : a.roots) {
    if (b.order_at(r.z) != r.m) return false;
  }
  return true;
}

}  // namespace

cplx PolyQD::operator()(cplx z) const {
  cplx v = leading;
  for (const auto& r : roots) v *= std::pow(z - r.z, r.m);
  return v;
}

int PolyQD::order_at(cplx z, double tol) const {
  if (is_zero()) return 0;
  int total = 0;
  for (const auto& r : roots) {
    if (std::abs(r.z - z) <= tol) total += r.m;
  }
  return total;
}

BoundaryTrace BoundaryTrace::constant(double c) {
  return function([c](cplx) { return c; });
}

BoundaryTrace BoundaryTrace::function(std::function<double(cplx)> g) {
  if (!g) throw Error(ErrorKind::invalid_problem, "empty boundary function");
  BoundaryTrace t;
  t.fn_ = std::move(g);
  return t;
}

BoundaryTrace BoundaryTrace::values(std::vector<double> v) {
  BoundaryTrace t;
  t.values_ = std::move(v);
  return t;
}

double BoundaryTrace::at(cplx z) const {
  if (!fn_) throw Error(ErrorKind::invalid_problem, "per-node boundary trace has no pointwise evaluation");
  return fn_(z);
}

Coefficients coefficients(const BochnerProblem& p, cplx z) {
  double E = 1.0;
  for (const auto& d : p.divisor) E *= std::pow(std::abs(z - d.z), 2 * d.m);
  if (p.phi.is_zero()) return {E, 0.0};
  double W = std::norm(p.phi.leading);
  for (const auto& r : p.phi.roots) {
    int excess = r.m - divisor_mult_at(p.divisor, r.z);
    W *= std::pow(std::abs(z - r.z), 2 * excess);
  }
  double nu = p.nu.factor(z);
  return {E, W / (nu * nu)};
}

void validate(const BochnerProblem& p) {
  const Grid& g = p.grid;
  bool any_interior = false;
  for (std::size_t k = 0; k < g.size() && !any_interior; ++k) any_interior = g.kind(k) == NodeKind::interior;
  if (!any_interior) throw Error(ErrorKind::invalid_problem, "grid has no interior nodes");
  if (p.nu.kind() == field::ConformalMetric::Kind::hyperbolic_disc) {
    // The hyperbolic factor blows up at |z| = 1; keep the domain well inside.
    double reach = 0.0;
    if (g.circle()) {
      reach = std::abs(g.circle()->center) + g.circle()->radius;
    } else {
      for (std::size_t k = 0; k < g.size(); ++k) {
        if (g.active(k)) reach = std::max(reach, std::abs(g.node(k)));
      }
    }
    if (reach > kMaxHyperbolicRadius + 1e-12) {
      throw Error(ErrorKind::invalid_problem, "hyperbolic background needs a domain inside |z| <= 0.95");
    }
  }
  if (!p.phi.is_zero()) {
    for (const auto& r : p.phi.roots) {
      if (r.m < 1) throw Error(ErrorKind::invalid_problem, "root multiplicity must be at least 1");
    }
  }
  std::vector<std::pair<int, int>> placed;
  for (const auto& d : p.divisor) {
    if (d.m < 1) throw Error(ErrorKind::invalid_problem, "divisor multiplicity must be at least 1");
    auto k = g.locate(d.z);
    if (!k || g.kind(*k) != NodeKind::interior) {
      std::ostringstream msg;
      msg << "divisor point " << d.z << " is not an interior grid node";
      throw Error(ErrorKind::invalid_problem, msg.str());
    }
    int i = g.col(*k);
    int j = g.row(*k);
    for (auto [a, b] : placed) {
      if (std::max(std::abs(a - i), std::abs(b - j)) < 3) {
        throw Error(ErrorKind::invalid_problem, "divisor points closer than 3 grid nodes");
      }
    }
    placed.emplace_back(i, j);
    if (!p.phi.is_zero() && d.m > p.phi.order_at(d.z)) {
      std::ostringstream msg;
      msg << "divisor multiplicity " << d.m << " at " << d.z << " exceeds the order of phi there ("
          << p.phi.order_at(d.z) << ")";
      throw Error(ErrorKind::invalid_problem, msg.str());
    }
  }
}

BochnerSolution solve(const BochnerProblem& problem, const SolveOptions& options) {
  validate(problem);
  const Grid& g = problem.grid;
  Stencil st = build_stencil(problem);
  NodeData nd = node_data(problem, st);
  const std::size_t n = st.node_of.size();

  std::vector<double> x(n, 0.0);
  if (options.initial_s) {
    if (options.initial_s->size() != g.size()) throw Error(ErrorKind::invalid_input, "initial guess size mismatch");
    for (std::size_t u = 0; u < n; ++u) x[u] = (*options.initial_s)[st.node_of[u]];
  }

  // Jacobian pattern: Laplacian plus a diagonal that changes every step.
  std::vector<Eigen::Triplet<double>> trips;
  trips.reserve(5 * n);
  for (std::size_t u = 0; u < n; ++u) {
    trips.emplace_back(u, u, st.diag[u]);
    for (int d = 0; d < 4; ++d) {
      if (st.nbr[u][d] >= 0) trips.emplace_back(u, st.nbr[u][d], st.coef[u][d]);
    }
  }
  Eigen::SparseMatrix<double> jac(static_cast<Eigen::Index>(n), static_cast<Eigen::Index>(n));
  jac.setFromTriplets(trips.begin(), trips.end());
  jac.makeCompressed();
  std::vector<double*> diag_ptr(n);
  for (std::size_t u = 0; u < n; ++u) diag_ptr[u] = &jac.coeffRef(u, u);
  Eigen::SparseLU<Eigen::SparseMatrix<double>, Eigen::COLAMDOrdering<int>> lu;
  lu.analyzePattern(jac);

  std::vector<double> r;
  residual(st, nd, x, r);
  double sup = sup_norm(r);
  double norm = two_norm(r);
  if (!std::isfinite(norm)) throw Error(ErrorKind::solver_failure, "initial residual is not finite");
  int iter = 0;
  std::vector<double> trial(n);
  std::vector<double> rt;
  Eigen::VectorXd rhs(n);
  std::ostringstream trace;

  while (sup >= options.tol && iter < options.max_iter) {
    ++iter;
    for (std::size_t u = 0; u < n; ++u) {
      double two_nu = 2.0 * nd.nu[u];
      *diag_ptr[u] = st.diag[u] - two_nu * (nd.E[u] * std::exp(x[u]) + nd.W[u] * std::exp(-x[u]));
      rhs[u] = -two_nu * r[u];
    }
    lu.factorize(jac);
    if (lu.info() != Eigen::Success) throw Error(ErrorKind::solver_failure, "Jacobian factorization failed");
    Eigen::VectorXd step = lu.solve(rhs);

    double alpha = 1.0;
    bool accepted = false;
    while (alpha >= 1e-10) {
      for (std::size_t u = 0; u < n; ++u) trial[u] = x[u] + alpha * step[u];
      residual(st, nd, trial, rt);
      double tn = two_norm(rt);
      if (tn <= (1.0 - 1e-4 * alpha) * norm) {
        accepted = true;
        break;
      }
      alpha *= 0.5;
    }
    if (!accepted) {
      // Rounding floor reached: keep the iterate if it already satisfies the
      // tolerance, otherwise report failure below.
      break;
    }
    x.swap(trial);
    r.swap(rt);
    norm = two_norm(r);
    sup = sup_norm(r);
    trace << "  iter " << iter << ": sup residual " << sup << " (step " << alpha << ")\n";
  }

  bool converged = sup < options.tol;
  if (!converged && !options.allow_unconverged) {
    std::ostringstream msg;
    msg << "Newton did not converge after " << iter << " iterations; last sup residual " << sup << "\n"
        << trace.str();
    throw Error(ErrorKind::solver_failure, msg.str());
  }

  BochnerSolution sol(problem);
  sol.iterations = iter;
  sol.converged = converged;
  sol.dirichlet_u = st.dirichlet_u;
  sol.s.assign(g.size(), kNaN);
  sol.S.assign(g.size(), kNaN);
  sol.u.assign(g.size(), kNaN);
  sol.residual.assign(g.size(), kNaN);
  sol.divisor_node.assign(g.size(), 0);

  std::map<std::size_t, double> node_value;
  if (problem.boundary.per_node()) {
    const auto& vals = problem.boundary.node_values();
    std::size_t next = 0;
    for (std::size_t k = 0; k < g.size(); ++k) {
      if (g.kind(k) == NodeKind::boundary) node_value[k] = vals[next++];
    }
  }
  double reported = 0.0;
  for (std::size_t k = 0; k < g.size(); ++k) {
    if (!g.active(k)) continue;
    cplx z = g.node(k);
    bool on_divisor = divisor_mult_at(problem.divisor, z) > 0;
    double S = on_divisor ? -kInf : singular_part(problem.divisor, z);
    sol.S[k] = S;
    sol.divisor_node[k] = on_divisor;
    if (g.kind(k) == NodeKind::interior) {
      std::size_t u = static_cast<std::size_t>(st.unknown_of[k]);
      sol.s[k] = x[u];
      sol.residual[k] = r[u];
      if (!on_divisor) reported = std::max(reported, std::abs(r[u]));
    } else {
      double trace_u = problem.boundary.per_node() ? node_value.at(k) : problem.boundary.at(z);
      sol.s[k] = trace_u - S;
    }
    sol.u[k] = sol.s[k] + S;
  }
  sol.residual_sup = reported;
  return sol;
}

ComparisonReport compare(const BochnerSolution& sol1, const BochnerSolution& sol2) {
  const auto& p1 = sol1.problem;
  const auto& p2 = sol2.problem;
  if (!p1.grid.same_as(p2.grid)) throw Error(ErrorKind::hypothesis_violation, "solutions on different grids", "same_grid");
  if (p1.nu.kind() != p2.nu.kind()) throw Error(ErrorKind::hypothesis_violation, "different background metrics", "same_metric");
  if (!same_phi(p1.phi, p2.phi) || !same_phi(p2.phi, p1.phi)) {
    throw Error(ErrorKind::hypothesis_violation, "different quadratic differentials", "same_phi");
  }
  const Grid& g = p1.grid;
  auto placed = [&](const std::vector<DivisorPoint>& d) {
    std::map<std::size_t, int> out;
    for (const auto& p : d) out[*g.locate(p.z)] += p.m;
    return out;
  };
  auto d1 = placed(p1.divisor);
  auto d2 = placed(p2.divisor);
  bool leq = true;
  for (const auto& [k, m] : d2) {
    auto it = d1.find(k);
    if (it == d1.end() || it->second < m) leq = false;
  }
  if (!leq || d1 == d2) throw Error(ErrorKind::hypothesis_violation, "D2 is not strictly less than D1", "D2_less_D1");
  bool same_boundary = sol1.dirichlet_u.size() == sol2.dirichlet_u.size();
  for (std::size_t i = 0; same_boundary && i < sol1.dirichlet_u.size(); ++i) {
    same_boundary = std::abs(sol1.dirichlet_u[i] - sol2.dirichlet_u[i]) <= 1e-12;
  }
  if (!same_boundary) throw Error(ErrorKind::hypothesis_violation, "boundary traces differ", "same_boundary");

  ComparisonReport rep;
  rep.min_diff = kInf;
  rep.max_diff = -kInf;
  rep.strict = true;
  for (std::size_t k = 0; k < g.size(); ++k) {
    if (g.kind(k) != NodeKind::interior || d2.count(k)) continue;
    ++rep.checked;
    double diff = sol2.u[k] - sol1.u[k];
    if (!(diff > 1e-12)) rep.strict = false;
    if (!std::isfinite(diff)) continue;
    if (diff < rep.min_diff) {
      rep.min_diff = diff;
      rep.worst_node = k;
    }
    rep.max_diff = std::max(rep.max_diff, diff);
  }
  return rep;
}

field::EnergyFields jacobian_fields(const BochnerSolution& sol) {
  const auto& p = sol.problem;
  Grid g = p.grid;
  for (std::size_t k = 0; k < g.size(); ++k) {
    if (g.kind(k) != NodeKind::interior) g.set_kind(k, NodeKind::excluded);
  }
  field::EnergyFields e{g, {}, {}, {}, {}, {}};
  e.H.assign(g.size(), kNaN);
  e.L.assign(g.size(), kNaN);
  e.e.assign(g.size(), kNaN);
  e.J.assign(g.size(), kNaN);
  e.hopf.assign(g.size(), cplx(kNaN, kNaN));
  for (std::size_t k = 0; k < g.size(); ++k) {
    if (!g.active(k)) continue;
    cplx z = g.node(k);
    Coefficients c = coefficients(p, z);
    e.H[k] = c.E * std::exp(sol.s[k]);
    e.L[k] = c.W * std::exp(-sol.s[k]);
    e.e[k] = e.H[k] + e.L[k];
    e.J[k] = e.H[k] - e.L[k];
    e.hopf[k] = p.phi(z);
  }
  return e;
}

ExperimentReport domination_experiment(const Grid& grid, const field::ConformalMetric& nu, const PolyQD& phi,
                                       const std::vector<DivisorPoint>& d1, const std::vector<DivisorPoint>& d2,
                                       const BoundaryTrace& boundary, const SolveOptions& options) {
  ExperimentReport rep{solve({grid, nu, phi, d1, boundary}, options), solve({grid, nu, phi, d2, boundary}, options),
                       {}, {}, false, false, false};
  auto ef = jacobian_fields(rep.f);
  auto eh = jacobian_fields(rep.h);
  rep.fh = field::region_domination(ef, eh);
  rep.hf = field::region_domination(eh, ef);
  rep.dominates_fh = rep.fh.dominates_everywhere;
  rep.dominates_hf = rep.hf.dominates_everywhere;
  rep.strict_fh = rep.fh.strict_where_nonsingular;
  return rep;
}

double toda_residual(const BochnerSolution& sol) {
  const auto& p = sol.problem;
  if (p.phi.is_zero()) throw Error(ErrorKind::not_applicable, "Toda system needs phi != 0");
  Stencil st = build_stencil(p);
  std::vector<double> x(st.node_of.size());
  for (std::size_t u = 0; u < x.size(); ++u) x[u] = sol.s[st.node_of[u]];
  const double kappa = p.nu.curvature();
  double sup = 0.0;
  for (std::size_t u = 0; u < x.size(); ++u) {
    std::size_t k = st.node_of[u];
    cplx z = p.grid.node(k);
    if (sol.divisor_node[k] || p.phi.order_at(z, 1e-9 * p.grid.spacing()) > 0) continue;
    double nu = p.nu.factor(z);
    Coefficients c = coefficients(p, z);
    double e_beta = c.E * std::exp(x[u]);
    double e_alpha = c.W * std::exp(-x[u]);
    double half_lap_u = apply_laplacian(st, x, u) / (2.0 * nu);
    // log e_alpha = log|phi|^2 - 2 log nu - u, with Lap log|phi|^2 = 0 off
    // the zeros and Lap log nu = -2 kappa nu.
    double half_lap_alpha = 2.0 * kappa - half_lap_u;
    double r_beta = half_lap_u - (e_beta - e_alpha + kappa);
    double r_alpha = half_lap_alpha - (e_alpha - e_beta + kappa);
    sup = std::max({sup, std::abs(r_beta), std::abs(r_alpha)});
  }
  return sup;
}

void write_csv(std::ostream& out, const BochnerSolution& sol) {
  const Grid& g = sol.problem.grid;
  auto e = jacobian_fields(sol);
  out << "x,y,s,u,H,L,J,residual\n";
  out.precision(17);
  for (std::size_t k = 0; k < g.size(); ++k) {
    if (g.kind(k) != NodeKind::interior) continue;
    cplx z = g.node(k);
    out << z.real() << ',' << z.imag() << ',' << sol.s[k] << ',' << sol.u[k] << ',' << e.H[k] << ',' << e.L[k]
        << ',' << e.J[k] << ',' << sol.residual[k] << '\n';
  }
}

}  // namespace domlab::bochner
