#include "domlab/field.hpp"

#include "domlab/error.hpp"
#include "domlab/parallel.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <ostream>

namespace domlab::field {

namespace {

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();
constexpr double kStrictTol = 1e-9;

// First derivative along one axis at (i, j); step (di, dj) is a unit axis step.
cplx axis_derivative(const Grid& g, const std::vector<cplx>& v, int i, int j, int di, int dj) {
  double h = g.spacing();
  auto at = [&](int a, int b) { return v[g.index(a, b)]; };
  if (g.active(i - di, j - dj) && g.active(i + di, j + dj)) {
    return (at(i + di, j + dj) - at(i - di, j - dj)) / (2.0 * h);
  }
  if (g.active(i + di, j + dj) && g.active(i + 2 * di, j + 2 * dj)) {
    return (-3.0 * at(i, j) + 4.0 * at(i + di, j + dj) - at(i + 2 * di, j + 2 * dj)) / (2.0 * h);
  }
  if (g.active(i - di, j - dj) && g.active(i - 2 * di, j - 2 * dj)) {
    return (3.0 * at(i, j) - 4.0 * at(i - di, j - dj) + at(i - 2 * di, j - 2 * dj)) / (2.0 * h);
  }
  throw Error(ErrorKind::grid_too_small,
              "node (" + std::to_string(i) + ", " + std::to_string(j) + ") has no usable difference stencil");
}

bool geq(double a, double b) { return a >= b - kStrictTol * std::max(std::abs(a), std::abs(b)); }
bool gt(double a, double b) { return a > b + kStrictTol * std::max(std::abs(a), std::abs(b)); }

void finish(DominationReport& r, const Grid& g, const std::vector<std::uint8_t>& nonsingular) {
  for (std::size_t k = 0; k < g.size(); ++k) {
    if (!g.active(k)) continue;
    if (!r.dominates[k]) {
      r.dominates_everywhere = false;
      ++r.failures;
      if (!r.first_failure) r.first_failure = k;
    }
    if (nonsingular[k] && !r.strict[k]) r.strict_where_nonsingular = false;
  }
  if (!r.dominates_everywhere) r.strict_where_nonsingular = false;
}

}  // namespace

double sigma(cplx w) {
  double d = 1.0 - std::norm(w);
  return 4.0 / (d * d);
}

double ConformalMetric::factor(cplx z) const {
  if (kind_ == Kind::flat) return 1.0;
  if (!(std::norm(z) < 1.0)) throw Error(ErrorKind::invalid_point, "hyperbolic metric evaluated outside the disc");
  return sigma(z);
}

std::vector<double> ConformalMetric::sample(const Grid& grid) const {
  std::vector<double> out(grid.size(), kNaN);
  for (std::size_t k = 0; k < grid.size(); ++k) {
    if (grid.active(k)) out[k] = factor(grid.node(k));
  }
  return out;
}

MapField MapField::sample(const Grid& grid, const std::function<cplx(cplx)>& fn) {
  MapField f{grid, std::vector<cplx>(grid.size(), cplx(kNaN, kNaN))};
  for (std::size_t k = 0; k < grid.size(); ++k) {
    if (!grid.active(k)) continue;
    cplx w = fn(grid.node(k));
    if (!(std::norm(w) < 1.0)) throw Error(ErrorKind::invalid_point, "map value leaves the open unit disc");
    f.values[k] = w;
  }
  return f;
}

EnergyFields energies(const MapField& f, const ConformalMetric& nu) {
  const Grid& g = f.grid;
  if (f.values.size() != g.size()) throw Error(ErrorKind::invalid_input, "map samples do not match the grid");
  for (std::size_t k = 0; k < g.size(); ++k) {
    if (g.active(k) && !(std::norm(f.values[k]) < 1.0)) {
      throw Error(ErrorKind::invalid_point, "map value leaves the open unit disc");
    }
  }
  EnergyFields out{g, {}, {}, {}, {}, {}};
  out.H.assign(g.size(), kNaN);
  out.L.assign(g.size(), kNaN);
  out.e.assign(g.size(), kNaN);
  out.J.assign(g.size(), kNaN);
  out.hopf.assign(g.size(), cplx(kNaN, kNaN));
  std::vector<double> nus = nu.sample(g);

  parallel_for(g.size(), [&](std::size_t begin, std::size_t end) {
    for (std::size_t k = begin; k < end; ++k) {
      if (!g.active(k)) continue;
      int i = g.col(k);
      int j = g.row(k);
      cplx fx = axis_derivative(g, f.values, i, j, 1, 0);
      cplx fy = axis_derivative(g, f.values, i, j, 0, 1);
      cplx fz = 0.5 * (fx - cplx(0.0, 1.0) * fy);
      cplx fzbar = 0.5 * (fx + cplx(0.0, 1.0) * fy);
      double s = sigma(f.values[k]);
      out.H[k] = s / nus[k] * std::norm(fz);
      out.L[k] = s / nus[k] * std::norm(fzbar);
      out.e[k] = out.H[k] + out.L[k];
      out.J[k] = out.H[k] - out.L[k];
      out.hopf[k] = s * fz * std::conj(fzbar);
    }
  });
  return out;
}

double hopf_holomorphy_residual(const EnergyFields& e) {
  const Grid& g = e.grid;
  double h = g.spacing();
  double sup = 0.0;
  for (int j = 1; j + 1 < g.ny(); ++j) {
    for (int i = 1; i + 1 < g.nx(); ++i) {
      if (g.kind(i, j) != NodeKind::interior) continue;
      if (!(g.active(i - 1, j) && g.active(i + 1, j) && g.active(i, j - 1) && g.active(i, j + 1))) continue;
      cplx dx = (e.hopf[g.index(i + 1, j)] - e.hopf[g.index(i - 1, j)]) / (2.0 * h);
      cplx dy = (e.hopf[g.index(i, j + 1)] - e.hopf[g.index(i, j - 1)]) / (2.0 * h);
      sup = std::max(sup, std::abs(0.5 * (dx + cplx(0.0, 1.0) * dy)));
    }
  }
  return sup;
}

double Sym2::min_eigenvalue() const {
  double mean = 0.5 * (g11 + g22);
  double half_gap = std::hypot(0.5 * (g11 - g22), g12);
  return mean - half_gap;
}

double Sym2::max_abs() const { return std::max({std::abs(g11), std::abs(g12), std::abs(g22)}); }

namespace {

Sym2 form(double e, double nu, cplx hopf) {
  return Sym2{e * nu + 2.0 * hopf.real(), -2.0 * hopf.imag(), e * nu - 2.0 * hopf.real()};
}

}  // namespace

MetricField pullback_metric(const EnergyFields& e, const ConformalMetric& nu) {
  const Grid& g = e.grid;
  MetricField out{g, std::vector<Sym2>(g.size())};
  for (std::size_t k = 0; k < g.size(); ++k) {
    if (g.active(k)) out.g[k] = form(e.e[k], nu.factor(g.node(k)), e.hopf[k]);
  }
  return out;
}

MetricField metric_from_energy(const Grid& grid, const std::vector<double>& H, const std::vector<double>& L,
                               const std::vector<cplx>& hopf, const ConformalMetric& nu) {
  if (H.size() != grid.size() || L.size() != grid.size() || hopf.size() != grid.size()) {
    throw Error(ErrorKind::invalid_input, "energy fields do not match the grid");
  }
  MetricField out{grid, std::vector<Sym2>(grid.size())};
  for (std::size_t k = 0; k < grid.size(); ++k) {
    if (!grid.active(k)) continue;
    double n = nu.factor(grid.node(k));
    double lhs = std::norm(hopf[k]);
    double rhs = H[k] * L[k] * n * n;
    if (std::abs(lhs - rhs) > 1e-6 * std::max({lhs, rhs, 1e-300})) {
      throw Error(ErrorKind::inconsistent_data, "|hopf|^2 != H L nu^2 at node " + std::to_string(k));
    }
    out.g[k] = form(H[k] + L[k], n, hopf[k]);
  }
  return out;
}

DominationReport region_domination(const EnergyFields& ef, const EnergyFields& eh) {
  const Grid& g = ef.grid;
  if (!g.same_as(eh.grid)) throw Error(ErrorKind::invalid_input, "energy fields live on different grids");
  double mismatch = 0.0;
  for (std::size_t k = 0; k < g.size(); ++k) {
    if (g.active(k)) mismatch = std::max(mismatch, std::abs(ef.hopf[k] - eh.hopf[k]));
  }
  if (mismatch > 1e-8) {
    throw Error(ErrorKind::hypothesis_violation, "Hopf differentials differ (sup " + std::to_string(mismatch) + ")",
                "same_hopf");
  }

  DominationReport r;
  r.dominates.assign(g.size(), 0);
  r.strict.assign(g.size(), 0);
  r.regions.assign(g.size(), 0);
  std::vector<std::uint8_t> nonsingular(g.size(), 0);
  for (std::size_t k = 0; k < g.size(); ++k) {
    if (!g.active(k)) continue;
    double Hf = ef.H[k], Lf = ef.L[k], Hh = eh.H[k], Lh = eh.L[k];
    std::uint8_t bits = 0;
    if (geq(Hf, Lf)) bits |= in_Uf;
    if (geq(Lf, Hf)) bits |= in_Vf;
    if (geq(Hh, Lh)) bits |= in_Uh;
    if (geq(Lh, Hh)) bits |= in_Vh;
    r.regions[k] = bits;
    nonsingular[k] = !((bits & in_Uh) && (bits & in_Vh));

    bool ok = true;
    bool strict = true;
    auto clause = [&](std::uint8_t need, double big, double small) {
      if ((bits & need) != need) return;
      ok = ok && geq(big, small);
      strict = strict && gt(big, small);
    };
    clause(in_Uf | in_Uh, Hh, Hf);
    clause(in_Uf | in_Vh, Lh, Hf);
    clause(in_Vf | in_Uh, Hh, Lf);
    clause(in_Vf | in_Vh, Lh, Lf);
    r.dominates[k] = ok;
    r.strict[k] = ok && strict;
  }
  finish(r, g, nonsingular);
  return r;
}

DominationReport direct_domination(const MetricField& gf, const MetricField& gh) {
  const Grid& g = gf.grid;
  if (!g.same_as(gh.grid)) throw Error(ErrorKind::invalid_input, "metric fields live on different grids");
  DominationReport r;
  r.dominates.assign(g.size(), 0);
  r.strict.assign(g.size(), 0);
  std::vector<std::uint8_t> nonsingular(g.size(), 0);
  for (std::size_t k = 0; k < g.size(); ++k) {
    if (!g.active(k)) continue;
    const Sym2& a = gf.g[k];
    const Sym2& b = gh.g[k];
    Sym2 diff{b.g11 - a.g11, b.g12 - a.g12, b.g22 - a.g22};
    double scale = std::max(a.max_abs(), b.max_abs());
    double lam = diff.min_eigenvalue();
    r.dominates[k] = lam >= -kStrictTol * scale;
    r.strict[k] = lam > kStrictTol * scale;
    nonsingular[k] = b.min_eigenvalue() > kStrictTol * b.max_abs();
  }
  finish(r, g, nonsingular);
  return r;
}

double jacobian_area(const EnergyFields& e, const ConformalMetric& nu, const std::vector<std::uint8_t>& region) {
  const Grid& g = e.grid;
  double h2 = g.spacing() * g.spacing();
  double total = 0.0;
  for (std::size_t k = 0; k < g.size(); ++k) {
    if (!g.active(k)) continue;
    if (!region.empty() && !region[k]) continue;
    total += e.J[k] * nu.factor(g.node(k)) * h2;
  }
  return total / (2.0 * std::numbers::pi);
}

void write_csv(std::ostream& out, const EnergyFields& e) {
  const Grid& g = e.grid;
  out << "x,y,H,L,e,J,re_phi,im_phi\n";
  out.precision(17);
  for (std::size_t k = 0; k < g.size(); ++k) {
    if (!g.active(k)) continue;
    cplx z = g.node(k);
    out << z.real() << ',' << z.imag() << ',' << e.H[k] << ',' << e.L[k] << ',' << e.e[k] << ',' << e.J[k] << ','
        << e.hopf[k].real() << ',' << e.hopf[k].imag() << '\n';
  }
}

}  // namespace domlab::field
