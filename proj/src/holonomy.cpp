#include "domlab/holonomy.hpp"

#include "domlab/error.hpp"
#include "domlab/grid.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <sstream>

namespace domlab::holonomy {

namespace {

constexpr double kPi = std::numbers::pi;
constexpr double kMaxSamples = 1 << 22;

struct Winding {
  double total = 0.0;
  bool fine = true;  // no increment above pi/4
};

// Winding of a sampled closed or open path about the origin. A path that sits
// at the origin throughout has zero winding.
Winding winding(const std::vector<cplx>& path, const char* what) {
  bool all_zero = std::all_of(path.begin(), path.end(), [](cplx z) { return std::abs(z) < 1e-14; });
  if (all_zero) return {};
  Winding w;
  for (std::size_t k = 0; k < path.size(); ++k) {
    if (std::abs(path[k]) < 1e-14) {
      std::ostringstream msg;
      msg << what << " path meets the origin at sample " << k << " of " << path.size();
      throw Error(ErrorKind::singular_path, msg.str());
    }
    if (k == 0) continue;
    double step = std::arg(path[k] / path[k - 1]);
    if (std::abs(step) > kPi / 4.0) w.fine = false;
    w.total += step;
  }
  return w;
}

}  // namespace

MapSpec MapSpec::constant(cplx c) {
  if (!(std::norm(c) < 1.0)) throw Error(ErrorKind::invalid_input, "constant map must lie in the open disc");
  MapSpec m;
  m.kind_ = Kind::constant;
  m.c_ = c;
  m.name_ = "constant";
  return m;
}

MapSpec MapSpec::power(int m, cplx lambda) {
  if (m < 1) throw Error(ErrorKind::invalid_input, "power map exponent must be at least 1");
  if (std::abs(lambda) > 1.0) throw Error(ErrorKind::invalid_input, "power map coefficient must satisfy |lambda| <= 1");
  MapSpec s;
  s.kind_ = Kind::power;
  s.c_ = lambda;
  s.m_ = m;
  s.name_ = "power";
  return s;
}

MapSpec MapSpec::custom(std::function<cplx(cplx)> fn, std::string name) {
  if (!fn) throw Error(ErrorKind::invalid_input, "empty map");
  MapSpec s;
  s.kind_ = Kind::custom;
  s.fn_ = std::move(fn);
  s.name_ = std::move(name);
  return s;
}

cplx MapSpec::operator()(cplx z) const {
  switch (kind_) {
    case Kind::constant:
      return c_;
    case Kind::power:
      return c_ * std::pow(z, m_);
    case Kind::custom:
      return fn_(z);
  }
  return c_;
}

int MapSpec::branch_degree() const {
  if (kind_ != Kind::power || c_ != cplx(1.0, 0.0)) {
    throw Error(ErrorKind::not_applicable, "branch degree is defined for z -> z^n only");
  }
  return m_;
}

DominationVerdict verify_domination(const MapSpec& f, const MapSpec& h, double inner, double outer, int resolution) {
  if (!(0.0 < inner && inner < outer && outer < 1.0)) {
    throw Error(ErrorKind::invalid_input, "annulus radii must satisfy 0 < inner < outer < 1");
  }
  Grid g = Grid::annulus({0.0, 0.0}, inner, outer, resolution);
  if (outer - inner < 4.0 * g.spacing()) {
    throw Error(ErrorKind::grid_too_small, "annulus is narrower than four grid spacings; raise the resolution");
  }
  auto nu = field::ConformalMetric::flat();
  auto ef = field::energies(field::MapField::sample(g, [&](cplx z) { return f(z); }), nu);
  auto eh = field::energies(field::MapField::sample(g, [&](cplx z) { return h(z); }), nu);
  auto rep = field::direct_domination(field::pullback_metric(ef, nu), field::pullback_metric(eh, nu));

  DominationVerdict v;
  v.dominates = true;
  v.radial_ok = true;
  for (std::size_t k = 0; k < g.size(); ++k) {
    if (!g.active(k)) continue;
    ++v.nodes;
    cplx z = g.node(k);
    bool pull = rep.dominates[k] && rep.strict[k];
    bool radial = hyp::dist(HPoint::origin(), f.at(z)) < hyp::dist(HPoint::origin(), h.at(z));
    if (!pull) v.dominates = false;
    if (!radial) v.radial_ok = false;
    if ((!pull || !radial) && !v.witness) v.witness = z;
  }
  return v;
}

Mobius frame(const MapSpec& f, const MapSpec& h, double r0, double t) {
  if (!(r0 > 0.0 && r0 < 1.0)) throw Error(ErrorKind::invalid_input, "loop radius must lie in (0, 1)");
  cplx z = std::polar(r0, 2.0 * kPi * t);
  return hyp::b_to(h.at(z)) * hyp::b_to(f.at(z)).inverse();
}

HolonomyReport meridian_holonomy(const MapSpec& f, const MapSpec& h, double r0, const MeridianOptions& opts) {
  if (opts.samples < 1024) throw Error(ErrorKind::invalid_input, "meridian holonomy needs at least 1024 samples");
  HolonomyReport rep;
  if (opts.check_domination) {
    double inner = 0.8 * r0;
    double outer = std::min(1.2 * r0, 0.5 * (1.0 + r0));
    auto v = verify_domination(f, h, inner, outer);
    if (!v.ok()) {
      std::ostringstream msg;
      msg << "(f, h) is not a strictly dominated pair near |z| = " << r0;
      if (v.witness) msg << " (fails at " << *v.witness << ")";
      throw Error(ErrorKind::hypothesis_violation, msg.str(), "domination");
    }
    rep.domination_ok = true;
  }

  int n = opts.samples;
  while (true) {
    std::vector<cplx> forward(n + 1);
    std::vector<cplx> backward(n + 1);
    for (int k = 0; k <= n; ++k) {
      Mobius a = frame(f, h, r0, static_cast<double>(k) / n);
      forward[k] = hyp::apply(a, HPoint::origin()).z();
      backward[k] = hyp::apply(a.inverse(), HPoint::origin()).z();
    }
    Winding wt = winding(forward, "Val");
    Winding we = winding(backward, "Val-bar");
    if ((wt.fine && we.fine) || 2.0 * n > kMaxSamples) {
      rep.theta0 = wt.total;
      rep.eta0 = we.total;
      rep.samples = n;
      break;
    }
    n *= 2;
  }
  rep.n_est = std::lround(rep.theta0 / (2.0 * kPi));
  rep.k_est = std::lround(rep.eta0 / (2.0 * kPi));
  rep.theta_residual = std::abs(rep.theta0 - 2.0 * kPi * rep.n_est);
  rep.eta_residual = std::abs(rep.eta0 - 2.0 * kPi * rep.k_est);
  return rep;
}

Mobius fiber_point(const HPoint& hx, const HPoint& fx, double t, Orientation orientation) {
  // rot(-2t) runs the fiber in the direction of increasing eta.
  double sign = orientation == Orientation::future ? -1.0 : 1.0;
  return ads::timelike_geodesic(hx, fx, sign * t);
}

FiberHolonomy fiber_holonomy(const MapSpec& f, const MapSpec& h, const HPoint& x, int samples,
                             Orientation orientation) {
  HPoint fx = f.at(x.z());
  HPoint hx = h.at(x.z());
  double df = hyp::dist(HPoint::origin(), fx);
  double dh = hyp::dist(HPoint::origin(), hx);
  if (!(df < dh)) {
    std::ostringstream msg;
    msg << "dist(0, f(x)) = " << df << " is not below dist(0, h(x)) = " << dh;
    throw Error(ErrorKind::contraction_violated, msg.str());
  }
  if (samples < 3) throw Error(ErrorKind::invalid_input, "fiber holonomy needs at least 3 samples");
  int n = samples;
  while (true) {
    std::vector<Mobius> curve(n + 1);
    for (int k = 0; k <= n; ++k) curve[k] = fiber_point(hx, fx, kPi * k / n, orientation);
    try {
      auto lift = ads::lift_curve(curve, ads::invert_chart(curve.front()));
      return {lift.back().theta - lift.front().theta, lift.back().eta - lift.front().eta, n};
    } catch (const Error& e) {
      if (e.kind() != ErrorKind::undersampled_path || 2.0 * n > kMaxSamples) throw;
      n *= 2;
    }
  }
}

Mobius solid_torus_param(const MapSpec& f, const MapSpec& h, const HPoint& y, double theta) {
  return hyp::b_to(h.at(y.z())) * hyp::rot(theta) * hyp::b_to(f.at(y.z())).inverse();
}

bool fiber_disjointness(const MapSpec& f, const MapSpec& h, const HPoint& x, const HPoint& y) {
  if (x.z() == y.z()) throw Error(ErrorKind::invalid_input, "fiber disjointness needs x != y");
  double df = hyp::dist(f.at(x.z()), f.at(y.z()));
  double dh = hyp::dist(h.at(x.z()), h.at(y.z()));
  return std::abs(df - dh) > 1e-10;
}

}  // namespace domlab::holonomy
