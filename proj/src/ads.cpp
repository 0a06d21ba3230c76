#include "domlab/ads.hpp"

#include "domlab/error.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

namespace domlab::ads {

namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;

using Mat = std::array<double, 4>;

Mat aligned(const Mat& m, const Mat& ref) {
  double dot = 0.0;
  for (int i = 0; i < 4; ++i) dot += m[i] * ref[i];
  if (dot >= 0.0) return m;
  return {-m[0], -m[1], -m[2], -m[3]};
}

Mat mul(const Mat& x, const Mat& y) {
  return {x[0] * y[0] + x[1] * y[2], x[0] * y[1] + x[1] * y[3], x[2] * y[0] + x[3] * y[2],
          x[2] * y[1] + x[3] * y[3]};
}

Mat inverse_unimodular(const Mat& m) { return {m[3], -m[1], -m[2], m[0]}; }

double wrap_step(const HPoint& a, const HPoint& b) {
  const HPoint pair[2] = {a, b};
  return hyp::angular_integral(std::span<const HPoint>(pair, 2));
}

}  // namespace

SL2Vector::SL2Vector(double a, double b, double c, double d) : v_{a, b, c, d} {
  double scale = std::max({1.0, std::abs(a), std::abs(b), std::abs(c), std::abs(d)});
  if (std::abs(a + d) > 1e-12 * scale) throw Error(ErrorKind::invalid_data, "sl(2,R) vectors must be traceless");
}

SL2Vector SL2Vector::traceless_part(const std::array<double, 4>& m) {
  double half = 0.5 * (m[0] + m[3]);
  return SL2Vector(m[0] - half, m[1], m[2], m[3] - half);
}

SL2Vector SL2Vector::operator+(const SL2Vector& o) const {
  return SL2Vector(v_[0] + o.v_[0], v_[1] + o.v_[1], v_[2] + o.v_[2], v_[3] + o.v_[3]);
}

double killing(const SL2Vector& x, const SL2Vector& y) { return 0.5 * (x.det() + y.det() - (x + y).det()); }

AdSPoint isom_apply(const IsomPair& g, const AdSPoint& x) { return g.A * x * g.B.inverse(); }

AdSPoint timelike_geodesic(const HPoint& p, const HPoint& q, double t) {
  return hyp::b_to(p) * hyp::rot(2.0 * t) * hyp::b_to(q).inverse();
}

std::vector<SL2Vector> velocities(std::span<const AdSPoint> curve, double dt) {
  if (curve.size() < 3) throw Error(ErrorKind::undersampled_path, "velocities need at least 3 samples");
  if (!(dt > 0.0)) throw Error(ErrorKind::invalid_input, "sample step must be positive");
  std::vector<SL2Vector> out;
  out.reserve(curve.size());
  const std::size_t n = curve.size();
  for (std::size_t k = 0; k < n; ++k) {
    const Mat& ck = curve[k].entries();
    Mat d{};
    if (k == 0 || k + 1 == n) {
      int s = k == 0 ? 1 : -1;
      Mat c1 = aligned(curve[k + s].entries(), ck);
      Mat c2 = aligned(curve[k + 2 * s].entries(), ck);
      for (int i = 0; i < 4; ++i) d[i] = s * (-3.0 * ck[i] + 4.0 * c1[i] - c2[i]) / (2.0 * dt);
    } else {
      Mat next = aligned(curve[k + 1].entries(), ck);
      Mat prev = aligned(curve[k - 1].entries(), ck);
      for (int i = 0; i < 4; ++i) d[i] = (next[i] - prev[i]) / (2.0 * dt);
    }
    out.push_back(SL2Vector::traceless_part(mul(inverse_unimodular(ck), d)));
  }
  return out;
}

double lorentzian_length(std::span<const AdSPoint> curve, double dt) {
  auto vel = velocities(curve, dt);
  double total = 0.0;
  for (std::size_t k = 0; k + 1 < vel.size(); ++k) {
    double a = std::sqrt(std::max(0.0, -quadratic(vel[k])));
    double b = std::sqrt(std::max(0.0, -quadratic(vel[k + 1])));
    total += 0.5 * (a + b) * dt;
  }
  return total;
}

AdSPoint chart(const ChartCoords& c) {
  if (!(c.r > 0.0)) throw Error(ErrorKind::out_of_range, "chart radius must be positive");
  return hyp::rot(c.theta) * hyp::trans(c.r) * hyp::rot(-c.eta);
}

HPoint val(const AdSPoint& a) { return hyp::apply(a, HPoint::origin()); }
HPoint val_bar(const AdSPoint& a) { return hyp::apply(a.inverse(), HPoint::origin()); }

ChartCoords invert_chart(const AdSPoint& a) {
  HPoint v = val(a);
  HPoint vb = val_bar(a);
  if (v.abs() < 1e-14) throw Error(ErrorKind::singular_lift, "point lies on the singular fiber l_{i,i}");
  return ChartCoords{hyp::dist(HPoint::origin(), v), v.arg(), std::arg(-vb.z())};
}

std::vector<ChartCoords> lift_curve(std::span<const AdSPoint> curve, const ChartCoords& start) {
  if (curve.empty()) return {};
  if (chart(start).distance(curve[0]) > 1e-8) {
    throw Error(ErrorKind::start_mismatch, "start coordinates do not chart the first sample");
  }
  std::vector<ChartCoords> out;
  out.reserve(curve.size());
  std::vector<HPoint> v(curve.size());
  std::vector<HPoint> vb(curve.size());
  for (std::size_t k = 0; k < curve.size(); ++k) {
    v[k] = val(curve[k]);
    vb[k] = val_bar(curve[k]);
    if (v[k].abs() < 1e-14) {
      throw Error(ErrorKind::singular_lift, "sample " + std::to_string(k) + " lies on the singular fiber");
    }
  }
  ChartCoords cur = start;
  out.push_back(cur);
  for (std::size_t k = 1; k < curve.size(); ++k) {
    cur.theta += wrap_step(v[k - 1], v[k]);
    cur.eta += wrap_step(vb[k - 1], vb[k]);
    cur.r = hyp::dist(HPoint::origin(), v[k]);
    out.push_back(cur);
  }
  return out;
}

SpinConeModel::SpinConeModel(double t0, double e0) : theta0(t0), eta0(e0) {
  if (!(e0 >= 0.0 && e0 < kTwoPi)) throw Error(ErrorKind::invalid_data, "eta0 must lie in [0, 2 pi)");
}

ChartCoords lattice_reduce(const SpinConeModel& model, const ChartCoords& c) {
  if (!(model.theta0 > 0.0)) {
    throw Error(ErrorKind::degenerate_lattice, "lattice reduction needs theta0 > 0");
  }
  double k2 = std::floor(c.theta / model.theta0);
  ChartCoords out{c.r, c.theta - k2 * model.theta0, c.eta - k2 * model.eta0};
  // Guard against rounding at the cell edges.
  if (out.theta >= model.theta0) {
    out.theta -= model.theta0;
    out.eta -= model.eta0;
  } else if (out.theta < 0.0) {
    out.theta += model.theta0;
    out.eta += model.eta0;
  }
  out.eta -= kTwoPi * std::floor(out.eta / kTwoPi);
  if (out.eta >= kTwoPi) out.eta -= kTwoPi;
  if (out.eta < 0.0) out.eta = 0.0;
  return out;
}

AdSPoint covering_Tn(int n, const ChartCoords& c) {
  if (n < 1) throw Error(ErrorKind::out_of_range, "covering degree must be at least 1");
  return chart(ChartCoords{c.r, n * c.theta, c.eta});
}

std::vector<AdSPoint> covering_preimages(int n, const AdSPoint& target, double tol) {
  if (n < 1) throw Error(ErrorKind::out_of_range, "covering degree must be at least 1");
  ChartCoords c = invert_chart(target);
  std::vector<AdSPoint> found;
  // Two full sweeps of branches; repeats collapse in PSL(2,R).
  for (int k = 0; k < 2 * n; ++k) {
    ChartCoords src{c.r, (c.theta + kTwoPi * k) / n, c.eta};
    if (!covering_Tn(n, src).approx_equal(target, tol)) continue;
    AdSPoint p = chart(src);
    bool seen = std::any_of(found.begin(), found.end(), [&](const AdSPoint& q) { return q.approx_equal(p, tol); });
    if (!seen) found.push_back(p);
  }
  return found;
}

}  // namespace domlab::ads
