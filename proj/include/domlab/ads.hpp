#pragma once

// Anti-de Sitter space as PSL(2,R) with the bi-invariant metric induced by
// -det on sl(2,R).

#include "domlab/hyp.hpp"

#include <array>
#include <span>
#include <vector>

namespace domlab::ads {

using hyp::HPoint;
using hyp::Mobius;
using AdSPoint = Mobius;

/// Traceless real 2x2 matrix, row-major.
class SL2Vector {
 public:
  SL2Vector() = default;
  /// Throws invalid_data unless |a + d| <= 1e-12 (relative to the entries).
  SL2Vector(double a, double b, double c, double d);
  /// Drops the trace part of an arbitrary 2x2 matrix.
  static SL2Vector traceless_part(const std::array<double, 4>& m);

  const std::array<double, 4>& entries() const { return v_; }
  double det() const { return v_[0] * v_[3] - v_[1] * v_[2]; }
  SL2Vector operator+(const SL2Vector& o) const;

 private:
  std::array<double, 4> v_{0.0, 0.0, 0.0, 0.0};
};

/// Polarization of q(X) = -det X.
double killing(const SL2Vector& x, const SL2Vector& y);
inline double quadratic(const SL2Vector& x) { return killing(x, x); }

/// (A, B) acting by X -> A X B^{-1}.
struct IsomPair {
  Mobius A;
  Mobius B;
};

AdSPoint isom_apply(const IsomPair& g, const AdSPoint& x);

/// Point of the timelike geodesic l_{p,q} = {A : A q = p} at unit-speed time t.
AdSPoint timelike_geodesic(const HPoint& p, const HPoint& q, double t);

/// Left-translated velocities c^{-1} c' of a sampled curve with uniform step dt
/// (central differences, one-sided second order at the ends). Consecutive
/// samples are sign-aligned before differencing.
std::vector<SL2Vector> velocities(std::span<const AdSPoint> curve, double dt);

/// Trapezoidal integral of sqrt(-q(c^{-1} c')) over the samples. Spacelike
/// stretches contribute zero.
double lorentzian_length(std::span<const AdSPoint> curve, double dt);

struct ChartCoords {
  double r = 1.0;
  double theta = 0.0;
  double eta = 0.0;
};

/// rot(theta) trans(r) rot(-eta); throws out_of_range for r <= 0.
AdSPoint chart(const ChartCoords& c);

/// A(0) and A^{-1}(0) in the disc.
HPoint val(const AdSPoint& a);
HPoint val_bar(const AdSPoint& a);

/// Chart coordinates with theta, eta in (-pi, pi]; throws singular_lift on
/// the singular fiber where A(0) = 0.
ChartCoords invert_chart(const AdSPoint& a);

/// Lifts a sampled curve through the chart by integrating the angular form
/// along the Val and Val-bar paths.
std::vector<ChartCoords> lift_curve(std::span<const AdSPoint> curve, const ChartCoords& start);

/// Lattice generated by (0, 0, 2 pi) and (0, theta0, eta0).
struct SpinConeModel {
  double theta0 = 2.0 * 3.14159265358979323846;
  double eta0 = 0.0;

  /// Throws invalid_data unless 0 <= eta0 < 2 pi.
  SpinConeModel(double theta0, double eta0);
};

/// Canonical representative: theta in [0, theta0), then eta in [0, 2 pi).
/// Throws degenerate_lattice unless theta0 > 0.
ChartCoords lattice_reduce(const SpinConeModel& model, const ChartCoords& c);

/// Image of the source point chart(r, theta, eta) under T_n: chart(r, n theta, eta).
AdSPoint covering_Tn(int n, const ChartCoords& c);

/// Distinct source points mapped onto `target` by T_n, found by enumerating
/// theta branches.
std::vector<AdSPoint> covering_preimages(int n, const AdSPoint& target, double tol = 1e-9);

}  // namespace domlab::ads
