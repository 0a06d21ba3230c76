#pragma once

// Hyperbolic-plane kernel in the Poincare disc model.
//
// Isometries are stored as real SL(2,R) matrices acting on the upper half
// plane; the disc coordinate w and the half-plane coordinate z are related by
// w = (z - i) / (z + i), so that i corresponds to the origin.

#include <array>
#include <complex>
#include <span>
#include <vector>

namespace domlab::hyp {

using cplx = std::complex<double>;

/// A point of the hyperbolic plane in disc coordinates.
class HPoint {
 public:
  HPoint() = default;
  /// Throws invalid_point unless |z| < 1.
  explicit HPoint(cplx z);

  static HPoint origin() { return HPoint(); }
  static HPoint from_half_plane(cplx z);
  cplx to_half_plane() const;

  cplx z() const { return z_; }
  double abs() const { return std::abs(z_); }
  double arg() const { return std::arg(z_); }

 private:
  cplx z_{0.0, 0.0};
};

/// Orientation-preserving isometry: an element of PSL(2,R). The stored matrix
/// has unit determinant and its first entry (row-major) that is not
/// negligibly small is positive.
class Mobius {
 public:
  Mobius() = default;
  Mobius(double a, double b, double c, double d);

  static Mobius identity() { return Mobius(); }

  double a() const { return m_[0]; }
  double b() const { return m_[1]; }
  double c() const { return m_[2]; }
  double d() const { return m_[3]; }
  const std::array<double, 4>& entries() const { return m_; }
  double det() const { return m_[0] * m_[3] - m_[1] * m_[2]; }

  Mobius inverse() const;
  Mobius operator*(const Mobius& rhs) const;

  /// Equality in PSL(2,R): compares against both sign representatives.
  bool approx_equal(const Mobius& other, double tol = 1e-10) const;
  /// max-norm distance in PSL(2,R) (minimum over the two lifts).
  double distance(const Mobius& other) const;

 private:
  std::array<double, 4> m_{1.0, 0.0, 0.0, 1.0};
};

/// Hyperbolic distance (curvature -1).
double dist(const HPoint& p, const HPoint& q);

HPoint apply(const Mobius& m, const HPoint& p);

/// Rotation by angle theta about the origin (about i in the half plane).
Mobius rot(double theta);
/// Translation of length r along the geodesic through 0 and 1 (the imaginary
/// axis of the half plane), moving 0 towards +1.
Mobius trans(double r);
/// The hyperbolic isometry sending 0 to p whose axis passes through 0 and p.
Mobius b_to(const HPoint& p);

/// Integral of the angular form along a sampled path in the punctured disc,
/// computed by summing argument increments. Throws singular_path if a sample
/// sits at the origin and undersampled_path if two consecutive samples
/// subtend an angle of pi or more.
double angular_integral(std::span<const HPoint> path);
double angular_integral(std::span<const cplx> path);

}  // namespace domlab::hyp
