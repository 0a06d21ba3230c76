#pragma once

// The branched fibration built from a dominated pair (f, h) on a punctured
// disc: frames A_t, meridian and fiber holonomies, the solid-torus
// parametrization and fiber disjointness.

#include "domlab/ads.hpp"
#include "domlab/field.hpp"

#include <functional>
#include <optional>
#include <string>

namespace domlab::holonomy {

using hyp::cplx;
using hyp::HPoint;
using hyp::Mobius;

class MapSpec {
 public:
  enum class Kind { constant, power, custom };

  /// z -> c (default: the origin).
  static MapSpec constant(cplx c = {0.0, 0.0});
  /// z -> lambda z^m with |lambda| <= 1, m >= 1.
  static MapSpec power(int m, cplx lambda = {1.0, 0.0});
  static MapSpec custom(std::function<cplx(cplx)> fn, std::string name = "custom");

  Kind kind() const { return kind_; }
  const std::string& name() const { return name_; }
  cplx operator()(cplx z) const;
  HPoint at(cplx z) const { return HPoint((*this)(z)); }
  /// m for z -> z^m; throws not_applicable for any other map.
  int branch_degree() const;

 private:
  Kind kind_ = Kind::constant;
  cplx c_{0.0, 0.0};
  int m_ = 1;
  std::function<cplx(cplx)> fn_;
  std::string name_;
};

struct DominationVerdict {
  bool dominates = false;     // pullbacks ordered and strict at every node
  bool radial_ok = false;     // dist(0, f) < dist(0, h) at every node
  bool ok() const { return dominates && radial_ok; }
  std::optional<cplx> witness;  // first failing node
  std::size_t nodes = 0;
};

/// Samples both maps on Grid::annulus(0, inner, outer, resolution). Throws
/// invalid_input unless 0 < inner < outer < 1 and grid_too_small when the
/// annulus is narrower than four grid spacings.
DominationVerdict verify_domination(const MapSpec& f, const MapSpec& h, double inner, double outer,
                                    int resolution = 129);

/// A_t = b_to(h(gamma(t))) b_to(f(gamma(t)))^{-1} with gamma(t) = r0 e^{2 pi i t}.
Mobius frame(const MapSpec& f, const MapSpec& h, double r0, double t);

struct HolonomyReport {
  double theta0 = 0.0;
  double eta0 = 0.0;
  long n_est = 0;
  long k_est = 0;
  double theta_residual = 0.0;
  double eta_residual = 0.0;
  int samples = 0;
  bool domination_ok = false;
};

struct MeridianOptions {
  int samples = 4096;
  /// Run verify_domination on an annulus around r0 first and throw
  /// hypothesis_violation (clause "domination") when it fails.
  bool check_domination = true;
};

HolonomyReport meridian_holonomy(const MapSpec& f, const MapSpec& h, double r0, const MeridianOptions& opts = {});

enum class Orientation { future, past };

struct FiberHolonomy {
  double d_theta = 0.0;
  double d_eta = 0.0;
  int samples = 0;
};

/// Lifts the fiber l_{h(x), f(x)} over one period. Future orientation is the
/// direction along which eta increases. Throws contraction_violated unless
/// dist(0, f(x)) < dist(0, h(x)).
FiberHolonomy fiber_holonomy(const MapSpec& f, const MapSpec& h, const HPoint& x, int samples = 4096,
                             Orientation orientation = Orientation::future);

/// The fiber l_{h(x), f(x)} at parameter t in [0, pi], oriented as above.
Mobius fiber_point(const HPoint& hx, const HPoint& fx, double t, Orientation orientation = Orientation::future);

/// b_to(h(y)) rot(theta) b_to(f(y))^{-1}.
Mobius solid_torus_param(const MapSpec& f, const MapSpec& h, const HPoint& y, double theta);

/// True when the fibers over x and y do not meet. Throws invalid_input if x == y.
bool fiber_disjointness(const MapSpec& f, const MapSpec& h, const HPoint& x, const HPoint& y);

}  // namespace domlab::holonomy
