#pragma once

// Sampled-map analysis on planar grids: holomorphic / anti-holomorphic
// energies, the Hopf differential, pullback metrics, and pointwise domination
// tests between two maps.
//
// The target is the disc model with sigma(w) = 4 / (1 - |w|^2)^2.

#include "domlab/grid.hpp"

#include <cstdint>
#include <functional>
#include <iosfwd>
#include <optional>
#include <vector>

namespace domlab::field {

/// Hyperbolic metric density of the disc model.
double sigma(cplx w);

class ConformalMetric {
 public:
  enum class Kind { flat, hyperbolic_disc };

  static ConformalMetric flat() { return ConformalMetric(Kind::flat); }
  static ConformalMetric hyperbolic_disc() { return ConformalMetric(Kind::hyperbolic_disc); }

  Kind kind() const { return kind_; }
  /// nu(z); throws invalid_point for the hyperbolic metric outside the disc.
  double factor(cplx z) const;
  double curvature() const { return kind_ == Kind::flat ? 0.0 : -1.0; }
  /// Factor at every active node (NaN at excluded nodes).
  std::vector<double> sample(const Grid& grid) const;

 private:
  explicit ConformalMetric(Kind kind) : kind_(kind) {}
  Kind kind_;
};

/// A map into the disc sampled on the active nodes of a grid.
struct MapField {
  Grid grid;
  std::vector<cplx> values;

  /// Samples fn at every active node; throws invalid_point if a value leaves
  /// the open disc.
  static MapField sample(const Grid& grid, const std::function<cplx(cplx)>& fn);
};

struct EnergyFields {
  Grid grid;
  std::vector<double> H, L, e, J;
  std::vector<cplx> hopf;  // coefficient of dz^2
};

/// Energies by second-order finite differences (centered, one-sided where a
/// neighbour is excluded). Throws grid_too_small if some active node lacks
/// two active neighbours on either side along an axis.
EnergyFields energies(const MapField& f, const ConformalMetric& nu);

/// sup |d hopf / d zbar| over nodes with a full centered stencil.
double hopf_holomorphy_residual(const EnergyFields& e);

/// Symmetric 2x2 form g11 dx^2 + 2 g12 dx dy + g22 dy^2.
struct Sym2 {
  double g11 = 0.0;
  double g12 = 0.0;
  double g22 = 0.0;

  double det() const { return g11 * g22 - g12 * g12; }
  double min_eigenvalue() const;
  double max_abs() const;
};

struct MetricField {
  Grid grid;
  std::vector<Sym2> g;
};

/// f*sigma = e nu |dz|^2 + phi dz^2 + conj(phi) dzbar^2 at each active node.
MetricField pullback_metric(const EnergyFields& e, const ConformalMetric& nu);

/// Same construction from H, L and the Hopf field directly. Throws
/// inconsistent_data if |hopf|^2 differs from H L nu^2 by more than 1e-6
/// relative.
MetricField metric_from_energy(const Grid& grid, const std::vector<double>& H, const std::vector<double>& L,
                               const std::vector<cplx>& hopf, const ConformalMetric& nu);

enum RegionBits : std::uint8_t { in_Uf = 1, in_Vf = 2, in_Uh = 4, in_Vh = 8 };

/// Per-node outcome of testing f*sigma <= h*sigma.
struct DominationReport {
  std::vector<std::uint8_t> dominates;  // f*sigma <= h*sigma at the node
  std::vector<std::uint8_t> strict;     // f*sigma <  h*sigma at the node
  std::vector<std::uint8_t> regions;    // RegionBits; region test only
  bool dominates_everywhere = true;
  /// dominates everywhere and strict wherever h is nonsingular.
  bool strict_where_nonsingular = true;
  std::size_t failures = 0;
  std::optional<std::size_t> first_failure;
};

/// Four-region test: same-Hopf pairs only. Throws hypothesis_violation when
/// the Hopf fields differ by more than 1e-8 in sup norm.
DominationReport region_domination(const EnergyFields& ef, const EnergyFields& eh);

/// Smallest eigenvalue of (Gh - Gf) at each node.
DominationReport direct_domination(const MetricField& gf, const MetricField& gh);

/// (1 / 2 pi) sum J nu h^2 over the nodes where `region` is nonzero (all
/// active nodes when empty).
double jacobian_area(const EnergyFields& e, const ConformalMetric& nu,
                     const std::vector<std::uint8_t>& region = {});

/// CSV dump with header x,y,H,L,e,J,re_phi,im_phi; active nodes, row-major.
void write_csv(std::ostream& out, const EnergyFields& e);

}  // namespace domlab::field
