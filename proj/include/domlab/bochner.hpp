#pragma once

// Singular Bochner equation  (1/2) nu^{-1} Lap u = e^u - |phi|^2 nu^{-2} e^{-u} + kappa
// on planar Dirichlet domains, with u = s + S and S = sum 2 m_p log|z - p|.
// The solver works with the smooth part s.

#include "domlab/field.hpp"
#include "domlab/grid.hpp"

#include <cstdint>
#include <functional>
#include <iosfwd>
#include <optional>
#include <vector>

namespace domlab::bochner {

struct Root {
  cplx z;
  int m = 1;
};

/// phi(z) = leading * prod (z - root)^m.  leading == 0 means phi == 0.
struct PolyQD {
  cplx leading{0.0, 0.0};
  std::vector<Root> roots;

  static PolyQD zero() { return {}; }
  bool is_zero() const { return leading == cplx(0.0, 0.0); }
  cplx operator()(cplx z) const;
  /// Order of vanishing at z (0 if z is not a root).
  int order_at(cplx z, double tol = 1e-12) const;
};

struct DivisorPoint {
  cplx z;
  int m = 1;
};

/// Dirichlet data for u.  Function and constant traces are evaluated at the
/// exact points where grid lines cross a circular boundary; per-node values
/// apply at the boundary node itself and at any crossing next to it.
class BoundaryTrace {
 public:
  static BoundaryTrace zero() { return constant(0.0); }
  static BoundaryTrace constant(double c);
  static BoundaryTrace function(std::function<double(cplx)> g);
  /// One value per boundary node, in row-major node order.
  static BoundaryTrace values(std::vector<double> v);

  bool per_node() const { return !fn_; }
  double at(cplx z) const;
  const std::vector<double>& node_values() const { return values_; }

 private:
  std::function<double(cplx)> fn_;
  std::vector<double> values_;
};

struct BochnerProblem {
  Grid grid;
  field::ConformalMetric nu = field::ConformalMetric::flat();
  PolyQD phi;
  std::vector<DivisorPoint> divisor;
  BoundaryTrace boundary = BoundaryTrace::zero();
};

struct SolveOptions {
  double tol = 1e-9;
  int max_iter = 60;
  /// Starting values of s on every grid node (boundary entries ignored).
  std::optional<std::vector<double>> initial_s;
  /// Return the last iterate instead of throwing when not converged.
  bool allow_unconverged = false;
};

struct BochnerSolution {
  explicit BochnerSolution(BochnerProblem p) : problem(std::move(p)) {}

  BochnerProblem problem;
  std::vector<double> s;         // every node; NaN at excluded nodes
  std::vector<double> S;         // -inf at divisor nodes
  std::vector<double> u;         // s + S
  std::vector<double> residual;  // Bochner units; NaN off the interior
  std::vector<std::uint8_t> divisor_node;
  /// u prescribed at each Dirichlet point seen by the stencil.
  std::vector<double> dirichlet_u;
  int iterations = 0;
  double residual_sup = 0.0;  // over interior nodes off the divisor
  bool converged = false;
};

/// Smooth-part coefficients at z: E = prod |z-p|^{2m}, W = |phi|^2 nu^{-2} e^{-S}
/// with the divisor factors cancelled root by root.
struct Coefficients {
  double E;
  double W;
};
Coefficients coefficients(const BochnerProblem& problem, cplx z);

/// Throws invalid_problem when the data break the problem invariants.
void validate(const BochnerProblem& problem);

BochnerSolution solve(const BochnerProblem& problem, const SolveOptions& options = {});

struct ComparisonReport {
  double min_diff = 0.0;  // min of u2 - u1 over finite nodes off supp D2
  double max_diff = 0.0;
  bool strict = false;
  std::size_t checked = 0;
  std::optional<std::size_t> worst_node;
};

/// sol1 carries D1, sol2 carries D2 with D2 < D1.  Violated hypotheses raise
/// hypothesis_violation with clause same_grid, same_metric, same_phi,
/// D2_less_D1 or same_boundary.
ComparisonReport compare(const BochnerSolution& sol1, const BochnerSolution& sol2);

/// H = e^u, L = W e^{-s}, hopf = phi on interior nodes.  The returned grid
/// marks every non-interior node excluded.
field::EnergyFields jacobian_fields(const BochnerSolution& sol);

struct ExperimentReport {
  BochnerSolution f;  // data D1
  BochnerSolution h;  // data D2
  field::DominationReport fh;  // f*sigma <= h*sigma
  field::DominationReport hf;  // h*sigma <= f*sigma
  bool dominates_fh = false;
  bool dominates_hf = false;
  bool strict_fh = false;
};

ExperimentReport domination_experiment(const Grid& grid, const field::ConformalMetric& nu, const PolyQD& phi,
                                       const std::vector<DivisorPoint>& d1, const std::vector<DivisorPoint>& d2,
                                       const BoundaryTrace& boundary, const SolveOptions& options = {});

/// Sup of both coupled Toda residuals off the zero sets.  Throws
/// not_applicable when phi == 0.
double toda_residual(const BochnerSolution& sol);

/// CSV with header x,y,s,u,H,L,J,residual over interior nodes.
void write_csv(std::ostream& out, const BochnerSolution& sol);

}  // namespace domlab::bochner
