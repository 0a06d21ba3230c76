#pragma once

#include <complex>
#include <cstdint>
#include <optional>
#include <vector>

namespace domlab {

using cplx = std::complex<double>;

enum class NodeKind : std::uint8_t { interior, boundary, excluded };

/// Circle bounding a disc-shaped domain; interior nodes adjacent to the
/// outside see the boundary at the true crossing point on this circle.
struct Circle {
  cplx center{0.0, 0.0};
  double radius = 1.0;
};

/// Uniform planar grid, row-major (x fastest), node (i, j) at
/// origin + spacing * (i + i*j).
class Grid {
 public:
  /// Rectangle whose outer ring of nodes is boundary, the rest interior.
  static Grid rectangle(cplx origin, double spacing, int nx, int ny);
  /// n x n nodes spanning the square circumscribing the disc. Nodes strictly
  /// inside the circle are interior, outside nodes with an interior
  /// 4-neighbour are boundary, the rest excluded.
  static Grid disc(Circle circle, int n);
  /// n x n nodes spanning [-outer, outer]^2 around `center`; nodes with
  /// inner <= |z - center| <= outer are interior, the rest excluded. Nodes
  /// without a second-order difference stencil along both axes are dropped.
  static Grid annulus(cplx center, double inner, double outer, int n);

  cplx origin() const { return origin_; }
  double spacing() const { return spacing_; }
  int nx() const { return nx_; }
  int ny() const { return ny_; }
  std::size_t size() const { return mask_.size(); }

  std::size_t index(int i, int j) const { return static_cast<std::size_t>(j) * nx_ + i; }
  int col(std::size_t idx) const { return static_cast<int>(idx % nx_); }
  int row(std::size_t idx) const { return static_cast<int>(idx / nx_); }
  cplx node(int i, int j) const { return origin_ + spacing_ * cplx(i, j); }
  cplx node(std::size_t idx) const { return node(col(idx), row(idx)); }
  bool in_range(int i, int j) const { return i >= 0 && j >= 0 && i < nx_ && j < ny_; }

  NodeKind kind(std::size_t idx) const { return mask_[idx]; }
  NodeKind kind(int i, int j) const { return mask_[index(i, j)]; }
  /// Interior or boundary.
  bool active(std::size_t idx) const { return mask_[idx] != NodeKind::excluded; }
  bool active(int i, int j) const { return in_range(i, j) && active(index(i, j)); }
  void set_kind(std::size_t idx, NodeKind k) { mask_[idx] = k; }

  const std::optional<Circle>& circle() const { return circle_; }

  /// Nearest node to z; nullopt when z is farther than tol * spacing from it.
  std::optional<std::size_t> locate(cplx z, double tol = 1e-9) const;

  /// Same geometry and mask.
  bool same_as(const Grid& other) const;

 private:
  Grid(cplx origin, double spacing, int nx, int ny);

  cplx origin_;
  double spacing_;
  int nx_;
  int ny_;
  std::vector<NodeKind> mask_;
  std::optional<Circle> circle_;
};

}  // namespace domlab
