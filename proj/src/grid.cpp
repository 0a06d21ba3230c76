#include "domlab/grid.hpp"

#include "domlab/error.hpp"

#include <cmath>

namespace domlab {

Grid::Grid(cplx origin, double spacing, int nx, int ny)
    : origin_(origin), spacing_(spacing), nx_(nx), ny_(ny) {
  if (!(spacing > 0.0)) throw Error(ErrorKind::invalid_input, "grid spacing must be positive");
  if (nx < 3 || ny < 3) throw Error(ErrorKind::grid_too_small, "grid needs at least 3 nodes per axis");
  mask_.assign(static_cast<std::size_t>(nx) * ny, NodeKind::interior);
}

Grid Grid::rectangle(cplx origin, double spacing, int nx, int ny) {
  Grid g(origin, spacing, nx, ny);
  for (int j = 0; j < ny; ++j) {
    for (int i = 0; i < nx; ++i) {
      if (i == 0 || j == 0 || i == nx - 1 || j == ny - 1) g.mask_[g.index(i, j)] = NodeKind::boundary;
    }
  }
  return g;
}

Grid Grid::disc(Circle circle, int n) {
  if (!(circle.radius > 0.0)) throw Error(ErrorKind::invalid_input, "disc radius must be positive");
  if (n < 5) throw Error(ErrorKind::grid_too_small, "disc grid needs at least 5 nodes per axis");
  double h = 2.0 * circle.radius / (n - 1);
  Grid g(circle.center - cplx(circle.radius, circle.radius), h, n, n);
  g.circle_ = circle;
  // Nodes within a hair of the circle count as outside so that crossing
  // fractions stay bounded away from zero.
  double inner = circle.radius - 1e-9 * h;
  for (std::size_t k = 0; k < g.size(); ++k) {
    g.mask_[k] = std::abs(g.node(k) - circle.center) < inner ? NodeKind::interior : NodeKind::excluded;
  }
  for (int j = 0; j < n; ++j) {
    for (int i = 0; i < n; ++i) {
      std::size_t k = g.index(i, j);
      if (g.mask_[k] == NodeKind::interior) continue;
      const int di[4] = {1, -1, 0, 0};
      const int dj[4] = {0, 0, 1, -1};
      for (int d = 0; d < 4; ++d) {
        int a = i + di[d];
        int b = j + dj[d];
        if (g.in_range(a, b) && g.mask_[g.index(a, b)] == NodeKind::interior) {
          g.mask_[k] = NodeKind::boundary;
          break;
        }
      }
    }
  }
  return g;
}

Grid Grid::annulus(cplx center, double inner, double outer, int n) {
  if (!(0.0 <= inner && inner < outer)) throw Error(ErrorKind::invalid_input, "annulus radii must satisfy 0 <= inner < outer");
  double h = 2.0 * outer / (n - 1);
  Grid g(center - cplx(outer, outer), h, n, n);
  for (std::size_t k = 0; k < g.size(); ++k) {
    double r = std::abs(g.node(k) - center);
    g.mask_[k] = (r >= inner && r <= outer) ? NodeKind::interior : NodeKind::excluded;
  }
  // Prune tips that lack a second-order difference stencil along some axis.
  auto has_stencil = [&](int i, int j, int di, int dj) {
    return (g.active(i - di, j - dj) && g.active(i + di, j + dj)) ||
           (g.active(i + di, j + dj) && g.active(i + 2 * di, j + 2 * dj)) ||
           (g.active(i - di, j - dj) && g.active(i - 2 * di, j - 2 * dj));
  };
  for (bool changed = true; changed;) {
    changed = false;
    for (std::size_t k = 0; k < g.size(); ++k) {
      if (!g.active(k)) continue;
      int i = g.col(k);
      int j = g.row(k);
      if (!has_stencil(i, j, 1, 0) || !has_stencil(i, j, 0, 1)) {
        g.mask_[k] = NodeKind::excluded;
        changed = true;
      }
    }
  }
  return g;
}

std::optional<std::size_t> Grid::locate(cplx z, double tol) const {
  cplx rel = (z - origin_) / spacing_;
  int i = static_cast<int>(std::lround(rel.real()));
  int j = static_cast<int>(std::lround(rel.imag()));
  if (!in_range(i, j)) return std::nullopt;
  if (std::abs(node(i, j) - z) > tol * spacing_) return std::nullopt;
  return index(i, j);
}

bool Grid::same_as(const Grid& other) const {
  return nx_ == other.nx_ && ny_ == other.ny_ && std::abs(origin_ - other.origin_) <= 1e-12 &&
         std::abs(spacing_ - other.spacing_) <= 1e-15 * spacing_ && mask_ == other.mask_;
}

}  // namespace domlab
