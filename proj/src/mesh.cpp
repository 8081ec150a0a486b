#include "mrcm/mesh.hpp"

#include <stdexcept>

namespace mrcm {

const char* side_name(Side s) {
  switch (s) {
    case Side::Left: return "left";
    case Side::Right: return "right";
    case Side::Bottom: return "bottom";
    case Side::Top: return "top";
  }
  return "?";
}

std::array<int, 2> Grid::edge_ij(int e) const {
  if (e < x_edge_count()) {
    return {e % (nx + 1), e / (nx + 1)};
  }
  const int k = e - x_edge_count();
  return {k % nx, k / nx};
}

std::array<int, 2> Grid::edge_cells(int e) const {
  const auto [i, j] = edge_ij(e);
  if (edge_axis(e) == EdgeAxis::X) {
    const int left = i > 0 ? cell_id(i - 1, j) : -1;
    const int right = i < nx ? cell_id(i, j) : -1;
    return {left, right};
  }
  const int below = j > 0 ? cell_id(i, j - 1) : -1;
  const int above = j < ny ? cell_id(i, j) : -1;
  return {below, above};
}

bool Grid::edge_on_boundary(int e) const {
  const auto [i, j] = edge_ij(e);
  if (edge_axis(e) == EdgeAxis::X) return i == 0 || i == nx;
  return j == 0 || j == ny;
}

int Grid::edge_normal_sign(int e) const {
  const auto [i, j] = edge_ij(e);
  if (edge_axis(e) == EdgeAxis::X) return i == 0 ? -1 : 1;
  return j == 0 ? -1 : 1;
}

std::array<double, 2> Grid::edge_midpoint(int e) const {
  const auto [i, j] = edge_ij(e);
  if (edge_axis(e) == EdgeAxis::X) {
    return {origin_x + i * h, origin_y + (j + 0.5) * h};
  }
  return {origin_x + (i + 0.5) * h, origin_y + j * h};
}

Grid build_grid(int nx, int ny, double h, double origin_x, double origin_y) {
  if (nx < 1 || ny < 1) {
    throw std::invalid_argument("build_grid: cell counts must be >= 1");
  }
  if (!(h > 0.0)) {
    throw std::invalid_argument("build_grid: cell size must be positive");
  }
  return Grid{nx, ny, h, origin_x, origin_y};
}

int BoxRegion::global_cell(int local_cell) const {
  const int li = local_cell % w;
  const int lj = local_cell / w;
  return parent->cell_id(i0 + li, j0 + lj);
}

int BoxRegion::local_cell(int global_cell) const {
  const int gi = parent->cell_i(global_cell);
  const int gj = parent->cell_j(global_cell);
  if (gi < i0 || gi >= i0 + w || gj < j0 || gj >= j0 + hgt) return -1;
  return (gj - j0) * w + (gi - i0);
}

bool BoxRegion::contains_cell(int global_cell) const {
  return local_cell(global_cell) >= 0;
}

int BoxRegion::global_edge(int local_edge) const {
  const Grid local = local_grid();
  const auto [i, j] = local.edge_ij(local_edge);
  if (local.edge_axis(local_edge) == EdgeAxis::X) {
    return parent->x_edge_id(i0 + i, j0 + j);
  }
  return parent->y_edge_id(i0 + i, j0 + j);
}

int BoxRegion::local_edge(int global_edge) const {
  const Grid local = local_grid();
  const auto [i, j] = parent->edge_ij(global_edge);
  if (parent->edge_axis(global_edge) == EdgeAxis::X) {
    if (i < i0 || i > i0 + w || j < j0 || j >= j0 + hgt) return -1;
    return local.x_edge_id(i - i0, j - j0);
  }
  if (i < i0 || i >= i0 + w || j < j0 || j > j0 + hgt) return -1;
  return local.y_edge_id(i - i0, j - j0);
}

bool BoxRegion::is_boundary_edge(int local_edge) const {
  return local_grid().edge_on_boundary(local_edge);
}

Side BoxRegion::boundary_side(int local_edge) const {
  const Grid local = local_grid();
  const auto [i, j] = local.edge_ij(local_edge);
  if (local.edge_axis(local_edge) == EdgeAxis::X) {
    if (i == 0) return Side::Left;
    if (i == w) return Side::Right;
  } else {
    if (j == 0) return Side::Bottom;
    if (j == hgt) return Side::Top;
  }
  throw std::invalid_argument("boundary_side: edge is interior to the box");
}

bool BoxRegion::side_on_parent_boundary(Side s) const {
  switch (s) {
    case Side::Left: return i0 == 0;
    case Side::Right: return i0 + w == parent->nx;
    case Side::Bottom: return j0 == 0;
    case Side::Top: return j0 + hgt == parent->ny;
  }
  return false;
}

int BoxRegion::edge_sign(int local_edge) const {
  const Grid local = local_grid();
  if (!local.edge_on_boundary(local_edge)) return 1;
  const int local_sign = local.edge_normal_sign(local_edge);
  const int global_sign = parent->edge_normal_sign(global_edge(local_edge));
  return local_sign * global_sign;
}

BoxRegion extract_box(const Grid& grid, int i0, int j0, int w, int hgt) {
  if (w < 1 || hgt < 1 || i0 < 0 || j0 < 0 || i0 + w > grid.nx ||
      j0 + hgt > grid.ny) {
    throw std::invalid_argument("extract_box: box not contained in grid");
  }
  return BoxRegion{&grid, i0, j0, w, hgt};
}

std::vector<SideEdge> side_edges(const BoxRegion& box, Side side) {
  const Grid local = box.local_grid();
  const double h = local.h;
  std::vector<SideEdge> out;
  auto push = [&](int local_edge, int t) {
    out.push_back({local_edge, box.global_edge(local_edge), (t + 0.5) * h});
  };
  switch (side) {
    case Side::Left:
      for (int j = 0; j < box.hgt; ++j) push(local.x_edge_id(0, j), j);
      break;
    case Side::Right:
      for (int j = 0; j < box.hgt; ++j) push(local.x_edge_id(box.w, j), j);
      break;
    case Side::Bottom:
      for (int i = 0; i < box.w; ++i) push(local.y_edge_id(i, 0), i);
      break;
    case Side::Top:
      for (int i = 0; i < box.w; ++i) push(local.y_edge_id(i, box.hgt), i);
      break;
  }
  return out;
}

}  // namespace mrcm
