#pragma once

#include <array>
#include <cstdint>
#include <string>
#include <vector>

namespace mrcm {

/// Cell-centered scalar field (one value per cell, row-major).
using CellField = std::vector<double>;
/// Edge-centered scalar field (one value per edge, grid edge numbering).
using EdgeField = std::vector<double>;

/// Normal direction of an edge. X-normal edges are the vertical segments
/// between horizontally adjacent cells; Y-normal edges are the horizontal
/// segments.
enum class EdgeAxis : std::uint8_t { X, Y };

enum class Side : std::uint8_t { Left, Right, Bottom, Top };

const char* side_name(Side s);

/// Uniform Cartesian grid of square cells.
///
/// Cells are numbered row-major: cell (i, j) -> j*nx + i.
/// Edges are numbered with all X-normal edges first (row-major over
/// (i, j), i in [0, nx], j in [0, ny)), then all Y-normal edges
/// (i in [0, nx), j in [0, ny]).
///
/// Every edge carries a fixed unit normal: +x/+y for edges interior to
/// the grid, the exterior normal on the grid boundary. Edge-centered
/// values are always stored with respect to this normal.
///
/// Immutable after construction; safe to share across threads.
struct Grid {
  int nx = 0;
  int ny = 0;
  double h = 0.0;
  double origin_x = 0.0;
  double origin_y = 0.0;

  int cell_count() const { return nx * ny; }
  int x_edge_count() const { return (nx + 1) * ny; }
  int y_edge_count() const { return nx * (ny + 1); }
  int edge_count() const { return x_edge_count() + y_edge_count(); }

  int cell_id(int i, int j) const { return j * nx + i; }
  int cell_i(int c) const { return c % nx; }
  int cell_j(int c) const { return c / nx; }
  double cell_center_x(int c) const { return origin_x + (cell_i(c) + 0.5) * h; }
  double cell_center_y(int c) const { return origin_y + (cell_j(c) + 0.5) * h; }

  int x_edge_id(int i, int j) const { return j * (nx + 1) + i; }
  int y_edge_id(int i, int j) const { return x_edge_count() + j * nx + i; }

  EdgeAxis edge_axis(int e) const {
    return e < x_edge_count() ? EdgeAxis::X : EdgeAxis::Y;
  }
  /// Position of the edge within its family: X-normal -> (i in [0,nx],
  /// j in [0,ny)); Y-normal -> (i in [0,nx), j in [0,ny]).
  std::array<int, 2> edge_ij(int e) const;

  /// Adjacent cells (lower-coordinate side first); -1 when on the boundary.
  std::array<int, 2> edge_cells(int e) const;

  bool edge_on_boundary(int e) const;

  /// Sign of the fixed edge normal along its axis: -1 only on the
  /// left/bottom boundary of the grid, +1 everywhere else.
  int edge_normal_sign(int e) const;

  std::array<double, 2> edge_midpoint(int e) const;
};

/// Builds a grid, validating extents.
Grid build_grid(int nx, int ny, double h, double origin_x = 0.0,
                double origin_y = 0.0);

/// Axis-aligned box of whole cells inside a parent grid, with bijective
/// global<->local cell and edge maps. The local numbering is the one of
/// local_grid(); boundary edges of the box are classified by side
/// (X-normal edges to Left/Right, Y-normal to Bottom/Top).
///
/// Immutable after construction.
struct BoxRegion {
  const Grid* parent = nullptr;
  int i0 = 0;
  int j0 = 0;
  int w = 0;
  int hgt = 0;

  Grid local_grid() const {
    return Grid{w, hgt, parent->h, parent->origin_x + i0 * parent->h,
                parent->origin_y + j0 * parent->h};
  }

  int cell_count() const { return w * hgt; }
  int edge_count() const { return (w + 1) * hgt + w * (hgt + 1); }

  int global_cell(int local_cell) const;
  /// -1 when the global cell lies outside the box.
  int local_cell(int global_cell) const;
  int global_edge(int local_edge) const;
  /// -1 when the global edge does not belong to the box.
  int local_edge(int global_edge) const;

  bool contains_cell(int global_cell) const;

  /// True when `local_edge` lies on the box boundary.
  bool is_boundary_edge(int local_edge) const;

  /// Side of a boundary edge; throws for interior edges.
  Side boundary_side(int local_edge) const;

  /// True when the named side of the box coincides with the parent grid
  /// boundary.
  bool side_on_parent_boundary(Side s) const;

  /// Product of the box-local edge normal and the parent-grid edge
  /// normal (+1 or -1). The only -1 case is a Left/Bottom box-boundary
  /// edge that is interior to the parent grid.
  int edge_sign(int local_edge) const;
};

/// Extracts a box, validating that it lies inside the grid.
BoxRegion extract_box(const Grid& grid, int i0, int j0, int w, int hgt);

struct SideEdge {
  int local_edge;
  int global_edge;
  double s;  ///< midpoint arclength along the side, from its low corner
};

/// Edges of one side of a box, ordered by increasing tangential
/// coordinate.
std::vector<SideEdge> side_edges(const BoxRegion& box, Side side);

}  // namespace mrcm
