#include "mrcm/decomposition.hpp"

#include <algorithm>
#include <stdexcept>
#include <string>

namespace mrcm {

Side Partition::face_side(int f, int s) const {
  const CoarseFace& face = faces[f];
  if (face.axis == EdgeAxis::X) {
    if (face.a == s) return Side::Right;
    if (face.b == s) return Side::Left;
  } else {
    if (face.a == s) return Side::Top;
    if (face.b == s) return Side::Bottom;
  }
  throw std::invalid_argument("face_side: face " + std::to_string(f) +
                              " does not touch subdomain " + std::to_string(s));
}

int Partition::skeleton_sign(int global_edge, int s) const {
  const auto [a, b] = grid->edge_cells(global_edge);
  if (a >= 0 && cell_owner[a] == s) return 1;
  if (b >= 0 && cell_owner[b] == s) return -1;
  throw std::invalid_argument("skeleton_sign: edge " +
                              std::to_string(global_edge) +
                              " not adjacent to subdomain " + std::to_string(s));
}

Partition build_partition(const Grid& grid, int Mx, int My) {
  if (Mx < 1 || My < 1 || grid.nx % Mx != 0 || grid.ny % My != 0) {
    throw std::invalid_argument("build_partition: counts must divide the grid");
  }
  const int nlx = grid.nx / Mx;
  const int nly = grid.ny / My;

  Partition p;
  p.grid = &grid;
  p.Mx = Mx;
  p.My = My;
  p.H = nly * grid.h;
  p.subdomains.reserve(static_cast<std::size_t>(Mx) * My);
  for (int bj = 0; bj < My; ++bj) {
    for (int bi = 0; bi < Mx; ++bi) {
      p.subdomains.push_back(extract_box(grid, bi * nlx, bj * nly, nlx, nly));
    }
  }
  p.faces_of.resize(p.count());
  p.on_skeleton.assign(grid.edge_count(), 0);

  auto add_face = [&](CoarseFace face) {
    const int id = static_cast<int>(p.faces.size());
    p.faces_of[face.a].push_back(id);
    p.faces_of[face.b].push_back(id);
    for (int e : face.edges) {
      p.on_skeleton[e] = 1;
      p.skeleton.push_back(e);
    }
    p.faces.push_back(std::move(face));
  };

  for (int bj = 0; bj < My; ++bj) {
    for (int bi = 0; bi + 1 < Mx; ++bi) {
      CoarseFace face;
      face.a = bj * Mx + bi;
      face.b = face.a + 1;
      face.axis = EdgeAxis::X;
      for (int t = 0; t < nly; ++t) {
        face.edges.push_back(grid.x_edge_id((bi + 1) * nlx, bj * nly + t));
      }
      add_face(std::move(face));
    }
  }
  for (int bj = 0; bj + 1 < My; ++bj) {
    for (int bi = 0; bi < Mx; ++bi) {
      CoarseFace face;
      face.a = bj * Mx + bi;
      face.b = face.a + Mx;
      face.axis = EdgeAxis::Y;
      for (int t = 0; t < nlx; ++t) {
        face.edges.push_back(grid.y_edge_id(bi * nlx + t, (bj + 1) * nly));
      }
      add_face(std::move(face));
    }
  }

  p.cell_owner.resize(grid.cell_count());
  for (int c = 0; c < grid.cell_count(); ++c) {
    const int bi = grid.cell_i(c) / nlx;
    const int bj = grid.cell_j(c) / nly;
    p.cell_owner[c] = bj * Mx + bi;
  }
  return p;
}

namespace {

// Closed vertex-space overlap length of [a0, a1] and [b0, b1]; negative
// when separated, zero when touching at a point.
int overlap(int a0, int a1, int b0, int b1) {
  return std::min(a1, b1) - std::max(a0, b0);
}

bool boxes_share_point(const BoxRegion& a, const BoxRegion& b) {
  return overlap(a.i0, a.i0 + a.w, b.i0, b.i0 + b.w) >= 0 &&
         overlap(a.j0, a.j0 + a.hgt, b.j0, b.j0 + b.hgt) >= 0;
}

}  // namespace

OversampledPartition oversample(const Partition& p, int l) {
  if (l < 0) throw std::invalid_argument("oversample: l must be >= 0");
  const Grid& grid = *p.grid;
  const int nlx = grid.nx / p.Mx;
  const int nly = grid.ny / p.My;
  if ((p.Mx > 1 && 2 * l >= nlx) || (p.My > 1 && 2 * l >= nly)) {
    throw std::invalid_argument(
        "oversample: l = " + std::to_string(l) +
        " too large for the coloring guarantee (need l h < H/2)");
  }

  OversampledPartition op;
  op.base = p;
  op.base.grid = p.grid;
  op.l = l;
  op.hats.reserve(p.count());
  op.color.resize(p.count());
  for (int s = 0; s < p.count(); ++s) {
    const BoxRegion& box = p.subdomains[s];
    const int i0 = std::max(0, box.i0 - l);
    const int j0 = std::max(0, box.j0 - l);
    const int i1 = std::min(grid.nx, box.i0 + box.w + l);
    const int j1 = std::min(grid.ny, box.j0 + box.hgt + l);
    op.hats.push_back(extract_box(grid, i0, j0, i1 - i0, j1 - j0));
    op.color[s] = 2 * (p.block_i(s) % 2) + (p.block_j(s) % 2);
  }
  // The parity rule guarantees this; verify constructively anyway.
  for (int s = 0; s < p.count(); ++s) {
    for (int t = s + 1; t < p.count(); ++t) {
      if (op.color[s] == op.color[t] &&
          boxes_share_point(op.hats[s], op.hats[t])) {
        throw std::logic_error("oversample: same-color boxes touch (" +
                               std::to_string(s) + ", " + std::to_string(t) +
                               ")");
      }
    }
  }
  return op;
}

std::vector<int> neighbors_under_overlap(const OversampledPartition& op,
                                         int i) {
  if (i < 0 || i >= op.count()) {
    throw std::invalid_argument("neighbors_under_overlap: bad subdomain id");
  }
  const BoxRegion& hat = op.hats[i];
  std::vector<int> out;
  for (int j = 0; j < op.count(); ++j) {
    if (j == i) continue;
    const BoxRegion& box = op.base.subdomains[j];
    const int ox = overlap(hat.i0, hat.i0 + hat.w, box.i0, box.i0 + box.w);
    const int oy = overlap(hat.j0, hat.j0 + hat.hgt, box.j0, box.j0 + box.hgt);
    // Touching along a segment counts; touching at a single corner point
    // does not (no boundary edge of the hat lies in such a neighbor).
    if (ox >= 0 && oy >= 0 && ox + oy > 0) out.push_back(j);
  }
  return out;
}

}  // namespace mrcm
