#pragma once

#include <vector>

#include "mrcm/mesh.hpp"

namespace mrcm {

/// One coarse face of the skeleton: the fine edges shared by subdomains
/// a and b (a < b; a is the left/bottom neighbor, so the fixed edge
/// normal points out of a). Edges are ordered by increasing tangential
/// coordinate.
struct CoarseFace {
  int a = -1;
  int b = -1;
  EdgeAxis axis = EdgeAxis::X;
  std::vector<int> edges;  ///< global fine edge ids
};

/// Structured Mx-by-My partition of a grid into equal boxes.
/// Subdomains are numbered row-major by block index. Faces are listed
/// X-normal (vertical) first, then Y-normal, each row-major.
///
/// Immutable after construction; shareable.
struct Partition {
  const Grid* grid = nullptr;
  int Mx = 0;
  int My = 0;
  double H = 0.0;  ///< vertical subdomain extent (local ny * h)
  std::vector<BoxRegion> subdomains;
  std::vector<CoarseFace> faces;
  std::vector<std::vector<int>> faces_of;  ///< per subdomain, ascending face ids
  std::vector<int> skeleton;               ///< all face edges, each once
  std::vector<std::uint8_t> on_skeleton;   ///< per global edge
  std::vector<int> cell_owner;             ///< per global cell

  int count() const { return Mx * My; }
  int block_i(int s) const { return s % Mx; }
  int block_j(int s) const { return s / Mx; }

  /// Side of subdomain s facing coarse face f; throws if f is not a
  /// face of s.
  Side face_side(int f, int s) const;

  /// +1 when s is the smaller-index (left/bottom) side of the skeleton
  /// edge's face, so that the outward normal of s agrees with the fixed
  /// edge normal; -1 otherwise.
  int skeleton_sign(int global_edge, int s) const;
};

/// Builds the partition; Mx must divide nx and My must divide ny.
Partition build_partition(const Grid& grid, int Mx, int My);

/// Partition plus oversampling boxes grown by l fine cells per side
/// (clipped at the domain boundary) and a 4-coloring by block-index
/// parity such that same-color boxes share no boundary point.
struct OversampledPartition {
  Partition base;
  int l = 0;
  std::vector<BoxRegion> hats;
  std::vector<int> color;  ///< per subdomain, in [0, 4)

  int count() const { return base.count(); }
};

/// Grows each subdomain by l cells per interior side. Requires
/// l * h < H / 2 so that the parity coloring is valid; the same-color
/// disjointness is additionally checked constructively.
OversampledPartition oversample(const Partition& p, int l);

/// Subdomains j != i whose base box intersects the oversampled box of i.
std::vector<int> neighbors_under_overlap(const OversampledPartition& op, int i);

}  // namespace mrcm
