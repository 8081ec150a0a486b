#include <doctest.h>

#include <algorithm>
#include <set>

#include "mrcm/decomposition.hpp"

using namespace mrcm;

TEST_CASE("structured partition counts") {
  const Grid g = build_grid(40, 40, 1.0 / 40.0);
  const Partition p = build_partition(g, 2, 2);
  CHECK(p.count() == 4);
  CHECK(p.faces.size() == 4);
  CHECK(p.skeleton.size() == 80);
  CHECK(p.H == doctest::Approx(0.5));

  const Grid spe = build_grid(220, 60, 1.0 / 60.0);
  const Partition ps = build_partition(spe, 11, 3);
  CHECK(ps.count() == 33);
  for (const BoxRegion& box : ps.subdomains) {
    CHECK(box.w == 20);
    CHECK(box.hgt == 20);
  }
  CHECK(ps.H == doctest::Approx(1.0 / 3.0));

  for (int M : {2, 3, 4}) {
    const Grid gm = build_grid(8 * M, 8 * M, 1.0 / (8 * M));
    const Partition pm = build_partition(gm, M, M);
    CHECK(static_cast<int>(pm.faces.size()) == 2 * M * (M - 1));
  }

  CHECK_THROWS_AS(build_partition(g, 3, 2), std::invalid_argument);
  CHECK_THROWS_AS(build_partition(g, 0, 2), std::invalid_argument);
}

TEST_CASE("subdomains tile the grid and faces are shared by two") {
  const Grid g = build_grid(12, 8, 0.25);
  const Partition p = build_partition(g, 3, 2);
  std::vector<int> owner_count(g.cell_count(), 0);
  for (int s = 0; s < p.count(); ++s) {
    for (int c = 0; c < p.subdomains[s].cell_count(); ++c) {
      const int gc = p.subdomains[s].global_cell(c);
      ++owner_count[gc];
      CHECK(p.cell_owner[gc] == s);
    }
  }
  for (int c : owner_count) CHECK(c == 1);

  std::set<int> skeleton_set(p.skeleton.begin(), p.skeleton.end());
  CHECK(skeleton_set.size() == p.skeleton.size());
  for (const CoarseFace& face : p.faces) {
    CHECK(face.a < face.b);
    for (int e : face.edges) {
      const auto [ca, cb] = g.edge_cells(e);
      CHECK(p.cell_owner[ca] == face.a);
      CHECK(p.cell_owner[cb] == face.b);
      CHECK(p.skeleton_sign(e, face.a) == 1);
      CHECK(p.skeleton_sign(e, face.b) == -1);
    }
  }

  // Interface edge counts sum to twice the skeleton.
  std::size_t gamma_total = 0;
  for (int s = 0; s < p.count(); ++s) {
    for (int f : p.faces_of[s]) gamma_total += p.faces[f].edges.size();
  }
  CHECK(gamma_total == 2 * p.skeleton.size());
}

TEST_CASE("face ordering is vertical first, row-major") {
  const Grid g = build_grid(6, 6, 1.0 / 6.0);
  const Partition p = build_partition(g, 3, 3);
  // 3x3: six vertical faces then six horizontal ones.
  for (int f = 0; f < 6; ++f) CHECK(p.faces[f].axis == EdgeAxis::X);
  for (int f = 6; f < 12; ++f) CHECK(p.faces[f].axis == EdgeAxis::Y);
  CHECK(p.faces[0].a == 0);
  CHECK(p.faces[0].b == 1);
  CHECK(p.faces[6].a == 0);
  CHECK(p.faces[6].b == 3);
  CHECK(p.face_side(0, 0) == Side::Right);
  CHECK(p.face_side(0, 1) == Side::Left);
  CHECK(p.face_side(6, 0) == Side::Top);
  CHECK(p.face_side(6, 3) == Side::Bottom);
  CHECK_THROWS_AS(p.face_side(0, 2), std::invalid_argument);
}

TEST_CASE("oversampling grows, clips and colors") {
  const Grid g = build_grid(40, 40, 1.0 / 40.0);
  const Partition p = build_partition(g, 2, 2);

  SUBCASE("zero width keeps the base boxes") {
    const OversampledPartition op = oversample(p, 0);
    for (int s = 0; s < p.count(); ++s) {
      CHECK(op.hats[s].i0 == p.subdomains[s].i0);
      CHECK(op.hats[s].w == p.subdomains[s].w);
    }
    std::set<int> colors(op.color.begin(), op.color.end());
    CHECK(colors.size() == 4);
  }
  SUBCASE("interior boxes grow on every side") {
    const Grid g2 = build_grid(60, 60, 1.0 / 60.0);
    const Partition p3 = build_partition(g2, 3, 3);
    const OversampledPartition op = oversample(p3, 2);
    const BoxRegion& hat = op.hats[4];  // center subdomain, 20x20 base
    CHECK(hat.w == 24);
    CHECK(hat.hgt == 24);
  }
  SUBCASE("boundary boxes are clipped") {
    const OversampledPartition op = oversample(p, 4);
    const BoxRegion& corner = op.hats[0];
    CHECK(corner.i0 == 0);
    CHECK(corner.j0 == 0);
    CHECK(corner.w == 24);
    CHECK(corner.hgt == 24);
  }
  SUBCASE("too much overlap is rejected") {
    CHECK_THROWS_AS(oversample(p, 10), std::invalid_argument);
    CHECK_THROWS_AS(oversample(p, -1), std::invalid_argument);
  }
}

TEST_CASE("same-color boxes never touch") {
  for (const auto& [mx, my] : {std::pair{3, 3}, {4, 2}, {2, 5}}) {
    const Grid g = build_grid(mx * 10, my * 10, 0.01);
    const Partition p = build_partition(g, mx, my);
    for (int l : {0, 1, 4}) {
      const OversampledPartition op = oversample(p, l);
      for (int s = 0; s < p.count(); ++s) {
        CHECK(op.color[s] >= 0);
        CHECK(op.color[s] < 4);
        for (int t = s + 1; t < p.count(); ++t) {
          if (op.color[s] != op.color[t]) continue;
          const BoxRegion &a = op.hats[s], &b = op.hats[t];
          const bool x_sep = a.i0 + a.w < b.i0 || b.i0 + b.w < a.i0;
          const bool y_sep = a.j0 + a.hgt < b.j0 || b.j0 + b.hgt < a.j0;
          CHECK((x_sep || y_sep));
        }
      }
    }
  }
}

TEST_CASE("neighbors under overlap") {
  const Grid g = build_grid(30, 30, 1.0 / 30.0);
  const Partition p = build_partition(g, 3, 3);

  SUBCASE("no overlap: edge-adjacent neighbors only") {
    const OversampledPartition op = oversample(p, 0);
    auto n = neighbors_under_overlap(op, 4);
    CHECK(n == std::vector<int>{1, 3, 5, 7});
    auto corner = neighbors_under_overlap(op, 0);
    CHECK(corner == std::vector<int>{1, 3});
  }
  SUBCASE("with overlap diagonals appear") {
    const OversampledPartition op = oversample(p, 2);
    auto n = neighbors_under_overlap(op, 4);
    CHECK(n == std::vector<int>{0, 1, 2, 3, 5, 6, 7, 8});
    auto corner = neighbors_under_overlap(op, 0);
    CHECK(corner == std::vector<int>{1, 3, 4});
  }
  SUBCASE("bad subdomain id") {
    const OversampledPartition op = oversample(p, 1);
    CHECK_THROWS_AS(neighbors_under_overlap(op, 9), std::invalid_argument);
  }
}
