#include <doctest.h>

#include <set>

#include "mrcm/mesh.hpp"

using namespace mrcm;

TEST_CASE("grid construction and counts") {
  const Grid g1 = build_grid(1, 1, 1.0);
  CHECK(g1.cell_count() == 1);
  CHECK(g1.edge_count() == 4);

  const Grid spe = build_grid(220, 60, 1.0 / 60.0);
  CHECK(spe.cell_count() == 13200);
  CHECK(spe.x_edge_count() == 221 * 60);
  CHECK(spe.y_edge_count() == 220 * 61);

  const Grid g21 = build_grid(2, 1, 0.5);
  CHECK(g21.cell_count() == 2);
  CHECK(g21.edge_count() == 7);
  CHECK(g21.x_edge_count() == 3);
  CHECK(g21.y_edge_count() == 4);

  CHECK_THROWS_AS(build_grid(0, 1, 1.0), std::invalid_argument);
  CHECK_THROWS_AS(build_grid(1, -2, 1.0), std::invalid_argument);
  CHECK_THROWS_AS(build_grid(1, 1, 0.0), std::invalid_argument);
}

TEST_CASE("edge enumeration is deterministic and closed-form") {
  const Grid g = build_grid(3, 2, 0.5);
  // X-normal edges first, row-major.
  CHECK(g.x_edge_id(0, 0) == 0);
  CHECK(g.x_edge_id(3, 0) == 3);
  CHECK(g.x_edge_id(0, 1) == 4);
  CHECK(g.y_edge_id(0, 0) == g.x_edge_count());
  CHECK(g.edge_axis(7) == EdgeAxis::X);
  CHECK(g.edge_axis(8) == EdgeAxis::Y);

  for (int e = 0; e < g.edge_count(); ++e) {
    const auto [i, j] = g.edge_ij(e);
    if (g.edge_axis(e) == EdgeAxis::X) {
      CHECK(g.x_edge_id(i, j) == e);
    } else {
      CHECK(g.y_edge_id(i, j) == e);
    }
  }
}

TEST_CASE("edge adjacency, normals and midpoints") {
  const Grid g = build_grid(2, 2, 1.0, 10.0, 20.0);
  const int e = g.x_edge_id(1, 0);
  const auto [a, b] = g.edge_cells(e);
  CHECK(a == 0);
  CHECK(b == 1);
  CHECK(!g.edge_on_boundary(e));
  CHECK(g.edge_normal_sign(e) == 1);

  const int left = g.x_edge_id(0, 1);
  CHECK(g.edge_cells(left)[0] == -1);
  CHECK(g.edge_cells(left)[1] == g.cell_id(0, 1));
  CHECK(g.edge_normal_sign(left) == -1);
  CHECK(g.edge_on_boundary(left));

  const auto mid = g.edge_midpoint(e);
  CHECK(mid[0] == doctest::Approx(11.0));
  CHECK(mid[1] == doctest::Approx(20.5));
}

TEST_CASE("incidence sum identity") {
  for (const auto& [nx, ny] : {std::pair{1, 1}, {3, 2}, {5, 7}}) {
    const Grid g = build_grid(nx, ny, 0.25);
    int interior = 0, boundary = 0;
    std::vector<int> incident(g.cell_count(), 0);
    for (int e = 0; e < g.edge_count(); ++e) {
      const auto [a, b] = g.edge_cells(e);
      if (a >= 0) ++incident[a];
      if (b >= 0) ++incident[b];
      (g.edge_on_boundary(e) ? boundary : interior)++;
    }
    int total = 0;
    for (int c : incident) total += c;
    CHECK(total == 2 * interior + boundary);
  }
}

TEST_CASE("box extraction, counts and errors") {
  const Grid g = build_grid(4, 4, 1.0);
  const BoxRegion box = extract_box(g, 1, 1, 2, 2);
  CHECK(box.cell_count() == 4);
  CHECK(box.edge_count() == 12);
  int boundary = 0;
  const Grid local = box.local_grid();
  for (int e = 0; e < box.edge_count(); ++e) {
    if (local.edge_on_boundary(e)) ++boundary;
  }
  CHECK(boundary == 8);

  const BoxRegion full = extract_box(g, 0, 0, 4, 4);
  for (int c = 0; c < g.cell_count(); ++c) CHECK(full.global_cell(c) == c);
  for (int e = 0; e < g.edge_count(); ++e) CHECK(full.global_edge(e) == e);

  const Grid g40 = build_grid(40, 40, 1.0 / 40.0);
  const BoxRegion grown = extract_box(g40, 10 - 2, 10 - 2, 24, 24);
  CHECK(grown.w == 24);
  CHECK(grown.hgt == 24);

  CHECK_THROWS_AS(extract_box(g, 3, 0, 2, 1), std::invalid_argument);
  CHECK_THROWS_AS(extract_box(g, 0, 0, 0, 1), std::invalid_argument);
  CHECK_THROWS_AS(extract_box(g, -1, 0, 2, 2), std::invalid_argument);
}

TEST_CASE("box index maps are mutually inverse bijections") {
  const Grid g = build_grid(8, 7, 0.5);
  for (int i0 = 0; i0 < 3; ++i0) {
    for (int j0 = 0; j0 < 3; ++j0) {
      const BoxRegion box = extract_box(g, i0, j0, 4, 3);
      for (int c = 0; c < box.cell_count(); ++c) {
        CHECK(box.local_cell(box.global_cell(c)) == c);
      }
      for (int e = 0; e < box.edge_count(); ++e) {
        CHECK(box.local_edge(box.global_edge(e)) == e);
      }
      int inside = 0;
      for (int gc = 0; gc < g.cell_count(); ++gc) {
        const int lc = box.local_cell(gc);
        if (lc >= 0) {
          ++inside;
          CHECK(box.global_cell(lc) == gc);
        }
      }
      CHECK(inside == box.cell_count());
    }
  }
}

TEST_CASE("side edges order, arclength and partition of the boundary") {
  const Grid g = build_grid(6, 6, 0.5);
  const BoxRegion box = extract_box(g, 1, 2, 2, 2);

  const auto left = side_edges(box, Side::Left);
  REQUIRE(left.size() == 2);
  const double L = 2 * g.h;
  CHECK(left[0].s == doctest::Approx(0.25 * L));
  CHECK(left[1].s == doctest::Approx(0.75 * L));

  const BoxRegion one = extract_box(g, 0, 0, 1, 1);
  for (Side s : {Side::Left, Side::Right, Side::Bottom, Side::Top}) {
    CHECK(side_edges(one, s).size() == 1);
  }

  const Grid g40 = build_grid(40, 40, 1.0);
  const BoxRegion big = extract_box(g40, 8, 8, 24, 24);
  CHECK(side_edges(big, Side::Top).size() == 24);

  // The four sides exactly partition the boundary edge set.
  std::set<int> seen;
  std::size_t total = 0;
  for (Side s : {Side::Left, Side::Right, Side::Bottom, Side::Top}) {
    for (const SideEdge& se : side_edges(box, s)) {
      CHECK(box.boundary_side(se.local_edge) == s);
      seen.insert(se.local_edge);
      ++total;
    }
  }
  CHECK(seen.size() == total);
  const Grid local = box.local_grid();
  std::size_t boundary = 0;
  for (int e = 0; e < box.edge_count(); ++e) {
    if (local.edge_on_boundary(e)) {
      ++boundary;
      CHECK(seen.count(e) == 1);
    }
  }
  CHECK(boundary == seen.size());
}

TEST_CASE("edge orientation sign against the parent grid") {
  const Grid g = build_grid(5, 4, 1.0);
  const BoxRegion inner = extract_box(g, 1, 1, 2, 2);
  const Grid local = inner.local_grid();
  for (Side s : {Side::Left, Side::Bottom}) {
    for (const SideEdge& se : side_edges(inner, s)) {
      CHECK(inner.edge_sign(se.local_edge) == -1);
    }
  }
  for (Side s : {Side::Right, Side::Top}) {
    for (const SideEdge& se : side_edges(inner, s)) {
      CHECK(inner.edge_sign(se.local_edge) == 1);
    }
  }
  for (int e = 0; e < inner.edge_count(); ++e) {
    if (!local.edge_on_boundary(e)) CHECK(inner.edge_sign(e) == 1);
  }

  // Flush with the parent boundary both normals are the exterior one.
  const BoxRegion corner = extract_box(g, 0, 0, 2, 2);
  for (const SideEdge& se : side_edges(corner, Side::Left)) {
    CHECK(corner.edge_sign(se.local_edge) == 1);
  }
  CHECK(corner.side_on_parent_boundary(Side::Left));
  CHECK(!corner.side_on_parent_boundary(Side::Right));
}
