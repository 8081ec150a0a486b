#include <doctest.h>

#include <cmath>
#include <cstring>
#include <filesystem>
#include <fstream>
#include <random>

#include "mrcm/problem.hpp"
#include "test_support.hpp"

using namespace mrcm;

namespace {

std::filesystem::path temp_file(const std::string& name) {
  auto dir = std::filesystem::temp_directory_path() / "mrcm_tests";
  std::filesystem::create_directories(dir);
  return dir / name;
}

// Raw benchmark-format file with every token equal to `value` except an
// optional override at one token index.
void write_raw_perm(const std::filesystem::path& path, long count,
                    const char* value, long override_at = -1,
                    const char* override_value = nullptr) {
  std::ofstream out(path, std::ios::binary);
  for (long i = 0; i < count; ++i) {
    if (i == override_at) {
      out << override_value;
    } else {
      out << value;
    }
    out << (i % 20 == 19 ? '\n' : ' ');
  }
}

constexpr long kFullCount = 3L * 220 * 60 * 85;

}  // namespace

TEST_CASE("harmonic edge coefficients") {
  const Grid g = build_grid(2, 1, 1.0);
  SUBCASE("equal values stay put") {
    PermField k = make_perm_field(2, 1, {1.0, 1.0});
    EdgeField kh = harmonic_edge_coefficients(g, k);
    CHECK(kh[g.x_edge_id(1, 0)] == doctest::Approx(1.0));
  }
  SUBCASE("closed form 2ab/(a+b)") {
    PermField k = make_perm_field(2, 1, {1.0, 3.0});
    EdgeField kh = harmonic_edge_coefficients(g, k);
    CHECK(kh[g.x_edge_id(1, 0)] == doctest::Approx(1.5));
  }
  SUBCASE("boundary edges take the single adjacent value") {
    PermField k = make_perm_field(2, 1, {7.0, 3.0});
    EdgeField kh = harmonic_edge_coefficients(g, k);
    CHECK(kh[g.x_edge_id(0, 0)] == doctest::Approx(7.0));
    CHECK(kh[g.x_edge_id(2, 0)] == doctest::Approx(3.0));
  }
}

TEST_CASE("harmonic average bounds on random fields") {
  const Grid g = build_grid(9, 7, 0.125);
  const PermField k = testing::random_perm(9, 7, 42u, -3.0, 3.0);
  const EdgeField kh = harmonic_edge_coefficients(g, k);
  for (int e = 0; e < g.edge_count(); ++e) {
    const auto [a, b] = g.edge_cells(e);
    if (a < 0 || b < 0) continue;
    const double lo = std::min(k.at(a), k.at(b));
    CHECK(kh[e] >= lo * (1.0 - 1e-14));
    CHECK(kh[e] <= 2.0 * lo * (1.0 + 1e-14));
  }
}

TEST_CASE("perm field validation") {
  CHECK_THROWS_AS(make_perm_field(2, 1, {1.0}), std::invalid_argument);
  CHECK_THROWS_AS(make_perm_field(1, 1, {0.0}), std::invalid_argument);
  CHECK_THROWS_AS(make_perm_field(1, 1, {-2.0}), std::invalid_argument);
}

TEST_CASE("homogeneous problem with known solution") {
  const DarcyProblem prob = make_homogeneous_problem(8, 20);
  CHECK(prob.grid.nx == 160);
  CHECK(prob.grid.ny == 160);
  CHECK(prob.grid.h == doctest::Approx(1.0 / 160.0));
  for (double k : prob.perm.values) CHECK(k == 1.0);
  for (int e = 0; e < prob.grid.edge_count(); ++e) {
    if (prob.grid.edge_on_boundary(e)) {
      CHECK(prob.bc.kind[e] == BcKind::Neumann);
      CHECK(prob.bc.value[e] == 0.0);
    }
  }
  REQUIRE(prob.exact.has_value());
  CHECK(prob.exact->pressure(0.0, 0.0) == doctest::Approx(1.0));
  CHECK(prob.exact->pressure(0.25, 0.0) == doctest::Approx(0.0).epsilon(1e-12));

  double f_int = 0.0;
  for (double f : prob.source) f_int += f * prob.grid.h * prob.grid.h;
  CHECK(std::abs(f_int) <= 1e-10);

  CHECK_THROWS_AS(make_homogeneous_problem(0, 20), std::invalid_argument);
  CHECK_THROWS_AS(make_homogeneous_problem(2, 1), std::invalid_argument);
}

TEST_CASE("manufactured fields satisfy the divergence identity") {
  // Central differences of the exact velocity against the source term;
  // the residual must vanish at second order.
  std::vector<std::pair<double, double>> samples;
  for (int n : {20, 40, 80}) {
    const DarcyProblem prob = make_homogeneous_problem(1, n);
    const double h = prob.grid.h;
    double worst = 0.0;
    for (int c = 0; c < prob.grid.cell_count(); ++c) {
      const double x = prob.grid.cell_center_x(c);
      const double y = prob.grid.cell_center_y(c);
      const auto& u = prob.exact->velocity;
      const double div = (u(x + h / 2, y)[0] - u(x - h / 2, y)[0]) / h +
                         (u(x, y + h / 2)[1] - u(x, y - h / 2)[1]) / h;
      worst = std::max(worst, std::abs(div - prob.source[c]));
    }
    samples.emplace_back(h, worst);
  }
  double slope = std::log(samples[0].second / samples[2].second) /
                 std::log(samples[0].first / samples[2].first);
  CHECK(slope >= 1.8);
}

TEST_CASE("raw benchmark file parsing") {
  SUBCASE("constant file loads as constant field") {
    const auto path = temp_file("const.dat");
    write_raw_perm(path, kFullCount, "1.0");
    const PermField f = load_spe10(path, 40, Spe10Component::kx);
    CHECK(f.nx == 220);
    CHECK(f.ny == 60);
    for (double v : f.values) CHECK(v == 1.0);
  }
  SUBCASE("layer out of range") {
    const auto path = temp_file("unused.dat");
    CHECK_THROWS_AS(load_spe10(path, 86, Spe10Component::kx),
                    std::out_of_range);
    CHECK_THROWS_AS(load_spe10(path, 0, Spe10Component::kx),
                    std::out_of_range);
  }
  SUBCASE("short file reports the token count") {
    const auto path = temp_file("short.dat");
    write_raw_perm(path, 1000, "2.5");
    try {
      load_spe10(path, 1, Spe10Component::kx);
      FAIL("expected parse_error");
    } catch (const parse_error& e) {
      CHECK(e.token_offset == 1000);
    }
  }
  SUBCASE("non-numeric token reports its offset") {
    const auto path = temp_file("garbled.dat");
    write_raw_perm(path, kFullCount, "1.0", 1234, "bogus");
    try {
      load_spe10(path, 1, Spe10Component::kx);
      FAIL("expected parse_error");
    } catch (const parse_error& e) {
      CHECK(e.token_offset == 1234);
    }
  }
  SUBCASE("nonpositive value in the requested layer") {
    const auto path = temp_file("nonpos.dat");
    // Token 0 belongs to kx layer 1.
    write_raw_perm(path, kFullCount, "1.0", 0, "0.0");
    CHECK_THROWS_AS(load_spe10(path, 1, Spe10Component::kx), parse_error);
    // The same token does not affect other layers.
    CHECK_NOTHROW(load_spe10(path, 2, Spe10Component::kx));
  }
  SUBCASE("component blocks are laid out kx, ky, kz") {
    const auto path = temp_file("blocks.dat");
    const long per_component = 220L * 60 * 85;
    // First token of the ky block changed; kx must not see it.
    write_raw_perm(path, kFullCount, "1.0", per_component, "9.0");
    const PermField kx = load_spe10(path, 1, Spe10Component::kx);
    CHECK(kx.values[0] == 1.0);
    const PermField ky = load_spe10(path, 1, Spe10Component::ky);
    CHECK(ky.values[0] == 9.0);
  }
}

TEST_CASE("layer cache round-trip is bit exact") {
  const PermField field = testing::random_perm(220, 60, 7u, -4.0, 3.0);
  const auto path = temp_file("layer.cache");
  write_spe10_cache(path, field, 40, Spe10Component::kx);
  int layer = 0;
  Spe10Component comp{};
  const PermField back = load_spe10_cache(path, &layer, &comp);
  CHECK(layer == 40);
  CHECK(comp == Spe10Component::kx);
  REQUIRE(back.values.size() == field.values.size());
  CHECK(std::memcmp(back.values.data(), field.values.data(),
                    field.values.size() * sizeof(double)) == 0);

  SUBCASE("transparent loading checks the header") {
    const PermField again = load_spe10_any(path, 40, Spe10Component::kx);
    CHECK(std::memcmp(again.values.data(), field.values.data(),
                      field.values.size() * sizeof(double)) == 0);
    CHECK_THROWS_AS(load_spe10_any(path, 39, Spe10Component::kx),
                    std::invalid_argument);
    CHECK_THROWS_AS(load_spe10_any(path, 40, Spe10Component::ky),
                    std::invalid_argument);
  }
}

TEST_CASE("heterogeneous benchmark problem setup") {
  const PermField perm = make_synthetic_layer(3u);
  const DarcyProblem prob = make_spe10_problem(perm);
  CHECK(prob.grid.nx == 220);
  CHECK(prob.grid.ny == 60);
  CHECK(prob.grid.h == doctest::Approx(1.0 / 60.0));
  for (double f : prob.source) CHECK(f == 0.0);
  const Grid& g = prob.grid;
  for (int j = 0; j < g.ny; ++j) {
    CHECK(prob.bc.kind[g.x_edge_id(0, j)] == BcKind::Dirichlet);
    CHECK(prob.bc.value[g.x_edge_id(0, j)] == 1.0);
    CHECK(prob.bc.kind[g.x_edge_id(g.nx, j)] == BcKind::Dirichlet);
    CHECK(prob.bc.value[g.x_edge_id(g.nx, j)] == 0.0);
  }
  for (int i = 0; i < g.nx; ++i) {
    CHECK(prob.bc.kind[g.y_edge_id(i, 0)] == BcKind::Neumann);
    CHECK(prob.bc.kind[g.y_edge_id(i, g.ny)] == BcKind::Neumann);
  }
  CHECK_THROWS_AS(make_spe10_problem(make_perm_field(2, 2, {1, 1, 1, 1})),
                  std::invalid_argument);
}

TEST_CASE("synthetic layer is deterministic and high contrast") {
  const PermField a = make_synthetic_layer(11u);
  const PermField b = make_synthetic_layer(11u);
  CHECK(std::memcmp(a.values.data(), b.values.data(),
                    a.values.size() * sizeof(double)) == 0);
  double lo = 1e300, hi = 0.0;
  for (double v : a.values) {
    lo = std::min(lo, v);
    hi = std::max(hi, v);
  }
  CHECK(hi / lo >= 1e5);
  const PermField c = make_synthetic_layer(12u);
  CHECK(std::memcmp(a.values.data(), c.values.data(),
                    a.values.size() * sizeof(double)) != 0);
}

TEST_CASE("pure-Neumann compatibility is enforced") {
  Grid grid = build_grid(4, 4, 0.25);
  PermField perm = make_perm_field(4, 4, std::vector<double>(16, 1.0));
  CellField f(16, 1.0);  // net source without matching outflow
  BoundarySpec bc = BoundarySpec::empty(grid);
  for (int e = 0; e < grid.edge_count(); ++e) {
    if (grid.edge_on_boundary(e)) bc.set(e, BcKind::Neumann, 0.0);
  }
  CHECK_THROWS_AS(make_darcy_problem(grid, perm, f, bc),
                  std::invalid_argument);

  // Balanced data passes: boundary outflow sum z h matches sum f h^2 = 1.
  BoundarySpec balanced = bc;
  for (int j = 0; j < 4; ++j) {
    balanced.set(grid.x_edge_id(0, j), BcKind::Neumann, 1.0);
  }
  CHECK_NOTHROW(make_darcy_problem(grid, perm, f, balanced));
}
