#include <doctest.h>

#include <Eigen/Dense>
#include <cmath>

#include "mrcm/spaces.hpp"
#include "test_support.hpp"

using namespace mrcm;

namespace {

// phi matrix of one subdomain space restricted to its interface edges.
Eigen::MatrixXd phi_matrix(const Partition& part, const InformedSpace& space) {
  std::vector<int> gamma;
  for (int f : part.faces_of[space.sub]) {
    for (int ge : part.faces[f].edges) {
      gamma.push_back(part.subdomains[space.sub].local_edge(ge));
    }
  }
  Eigen::MatrixXd m(gamma.size(), space.n);
  for (int k = 0; k < space.n; ++k) {
    for (std::size_t r = 0; r < gamma.size(); ++r) {
      m(r, k) = space.phi[k][gamma[r]];
    }
  }
  return m;
}

double subspace_residual(const Eigen::MatrixXd& basis,
                         const Eigen::MatrixXd& targets) {
  // Largest relative least-squares residual of any target column.
  double worst = 0.0;
  const auto qr = basis.colPivHouseholderQr();
  for (int c = 0; c < targets.cols(); ++c) {
    const Eigen::VectorXd t = targets.col(c);
    const Eigen::VectorXd r = basis * qr.solve(t) - t;
    worst = std::max(worst, r.norm() / std::max(t.norm(), 1e-300));
  }
  return worst;
}

}  // namespace

TEST_CASE("face test spaces: dimensions and linear modes") {
  const Grid g = build_grid(8, 8, 0.125);
  const Partition p = build_partition(g, 2, 2);
  const TestSpace d1 = build_face_spaces(p, 1);
  CHECK(d1.dim() == 4);

  for (int M : {2, 3}) {
    const Grid gm = build_grid(6 * M, 6 * M, 1.0);
    const Partition pm = build_partition(gm, M, M);
    const TestSpace d2 = build_face_spaces(pm, 2);
    CHECK(d2.dim() == 4 * M * (M - 1));
  }

  const TestSpace d2 = build_face_spaces(p, 2);
  for (int t = 0; t < d2.dim(); ++t) {
    if (t % 2 == 1) {  // linear mode
      double sum = 0.0;
      for (double v : d2.fns[t].values) sum += v;
      CHECK(std::abs(sum) <= 1e-14);
    } else {
      for (double v : d2.fns[t].values) CHECK(v == 1.0);
    }
  }
  CHECK_THROWS_AS(build_face_spaces(p, 3), std::invalid_argument);
}

TEST_CASE("oversampled boundary data placement") {
  const Grid g = build_grid(18, 18, 1.0 / 18.0);
  const Partition p = build_partition(g, 3, 3);

  SUBCASE("zero overlap: indicator of the face itself") {
    const OversampledPartition op = oversample(p, 0);
    const int sub = 4;
    const int face = p.faces_of[sub][0];
    const auto values = build_lambda_data(p, op.hats[sub], sub, face, 0);
    const BoxRegion& box = p.subdomains[sub];
    int nonzero = 0;
    for (double v : values) nonzero += v != 0.0;
    CHECK(nonzero == static_cast<int>(p.faces[face].edges.size()));
    for (int ge : p.faces[face].edges) {
      CHECK(values[box.local_edge(ge)] == 1.0);
    }
  }
  SUBCASE("wide support spans the full grown side") {
    const OversampledPartition op = oversample(p, 2);
    const int sub = 4;  // interior: hat is 10x10
    for (int f : p.faces_of[sub]) {
      const auto values = build_lambda_data(p, op.hats[sub], sub, f, 0);
      int nonzero = 0;
      for (double v : values) nonzero += v != 0.0;
      CHECK(nonzero == 10);
    }
  }
  SUBCASE("linear mode sums to zero over the side") {
    const OversampledPartition op = oversample(p, 2);
    const auto values =
        build_lambda_data(p, op.hats[4], 4, p.faces_of[4][1], 1);
    double sum = 0.0;
    for (double v : values) sum += v;
    CHECK(std::abs(sum) <= 1e-14);
  }
  SUBCASE("face not on the subdomain") {
    const OversampledPartition op = oversample(p, 1);
    // Face between 0 and 1 is not on subdomain 8.
    CHECK_THROWS_AS(build_lambda_data(p, op.hats[8], 8, 0, 0),
                    std::invalid_argument);
  }
}

TEST_CASE("informed space dimensions satisfy the counting identity") {
  const PermField perm = testing::random_perm(12, 12, 3u, -2.0, 2.0);
  const DarcyProblem prob = testing::pressure_drop_problem(perm, 1.0 / 12.0);
  const Partition part = build_partition(prob.grid, 3, 3);
  const OversampledPartition op = oversample(part, 1);
  for (int d : {1, 2}) {
    const auto spaces =
        build_spaces(prob, part, &op, SpaceKind::Informed, d, 1.0);
    int total = 0;
    for (const auto& s : spaces) {
      CHECK(s.n == d * static_cast<int>(part.faces_of[s.sub].size()));
      total += s.n;
    }
    const TestSpace tests = build_face_spaces(part, d);
    CHECK(total == 2 * tests.dim());
  }
  // Interior subdomain of a piecewise-constant space has four modes.
  const auto spaces =
      build_spaces(prob, part, &op, SpaceKind::Informed, 1, 1.0);
  CHECK(spaces[4].n == 4);
}

TEST_CASE("zero overlap reproduces the polynomial trace space") {
  const PermField perm = testing::random_perm(12, 12, 19u, -1.5, 1.5);
  const DarcyProblem prob = testing::pressure_drop_problem(perm, 1.0 / 12.0);
  const Partition part = build_partition(prob.grid, 3, 3);
  const OversampledPartition op = oversample(part, 0);
  for (int d : {1, 2}) {
    for (double alpha : {1e-4, 1.0, 1e4}) {
      const auto informed =
          build_spaces(prob, part, &op, SpaceKind::Informed, d, alpha);
      const auto poly =
          build_spaces(prob, part, nullptr, SpaceKind::Polynomial, d, alpha);
      for (int s = 0; s < part.count(); ++s) {
        const Eigen::MatrixXd a = phi_matrix(part, informed[s]);
        const Eigen::MatrixXd b = phi_matrix(part, poly[s]);
        CHECK(subspace_residual(a, b) <= 1e-12);
        CHECK(subspace_residual(b, a) <= 1e-12);
        // Pointwise the traces equal the polynomial data.
        CHECK((a - b).cwiseAbs().maxCoeff() <=
              1e-12 * std::max(1.0, b.cwiseAbs().maxCoeff()));
      }
    }
  }
}

TEST_CASE("each trace is a fixed point of the local solve-and-extract map") {
  const PermField perm = testing::random_perm(12, 12, 29u, -2.0, 2.0);
  const DarcyProblem prob = testing::pressure_drop_problem(perm, 1.0 / 12.0);
  const Partition part = build_partition(prob.grid, 3, 3);
  const OversampledPartition op = oversample(part, 1);
  const double alpha = 1.0;
  const auto spaces =
      build_spaces(prob, part, &op, SpaceKind::Informed, 2, alpha);

  for (int s = 0; s < part.count(); ++s) {
    const BoxRegion& box = part.subdomains[s];
    const LocalSystem ls = make_local_system(prob, part, box, alpha);
    for (int k = 0; k < spaces[s].n; ++k) {
      // Solve the subdomain problem with the extracted trace as data.
      std::vector<double> values = ls.base_values();
      for (int e = 0; e < ls.region.edge_count(); ++e) {
        if (ls.robin.active[e]) values[e] = spaces[s].phi[k][e];
      }
      const LocalSolve sol = solve_local(ls, CellField(box.cell_count(), 0.0),
                                         values);
      EdgeField u_global = sol.u;
      darcy::apply_global_orientation(box, u_global);

      double sup_phi = 0.0, dev_phi = 0.0;
      double sup_u = 0.0, dev_u = 0.0, dev_p = 0.0, sup_p = 0.0;
      for (int f : part.faces_of[s]) {
        for (int ge : part.faces[f].edges) {
          const int le = box.local_edge(ge);
          const double beta = alpha * part.H / prob.k_edge[ge];
          const double u_out = u_global[le] * part.skeleton_sign(ge, s);
          const double pi = darcy::edge_pressure_trace(ls.sys, le, sol.p,
                                                       sol.u, ls.k_cell,
                                                       values);
          const double phi = -beta * u_out + pi;
          sup_phi = std::max(sup_phi, std::abs(spaces[s].phi[k][le]));
          dev_phi = std::max(dev_phi,
                             std::abs(phi - spaces[s].phi[k][le]));
        }
      }
      // The cached local fields are the restriction of the wide solve.
      for (std::size_t e = 0; e < u_global.size(); ++e) {
        sup_u = std::max(sup_u, std::abs(spaces[s].flux[k][e]));
        dev_u = std::max(dev_u, std::abs(u_global[e] - spaces[s].flux[k][e]));
      }
      for (std::size_t c = 0; c < sol.p.size(); ++c) {
        sup_p = std::max(sup_p, std::abs(spaces[s].pressure[k][c]));
        dev_p = std::max(dev_p, std::abs(sol.p[c] - spaces[s].pressure[k][c]));
      }
      CHECK(dev_phi <= 1e-10 * std::max(1.0, sup_phi));
      CHECK(dev_u <= 1e-10 * std::max(1.0, sup_u));
      CHECK(dev_p <= 1e-10 * std::max(1.0, sup_p));
    }
  }
}

TEST_CASE("constant-mode traces vary but keep their sign") {
  // Uniform permeability, interior subdomain, wide overlap.
  PermField perm = make_perm_field(18, 18, std::vector<double>(324, 1.0));
  const DarcyProblem prob = testing::pressure_drop_problem(std::move(perm),
                                                           1.0 / 18.0);
  const Partition part = build_partition(prob.grid, 3, 3);
  const OversampledPartition op = oversample(part, 2);
  const InformedSpace space = build_informed_space(prob, part, op, 4, 1, 1.0);
  const BoxRegion& box = part.subdomains[4];
  for (int k = 0; k < space.n; ++k) {
    const int face = part.faces_of[4][k];
    double lo = 1e300, hi = -1e300;
    for (int ge : part.faces[face].edges) {
      const double v = space.phi[k][box.local_edge(ge)];
      lo = std::min(lo, v);
      hi = std::max(hi, v);
    }
    CHECK(lo > 0.0);        // sign of the unit boundary datum preserved
    CHECK(hi - lo > 1e-6);  // genuinely varies along the interface
  }
}

TEST_CASE("fine indicator spaces count the interface edges") {
  const PermField perm = testing::random_perm(8, 8, 41u, -1.0, 1.0);
  const DarcyProblem prob = testing::pressure_drop_problem(perm, 0.125);
  const Partition part = build_partition(prob.grid, 2, 2);
  const auto spaces =
      build_spaces(prob, part, nullptr, SpaceKind::FineIndicator, 0, 1.0);
  int total = 0;
  for (const auto& s : spaces) total += s.n;
  CHECK(total == 2 * static_cast<int>(part.skeleton.size()));
  const TestSpace tests = fine_indicator_space(part);
  CHECK(tests.dim() == static_cast<int>(part.skeleton.size()));
}
