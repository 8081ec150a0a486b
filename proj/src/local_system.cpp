#include "mrcm/local_system.hpp"

#include <stdexcept>

namespace mrcm {

std::vector<double> LocalSystem::base_values() const {
  std::vector<double> values(region.edge_count(), 0.0);
  for (int e = 0; e < region.edge_count(); ++e) {
    if (bc.kind[e] != BcKind::None) values[e] = bc.value[e];
  }
  return values;
}

LocalSystem make_local_system(const DarcyProblem& problem,
                              const Partition& part, const BoxRegion& box,
                              double alpha) {
  if (!(alpha > 0.0)) {
    throw std::invalid_argument("make_local_system: alpha must be positive");
  }
  const Grid& grid = problem.grid;
  LocalSystem ls;
  ls.box = box;
  ls.region = box.local_grid();
  ls.alpha = alpha;

  ls.k_cell.resize(box.cell_count());
  ls.source.resize(box.cell_count());
  for (int c = 0; c < box.cell_count(); ++c) {
    const int gc = box.global_cell(c);
    ls.k_cell[c] = problem.perm.at(gc);
    ls.source[c] = problem.source[gc];
  }

  ls.k_edge.resize(ls.region.edge_count());
  ls.bc = BoundarySpec::empty(ls.region);
  ls.robin = darcy::RobinData::none(ls.region);
  for (int e = 0; e < ls.region.edge_count(); ++e) {
    const int ge = box.global_edge(e);
    ls.k_edge[e] = problem.k_edge[ge];
    if (!ls.region.edge_on_boundary(e)) continue;
    if (grid.edge_on_boundary(ge)) {
      // Clipped sides coincide with the domain boundary and inherit the
      // global tags; the edge normals agree there.
      ls.bc.set(e, problem.bc.kind[ge], problem.bc.value[ge]);
    } else {
      ls.robin.set(e, alpha * part.H / problem.k_edge[ge], 0.0);
    }
  }

  ls.sys = darcy::assemble(ls.region, ls.k_cell, ls.k_edge, ls.bc, ls.robin);
  ls.fact = std::make_shared<const darcy::Factorization>(ls.sys);
  return ls;
}

LocalSolve solve_local(const LocalSystem& ls, const CellField& f,
                       const std::vector<double>& boundary_values) {
  CellField rhs = darcy::build_rhs(ls.sys, f, boundary_values);
  CellField p = ls.fact->solve(rhs);
  EdgeField u = darcy::recover_fluxes(ls.sys, p, ls.k_edge, boundary_values);
  return LocalSolve{std::move(p), std::move(u)};
}

}  // namespace mrcm
