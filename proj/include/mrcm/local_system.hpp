#pragma once

#include <memory>

#include "mrcm/darcy.hpp"
#include "mrcm/decomposition.hpp"
#include "mrcm/mesh.hpp"
#include "mrcm/problem.hpp"

namespace mrcm {

/// One subdomain- or oversampling-box problem, assembled and factorized
/// once and reused across right-hand sides. Boundary edges of the box
/// that lie on the domain boundary inherit the global condition kinds
/// and values; all other boundary edges carry a Robin closure with
/// beta = alpha * H / K_H (harmonic average across the edge) and a zero
/// default value.
struct LocalSystem {
  BoxRegion box;
  Grid region;
  CellField k_cell;
  EdgeField k_edge;
  CellField source;
  BoundarySpec bc;
  darcy::RobinData robin;
  darcy::AssembledSystem sys;
  std::shared_ptr<const darcy::Factorization> fact;
  double alpha = 1.0;

  /// Data vector for build_rhs with the problem's own boundary values
  /// and zero Robin data.
  std::vector<double> base_values() const;
};

LocalSystem make_local_system(const DarcyProblem& problem,
                              const Partition& part, const BoxRegion& box,
                              double alpha);

/// Solution of one local problem; u is in the box's own orientation
/// as produced by darcy::recover_fluxes.
struct LocalSolve {
  CellField p;
  EdgeField u;
};

LocalSolve solve_local(const LocalSystem& ls, const CellField& f,
                       const std::vector<double>& boundary_values);

}  // namespace mrcm
