#pragma once

#include <string>
#include <vector>

#include "mrcm/darcy.hpp"
#include "mrcm/decomposition.hpp"
#include "mrcm/solver.hpp"

namespace mrcm {

enum class ReferenceKind : std::uint8_t { Analytic, FineGrid };

/// Discrete L2 errors of one solution against a reference.
struct ErrorReport {
  double p_abs = 0.0;
  double p_rel = 0.0;
  double u_abs = 0.0;
  double u_rel = 0.0;
  bool mean_adjusted = false;
  ReferenceKind reference = ReferenceKind::FineGrid;
};

/// Pressure error sqrt(sum (p - ref)^2 h^2) over the tiling; with
/// mean_adjust both fields are shifted to zero mean first. The
/// reference norm must be positive for the relative error.
std::pair<double, double> l2_pressure_error(const Partition& part,
                                            const MultiscaleSolution& sol,
                                            const CellField& ref,
                                            bool mean_adjust);

std::pair<double, double> l2_pressure_error(const Grid& grid,
                                            const CellField& p,
                                            const CellField& ref,
                                            bool mean_adjust);

/// Flux error with edge weights h^2, halved for each of the two
/// one-sided values on skeleton edges. ref holds one value per parent
/// grid edge (parent orientation).
std::pair<double, double> l2_flux_error(const Partition& part,
                                        const MultiscaleSolution& sol,
                                        const EdgeField& ref);

std::pair<double, double> l2_flux_error(const Grid& grid, const EdgeField& u,
                                        const EdgeField& ref);

ErrorReport compare_to_reference(const Partition& part,
                                 const MultiscaleSolution& sol,
                                 const CellField& p_ref, const EdgeField& u_ref,
                                 bool mean_adjust, ReferenceKind kind);

/// Exact fields sampled at cell centers / edge midpoints with the grid's
/// edge-normal convention.
CellField sample_exact_pressure(const Grid& grid, const ExactSolution& exact);
EdgeField sample_exact_flux(const Grid& grid, const ExactSolution& exact);

/// Composite pressure gathered onto the parent grid.
CellField composite_pressure(const Partition& part,
                             const MultiscaleSolution& sol);

/// Signed flux jumps u_i.n_i + u_j.n_j per fine edge along a straight
/// line of coarse faces (the conservation defect across the interface).
std::vector<double> flux_jump_profile(const Partition& part,
                                      const MultiscaleSolution& sol,
                                      const std::vector<int>& face_path);

/// Longest straight horizontal run of coarse faces (lowest if tied);
/// empty when the partition has no horizontal faces.
std::vector<int> default_jump_path(const Partition& part);

/// Least-squares slope of log err against log h.
double convergence_slope(const std::vector<std::pair<double, double>>& pairs);

}  // namespace mrcm
