#pragma once

#include <Eigen/Sparse>
#include <Eigen/SparseCholesky>
#include <memory>
#include <vector>

#include "mrcm/mesh.hpp"
#include "mrcm/problem.hpp"

namespace mrcm::darcy {

/// Robin closure data on a subset of a region's boundary edges:
/// -beta * u.n_out + p = value at the edge, with n_out the outward
/// normal of the region. beta = 0 degenerates to a Dirichlet condition.
struct RobinData {
  std::vector<std::uint8_t> active;
  std::vector<double> beta;
  std::vector<double> value;

  static RobinData none(const Grid& g) {
    return RobinData{std::vector<std::uint8_t>(g.edge_count(), 0),
                     std::vector<double>(g.edge_count(), 0.0),
                     std::vector<double>(g.edge_count(), 0.0)};
  }
  void set(int edge, double b, double v) {
    active[edge] = 1;
    beta[edge] = b;
    value[edge] = v;
  }
};

/// Closure kind resolved per edge at assembly time.
enum class Closure : std::uint8_t { Interior, Dirichlet, Neumann, Robin };

/// Cell-centered two-point-flux system over one region. The matrix is
/// symmetric positive (semi)definite in the cell pressures; each row is
/// the flux balance of one cell scaled so it reads
/// (sum of outward edge fluxes) * h = f * h^2.
///
/// Immutable after assembly; shareable across threads.
struct AssembledSystem {
  Grid region;
  Eigen::SparseMatrix<double> matrix;
  std::vector<Closure> closure;     ///< per edge
  std::vector<double> closure_coef; ///< h / (beta + h/(2 K_cell)) on D/R edges
  std::vector<double> bc_value;     ///< data captured at assembly (g, z, g_R)
  bool pure_neumann = false;        ///< no Dirichlet/Robin closure anywhere
};

/// Assembles the system. Every boundary edge of the region must carry
/// exactly one of Dirichlet/Neumann (from bc) or Robin (from robin).
/// k_edge supplies interior-edge transmissibilities (harmonic averages,
/// possibly restricted from an enclosing grid); k_cell supplies the
/// half-cell coefficient of the Dirichlet/Robin closure.
AssembledSystem assemble(const Grid& region, const CellField& k_cell,
                         const EdgeField& k_edge, const BoundarySpec& bc,
                         const RobinData& robin);

/// Right-hand side for the assembled system with fresh data values:
/// f may be empty (treated as zero); boundary_values carries per-edge
/// data (g, z, or g_R) for every non-interior edge.
CellField build_rhs(const AssembledSystem& sys, const CellField& f,
                    const std::vector<double>& boundary_values);

/// Right-hand side using the data captured at assembly time.
CellField build_rhs(const AssembledSystem& sys, const CellField& f);

/// Reusable LDL^T factorization. For pure-Neumann systems the
/// constructor (with constrain = true) pins one pressure dof and solves
/// return zero-mean fields; constrain = false rejects singular systems.
class Factorization {
 public:
  explicit Factorization(const AssembledSystem& sys, bool constrain = true);

  CellField solve(const CellField& rhs) const;
  bool pinned() const { return pinned_; }

 private:
  Eigen::SimplicialLDLT<Eigen::SparseMatrix<double>> ldlt_;
  bool pinned_ = false;
  int n_ = 0;
};

inline Factorization factorize(const AssembledSystem& sys,
                               bool constrain = true) {
  return Factorization(sys, constrain);
}

inline CellField solve(const Factorization& fact, const CellField& rhs) {
  return fact.solve(rhs);
}

/// Edge fluxes u.n of a solved pressure field, with respect to the
/// region's own edge normals (axis-positive interior, outward on the
/// region boundary). Neumann edges return their data exactly;
/// Dirichlet/Robin edges use the closure formula.
EdgeField recover_fluxes(const AssembledSystem& sys, const CellField& p,
                         const EdgeField& k_edge,
                         const std::vector<double>& boundary_values);

EdgeField recover_fluxes(const AssembledSystem& sys, const CellField& p,
                         const EdgeField& k_edge);

/// Pressure trace at one edge of a solved region. Interior edges take
/// the K-weighted two-cell average (equal to the one-sided two-point
/// reconstruction from either side); Dirichlet edges return g, Robin
/// edges g_R + beta * u.n_out. Neumann edges have no trace and throw.
/// u must be in the region's own orientation (recover_fluxes output);
/// boundary_values must be the data the solve used.
double edge_pressure_trace(const AssembledSystem& sys, int edge,
                           const CellField& p, const EdgeField& u,
                           const CellField& k_cell,
                           const std::vector<double>& boundary_values);

double edge_pressure_trace(const AssembledSystem& sys, int edge,
                           const CellField& p, const EdgeField& u,
                           const CellField& k_cell);

/// K-weighted interface trace between two cells.
inline double interior_trace(double p_left, double p_right, double k_left,
                             double k_right) {
  return (k_left * p_left + k_right * p_right) / (k_left + k_right);
}

/// One-sided trace reconstruction: p at distance h/2 behind an edge with
/// outward flux u_out.
inline double one_sided_trace(double p_cell, double u_out, double k_cell,
                              double h) {
  return p_cell - u_out * h / (2.0 * k_cell);
}

/// Converts a region-oriented edge field (recover_fluxes output on a
/// box) to the parent grid's edge orientation, in place. Involution.
void apply_global_orientation(const BoxRegion& box, EdgeField& field);

/// Reference solution on the problem's own grid.
struct FineSolution {
  CellField p;
  EdgeField u;  ///< grid orientation
  bool mean_shifted = false;
};

FineSolution solve_fine(const DarcyProblem& problem);

}  // namespace mrcm::darcy
