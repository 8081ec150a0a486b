#pragma once

#include <Eigen/Dense>
#include <optional>
#include <vector>

#include "mrcm/darcy.hpp"
#include "mrcm/decomposition.hpp"
#include "mrcm/local_system.hpp"
#include "mrcm/spaces.hpp"

namespace mrcm {

/// Local solution carrying the problem data (source, boundary values)
/// with zero Robin data on the interface. u is box-indexed in parent
/// grid orientation.
struct BarSolution {
  CellField p;
  EdgeField u;
};

BarSolution compute_bar(const DarcyProblem& problem, const Partition& part,
                        int sub, double alpha);

std::vector<BarSolution> compute_bars(const DarcyProblem& problem,
                                      const Partition& part, double alpha);

/// Dense interface system in the basis coefficients. Rows are all flux
/// continuity tests (M) followed by all Robin continuity tests (V);
/// columns are (subdomain, basis function) blocks in the order given by
/// column_order (natural id order by default).
struct InterfaceSystem {
  Eigen::MatrixXd matrix;
  Eigen::VectorXd rhs;
  std::vector<int> col_offset;   ///< per subdomain id
  std::vector<int> order;        ///< subdomain ids in column order
  int dim_m = 0;
  int dim_v = 0;
  bool expect_singular = false;  ///< pure-Neumann problem: constant-trace mode
};

InterfaceSystem assemble_interface(
    const DarcyProblem& problem, const Partition& part, const TestSpace& tests,
    const std::vector<InformedSpace>& spaces,
    const std::vector<BarSolution>& bars, double alpha,
    const std::vector<int>* column_order = nullptr);

/// Direct dense solve. Pure-Neumann problems are solved in the
/// minimum-norm sense after verifying that the rank deficiency is at
/// most one (the constant-trace mode); a larger deficiency reports
/// ill-posed interface spaces.
Eigen::VectorXd solve_interface(const InterfaceSystem& sys);

struct SubdomainFields {
  CellField p;  ///< cells of the subdomain box
  EdgeField u;  ///< edges of the subdomain box, parent grid orientation
};

/// Composite multiscale solution, stored per subdomain. Skeleton edges
/// carry one one-sided value in each adjacent subdomain's field.
struct MultiscaleSolution {
  std::vector<SubdomainFields> sub;
  Eigen::VectorXd coefficients;
  SpaceKind kind = SpaceKind::Informed;
  int d = 0;
  int l = 0;
  int smoothing_steps = 0;
  double alpha = 1.0;
  bool mean_shifted = false;
};

MultiscaleSolution reconstruct(const DarcyProblem& problem,
                               const Partition& part,
                               const std::vector<InformedSpace>& spaces,
                               const std::vector<BarSolution>& bars,
                               const Eigen::VectorXd& coefficients);

struct PhaseTimings {
  double spaces_ms = 0.0;
  double bars_ms = 0.0;
  double interface_ms = 0.0;
  double smoothing_ms = 0.0;
};

/// Everything one multiscale solve produces; spaces are kept for
/// factorization reuse by the smoother.
struct MrcmRun {
  std::vector<InformedSpace> spaces;
  std::vector<BarSolution> bars;
  MultiscaleSolution solution;
  PhaseTimings timings;
};

/// Full pipeline: spaces, bar solutions, interface system, solve,
/// reconstruction. For SpaceKind::Informed, op supplies the
/// oversampling boxes (op.l = 0 reproduces the polynomial method).
MrcmRun run_mrcm(const DarcyProblem& problem, const OversampledPartition& op,
                 SpaceKind kind, int d, double alpha);

/// Full fine-scale interface spaces: one indicator per skeleton edge on
/// both the test and trace sides. The composite solution coincides with
/// the non-decomposed fine-grid solve.
MrcmRun solve_full_fine(const DarcyProblem& problem, const Partition& part,
                        double alpha);

/// Residuals of the weak continuity functionals evaluated on a
/// reconstructed solution, with the largest absolute-sum row magnitude
/// as scale.
struct ContinuityResiduals {
  double flux = 0.0;
  double robin = 0.0;
  double scale = 1.0;
};

ContinuityResiduals weak_continuity_residuals(
    const DarcyProblem& problem, const Partition& part, const TestSpace& tests,
    const std::vector<InformedSpace>& spaces, const MultiscaleSolution& sol,
    double alpha);

/// Largest per-cell flux-balance defect of the composite solution over
/// all subdomains, relative to max(1, |f| h^2 + sum |u| h) per cell.
double conservation_defect(const DarcyProblem& problem, const Partition& part,
                           const MultiscaleSolution& sol);

/// Restriction of a fine-grid solution to the partition's subdomain
/// boxes (skeleton edges get the same value on both sides).
MultiscaleSolution restrict_fine(const DarcyProblem& problem,
                                 const Partition& part,
                                 const darcy::FineSolution& fine);

}  // namespace mrcm
