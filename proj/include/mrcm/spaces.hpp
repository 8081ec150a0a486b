#pragma once

#include <memory>
#include <vector>

#include "mrcm/decomposition.hpp"
#include "mrcm/local_system.hpp"
#include "mrcm/mesh.hpp"
#include "mrcm/problem.hpp"

namespace mrcm {

/// One continuity test function on the skeleton: midpoint values on an
/// ordered set of fine edges, zero elsewhere.
struct TestFunction {
  int face = -1;  ///< owning coarse face, -1 for fine-edge indicators
  std::vector<int> edges;
  std::vector<double> values;
};

/// Test space on the skeleton. The same structure serves both the flux
/// continuity tests (M_H) and the Robin/pressure continuity tests (V_H),
/// which share dimension and basis by construction.
struct TestSpace {
  std::vector<TestFunction> fns;
  int dim() const { return static_cast<int>(fns.size()); }
};

/// Per-face polynomial modes: constant 1 and, for d = 2, the linear
/// mode (s - s_mid) / (L/2) in arclength, which sums to zero over the
/// face. Test functions are face-major, mode-minor (constant first).
TestSpace build_face_spaces(const Partition& part, int d);

/// One indicator per skeleton fine edge (full fine-scale test space).
TestSpace fine_indicator_space(const Partition& part);

enum class SpaceKind : std::uint8_t {
  Informed,       ///< traces of oversampled solves (width l)
  Polynomial,     ///< face polynomials taken directly as Robin traces
  FineIndicator,  ///< one indicator per fine edge of the interface
};

const char* space_kind_name(SpaceKind k);

/// Robin-trace basis of one subdomain plus the cached local solutions
/// (flux and pressure restricted to the subdomain box) that realize it.
/// Edge fields are indexed by the subdomain box's local edges; fluxes
/// are stored in the parent grid orientation.
struct InformedSpace {
  int sub = -1;
  int n = 0;
  int d = 0;
  int l = 0;
  double alpha = 1.0;
  SpaceKind kind = SpaceKind::Informed;
  std::vector<EdgeField> phi;       ///< Robin traces on the interface edges
  std::vector<EdgeField> flux;      ///< solution fluxes per basis function
  std::vector<CellField> pressure;  ///< solution pressures per basis function
  /// System the basis was solved on (the oversampled box for Informed,
  /// the subdomain box otherwise); kept for factorization reuse.
  std::shared_ptr<const LocalSystem> system;
};

/// Robin data values of one interface-space mode on the boundary of the
/// oversampled box: supported on the full box side facing coarse face f,
/// zero on the other sides. mode 0 is the constant 1; mode 1 is the
/// linear ramp over the whole side.
std::vector<double> build_lambda_data(const Partition& part,
                                      const BoxRegion& hat, int sub, int face,
                                      int mode);

InformedSpace build_informed_space(const DarcyProblem& problem,
                                   const Partition& part,
                                   const OversampledPartition& op, int sub,
                                   int d, double alpha);

InformedSpace build_polynomial_space(const DarcyProblem& problem,
                                     const Partition& part, int sub, int d,
                                     double alpha);

InformedSpace build_fine_space(const DarcyProblem& problem,
                               const Partition& part, int sub, double alpha);

/// Builds the per-subdomain spaces of one kind, in parallel.
std::vector<InformedSpace> build_spaces(const DarcyProblem& problem,
                                        const Partition& part,
                                        const OversampledPartition* op,
                                        SpaceKind kind, int d, double alpha);

}  // namespace mrcm
