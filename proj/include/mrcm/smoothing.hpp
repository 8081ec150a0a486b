#pragma once

#include <memory>
#include <vector>

#include "mrcm/decomposition.hpp"
#include "mrcm/local_system.hpp"
#include "mrcm/solver.hpp"
#include "mrcm/spaces.hpp"

namespace mrcm {

/// Colored Robin smoothing of a composite solution: per sweep, colors
/// are processed in ascending id; within a color every oversampled box
/// is re-solved with full problem data and Robin values extracted from
/// the pre-color state, then all restrictions are committed at once.
///
/// The per-box factorizations are cached at construction. When the
/// interface spaces were built on the same boxes with the same alpha
/// (the alpha = 1 reuse case), their factorizations are borrowed
/// instead of recomputed.
class Smoother {
 public:
  Smoother(const DarcyProblem& problem, const OversampledPartition& op,
           double alpha = 1.0,
           const std::vector<InformedSpace>* reuse = nullptr);

  /// Robin data on the oversampled-box boundary away from the domain
  /// boundary, extracted from the current composite state:
  /// value = -beta * u.n_out + pi with the neighbor's flux and pressure
  /// trace, beta = alpha * H / K_H.
  darcy::RobinData gather_robin_data(const MultiscaleSolution& state,
                                     int sub) const;

  void sweep(MultiscaleSolution& state) const;

  /// Sweep with explicit per-color processing orders (each a permutation
  /// of that color's subdomains); the result does not depend on the
  /// order since boxes of one color read only the pre-color state.
  void sweep(MultiscaleSolution& state,
             const std::vector<std::vector<int>>& color_order) const;

  const LocalSystem& system(int sub) const { return *systems_[sub]; }
  bool reused_factorizations() const { return reused_; }

 private:
  const DarcyProblem& problem_;
  const OversampledPartition& op_;
  double alpha_;
  std::vector<std::shared_ptr<const LocalSystem>> systems_;
  std::vector<std::vector<int>> by_color_;
  bool reused_ = false;
};

/// Applies steps smoothing sweeps; steps = 0 returns the input
/// unchanged. reuse may pass the interface spaces of the solve that
/// produced the solution for factorization sharing.
MultiscaleSolution smooth(const MultiscaleSolution& solution, int steps,
                          const DarcyProblem& problem,
                          const OversampledPartition& op,
                          const std::vector<InformedSpace>* reuse = nullptr,
                          double alpha = 1.0);

}  // namespace mrcm
