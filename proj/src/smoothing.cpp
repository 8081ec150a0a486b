#include "mrcm/smoothing.hpp"

#include <algorithm>
#include <stdexcept>
#include <string>

#include "mrcm/worker_pool.hpp"

namespace mrcm {

Smoother::Smoother(const DarcyProblem& problem, const OversampledPartition& op,
                   double alpha, const std::vector<InformedSpace>* reuse)
    : problem_(problem), op_(op), alpha_(alpha) {
  const Partition& part = op.base;
  systems_.resize(part.count());

  const bool can_reuse =
      reuse && static_cast<int>(reuse->size()) == part.count() &&
      std::all_of(reuse->begin(), reuse->end(), [&](const InformedSpace& s) {
        return s.kind == SpaceKind::Informed && s.l == op.l &&
               s.alpha == alpha && s.system != nullptr;
      });
  if (can_reuse) {
    for (int s = 0; s < part.count(); ++s) systems_[s] = (*reuse)[s].system;
    reused_ = true;
  } else {
    parallel_for(part.count(), [&](std::size_t i) {
      systems_[i] = std::make_shared<const LocalSystem>(
          make_local_system(problem, part, op.hats[i], alpha));
    });
  }

  by_color_.resize(4);
  for (int s = 0; s < part.count(); ++s) by_color_[op.color[s]].push_back(s);
}

darcy::RobinData Smoother::gather_robin_data(const MultiscaleSolution& state,
                                             int sub) const {
  const Grid& grid = problem_.grid;
  const Partition& part = op_.base;
  const BoxRegion& hat = op_.hats[sub];
  const Grid local = hat.local_grid();

  darcy::RobinData robin = darcy::RobinData::none(local);
  for (int e = 0; e < local.edge_count(); ++e) {
    if (!local.edge_on_boundary(e)) continue;
    const int ge = hat.global_edge(e);
    if (grid.edge_on_boundary(ge)) continue;

    const auto [ca, cb] = grid.edge_cells(ge);
    const int oa = part.cell_owner[ca];
    const int ob = part.cell_owner[cb];
    int j;
    if (oa == ob) {
      j = oa;
    } else {
      j = oa == sub ? ob : (ob == sub ? oa : -1);
    }
    if (j < 0 || j == sub) {
      throw std::logic_error("gather_robin_data: boundary edge " +
                             std::to_string(ge) +
                             " is not covered by a neighbor of subdomain " +
                             std::to_string(sub));
    }

    const BoxRegion& nbox = part.subdomains[j];
    const int lej = nbox.local_edge(ge);
    const double u_global = state.sub[j].u[lej];
    double pi;
    if (oa == ob) {
      pi = darcy::interior_trace(state.sub[j].p[nbox.local_cell(ca)],
                                 state.sub[j].p[nbox.local_cell(cb)],
                                 problem_.perm.at(ca), problem_.perm.at(cb));
    } else {
      const int cj = oa == j ? ca : cb;
      const double u_out_j = u_global * part.skeleton_sign(ge, j);
      pi = darcy::one_sided_trace(state.sub[j].p[nbox.local_cell(cj)], u_out_j,
                                  problem_.perm.at(cj), grid.h);
    }
    const double beta = alpha_ * part.H / problem_.k_edge[ge];
    const double u_out_hat = u_global * hat.edge_sign(e);
    robin.set(e, beta, -beta * u_out_hat + pi);
  }
  return robin;
}

void Smoother::sweep(MultiscaleSolution& state) const {
  sweep(state, by_color_);
}

void Smoother::sweep(MultiscaleSolution& state,
                     const std::vector<std::vector<int>>& color_order) const {
  const Partition& part = op_.base;
  if (color_order.size() != by_color_.size()) {
    throw std::invalid_argument("sweep: need one id list per color");
  }
  for (std::size_t color = 0; color < color_order.size(); ++color) {
    auto sorted = color_order[color];
    std::sort(sorted.begin(), sorted.end());
    if (sorted != by_color_[color]) {
      throw std::invalid_argument(
          "sweep: order list is not a permutation of color " +
          std::to_string(color));
    }
  }

  for (const auto& ids : color_order) {
    std::vector<SubdomainFields> staged(ids.size());
    // Solve every box of the color from the pre-color state, then
    // commit all restrictions at once.
    parallel_for(ids.size(), [&](std::size_t idx) {
      const int sub = ids[idx];
      const LocalSystem& ls = *systems_[sub];
      const darcy::RobinData robin = gather_robin_data(state, sub);
      std::vector<double> values = ls.base_values();
      for (int e = 0; e < ls.region.edge_count(); ++e) {
        if (robin.active[e]) values[e] = robin.value[e];
      }
      LocalSolve sol = solve_local(ls, ls.source, values);
      EdgeField u_global = sol.u;
      darcy::apply_global_orientation(ls.box, u_global);

      const BoxRegion& box = part.subdomains[sub];
      const Grid local = box.local_grid();
      SubdomainFields fields;
      fields.p.resize(box.cell_count());
      fields.u.resize(local.edge_count());
      for (int c = 0; c < box.cell_count(); ++c) {
        fields.p[c] = sol.p[ls.box.local_cell(box.global_cell(c))];
      }
      for (int e = 0; e < local.edge_count(); ++e) {
        fields.u[e] = u_global[ls.box.local_edge(box.global_edge(e))];
      }
      staged[idx] = std::move(fields);
    });
    for (std::size_t idx = 0; idx < ids.size(); ++idx) {
      state.sub[ids[idx]] = std::move(staged[idx]);
    }
  }
  state.smoothing_steps += 1;
}

MultiscaleSolution smooth(const MultiscaleSolution& solution, int steps,
                          const DarcyProblem& problem,
                          const OversampledPartition& op,
                          const std::vector<InformedSpace>* reuse,
                          double alpha) {
  if (steps < 0) throw std::invalid_argument("smooth: steps must be >= 0");
  MultiscaleSolution out = solution;
  if (steps == 0) return out;
  Smoother smoother(problem, op, alpha, reuse);
  for (int k = 0; k < steps; ++k) smoother.sweep(out);
  return out;
}

}  // namespace mrcm
