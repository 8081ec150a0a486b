#include "mrcm/darcy.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

namespace mrcm::darcy {

AssembledSystem assemble(const Grid& region, const CellField& k_cell,
                         const EdgeField& k_edge, const BoundarySpec& bc,
                         const RobinData& robin) {
  const int n_cells = region.cell_count();
  const int n_edges = region.edge_count();
  if (k_cell.size() != static_cast<std::size_t>(n_cells) ||
      k_edge.size() != static_cast<std::size_t>(n_edges) ||
      bc.kind.size() != static_cast<std::size_t>(n_edges) ||
      robin.active.size() != static_cast<std::size_t>(n_edges)) {
    throw std::invalid_argument("assemble: field size mismatch");
  }
  const double h = region.h;

  AssembledSystem sys;
  sys.region = region;
  sys.closure.assign(n_edges, Closure::Interior);
  sys.closure_coef.assign(n_edges, 0.0);
  sys.bc_value.assign(n_edges, 0.0);

  std::vector<Eigen::Triplet<double>> trip;
  trip.reserve(static_cast<std::size_t>(n_cells) * 5);
  std::vector<double> diag(n_cells, 0.0);

  bool any_pressure_closure = false;
  for (int e = 0; e < n_edges; ++e) {
    const auto [a, b] = region.edge_cells(e);
    const bool boundary = region.edge_on_boundary(e);
    const bool has_bc = bc.kind[e] != BcKind::None;
    const bool has_robin = robin.active[e] != 0;
    if (!boundary) {
      if (has_bc || has_robin) {
        throw std::invalid_argument("assemble: interior edge " +
                                    std::to_string(e) + " carries data");
      }
      diag[a] += k_edge[e];
      diag[b] += k_edge[e];
      trip.emplace_back(a, b, -k_edge[e]);
      trip.emplace_back(b, a, -k_edge[e]);
      continue;
    }
    if (has_bc == has_robin) {
      throw std::invalid_argument(
          std::string("assemble: boundary edge ") + std::to_string(e) +
          (has_bc ? " has conflicting tags" : " is uncovered"));
    }
    const int cell = a >= 0 ? a : b;
    if (has_robin || bc.kind[e] == BcKind::Dirichlet) {
      const double beta = has_robin ? robin.beta[e] : 0.0;
      if (beta < 0.0) {
        throw std::invalid_argument("assemble: negative Robin beta at edge " +
                                    std::to_string(e));
      }
      const double coef = h / (beta + h / (2.0 * k_cell[cell]));
      sys.closure[e] = has_robin ? Closure::Robin : Closure::Dirichlet;
      sys.closure_coef[e] = coef;
      sys.bc_value[e] = has_robin ? robin.value[e] : bc.value[e];
      diag[cell] += coef;
      any_pressure_closure = true;
    } else {
      sys.closure[e] = Closure::Neumann;
      sys.bc_value[e] = bc.value[e];
    }
  }
  for (int c = 0; c < n_cells; ++c) trip.emplace_back(c, c, diag[c]);

  sys.matrix.resize(n_cells, n_cells);
  sys.matrix.setFromTriplets(trip.begin(), trip.end());
  sys.matrix.makeCompressed();
  sys.pure_neumann = !any_pressure_closure;
  return sys;
}

CellField build_rhs(const AssembledSystem& sys, const CellField& f,
                    const std::vector<double>& boundary_values) {
  const Grid& region = sys.region;
  const int n_cells = region.cell_count();
  if (!f.empty() && f.size() != static_cast<std::size_t>(n_cells)) {
    throw std::invalid_argument("build_rhs: source size mismatch");
  }
  if (boundary_values.size() != static_cast<std::size_t>(region.edge_count())) {
    throw std::invalid_argument("build_rhs: boundary value size mismatch");
  }
  const double h = region.h;
  CellField rhs(n_cells, 0.0);
  if (!f.empty()) {
    for (int c = 0; c < n_cells; ++c) rhs[c] = f[c] * h * h;
  }
  for (int e = 0; e < region.edge_count(); ++e) {
    switch (sys.closure[e]) {
      case Closure::Interior:
        break;
      case Closure::Neumann: {
        const auto [a, b] = region.edge_cells(e);
        rhs[a >= 0 ? a : b] -= boundary_values[e] * h;
        break;
      }
      case Closure::Dirichlet:
      case Closure::Robin: {
        const auto [a, b] = region.edge_cells(e);
        rhs[a >= 0 ? a : b] += sys.closure_coef[e] * boundary_values[e];
        break;
      }
    }
  }
  return rhs;
}

CellField build_rhs(const AssembledSystem& sys, const CellField& f) {
  return build_rhs(sys, f, sys.bc_value);
}

Factorization::Factorization(const AssembledSystem& sys, bool constrain) {
  n_ = sys.region.cell_count();
  if (sys.pure_neumann && constrain) {
    // Pin cell 0 to zero: drop its row/column, keep the diagonal scale.
    pinned_ = true;
    std::vector<Eigen::Triplet<double>> trip;
    trip.reserve(sys.matrix.nonZeros());
    const double pin_scale = sys.matrix.coeff(0, 0) != 0.0
                                 ? sys.matrix.coeff(0, 0)
                                 : 1.0;
    for (int k = 0; k < sys.matrix.outerSize(); ++k) {
      for (Eigen::SparseMatrix<double>::InnerIterator it(sys.matrix, k); it;
           ++it) {
        if (it.row() == 0 || it.col() == 0) continue;
        trip.emplace_back(it.row(), it.col(), it.value());
      }
    }
    trip.emplace_back(0, 0, pin_scale);
    Eigen::SparseMatrix<double> pinned(n_, n_);
    pinned.setFromTriplets(trip.begin(), trip.end());
    pinned.makeCompressed();
    ldlt_.compute(pinned);
  } else {
    ldlt_.compute(sys.matrix);
  }
  if (ldlt_.info() != Eigen::Success) {
    throw std::runtime_error("factorize: decomposition failed");
  }
  // LDL^T of a singular (or indefinite-after-closure) system can report
  // success with a (near-)zero pivot; detect and locate it.
  const auto& d = ldlt_.vectorD();
  double dmax = 0.0;
  for (int i = 0; i < d.size(); ++i) dmax = std::max(dmax, std::abs(d[i]));
  for (int i = 0; i < d.size(); ++i) {
    if (!std::isfinite(d[i]) || std::abs(d[i]) <= 1e-14 * dmax) {
      const int original = ldlt_.permutationPinv().indices()[i];
      throw std::runtime_error(
          "factorize: zero/invalid pivot at elimination step " +
          std::to_string(i) + " (cell " + std::to_string(original) + ")");
    }
  }
}

CellField Factorization::solve(const CellField& rhs) const {
  if (rhs.size() != static_cast<std::size_t>(n_)) {
    throw std::invalid_argument("solve: rhs length mismatch");
  }
  Eigen::VectorXd b = Eigen::Map<const Eigen::VectorXd>(rhs.data(), n_);
  if (pinned_) b[0] = 0.0;
  Eigen::VectorXd x = ldlt_.solve(b);
  if (pinned_) x.array() -= x.mean();
  return CellField(x.data(), x.data() + n_);
}

EdgeField recover_fluxes(const AssembledSystem& sys, const CellField& p,
                         const EdgeField& k_edge,
                         const std::vector<double>& boundary_values) {
  const Grid& region = sys.region;
  if (p.size() != static_cast<std::size_t>(region.cell_count())) {
    throw std::invalid_argument("recover_fluxes: pressure size mismatch");
  }
  const double h = region.h;
  EdgeField u(region.edge_count(), 0.0);
  for (int e = 0; e < region.edge_count(); ++e) {
    const auto [a, b] = region.edge_cells(e);
    switch (sys.closure[e]) {
      case Closure::Interior:
        u[e] = -k_edge[e] * (p[b] - p[a]) / h;
        break;
      case Closure::Neumann:
        u[e] = boundary_values[e];
        break;
      case Closure::Dirichlet:
      case Closure::Robin: {
        const int cell = a >= 0 ? a : b;
        // Outward closure flux; the region normal is outward here.
        u[e] = sys.closure_coef[e] * (p[cell] - boundary_values[e]) / h;
        break;
      }
    }
  }
  return u;
}

EdgeField recover_fluxes(const AssembledSystem& sys, const CellField& p,
                         const EdgeField& k_edge) {
  return recover_fluxes(sys, p, k_edge, sys.bc_value);
}

double edge_pressure_trace(const AssembledSystem& sys, int edge,
                           const CellField& p, const EdgeField& u,
                           const CellField& k_cell,
                           const std::vector<double>& boundary_values) {
  const Grid& region = sys.region;
  const auto [a, b] = region.edge_cells(edge);
  switch (sys.closure[edge]) {
    case Closure::Interior:
      return interior_trace(p[a], p[b], k_cell[a], k_cell[b]);
    case Closure::Dirichlet:
      return boundary_values[edge];
    case Closure::Robin: {
      const double beta =
          region.h / sys.closure_coef[edge] - region.h / (2.0 * k_cell[a >= 0 ? a : b]);
      return boundary_values[edge] + beta * u[edge];
    }
    case Closure::Neumann:
      throw std::invalid_argument("edge_pressure_trace: Neumann edge " +
                                  std::to_string(edge) + " has no trace");
  }
  return 0.0;
}

double edge_pressure_trace(const AssembledSystem& sys, int edge,
                           const CellField& p, const EdgeField& u,
                           const CellField& k_cell) {
  return edge_pressure_trace(sys, edge, p, u, k_cell, sys.bc_value);
}

void apply_global_orientation(const BoxRegion& box, EdgeField& field) {
  const Grid local = box.local_grid();
  for (int j = 0; j < box.hgt; ++j) {
    const int left = local.x_edge_id(0, j);
    const int right = local.x_edge_id(box.w, j);
    field[left] *= box.edge_sign(left);
    field[right] *= box.edge_sign(right);
  }
  for (int i = 0; i < box.w; ++i) {
    const int bottom = local.y_edge_id(i, 0);
    const int top = local.y_edge_id(i, box.hgt);
    field[bottom] *= box.edge_sign(bottom);
    field[top] *= box.edge_sign(top);
  }
}

FineSolution solve_fine(const DarcyProblem& problem) {
  const RobinData robin = RobinData::none(problem.grid);
  AssembledSystem sys = assemble(problem.grid, problem.perm.values,
                                 problem.k_edge, problem.bc, robin);
  Factorization fact(sys);
  CellField p = fact.solve(build_rhs(sys, problem.source));
  EdgeField u = recover_fluxes(sys, p, problem.k_edge);
  return FineSolution{std::move(p), std::move(u), fact.pinned()};
}

}  // namespace mrcm::darcy
