#include "mrcm/spaces.hpp"

#include <stdexcept>
#include <string>

#include "mrcm/worker_pool.hpp"

namespace mrcm {

namespace {

double linear_mode_value(double s, double length) {
  return (s - 0.5 * length) / (0.5 * length);
}

}  // namespace

TestSpace build_face_spaces(const Partition& part, int d) {
  if (d != 1 && d != 2) {
    throw std::invalid_argument("build_face_spaces: d must be 1 or 2");
  }
  const double h = part.grid->h;
  TestSpace space;
  space.fns.reserve(static_cast<std::size_t>(d) * part.faces.size());
  for (int f = 0; f < static_cast<int>(part.faces.size()); ++f) {
    const CoarseFace& face = part.faces[f];
    const int n = static_cast<int>(face.edges.size());
    const double length = n * h;
    for (int mode = 0; mode < d; ++mode) {
      TestFunction fn;
      fn.face = f;
      fn.edges = face.edges;
      fn.values.resize(n);
      for (int t = 0; t < n; ++t) {
        fn.values[t] =
            mode == 0 ? 1.0 : linear_mode_value((t + 0.5) * h, length);
      }
      space.fns.push_back(std::move(fn));
    }
  }
  return space;
}

TestSpace fine_indicator_space(const Partition& part) {
  TestSpace space;
  space.fns.reserve(part.skeleton.size());
  for (int e : part.skeleton) {
    TestFunction fn;
    fn.edges = {e};
    fn.values = {1.0};
    space.fns.push_back(std::move(fn));
  }
  return space;
}

const char* space_kind_name(SpaceKind k) {
  switch (k) {
    case SpaceKind::Informed: return "informed";
    case SpaceKind::Polynomial: return "polynomial";
    case SpaceKind::FineIndicator: return "fine-indicator";
  }
  return "?";
}

std::vector<double> build_lambda_data(const Partition& part,
                                      const BoxRegion& hat, int sub, int face,
                                      int mode) {
  bool found = false;
  for (int f : part.faces_of[sub]) found = found || f == face;
  if (!found) {
    throw std::invalid_argument("build_lambda_data: face " +
                                std::to_string(face) +
                                " is not on subdomain " + std::to_string(sub));
  }
  const Side side = part.face_side(face, sub);
  const auto edges = side_edges(hat, side);
  const double length = static_cast<double>(edges.size()) * hat.parent->h;
  std::vector<double> values(hat.local_grid().edge_count(), 0.0);
  for (const SideEdge& se : edges) {
    values[se.local_edge] =
        mode == 0 ? 1.0 : linear_mode_value(se.s, length);
  }
  return values;
}

namespace {

// Shared tail of the space builders: solve one zero-source problem per
// boundary datum and record flux/pressure restricted to the subdomain.
InformedSpace solve_basis(const DarcyProblem& problem, const Partition& part,
                          int sub, std::shared_ptr<const LocalSystem> ls,
                          const std::vector<std::vector<double>>& data,
                          bool extract_traces, double alpha) {
  const BoxRegion& box = part.subdomains[sub];
  const Grid local = box.local_grid();
  const CellField zero_f;  // no source in basis problems

  InformedSpace space;
  space.sub = sub;
  space.n = static_cast<int>(data.size());
  space.alpha = alpha;
  space.system = ls;

  // Interface edges of this subdomain, as (box-local, global) pairs.
  std::vector<std::array<int, 2>> gamma;
  for (int f : part.faces_of[sub]) {
    for (int ge : part.faces[f].edges) {
      gamma.push_back({box.local_edge(ge), ge});
    }
  }

  for (const auto& values : data) {
    LocalSolve sol = solve_local(*ls, zero_f, values);
    EdgeField u_global = sol.u;
    darcy::apply_global_orientation(ls->box, u_global);

    EdgeField flux(local.edge_count());
    CellField pressure(box.cell_count());
    for (int e = 0; e < local.edge_count(); ++e) {
      flux[e] = u_global[ls->box.local_edge(box.global_edge(e))];
    }
    for (int c = 0; c < box.cell_count(); ++c) {
      pressure[c] = sol.p[ls->box.local_cell(box.global_cell(c))];
    }

    EdgeField phi(local.edge_count(), 0.0);
    for (const auto& [le, ge] : gamma) {
      if (extract_traces) {
        const int hle = ls->box.local_edge(ge);
        const double pi = darcy::edge_pressure_trace(ls->sys, hle, sol.p,
                                                     sol.u, ls->k_cell, values);
        const double beta = alpha * part.H / problem.k_edge[ge];
        const double u_outward = u_global[hle] * part.skeleton_sign(ge, sub);
        phi[le] = -beta * u_outward + pi;
      } else {
        phi[le] = values[ls->box.local_edge(ge)];
      }
    }
    space.phi.push_back(std::move(phi));
    space.flux.push_back(std::move(flux));
    space.pressure.push_back(std::move(pressure));
  }
  return space;
}

}  // namespace

InformedSpace build_informed_space(const DarcyProblem& problem,
                                   const Partition& part,
                                   const OversampledPartition& op, int sub,
                                   int d, double alpha) {
  if (d != 1 && d != 2) {
    throw std::invalid_argument("build_informed_space: d must be 1 or 2");
  }
  auto ls = std::make_shared<const LocalSystem>(
      make_local_system(problem, part, op.hats[sub], alpha));
  std::vector<std::vector<double>> data;
  for (int f : part.faces_of[sub]) {
    for (int mode = 0; mode < d; ++mode) {
      data.push_back(build_lambda_data(part, op.hats[sub], sub, f, mode));
    }
  }
  InformedSpace space =
      solve_basis(problem, part, sub, ls, data, /*extract_traces=*/true, alpha);
  space.d = d;
  space.l = op.l;
  space.kind = SpaceKind::Informed;
  return space;
}

InformedSpace build_polynomial_space(const DarcyProblem& problem,
                                     const Partition& part, int sub, int d,
                                     double alpha) {
  if (d != 1 && d != 2) {
    throw std::invalid_argument("build_polynomial_space: d must be 1 or 2");
  }
  const BoxRegion& box = part.subdomains[sub];
  auto ls = std::make_shared<const LocalSystem>(
      make_local_system(problem, part, box, alpha));
  std::vector<std::vector<double>> data;
  for (int f : part.faces_of[sub]) {
    for (int mode = 0; mode < d; ++mode) {
      data.push_back(build_lambda_data(part, box, sub, f, mode));
    }
  }
  InformedSpace space = solve_basis(problem, part, sub, ls, data,
                                    /*extract_traces=*/false, alpha);
  space.d = d;
  space.l = 0;
  space.kind = SpaceKind::Polynomial;
  return space;
}

InformedSpace build_fine_space(const DarcyProblem& problem,
                               const Partition& part, int sub, double alpha) {
  const BoxRegion& box = part.subdomains[sub];
  auto ls = std::make_shared<const LocalSystem>(
      make_local_system(problem, part, box, alpha));
  std::vector<std::vector<double>> data;
  for (int f : part.faces_of[sub]) {
    for (int ge : part.faces[f].edges) {
      std::vector<double> values(ls->region.edge_count(), 0.0);
      values[box.local_edge(ge)] = 1.0;
      data.push_back(std::move(values));
    }
  }
  InformedSpace space = solve_basis(problem, part, sub, ls, data,
                                    /*extract_traces=*/false, alpha);
  space.d = 0;
  space.l = 0;
  space.kind = SpaceKind::FineIndicator;
  return space;
}

std::vector<InformedSpace> build_spaces(const DarcyProblem& problem,
                                        const Partition& part,
                                        const OversampledPartition* op,
                                        SpaceKind kind, int d, double alpha) {
  if (kind == SpaceKind::Informed && op == nullptr) {
    throw std::invalid_argument("build_spaces: informed spaces need the "
                                "oversampled partition");
  }
  std::vector<InformedSpace> spaces(part.count());
  parallel_for(part.count(), [&](std::size_t i) {
    const int sub = static_cast<int>(i);
    switch (kind) {
      case SpaceKind::Informed:
        spaces[i] = build_informed_space(problem, part, *op, sub, d, alpha);
        break;
      case SpaceKind::Polynomial:
        spaces[i] = build_polynomial_space(problem, part, sub, d, alpha);
        break;
      case SpaceKind::FineIndicator:
        spaces[i] = build_fine_space(problem, part, sub, alpha);
        break;
    }
  });
  return spaces;
}

}  // namespace mrcm
