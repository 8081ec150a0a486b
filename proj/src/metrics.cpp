#include "mrcm/metrics.hpp"

#include <cmath>
#include <stdexcept>

namespace mrcm {

namespace {

std::pair<double, double> finish(double err_sq, double ref_sq) {
  const double abs_err = std::sqrt(err_sq);
  const double ref_norm = std::sqrt(ref_sq);
  if (!(ref_norm > 0.0)) {
    throw std::invalid_argument("relative error needs a nonzero reference");
  }
  return {abs_err, abs_err / ref_norm};
}

double mean_of(const CellField& f) {
  double m = 0.0;
  for (double v : f) m += v;
  return m / static_cast<double>(f.size());
}

}  // namespace

std::pair<double, double> l2_pressure_error(const Grid& grid,
                                            const CellField& p,
                                            const CellField& ref,
                                            bool mean_adjust) {
  if (p.size() != ref.size() ||
      p.size() != static_cast<std::size_t>(grid.cell_count())) {
    throw std::invalid_argument("l2_pressure_error: grid mismatch");
  }
  const double w = grid.h * grid.h;
  const double p_shift = mean_adjust ? mean_of(p) : 0.0;
  const double r_shift = mean_adjust ? mean_of(ref) : 0.0;
  double err_sq = 0.0, ref_sq = 0.0;
  for (std::size_t c = 0; c < p.size(); ++c) {
    const double d = (p[c] - p_shift) - (ref[c] - r_shift);
    err_sq += d * d * w;
    const double r = ref[c] - r_shift;
    ref_sq += r * r * w;
  }
  return finish(err_sq, ref_sq);
}

std::pair<double, double> l2_pressure_error(const Partition& part,
                                            const MultiscaleSolution& sol,
                                            const CellField& ref,
                                            bool mean_adjust) {
  return l2_pressure_error(*part.grid, composite_pressure(part, sol), ref,
                           mean_adjust);
}

std::pair<double, double> l2_flux_error(const Grid& grid, const EdgeField& u,
                                        const EdgeField& ref) {
  if (u.size() != ref.size() ||
      u.size() != static_cast<std::size_t>(grid.edge_count())) {
    throw std::invalid_argument("l2_flux_error: grid mismatch");
  }
  const double w = grid.h * grid.h;
  double err_sq = 0.0, ref_sq = 0.0;
  for (std::size_t e = 0; e < u.size(); ++e) {
    const double d = u[e] - ref[e];
    err_sq += d * d * w;
    ref_sq += ref[e] * ref[e] * w;
  }
  return finish(err_sq, ref_sq);
}

std::pair<double, double> l2_flux_error(const Partition& part,
                                        const MultiscaleSolution& sol,
                                        const EdgeField& ref) {
  const Grid& grid = *part.grid;
  if (ref.size() != static_cast<std::size_t>(grid.edge_count())) {
    throw std::invalid_argument("l2_flux_error: grid mismatch");
  }
  const double w = grid.h * grid.h;
  double err_sq = 0.0;
  for (int s = 0; s < part.count(); ++s) {
    const BoxRegion& box = part.subdomains[s];
    const Grid local = box.local_grid();
    for (int e = 0; e < local.edge_count(); ++e) {
      const int ge = box.global_edge(e);
      const double weight = part.on_skeleton[ge] ? 0.5 * w : w;
      const double d = sol.sub[s].u[e] - ref[ge];
      err_sq += d * d * weight;
    }
  }
  double ref_sq = 0.0;
  for (int e = 0; e < grid.edge_count(); ++e) ref_sq += ref[e] * ref[e] * w;
  return finish(err_sq, ref_sq);
}

ErrorReport compare_to_reference(const Partition& part,
                                 const MultiscaleSolution& sol,
                                 const CellField& p_ref, const EdgeField& u_ref,
                                 bool mean_adjust, ReferenceKind kind) {
  ErrorReport report;
  auto [pa, pr] = l2_pressure_error(part, sol, p_ref, mean_adjust);
  auto [ua, ur] = l2_flux_error(part, sol, u_ref);
  report.p_abs = pa;
  report.p_rel = pr;
  report.u_abs = ua;
  report.u_rel = ur;
  report.mean_adjusted = mean_adjust;
  report.reference = kind;
  return report;
}

CellField sample_exact_pressure(const Grid& grid, const ExactSolution& exact) {
  CellField p(grid.cell_count());
  for (int c = 0; c < grid.cell_count(); ++c) {
    p[c] = exact.pressure(grid.cell_center_x(c), grid.cell_center_y(c));
  }
  return p;
}

EdgeField sample_exact_flux(const Grid& grid, const ExactSolution& exact) {
  EdgeField u(grid.edge_count());
  for (int e = 0; e < grid.edge_count(); ++e) {
    const auto [x, y] = grid.edge_midpoint(e);
    const auto v = exact.velocity(x, y);
    const double along = grid.edge_axis(e) == EdgeAxis::X ? v[0] : v[1];
    u[e] = along * grid.edge_normal_sign(e);
  }
  return u;
}

CellField composite_pressure(const Partition& part,
                             const MultiscaleSolution& sol) {
  CellField p(part.grid->cell_count());
  for (int s = 0; s < part.count(); ++s) {
    const BoxRegion& box = part.subdomains[s];
    for (int c = 0; c < box.cell_count(); ++c) {
      p[box.global_cell(c)] = sol.sub[s].p[c];
    }
  }
  return p;
}

std::vector<double> flux_jump_profile(const Partition& part,
                                      const MultiscaleSolution& sol,
                                      const std::vector<int>& face_path) {
  if (face_path.empty()) {
    throw std::invalid_argument("flux_jump_profile: empty path");
  }
  const EdgeAxis axis = part.faces[face_path[0]].axis;
  const Grid& grid = *part.grid;
  // Straight line: same axis and same transverse coordinate throughout.
  const int line_coord = axis == EdgeAxis::X
                             ? grid.edge_ij(part.faces[face_path[0]].edges[0])[0]
                             : grid.edge_ij(part.faces[face_path[0]].edges[0])[1];
  std::vector<double> jumps;
  for (int f : face_path) {
    const CoarseFace& face = part.faces[f];
    if (face.axis != axis) {
      throw std::invalid_argument("flux_jump_profile: mixed face axes");
    }
    for (int ge : face.edges) {
      const auto ij = grid.edge_ij(ge);
      const int coord = axis == EdgeAxis::X ? ij[0] : ij[1];
      if (coord != line_coord) {
        throw std::invalid_argument("flux_jump_profile: faces not collinear");
      }
      const int lea = part.subdomains[face.a].local_edge(ge);
      const int leb = part.subdomains[face.b].local_edge(ge);
      // u_a.n_a + u_b.n_b with the a-side normal equal to the edge normal.
      jumps.push_back(sol.sub[face.a].u[lea] - sol.sub[face.b].u[leb]);
    }
  }
  return jumps;
}

std::vector<int> default_jump_path(const Partition& part) {
  // Horizontal interior lines sit at block rows 1..My-1; each holds Mx
  // consecutive Y-normal faces. All have equal length, so take the
  // lowest.
  if (part.My < 2) return {};
  std::vector<int> path;
  for (int f = 0; f < static_cast<int>(part.faces.size()); ++f) {
    const CoarseFace& face = part.faces[f];
    if (face.axis != EdgeAxis::Y) continue;
    if (face.b - face.a == part.Mx && face.a / part.Mx == 0) path.push_back(f);
  }
  return path;
}

double convergence_slope(const std::vector<std::pair<double, double>>& pairs) {
  if (pairs.size() < 2) {
    throw std::invalid_argument("convergence_slope: need at least two pairs");
  }
  double sx = 0.0, sy = 0.0, sxx = 0.0, sxy = 0.0;
  for (const auto& [h, err] : pairs) {
    if (!(h > 0.0) || !(err > 0.0)) {
      throw std::invalid_argument("convergence_slope: nonpositive input");
    }
    const double x = std::log(h);
    const double y = std::log(err);
    sx += x;
    sy += y;
    sxx += x * x;
    sxy += x * y;
  }
  const double n = static_cast<double>(pairs.size());
  return (n * sxy - sx * sy) / (n * sxx - sx * sx);
}

}  // namespace mrcm
