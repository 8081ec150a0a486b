#include "mrcm/solver.hpp"

#include <chrono>
#include <cmath>
#include <stdexcept>
#include <string>

#include "mrcm/worker_pool.hpp"

namespace mrcm {

namespace {

double ms_since(std::chrono::steady_clock::time_point t0) {
  return std::chrono::duration<double, std::milli>(
             std::chrono::steady_clock::now() - t0)
      .count();
}

}  // namespace

BarSolution compute_bar(const DarcyProblem& problem, const Partition& part,
                        int sub, double alpha) {
  LocalSystem ls = make_local_system(problem, part, part.subdomains[sub], alpha);
  LocalSolve sol = solve_local(ls, ls.source, ls.base_values());
  darcy::apply_global_orientation(ls.box, sol.u);
  return BarSolution{std::move(sol.p), std::move(sol.u)};
}

std::vector<BarSolution> compute_bars(const DarcyProblem& problem,
                                      const Partition& part, double alpha) {
  std::vector<BarSolution> bars(part.count());
  parallel_for(part.count(), [&](std::size_t i) {
    bars[i] = compute_bar(problem, part, static_cast<int>(i), alpha);
  });
  return bars;
}

InterfaceSystem assemble_interface(
    const DarcyProblem& problem, const Partition& part, const TestSpace& tests,
    const std::vector<InformedSpace>& spaces,
    const std::vector<BarSolution>& bars, double alpha,
    const std::vector<int>* column_order) {
  const Grid& grid = problem.grid;
  const double h = grid.h;

  int total = 0;
  for (const auto& s : spaces) total += s.n;
  const int dim_m = tests.dim();
  const int dim_v = tests.dim();
  if (total != dim_m + dim_v) {
    throw std::invalid_argument(
        "assemble_interface: dimension identity violated: sum n_i = " +
        std::to_string(total) + ", dim M + dim V = " +
        std::to_string(dim_m + dim_v));
  }

  InterfaceSystem sys;
  sys.dim_m = dim_m;
  sys.dim_v = dim_v;
  sys.expect_singular = problem.pure_neumann();
  sys.order.resize(part.count());
  if (column_order) {
    if (static_cast<int>(column_order->size()) != part.count()) {
      throw std::invalid_argument("assemble_interface: bad column order");
    }
    sys.order = *column_order;
  } else {
    for (int s = 0; s < part.count(); ++s) sys.order[s] = s;
  }
  sys.col_offset.assign(part.count(), -1);
  int offset = 0;
  for (int s : sys.order) {
    sys.col_offset[s] = offset;
    offset += spaces[s].n;
  }

  sys.matrix = Eigen::MatrixXd::Zero(total, total);
  sys.rhs = Eigen::VectorXd::Zero(total);

  for (int t = 0; t < tests.dim(); ++t) {
    const TestFunction& fn = tests.fns[t];
    const int row_m = t;
    const int row_v = dim_m + t;
    for (std::size_t idx = 0; idx < fn.edges.size(); ++idx) {
      const int ge = fn.edges[idx];
      const double val = fn.values[idx];
      const double beta = alpha * part.H / problem.k_edge[ge];
      const auto [ca, cb] = grid.edge_cells(ge);
      for (const int sub : {part.cell_owner[ca], part.cell_owner[cb]}) {
        const double sign = part.skeleton_sign(ge, sub);
        const InformedSpace& space = spaces[sub];
        const int le = part.subdomains[sub].local_edge(ge);
        const int col0 = sys.col_offset[sub];
        for (int k = 0; k < space.n; ++k) {
          const double flux_out = space.flux[k][le] * sign;
          sys.matrix(row_m, col0 + k) += flux_out * val * h;
          sys.matrix(row_v, col0 + k) +=
              (beta * flux_out + space.phi[k][le]) * val * sign * h;
        }
        const double bar_out = bars[sub].u[le] * sign;
        sys.rhs(row_m) -= bar_out * val * h;
        sys.rhs(row_v) -= beta * bar_out * val * sign * h;
      }
    }
  }
  return sys;
}

Eigen::VectorXd solve_interface(const InterfaceSystem& sys) {
  const int n = static_cast<int>(sys.matrix.rows());
  if (n == 0) return Eigen::VectorXd();
  if (!sys.expect_singular) {
    Eigen::PartialPivLU<Eigen::MatrixXd> lu(sys.matrix);
    Eigen::VectorXd x = lu.solve(sys.rhs);
    const double scale = sys.matrix.cwiseAbs().rowwise().sum().maxCoeff() *
                             x.cwiseAbs().maxCoeff() +
                         sys.rhs.cwiseAbs().maxCoeff();
    const double resid = (sys.matrix * x - sys.rhs).cwiseAbs().maxCoeff();
    if (!(resid <= 1e-10 * std::max(scale, 1e-300))) {
      throw std::runtime_error("solve_interface: dense solve residual " +
                               std::to_string(resid) + " too large");
    }
    return x;
  }
  Eigen::CompleteOrthogonalDecomposition<Eigen::MatrixXd> cod;
  cod.setThreshold(1e-12);
  cod.compute(sys.matrix);
  const int defect = n - static_cast<int>(cod.rank());
  if (defect > 1) {
    throw std::runtime_error(
        "solve_interface: interface spaces ill-posed (rank deficiency " +
        std::to_string(defect) + ")");
  }
  return cod.solve(sys.rhs);
}

MultiscaleSolution reconstruct(const DarcyProblem& problem,
                               const Partition& part,
                               const std::vector<InformedSpace>& spaces,
                               const std::vector<BarSolution>& bars,
                               const Eigen::VectorXd& coefficients) {
  MultiscaleSolution sol;
  sol.sub.resize(part.count());
  sol.coefficients = coefficients;
  if (!spaces.empty()) {
    sol.kind = spaces[0].kind;
    sol.d = spaces[0].d;
    sol.l = spaces[0].l;
    sol.alpha = spaces[0].alpha;
  }

  std::vector<int> offsets(part.count(), 0);
  int offset = 0;
  for (int s = 0; s < part.count(); ++s) {
    offsets[s] = offset;
    offset += spaces[s].n;
  }
  if (coefficients.size() != offset) {
    throw std::invalid_argument("reconstruct: coefficient count mismatch");
  }

  parallel_for(part.count(), [&](std::size_t i) {
    const InformedSpace& space = spaces[i];
    SubdomainFields fields{bars[i].p, bars[i].u};
    for (int k = 0; k < space.n; ++k) {
      const double x = coefficients[offsets[i] + k];
      for (std::size_t c = 0; c < fields.p.size(); ++c) {
        fields.p[c] += x * space.pressure[k][c];
      }
      for (std::size_t e = 0; e < fields.u.size(); ++e) {
        fields.u[e] += x * space.flux[k][e];
      }
    }
    sol.sub[i] = std::move(fields);
  });

  if (problem.pure_neumann()) {
    double mean = 0.0;
    long count = 0;
    for (const auto& f : sol.sub) {
      for (double p : f.p) mean += p;
      count += static_cast<long>(f.p.size());
    }
    mean /= static_cast<double>(count);
    for (auto& f : sol.sub) {
      for (double& p : f.p) p -= mean;
    }
    sol.mean_shifted = true;
  }
  return sol;
}

MrcmRun run_mrcm(const DarcyProblem& problem, const OversampledPartition& op,
                 SpaceKind kind, int d, double alpha) {
  const Partition& part = op.base;
  MrcmRun run;
  auto t0 = std::chrono::steady_clock::now();
  run.spaces = build_spaces(problem, part, &op, kind, d, alpha);
  run.timings.spaces_ms = ms_since(t0);

  t0 = std::chrono::steady_clock::now();
  run.bars = compute_bars(problem, part, alpha);
  run.timings.bars_ms = ms_since(t0);

  t0 = std::chrono::steady_clock::now();
  const TestSpace tests = kind == SpaceKind::FineIndicator
                              ? fine_indicator_space(part)
                              : build_face_spaces(part, d);
  InterfaceSystem sys =
      assemble_interface(problem, part, tests, run.spaces, run.bars, alpha);
  Eigen::VectorXd x = solve_interface(sys);
  run.timings.interface_ms = ms_since(t0);

  run.solution = reconstruct(problem, part, run.spaces, run.bars, x);
  return run;
}

MrcmRun solve_full_fine(const DarcyProblem& problem, const Partition& part,
                        double alpha) {
  MrcmRun run;
  auto t0 = std::chrono::steady_clock::now();
  run.spaces =
      build_spaces(problem, part, nullptr, SpaceKind::FineIndicator, 0, alpha);
  run.timings.spaces_ms = ms_since(t0);

  t0 = std::chrono::steady_clock::now();
  run.bars = compute_bars(problem, part, alpha);
  run.timings.bars_ms = ms_since(t0);

  t0 = std::chrono::steady_clock::now();
  const TestSpace tests = fine_indicator_space(part);
  InterfaceSystem sys =
      assemble_interface(problem, part, tests, run.spaces, run.bars, alpha);
  Eigen::VectorXd x = solve_interface(sys);
  run.timings.interface_ms = ms_since(t0);

  run.solution = reconstruct(problem, part, run.spaces, run.bars, x);
  return run;
}

ContinuityResiduals weak_continuity_residuals(
    const DarcyProblem& problem, const Partition& part, const TestSpace& tests,
    const std::vector<InformedSpace>& spaces, const MultiscaleSolution& sol,
    double alpha) {
  const Grid& grid = problem.grid;
  const double h = grid.h;

  std::vector<int> offsets(part.count(), 0);
  int offset = 0;
  for (int s = 0; s < part.count(); ++s) {
    offsets[s] = offset;
    offset += spaces[s].n;
  }

  ContinuityResiduals out;
  double scale = 0.0;
  for (const TestFunction& fn : tests.fns) {
    double m_sum = 0.0, v_sum = 0.0, m_abs = 0.0, v_abs = 0.0;
    for (std::size_t idx = 0; idx < fn.edges.size(); ++idx) {
      const int ge = fn.edges[idx];
      const double val = fn.values[idx];
      const double beta = alpha * part.H / problem.k_edge[ge];
      const auto [ca, cb] = grid.edge_cells(ge);
      for (const int sub : {part.cell_owner[ca], part.cell_owner[cb]}) {
        const double sign = part.skeleton_sign(ge, sub);
        const int le = part.subdomains[sub].local_edge(ge);
        const double flux_out = sol.sub[sub].u[le] * sign;
        double lambda = 0.0;
        for (int k = 0; k < spaces[sub].n; ++k) {
          lambda += sol.coefficients[offsets[sub] + k] * spaces[sub].phi[k][le];
        }
        m_sum += flux_out * val * h;
        m_abs += std::abs(flux_out * val * h);
        v_sum += (beta * flux_out + lambda) * val * sign * h;
        v_abs += std::abs((beta * flux_out + lambda) * val * h);
      }
    }
    out.flux = std::max(out.flux, std::abs(m_sum));
    out.robin = std::max(out.robin, std::abs(v_sum));
    scale = std::max({scale, m_abs, v_abs});
  }
  out.scale = std::max(scale, 1e-300);
  return out;
}

double conservation_defect(const DarcyProblem& problem, const Partition& part,
                           const MultiscaleSolution& sol) {
  const double h = problem.grid.h;
  double worst = 0.0;
  for (int s = 0; s < part.count(); ++s) {
    const BoxRegion& box = part.subdomains[s];
    const Grid local = box.local_grid();
    const auto& fields = sol.sub[s];
    for (int c = 0; c < local.cell_count(); ++c) {
      const int i = local.cell_i(c);
      const int j = local.cell_j(c);
      // Outward flux sum; stored values follow the parent edge normal.
      double balance = 0.0, magnitude = 0.0;
      const int edges[4] = {local.x_edge_id(i, j), local.x_edge_id(i + 1, j),
                            local.y_edge_id(i, j), local.y_edge_id(i, j + 1)};
      const int outward[4] = {-1, 1, -1, 1};
      for (int q = 0; q < 4; ++q) {
        const int ge = box.global_edge(edges[q]);
        const double u_axis =
            fields.u[edges[q]] * problem.grid.edge_normal_sign(ge);
        balance += outward[q] * u_axis * h;
        magnitude += std::abs(u_axis) * h;
      }
      const double f = problem.source[box.global_cell(c)] * h * h;
      const double defect =
          std::abs(balance - f) / std::max({1.0, magnitude, std::abs(f)});
      worst = std::max(worst, defect);
    }
  }
  return worst;
}

MultiscaleSolution restrict_fine(const DarcyProblem& problem,
                                 const Partition& part,
                                 const darcy::FineSolution& fine) {
  MultiscaleSolution sol;
  sol.kind = SpaceKind::FineIndicator;
  sol.mean_shifted = fine.mean_shifted;
  sol.sub.resize(part.count());
  for (int s = 0; s < part.count(); ++s) {
    const BoxRegion& box = part.subdomains[s];
    const Grid local = box.local_grid();
    SubdomainFields fields;
    fields.p.resize(box.cell_count());
    fields.u.resize(local.edge_count());
    for (int c = 0; c < box.cell_count(); ++c) {
      fields.p[c] = fine.p[box.global_cell(c)];
    }
    for (int e = 0; e < local.edge_count(); ++e) {
      fields.u[e] = fine.u[box.global_edge(e)];
    }
    sol.sub[s] = std::move(fields);
  }
  return sol;
}

}  // namespace mrcm
