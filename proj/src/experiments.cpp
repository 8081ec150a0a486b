#include "mrcm/experiments.hpp"

#include <chrono>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <functional>
#include <map>
#include <set>
#include <sstream>
#include <stdexcept>

#include "mrcm/worker_pool.hpp"

namespace mrcm {

namespace {

using nlohmann::json;

double ms_since(std::chrono::steady_clock::time_point t0) {
  return std::chrono::duration<double, std::milli>(
             std::chrono::steady_clock::now() - t0)
      .count();
}

void check_keys(const json& j, const std::set<std::string>& allowed,
                const std::string& where) {
  for (auto it = j.begin(); it != j.end(); ++it) {
    if (!allowed.count(it.key())) {
      throw std::invalid_argument("unknown config key: " + where + it.key());
    }
  }
}

std::string join_row(const std::vector<std::string>& cells) {
  std::string row;
  for (std::size_t i = 0; i < cells.size(); ++i) {
    if (i) row += ',';
    row += cells[i];
  }
  row += '\n';
  return row;
}

void write_file(const std::filesystem::path& path, const std::string& text) {
  std::filesystem::create_directories(path.parent_path());
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot write " + path.string());
  out << text;
  if (!out) throw std::runtime_error("write failed: " + path.string());
}

}  // namespace

std::string format_number(double v) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.16e", v);
  return buf;
}

std::string MethodEntry::name() const {
  if (l == 0 && ns == 0) return d == 2 ? "MRCM" : "MRCM-C";
  std::string n = (d == 1 ? "OC-" : "OL-") + std::to_string(l);
  if (ns > 0) n += "," + std::to_string(ns) + "S";
  return n;
}

ExperimentConfig parse_config(const json& j) {
  check_keys(j,
             {"problem", "methods", "alphas", "out", "seed", "mean_adjust",
              "dump_fields", "threads", "refine_subdomain_counts",
              "smooth_steps_max"},
             "");
  ExperimentConfig cfg;
  if (j.contains("problem")) {
    const json& p = j.at("problem");
    check_keys(p,
               {"type", "subdomains", "cells", "path", "layer", "component",
                "mx", "my"},
               "problem.");
    cfg.problem.type = p.value("type", cfg.problem.type);
    cfg.problem.subdomains = p.value("subdomains", cfg.problem.subdomains);
    cfg.problem.cells = p.value("cells", cfg.problem.cells);
    cfg.problem.path = p.value("path", cfg.problem.path);
    cfg.problem.layer = p.value("layer", cfg.problem.layer);
    cfg.problem.component = p.value("component", cfg.problem.component);
    cfg.problem.mx = p.value("mx", cfg.problem.mx);
    cfg.problem.my = p.value("my", cfg.problem.my);
  }
  if (j.contains("methods")) {
    cfg.methods.clear();
    for (const json& m : j.at("methods")) {
      check_keys(m, {"d", "l", "ns"}, "methods[].");
      MethodEntry e;
      e.d = m.value("d", e.d);
      e.l = m.value("l", e.l);
      e.ns = m.value("ns", e.ns);
      cfg.methods.push_back(e);
    }
  }
  if (j.contains("alphas")) {
    cfg.alphas = j.at("alphas").get<std::vector<double>>();
  }
  cfg.out = j.value("out", cfg.out);
  cfg.seed = j.value("seed", cfg.seed);
  cfg.mean_adjust = j.value("mean_adjust", cfg.mean_adjust);
  cfg.dump_fields = j.value("dump_fields", cfg.dump_fields);
  cfg.threads = j.value("threads", cfg.threads);
  if (j.contains("refine_subdomain_counts")) {
    cfg.refine_subdomain_counts =
        j.at("refine_subdomain_counts").get<std::vector<int>>();
  }
  cfg.smooth_steps_max = j.value("smooth_steps_max", cfg.smooth_steps_max);
  return cfg;
}

json to_json(const ExperimentConfig& cfg) {
  json p{{"type", cfg.problem.type}};
  if (cfg.problem.type == "homogeneous") {
    p["subdomains"] = cfg.problem.subdomains;
    p["cells"] = cfg.problem.cells;
  } else {
    p["path"] = cfg.problem.path;
    p["layer"] = cfg.problem.layer;
    p["component"] = cfg.problem.component;
    p["mx"] = cfg.problem.mx;
    p["my"] = cfg.problem.my;
  }
  json methods = json::array();
  for (const MethodEntry& m : cfg.methods) {
    methods.push_back(json{{"d", m.d}, {"l", m.l}, {"ns", m.ns}});
  }
  return json{{"problem", p},
              {"methods", methods},
              {"alphas", cfg.alphas},
              {"out", cfg.out},
              {"seed", cfg.seed},
              {"mean_adjust", cfg.mean_adjust},
              {"dump_fields", cfg.dump_fields},
              {"threads", cfg.threads},
              {"refine_subdomain_counts", cfg.refine_subdomain_counts},
              {"smooth_steps_max", cfg.smooth_steps_max}};
}

ExperimentConfig load_config(const std::filesystem::path& file) {
  std::ifstream in(file);
  if (!in) throw std::runtime_error("cannot open config: " + file.string());
  json j;
  in >> j;
  return parse_config(j);
}

void apply_override(json& j, const std::string& key, const std::string& value) {
  std::vector<std::string> tokens;
  std::stringstream ss(key);
  std::string tok;
  while (std::getline(ss, tok, '.')) tokens.push_back(tok);
  if (tokens.empty()) throw std::invalid_argument("empty override key");

  json* node = &j;
  for (std::size_t i = 0; i + 1 < tokens.size(); ++i) {
    const std::string& t = tokens[i];
    if (!t.empty() && std::isdigit(static_cast<unsigned char>(t[0]))) {
      node = &(*node)[std::stoul(t)];
    } else {
      node = &(*node)[t];
    }
  }
  json parsed;
  try {
    parsed = json::parse(value);
  } catch (const json::parse_error&) {
    parsed = value;
  }
  const std::string& last = tokens.back();
  if (!last.empty() && std::isdigit(static_cast<unsigned char>(last[0]))) {
    (*node)[std::stoul(last)] = parsed;
  } else {
    (*node)[last] = parsed;
  }
}

void validate(const ExperimentConfig& cfg) {
  auto fail = [](const std::string& path, const std::string& why) {
    throw std::invalid_argument("config error at " + path + ": " + why);
  };
  int min_local = 0;
  bool split_x = false, split_y = false;
  if (cfg.problem.type == "homogeneous") {
    if (cfg.problem.subdomains < 1) fail("problem.subdomains", "must be >= 1");
    if (cfg.problem.cells < 2) fail("problem.cells", "must be >= 2");
    min_local = cfg.problem.cells;
    split_x = split_y = cfg.problem.subdomains > 1;
    for (int m : cfg.refine_subdomain_counts) {
      if (m < 1) fail("refine_subdomain_counts", "entries must be >= 1");
      split_x = split_x || m > 1;
      split_y = split_y || m > 1;
    }
  } else if (cfg.problem.type == "spe10") {
    if (cfg.problem.path.empty()) fail("problem.path", "required for spe10");
    if (cfg.problem.layer < 1 || cfg.problem.layer > kSpe10Nz) {
      fail("problem.layer", "must be in [1, 85]");
    }
    spe10_component_from_string(cfg.problem.component);
    if (cfg.problem.mx < 1 || kSpe10Nx % cfg.problem.mx != 0) {
      fail("problem.mx", "must divide 220");
    }
    if (cfg.problem.my < 1 || kSpe10Ny % cfg.problem.my != 0) {
      fail("problem.my", "must divide 60");
    }
    min_local = std::min(kSpe10Nx / cfg.problem.mx, kSpe10Ny / cfg.problem.my);
    split_x = cfg.problem.mx > 1;
    split_y = cfg.problem.my > 1;
  } else {
    fail("problem.type", "must be homogeneous or spe10");
  }
  if (cfg.methods.empty()) fail("methods", "need at least one entry");
  for (std::size_t i = 0; i < cfg.methods.size(); ++i) {
    const std::string path = "methods[" + std::to_string(i) + "]";
    const MethodEntry& m = cfg.methods[i];
    if (m.d != 1 && m.d != 2) fail(path + ".d", "must be 1 or 2");
    if (m.l < 0) fail(path + ".l", "must be >= 0");
    if (m.ns < 0) fail(path + ".ns", "must be >= 0");
    if ((split_x || split_y) && 2 * m.l >= min_local) {
      fail(path + ".l", "oversampling must satisfy l h < H/2 (l < " +
                            std::to_string(min_local) + "/2)");
    }
  }
  if (cfg.alphas.empty()) fail("alphas", "need at least one value");
  for (double a : cfg.alphas) {
    if (!(a > 0.0)) fail("alphas", "values must be positive");
  }
  if (cfg.smooth_steps_max < 0) fail("smooth_steps_max", "must be >= 0");
  if (cfg.threads < 0) fail("threads", "must be >= 0");
}

ExperimentSetup build_setup(const ExperimentConfig& cfg) {
  validate(cfg);
  if (cfg.threads > 0) set_worker_count(static_cast<unsigned>(cfg.threads));
  if (cfg.problem.type == "homogeneous") {
    return ExperimentSetup{
        make_homogeneous_problem(cfg.problem.subdomains, cfg.problem.cells),
        cfg.problem.subdomains, cfg.problem.subdomains};
  }
  PermField perm =
      load_spe10_any(cfg.problem.path, cfg.problem.layer,
                     spe10_component_from_string(cfg.problem.component));
  return ExperimentSetup{make_spe10_problem(std::move(perm)), cfg.problem.mx,
                         cfg.problem.my};
}

namespace {

struct MethodRun {
  MultiscaleSolution sol;
  PhaseTimings timings;
  double total_ms = 0.0;
};

MethodRun run_method(const DarcyProblem& problem, int mx, int my,
                     const MethodEntry& m, double alpha) {
  const auto t0 = std::chrono::steady_clock::now();
  Partition part = build_partition(problem.grid, mx, my);
  OversampledPartition op = oversample(part, m.l);
  MrcmRun run = run_mrcm(problem, op, SpaceKind::Informed, m.d, alpha);
  MethodRun out;
  out.timings = run.timings;
  if (m.ns > 0) {
    const auto ts = std::chrono::steady_clock::now();
    out.sol = smooth(run.solution, m.ns, problem, op, &run.spaces);
    out.timings.smoothing_ms = ms_since(ts);
  } else {
    out.sol = std::move(run.solution);
  }
  out.total_ms = ms_since(t0);
  return out;
}

std::vector<std::string> method_cells(const MethodEntry& m, double alpha) {
  return {m.name(), std::to_string(m.d), std::to_string(m.l),
          std::to_string(m.ns), format_number(alpha)};
}

}  // namespace

std::string run_alpha_sweep(const ExperimentConfig& cfg) {
  ExperimentSetup setup = build_setup(cfg);
  const DarcyProblem& problem = setup.problem;
  const Partition part = build_partition(problem.grid, setup.mx, setup.my);
  const darcy::FineSolution fine = darcy::solve_fine(problem);
  const bool adjust = cfg.mean_adjust && problem.pure_neumann();

  std::string csv = join_row({"method", "d", "l", "Ns", "alpha", "err_p_rel",
                              "err_u_rel", "runtime_ms", "mbf_ms",
                              "interface_ms", "smooth_ms"});
  for (const MethodEntry& m : cfg.methods) {
    for (double alpha : cfg.alphas) {
      MethodRun run = run_method(problem, setup.mx, setup.my, m, alpha);
      ErrorReport rep = compare_to_reference(part, run.sol, fine.p, fine.u,
                                             adjust, ReferenceKind::FineGrid);
      auto cells = method_cells(m, alpha);
      cells.insert(cells.end(),
                   {format_number(rep.p_rel), format_number(rep.u_rel),
                    format_number(run.total_ms),
                    format_number(run.timings.spaces_ms),
                    format_number(run.timings.interface_ms),
                    format_number(run.timings.smoothing_ms)});
      csv += join_row(cells);
    }
  }
  write_file(std::filesystem::path(cfg.out) / "alpha_sweep.csv", csv);
  return csv;
}

std::string run_refinement(const ExperimentConfig& cfg) {
  validate(cfg);
  if (cfg.problem.type != "homogeneous") {
    throw std::invalid_argument(
        "config error at problem.type: refinement study needs the "
        "homogeneous problem");
  }
  if (cfg.threads > 0) set_worker_count(static_cast<unsigned>(cfg.threads));

  std::string csv = join_row({"method", "d", "l", "Ns", "alpha", "M", "h",
                              "err_p_abs", "err_u_abs", "err_p_rel",
                              "err_u_rel", "runtime_ms"});
  // (method, alpha) -> list of (h, err) for the slope table
  struct Series {
    std::vector<std::pair<double, double>> p, u;
  };
  std::map<std::string, Series> series;
  std::vector<std::string> series_order;
  std::map<std::string, std::vector<std::string>> series_cells;

  auto record = [&](const std::vector<std::string>& cells, double h, double pa,
                    double ua) {
    const std::string key = cells[0] + "|" + cells[4];
    if (!series.count(key)) {
      series_order.push_back(key);
      series_cells[key] = cells;
    }
    series[key].p.emplace_back(h, pa);
    series[key].u.emplace_back(h, ua);
  };

  for (int M : cfg.refine_subdomain_counts) {
    const DarcyProblem problem = make_homogeneous_problem(M, cfg.problem.cells);
    const Partition part = build_partition(problem.grid, M, M);
    const CellField p_ref = sample_exact_pressure(problem.grid, *problem.exact);
    const EdgeField u_ref = sample_exact_flux(problem.grid, *problem.exact);
    const bool adjust = cfg.mean_adjust;

    {
      const auto t0 = std::chrono::steady_clock::now();
      const darcy::FineSolution fine = darcy::solve_fine(problem);
      const double ms = ms_since(t0);
      auto [pa, pr] = l2_pressure_error(problem.grid, fine.p, p_ref, adjust);
      auto [ua, ur] = l2_flux_error(problem.grid, fine.u, u_ref);
      std::vector<std::string> cells{"fine", "0", "0", "0",
                                     format_number(0.0)};
      record(cells, problem.grid.h, pa, ua);
      cells.insert(cells.end(),
                   {std::to_string(M), format_number(problem.grid.h),
                    format_number(pa), format_number(ua), format_number(pr),
                    format_number(ur), format_number(ms)});
      csv += join_row(cells);
    }
    for (const MethodEntry& m : cfg.methods) {
      for (double alpha : cfg.alphas) {
        MethodRun run = run_method(problem, M, M, m, alpha);
        ErrorReport rep = compare_to_reference(part, run.sol, p_ref, u_ref,
                                               adjust, ReferenceKind::Analytic);
        auto cells = method_cells(m, alpha);
        record(cells, problem.grid.h, rep.p_abs, rep.u_abs);
        cells.insert(cells.end(),
                     {std::to_string(M), format_number(problem.grid.h),
                      format_number(rep.p_abs), format_number(rep.u_abs),
                      format_number(rep.p_rel), format_number(rep.u_rel),
                      format_number(run.total_ms)});
        csv += join_row(cells);
      }
    }
  }

  std::string slopes = join_row(
      {"method", "d", "l", "Ns", "alpha", "slope_p", "slope_u"});
  for (const std::string& key : series_order) {
    auto cells = series_cells[key];
    const Series& s = series[key];
    if (s.p.size() >= 2) {
      cells.push_back(format_number(convergence_slope(s.p)));
      cells.push_back(format_number(convergence_slope(s.u)));
      slopes += join_row(cells);
    }
  }
  write_file(std::filesystem::path(cfg.out) / "refine.csv", csv);
  write_file(std::filesystem::path(cfg.out) / "refine_slopes.csv", slopes);
  return csv;
}

std::string run_smoothing_study(const ExperimentConfig& cfg) {
  ExperimentSetup setup = build_setup(cfg);
  const DarcyProblem& problem = setup.problem;
  const Partition part = build_partition(problem.grid, setup.mx, setup.my);
  const darcy::FineSolution fine = darcy::solve_fine(problem);
  const bool adjust = cfg.mean_adjust && problem.pure_neumann();
  const MethodEntry base = cfg.methods.front();
  const double alpha = cfg.alphas.front();

  std::string csv = join_row({"method", "d", "l", "Ns", "alpha", "err_p_rel",
                              "err_u_rel", "runtime_ms"});
  const auto t0 = std::chrono::steady_clock::now();
  OversampledPartition op = oversample(part, base.l);
  MrcmRun run = run_mrcm(problem, op, SpaceKind::Informed, base.d, alpha);
  Smoother smoother(problem, op, 1.0, &run.spaces);
  MultiscaleSolution sol = std::move(run.solution);
  for (int ns = 0; ns <= cfg.smooth_steps_max; ++ns) {
    if (ns > 0) smoother.sweep(sol);
    ErrorReport rep = compare_to_reference(part, sol, fine.p, fine.u, adjust,
                                           ReferenceKind::FineGrid);
    MethodEntry row = base;
    row.ns = ns;
    auto cells = method_cells(row, alpha);
    cells.insert(cells.end(),
                 {format_number(rep.p_rel), format_number(rep.u_rel),
                  format_number(ms_since(t0))});
    csv += join_row(cells);
  }
  write_file(std::filesystem::path(cfg.out) / "smooth_study.csv", csv);
  return csv;
}

std::string run_solve(const ExperimentConfig& cfg) {
  ExperimentSetup setup = build_setup(cfg);
  const DarcyProblem& problem = setup.problem;
  const Partition part = build_partition(problem.grid, setup.mx, setup.my);
  const darcy::FineSolution fine = darcy::solve_fine(problem);
  const bool adjust = cfg.mean_adjust && problem.pure_neumann();
  const MethodEntry m = cfg.methods.front();
  const double alpha = cfg.alphas.front();

  MethodRun run = run_method(problem, setup.mx, setup.my, m, alpha);
  std::string csv = join_row({"method", "d", "l", "Ns", "alpha", "reference",
                              "err_p_abs", "err_u_abs", "err_p_rel",
                              "err_u_rel", "runtime_ms"});
  {
    ErrorReport rep = compare_to_reference(part, run.sol, fine.p, fine.u,
                                           adjust, ReferenceKind::FineGrid);
    auto cells = method_cells(m, alpha);
    cells.insert(cells.end(),
                 {"fine", format_number(rep.p_abs), format_number(rep.u_abs),
                  format_number(rep.p_rel), format_number(rep.u_rel),
                  format_number(run.total_ms)});
    csv += join_row(cells);
  }
  if (problem.exact) {
    const CellField p_ref = sample_exact_pressure(problem.grid, *problem.exact);
    const EdgeField u_ref = sample_exact_flux(problem.grid, *problem.exact);
    ErrorReport rep = compare_to_reference(part, run.sol, p_ref, u_ref, adjust,
                                           ReferenceKind::Analytic);
    auto cells = method_cells(m, alpha);
    cells.insert(cells.end(),
                 {"analytic", format_number(rep.p_abs),
                  format_number(rep.u_abs), format_number(rep.p_rel),
                  format_number(rep.u_rel), format_number(run.total_ms)});
    csv += join_row(cells);
  }
  write_file(std::filesystem::path(cfg.out) / "summary.csv", csv);
  if (cfg.dump_fields) {
    dump_solution(part, run.sol, std::filesystem::path(cfg.out) / "fields");
  }
  return csv;
}

namespace {

std::string matrix_csv(int rows, int cols,
                       const std::function<double(int, int)>& at) {
  std::string out;
  for (int r = 0; r < rows; ++r) {
    std::vector<std::string> cells(cols);
    for (int c = 0; c < cols; ++c) cells[c] = format_number(at(r, c));
    out += join_row(cells);
  }
  return out;
}

void dump_flux_arrays(const Grid& grid, const EdgeField& u,
                      const std::filesystem::path& dir) {
  write_file(dir / "flux_x.csv",
             matrix_csv(grid.ny, grid.nx + 1, [&](int r, int c) {
               return u[grid.x_edge_id(c, r)];
             }));
  write_file(dir / "flux_y.csv",
             matrix_csv(grid.ny + 1, grid.nx, [&](int r, int c) {
               return u[grid.y_edge_id(c, r)];
             }));
}

void dump_vtk(const Grid& grid, const CellField& p,
              const std::filesystem::path& path) {
  std::string out;
  out += "# vtk DataFile Version 3.0\npressure\nASCII\n";
  out += "DATASET STRUCTURED_POINTS\n";
  out += "DIMENSIONS " + std::to_string(grid.nx + 1) + " " +
         std::to_string(grid.ny + 1) + " 1\n";
  out += "ORIGIN " + format_number(grid.origin_x) + " " +
         format_number(grid.origin_y) + " 0\n";
  out += "SPACING " + format_number(grid.h) + " " + format_number(grid.h) +
         " 1\n";
  out += "CELL_DATA " + std::to_string(grid.cell_count()) + "\n";
  out += "SCALARS pressure double 1\nLOOKUP_TABLE default\n";
  for (int c = 0; c < grid.cell_count(); ++c) out += format_number(p[c]) + "\n";
  write_file(path, out);
}

}  // namespace

void dump_solution(const Partition& part, const MultiscaleSolution& sol,
                   const std::filesystem::path& dir) {
  const Grid& grid = *part.grid;
  const CellField p = composite_pressure(part, sol);
  write_file(dir / "pressure.csv",
             matrix_csv(grid.ny, grid.nx,
                        [&](int r, int c) { return p[grid.cell_id(c, r)]; }));

  // Edge arrays hold the lower-index side's value at two-sided skeleton
  // edges; both sides go to skeleton_two_sided.csv.
  EdgeField u(grid.edge_count(), 0.0);
  for (int s = 0; s < part.count(); ++s) {
    const BoxRegion& box = part.subdomains[s];
    const Grid local = box.local_grid();
    for (int e = 0; e < local.edge_count(); ++e) {
      const int ge = box.global_edge(e);
      if (part.on_skeleton[ge] && part.skeleton_sign(ge, s) < 0) continue;
      u[ge] = sol.sub[s].u[e];
    }
  }
  dump_flux_arrays(grid, u, dir);

  std::string two_sided = join_row({"axis", "i", "j", "u_minus", "u_plus"});
  for (int ge : part.skeleton) {
    const auto [ca, cb] = grid.edge_cells(ge);
    const int sa = part.cell_owner[ca];
    const int sb = part.cell_owner[cb];
    const auto ij = grid.edge_ij(ge);
    two_sided += join_row(
        {grid.edge_axis(ge) == EdgeAxis::X ? "x" : "y", std::to_string(ij[0]),
         std::to_string(ij[1]),
         format_number(sol.sub[sa].u[part.subdomains[sa].local_edge(ge)]),
         format_number(sol.sub[sb].u[part.subdomains[sb].local_edge(ge)])});
  }
  write_file(dir / "skeleton_two_sided.csv", two_sided);

  dump_vtk(grid, p, dir / "pressure.vtk");

  const std::vector<int> path = default_jump_path(part);
  if (!path.empty()) {
    const std::vector<double> jumps = flux_jump_profile(part, sol, path);
    std::string out = join_row({"s", "jump"});
    for (std::size_t t = 0; t < jumps.size(); ++t) {
      out += join_row(
          {format_number((t + 0.5) * grid.h), format_number(jumps[t])});
    }
    write_file(dir / "jump_line0.csv", out);
  }
}

void dump_fine_solution(const Grid& grid, const darcy::FineSolution& fine,
                        const std::filesystem::path& dir) {
  write_file(dir / "pressure.csv",
             matrix_csv(grid.ny, grid.nx, [&](int r, int c) {
               return fine.p[grid.cell_id(c, r)];
             }));
  dump_flux_arrays(grid, fine.u, dir);
  dump_vtk(grid, fine.p, dir / "pressure.vtk");
}

}  // namespace mrcm
