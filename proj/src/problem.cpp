#include "mrcm/problem.hpp"

#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <cstring>
#include <fstream>
#include <numbers>
#include <random>
#include <sstream>

namespace mrcm {

namespace {
constexpr double kTwoPi = 2.0 * std::numbers::pi;
}

PermField make_perm_field(int nx, int ny, std::vector<double> values) {
  if (nx < 1 || ny < 1 ||
      values.size() != static_cast<std::size_t>(nx) * ny) {
    throw std::invalid_argument("make_perm_field: shape mismatch");
  }
  for (std::size_t c = 0; c < values.size(); ++c) {
    if (!(values[c] > 0.0) || !std::isfinite(values[c])) {
      throw std::invalid_argument("make_perm_field: nonpositive value at cell " +
                                  std::to_string(c));
    }
  }
  return PermField{nx, ny, std::move(values)};
}

bool DarcyProblem::pure_neumann() const {
  for (int e = 0; e < grid.edge_count(); ++e) {
    if (bc.kind[e] == BcKind::Dirichlet) return false;
  }
  return true;
}

DarcyProblem make_darcy_problem(Grid grid, PermField perm, CellField source,
                                BoundarySpec bc,
                                std::optional<ExactSolution> exact) {
  if (perm.nx != grid.nx || perm.ny != grid.ny) {
    throw std::invalid_argument("make_darcy_problem: perm shape mismatch");
  }
  if (source.size() != static_cast<std::size_t>(grid.cell_count())) {
    throw std::invalid_argument("make_darcy_problem: source size mismatch");
  }
  if (bc.kind.size() != static_cast<std::size_t>(grid.edge_count())) {
    throw std::invalid_argument("make_darcy_problem: bc size mismatch");
  }
  bool any_dirichlet = false;
  for (int e = 0; e < grid.edge_count(); ++e) {
    const bool boundary = grid.edge_on_boundary(e);
    if (boundary && bc.kind[e] == BcKind::None) {
      throw std::invalid_argument("make_darcy_problem: untagged boundary edge " +
                                  std::to_string(e));
    }
    if (!boundary && bc.kind[e] != BcKind::None) {
      throw std::invalid_argument("make_darcy_problem: interior edge tagged " +
                                  std::to_string(e));
    }
    if (bc.kind[e] == BcKind::Dirichlet) any_dirichlet = true;
  }
  if (!any_dirichlet) {
    const double h = grid.h;
    double f_int = 0.0, f_scale = 0.0;
    for (int c = 0; c < grid.cell_count(); ++c) {
      f_int += source[c] * h * h;
      f_scale += std::abs(source[c]) * h * h;
    }
    double z_int = 0.0, z_scale = 0.0;
    for (int e = 0; e < grid.edge_count(); ++e) {
      if (bc.kind[e] == BcKind::Neumann) {
        z_int += bc.value[e] * h;
        z_scale += std::abs(bc.value[e]) * h;
      }
    }
    const double scale = std::max(1.0, f_scale + z_scale);
    if (std::abs(f_int - z_int) > 1e-10 * scale) {
      throw std::invalid_argument(
          "make_darcy_problem: incompatible pure-Neumann data");
    }
  }
  DarcyProblem prob{std::move(grid), std::move(perm), std::move(source),
                    std::move(bc), std::move(exact), {}};
  prob.k_edge = harmonic_edge_coefficients(prob.grid, prob.perm);
  return prob;
}

DarcyProblem make_homogeneous_problem(int M, int n_loc) {
  if (M < 1 || n_loc < 2) {
    throw std::invalid_argument("make_homogeneous_problem: need M >= 1, n_loc >= 2");
  }
  const int n = M * n_loc;
  Grid grid = build_grid(n, n, 1.0 / n);
  PermField perm = make_perm_field(n, n, std::vector<double>(grid.cell_count(), 1.0));
  CellField f(grid.cell_count());
  for (int c = 0; c < grid.cell_count(); ++c) {
    const double x = grid.cell_center_x(c);
    const double y = grid.cell_center_y(c);
    f[c] = 8.0 * std::numbers::pi * std::numbers::pi * std::cos(kTwoPi * x) *
           std::cos(kTwoPi * y);
  }
  BoundarySpec bc = BoundarySpec::empty(grid);
  for (int e = 0; e < grid.edge_count(); ++e) {
    if (grid.edge_on_boundary(e)) bc.set(e, BcKind::Neumann, 0.0);
  }
  ExactSolution exact;
  exact.pressure = [](double x, double y) {
    return std::cos(kTwoPi * x) * std::cos(kTwoPi * y);
  };
  exact.velocity = [](double x, double y) -> std::array<double, 2> {
    return {kTwoPi * std::sin(kTwoPi * x) * std::cos(kTwoPi * y),
            kTwoPi * std::cos(kTwoPi * x) * std::sin(kTwoPi * y)};
  };
  return make_darcy_problem(grid, std::move(perm), std::move(f), std::move(bc),
                            std::move(exact));
}

Spe10Component spe10_component_from_string(const std::string& s) {
  if (s == "kx") return Spe10Component::kx;
  if (s == "ky") return Spe10Component::ky;
  if (s == "kz") return Spe10Component::kz;
  throw std::invalid_argument("unknown permeability component: " + s);
}

const char* spe10_component_name(Spe10Component c) {
  switch (c) {
    case Spe10Component::kx: return "kx";
    case Spe10Component::ky: return "ky";
    case Spe10Component::kz: return "kz";
  }
  return "?";
}

namespace {

// Tokenized read of an entire whitespace-separated double file.
std::vector<double> read_all_doubles(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) {
    throw std::runtime_error("cannot open file: " + path.string());
  }
  std::string text((std::istreambuf_iterator<char>(in)),
                   std::istreambuf_iterator<char>());
  std::vector<double> out;
  out.reserve(1 << 20);
  const char* p = text.c_str();
  const char* end = p + text.size();
  long token = 0;
  while (p < end) {
    while (p < end && std::isspace(static_cast<unsigned char>(*p))) ++p;
    if (p >= end) break;
    char* next = nullptr;
    const double v = std::strtod(p, &next);
    if (next == p || (next < end && !std::isspace(static_cast<unsigned char>(*next)) && *next != '\0')) {
      throw parse_error("non-numeric token " + std::to_string(token) + " in " +
                            path.string(),
                        token);
    }
    out.push_back(v);
    p = next;
    ++token;
  }
  return out;
}

}  // namespace

PermField load_spe10(const std::filesystem::path& path, int layer,
                     Spe10Component component) {
  if (layer < 1 || layer > kSpe10Nz) {
    throw std::out_of_range("layer out of range [1, 85]: " +
                            std::to_string(layer));
  }
  const long per_layer = static_cast<long>(kSpe10Nx) * kSpe10Ny;
  const long per_component = per_layer * kSpe10Nz;
  const long expected = 3 * per_component;
  const std::vector<double> tokens = read_all_doubles(path);
  if (static_cast<long>(tokens.size()) < expected) {
    throw parse_error("short file: expected " + std::to_string(expected) +
                          " values, got " + std::to_string(tokens.size()),
                      static_cast<long>(tokens.size()));
  }
  if (static_cast<long>(tokens.size()) > expected) {
    throw parse_error("trailing data after " + std::to_string(expected) +
                          " values",
                      expected);
  }
  const long base = static_cast<long>(component) * per_component +
                    static_cast<long>(layer - 1) * per_layer;
  std::vector<double> values(per_layer);
  for (long i = 0; i < per_layer; ++i) {
    const double v = tokens[base + i];
    if (!(v > 0.0) || !std::isfinite(v)) {
      throw parse_error("nonpositive value at token " + std::to_string(base + i),
                        base + i);
    }
    values[i] = v;  // x fastest matches row-major (220 columns)
  }
  return PermField{kSpe10Nx, kSpe10Ny, std::move(values)};
}

void write_spe10_cache(const std::filesystem::path& path,
                       const PermField& field, int layer,
                       Spe10Component component) {
  if (field.nx != kSpe10Nx || field.ny != kSpe10Ny) {
    throw std::invalid_argument("write_spe10_cache: field is not 220x60");
  }
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot write file: " + path.string());
  out << "spe10-layer " << layer << ' ' << spe10_component_name(component)
      << ' ' << kSpe10Nx << ' ' << kSpe10Ny << '\n';
  char buf[64];
  for (int j = 0; j < field.ny; ++j) {
    for (int i = 0; i < field.nx; ++i) {
      std::snprintf(buf, sizeof(buf), "%.17g", field.values[j * field.nx + i]);
      out << buf << (i + 1 == field.nx ? '\n' : ' ');
    }
  }
  if (!out) throw std::runtime_error("write failed: " + path.string());
}

PermField load_spe10_cache(const std::filesystem::path& path, int* layer,
                           Spe10Component* component) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot open file: " + path.string());
  std::string magic;
  in >> magic;
  if (magic != "spe10-layer") {
    throw parse_error("not a layer cache file: " + path.string(), 0);
  }
  int file_layer = 0, nx = 0, ny = 0;
  std::string comp;
  in >> file_layer >> comp >> nx >> ny;
  if (!in || nx != kSpe10Nx || ny != kSpe10Ny) {
    throw parse_error("bad layer cache header in " + path.string(), 1);
  }
  std::vector<double> values(static_cast<std::size_t>(nx) * ny);
  for (long i = 0; i < nx * ny; ++i) {
    if (!(in >> values[i])) {
      throw parse_error("short cache file at token " + std::to_string(i + 5),
                        i + 5);
    }
    if (!(values[i] > 0.0) || !std::isfinite(values[i])) {
      throw parse_error("nonpositive value at token " + std::to_string(i + 5),
                        i + 5);
    }
  }
  if (layer) *layer = file_layer;
  if (component) *component = spe10_component_from_string(comp);
  return PermField{nx, ny, std::move(values)};
}

PermField load_spe10_any(const std::filesystem::path& path, int layer,
                         Spe10Component component) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot open file: " + path.string());
  std::string magic;
  in >> magic;
  in.close();
  if (magic == "spe10-layer") {
    int file_layer = 0;
    Spe10Component file_comp{};
    PermField f = load_spe10_cache(path, &file_layer, &file_comp);
    if (file_layer != layer || file_comp != component) {
      throw std::invalid_argument(
          "layer cache holds layer " + std::to_string(file_layer) + "/" +
          spe10_component_name(file_comp) + ", requested " +
          std::to_string(layer) + "/" + spe10_component_name(component));
    }
    return f;
  }
  return load_spe10(path, layer, component);
}

DarcyProblem make_spe10_problem(PermField perm) {
  if (perm.nx != kSpe10Nx || perm.ny != kSpe10Ny) {
    throw std::invalid_argument("make_spe10_problem: field is not 220x60");
  }
  const double h = 1.0 / 60.0;  // domain height 1 with 60 cells
  Grid grid = build_grid(kSpe10Nx, kSpe10Ny, h);
  CellField f(grid.cell_count(), 0.0);
  BoundarySpec bc = BoundarySpec::empty(grid);
  for (int e = 0; e < grid.edge_count(); ++e) {
    if (!grid.edge_on_boundary(e)) continue;
    const auto [i, j] = grid.edge_ij(e);
    if (grid.edge_axis(e) == EdgeAxis::X) {
      bc.set(e, BcKind::Dirichlet, i == 0 ? 1.0 : 0.0);
    } else {
      (void)j;
      bc.set(e, BcKind::Neumann, 0.0);
    }
  }
  return make_darcy_problem(grid, std::move(perm), std::move(f), std::move(bc));
}

EdgeField harmonic_edge_coefficients(const Grid& grid, const PermField& perm) {
  if (perm.nx != grid.nx || perm.ny != grid.ny) {
    throw std::invalid_argument("harmonic_edge_coefficients: shape mismatch");
  }
  EdgeField k(grid.edge_count());
  for (int e = 0; e < grid.edge_count(); ++e) {
    const auto [a, b] = grid.edge_cells(e);
    if (a >= 0 && b >= 0) {
      const double ka = perm.at(a), kb = perm.at(b);
      k[e] = 2.0 * ka * kb / (ka + kb);
    } else {
      k[e] = perm.at(a >= 0 ? a : b);
    }
  }
  return k;
}

PermField make_synthetic_layer(unsigned seed) {
  const int nx = kSpe10Nx, ny = kSpe10Ny;
  std::mt19937 rng(seed);
  std::uniform_real_distribution<double> unit(0.0, 1.0);

  // Random-phase spectral synthesis of a correlated Gaussian-like field.
  const int n_modes = 64;
  std::vector<std::array<double, 4>> modes(n_modes);  // kx, ky, phase, amp
  for (auto& m : modes) {
    const double wavelength = 0.08 + 0.9 * unit(rng);  // in domain-height units
    const double angle = kTwoPi * unit(rng);
    const double k = kTwoPi / wavelength;
    m = {k * std::cos(angle), k * std::sin(angle), kTwoPi * unit(rng),
         std::pow(wavelength, 0.8)};
  }
  const double aspect = static_cast<double>(nx) / ny;
  std::vector<double> logk(static_cast<std::size_t>(nx) * ny, 0.0);
  double lo = 1e300, hi = -1e300;
  for (int j = 0; j < ny; ++j) {
    for (int i = 0; i < nx; ++i) {
      const double x = (i + 0.5) / ny;  // square-cell coordinates, height 1
      const double y = (j + 0.5) / ny;
      double v = 0.0;
      for (const auto& m : modes) {
        v += m[3] * std::cos(m[0] * x + m[1] * y + m[2]);
      }
      logk[j * nx + i] = v;
      lo = std::min(lo, v);
      hi = std::max(hi, v);
    }
  }
  // Rescale to roughly seven orders of magnitude, then carve a meandering
  // high-permeability channel with sharp walls.
  const double span = 16.0;  // ln units, ~ 1e7 contrast
  std::vector<double> values(logk.size());
  for (int j = 0; j < ny; ++j) {
    for (int i = 0; i < nx; ++i) {
      const double x = (i + 0.5) / ny;
      const double y = (j + 0.5) / ny;
      double v = (logk[j * nx + i] - lo) / (hi - lo) - 0.5;
      const double channel_y =
          0.5 + 0.25 * std::sin(kTwoPi * x / aspect * 2.3) +
          0.08 * std::sin(kTwoPi * x * 1.7 + 1.0);
      if (std::abs(y - channel_y) < 0.05) v = 0.55;
      values[j * nx + i] = std::exp(span * v) * 1e-3;
    }
  }
  return make_perm_field(nx, ny, std::move(values));
}

}  // namespace mrcm
