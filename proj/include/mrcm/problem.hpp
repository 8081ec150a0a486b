#pragma once

#include <array>
#include <cstdint>
#include <filesystem>
#include <functional>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "mrcm/mesh.hpp"

namespace mrcm {

/// Cell-centered scalar permeability on an nx-by-ny grid. Values are
/// validated to be strictly positive and finite.
struct PermField {
  int nx = 0;
  int ny = 0;
  std::vector<double> values;

  double at(int cell) const { return values[cell]; }
};

PermField make_perm_field(int nx, int ny, std::vector<double> values);

enum class BcKind : std::uint8_t { None, Dirichlet, Neumann };

/// Per-edge boundary condition tags for one grid. Interior edges carry
/// None; every boundary edge of the governing problem carries exactly
/// one of Dirichlet (pressure g) or Neumann (normal velocity z, with
/// respect to the edge's fixed normal, i.e. the exterior normal on the
/// domain boundary).
struct BoundarySpec {
  std::vector<BcKind> kind;
  std::vector<double> value;

  static BoundarySpec empty(const Grid& g) {
    return BoundarySpec{std::vector<BcKind>(g.edge_count(), BcKind::None),
                        std::vector<double>(g.edge_count(), 0.0)};
  }
  void set(int edge, BcKind k, double v) {
    kind[edge] = k;
    value[edge] = v;
  }
};

struct ExactSolution {
  std::function<double(double, double)> pressure;
  std::function<std::array<double, 2>(double, double)> velocity;
};

/// A complete single-phase flow problem instance. k_edge caches the
/// harmonic edge coefficients of perm.
struct DarcyProblem {
  Grid grid;
  PermField perm;
  CellField source;
  BoundarySpec bc;
  std::optional<ExactSolution> exact;
  EdgeField k_edge;

  bool pure_neumann() const;
};

/// Assembles a DarcyProblem from parts, checking that the boundary is
/// fully tagged and that pure-Neumann data is compatible
/// (|sum f h^2 - sum z h| <= 1e-10 * scale).
DarcyProblem make_darcy_problem(Grid grid, PermField perm, CellField source,
                                BoundarySpec bc,
                                std::optional<ExactSolution> exact = {});

/// Unit-square problem with known solution: K = 1, zero Neumann data,
/// f = 8 pi^2 cos(2 pi x) cos(2 pi y), p = cos(2 pi x) cos(2 pi y).
/// The grid has (M*n_loc)^2 cells so that an M-by-M partition with
/// n_loc-by-n_loc local grids tiles it exactly.
DarcyProblem make_homogeneous_problem(int M, int n_loc);

enum class Spe10Component : std::uint8_t { kx, ky, kz };

Spe10Component spe10_component_from_string(const std::string& s);
const char* spe10_component_name(Spe10Component c);

/// Raised on malformed permeability input files; token_offset is the
/// 0-based index of the offending whitespace-separated token.
class parse_error : public std::runtime_error {
 public:
  parse_error(const std::string& msg, long token_offset)
      : std::runtime_error(msg), token_offset(token_offset) {}
  long token_offset;
};

inline constexpr int kSpe10Nx = 220;
inline constexpr int kSpe10Ny = 60;
inline constexpr int kSpe10Nz = 85;

/// Reads one layer/component from the raw benchmark permeability file
/// (whitespace-separated ASCII floats; 60*220*85 values per component;
/// components in order kx, ky, kz; x index fastest, then y, then z;
/// layer is 1-based). Returns a 220-by-60 field.
PermField load_spe10(const std::filesystem::path& path, int layer,
                     Spe10Component component);

/// Writes/reads the internal layer cache: a header line
/// `spe10-layer <layer> <component> 220 60` followed by 13200 ASCII
/// floats, row-major, round-trip exact.
void write_spe10_cache(const std::filesystem::path& path,
                       const PermField& field, int layer,
                       Spe10Component component);
PermField load_spe10_cache(const std::filesystem::path& path,
                           int* layer = nullptr,
                           Spe10Component* component = nullptr);

/// Loads either the raw file or a layer cache, detected by header.
PermField load_spe10_any(const std::filesystem::path& path, int layer,
                         Spe10Component component);

/// Heterogeneous benchmark problem: rectangular domain of height 1
/// (width 11/3, square cells, h = 1/60), Dirichlet p=1 on the left and
/// p=0 on the right boundary, zero Neumann on top/bottom, f = 0.
DarcyProblem make_spe10_problem(PermField perm);

/// Harmonic average of adjacent cell values per edge:
/// interior 2*kL*kR/(kL+kR), one-sided value on the grid boundary.
EdgeField harmonic_edge_coefficients(const Grid& grid, const PermField& perm);

/// Deterministic high-contrast stand-in layer (220x60) for use when the
/// benchmark dataset is not available: correlated log-permeability
/// spanning several orders of magnitude plus a meandering
/// high-permeability channel.
PermField make_synthetic_layer(unsigned seed);

}  // namespace mrcm
