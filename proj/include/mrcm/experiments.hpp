#pragma once

#include <filesystem>
#include <string>
#include <vector>

#include <json.hpp>

#include "mrcm/metrics.hpp"
#include "mrcm/problem.hpp"
#include "mrcm/smoothing.hpp"
#include "mrcm/solver.hpp"

namespace mrcm {

struct ProblemConfig {
  std::string type = "homogeneous";  ///< "homogeneous" | "spe10"
  int subdomains = 8;                ///< homogeneous: M per axis
  int cells = 20;                    ///< homogeneous: local cells per axis
  std::string path;                  ///< spe10: raw file or layer cache
  int layer = 40;
  std::string component = "kx";
  int mx = 11;  ///< spe10 partition
  int my = 3;
};

struct MethodEntry {
  int d = 2;
  int l = 0;
  int ns = 0;

  /// Display name following the usual notation: MRCM for the plain
  /// method, OC-l / OL-l for constant/linear oversampled spaces,
  /// ",kS" suffix for k smoothing steps.
  std::string name() const;
};

struct ExperimentConfig {
  ProblemConfig problem;
  std::vector<MethodEntry> methods;
  std::vector<double> alphas = {1.0};
  std::string out = "results";
  unsigned seed = 0;
  bool mean_adjust = true;
  bool dump_fields = false;
  int threads = 0;
  std::vector<int> refine_subdomain_counts = {2, 4, 8, 16};
  int smooth_steps_max = 8;
};

ExperimentConfig parse_config(const nlohmann::json& j);
nlohmann::json to_json(const ExperimentConfig& cfg);
ExperimentConfig load_config(const std::filesystem::path& file);

/// Applies one `--set key=value` override to a raw config document.
/// Keys are dot paths; numeric path tokens index arrays; values are
/// parsed as JSON when possible, else taken as strings.
void apply_override(nlohmann::json& j, const std::string& key,
                    const std::string& value);

/// Structural validation; throws listing the offending field path
/// (including the oversampling bound l h < H/2 per method entry).
void validate(const ExperimentConfig& cfg);

/// Problem plus partition geometry resolved from a config.
struct ExperimentSetup {
  DarcyProblem problem;
  int mx = 0;
  int my = 0;
};

ExperimentSetup build_setup(const ExperimentConfig& cfg);

/// Runners write their CSV files under cfg.out and also return the main
/// file's content. Numeric cells use scientific notation with 17
/// significant digits; runtime columns are excluded from golden
/// comparisons.
std::string run_alpha_sweep(const ExperimentConfig& cfg);
std::string run_refinement(const ExperimentConfig& cfg);
std::string run_smoothing_study(const ExperimentConfig& cfg);
std::string run_solve(const ExperimentConfig& cfg);

/// Writes pressure.csv (ny rows by nx columns), flux_x.csv, flux_y.csv
/// (lower-index side at two-sided skeleton edges),
/// skeleton_two_sided.csv (both one-sided values), pressure.vtk
/// (legacy structured points), and jump_line0.csv along the default
/// face path when one exists.
void dump_solution(const Partition& part, const MultiscaleSolution& sol,
                   const std::filesystem::path& dir);

void dump_fine_solution(const Grid& grid, const darcy::FineSolution& fine,
                        const std::filesystem::path& dir);

/// 17-significant-digit scientific formatting used in all CSV output.
std::string format_number(double v);

}  // namespace mrcm
