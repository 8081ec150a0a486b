#include <CLI11.hpp>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <json.hpp>

#include "mrcm/experiments.hpp"
#include "mrcm/problem.hpp"
#include "mrcm/worker_pool.hpp"

namespace {

struct CommonArgs {
  std::string config_file;
  std::string out_dir;
  int threads = -1;
  std::vector<std::string> overrides;
};

mrcm::ExperimentConfig resolve_config(const CommonArgs& args) {
  nlohmann::json j = nlohmann::json::object();
  if (!args.config_file.empty()) {
    std::ifstream in(args.config_file);
    if (!in) {
      throw std::runtime_error("cannot open config: " + args.config_file);
    }
    in >> j;
  }
  for (const std::string& kv : args.overrides) {
    const auto eq = kv.find('=');
    if (eq == std::string::npos) {
      throw std::runtime_error("--set expects key=value, got: " + kv);
    }
    mrcm::apply_override(j, kv.substr(0, eq), kv.substr(eq + 1));
  }
  mrcm::ExperimentConfig cfg = mrcm::parse_config(j);
  if (!args.out_dir.empty()) cfg.out = args.out_dir;
  if (args.threads >= 0) cfg.threads = args.threads;
  mrcm::validate(cfg);
  return cfg;
}

void add_common(CLI::App* cmd, CommonArgs& args) {
  cmd->add_option("--config", args.config_file, "JSON experiment config");
  cmd->add_option("--out", args.out_dir, "output directory override");
  cmd->add_option("--threads", args.threads, "worker threads (0 = auto)");
  cmd->add_option("--set", args.overrides,
                  "config override key=value (dot paths, repeatable)");
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Multiscale Robin coupled Darcy solver with oversampling "
               "and smoothing"};
  app.require_subcommand(1);

  CommonArgs args;
  auto* solve = app.add_subcommand("solve", "run one method and report errors");
  add_common(solve, args);
  auto* sweep = app.add_subcommand(
      "alpha-sweep", "error table over the Robin parameter grid");
  add_common(sweep, args);
  auto* refine =
      app.add_subcommand("refine", "mesh refinement study (homogeneous)");
  add_common(refine, args);
  auto* smooth_study = app.add_subcommand(
      "smooth-study", "error against the number of smoothing sweeps");
  add_common(smooth_study, args);

  auto* import = app.add_subcommand(
      "spe10-import", "extract one layer of the raw permeability file "
                      "into the layer cache format");
  std::string import_in, import_out, import_component = "kx";
  int import_layer = 40;
  long synth_seed = -1;
  import->add_option("--in", import_in, "raw permeability file");
  import->add_option("--layer", import_layer, "1-based layer index")
      ->check(CLI::Range(1, 85));
  import->add_option("--component", import_component, "kx|ky|kz");
  import->add_option("--out-file", import_out, "cache file to write")
      ->required();
  import->add_option(
      "--synthesize", synth_seed,
      "write a deterministic synthetic stand-in layer from this seed "
      "instead of reading a raw file");

  try {
    app.parse(argc, argv);

    if (import->parsed()) {
      mrcm::PermField field;
      if (synth_seed >= 0) {
        field = mrcm::make_synthetic_layer(static_cast<unsigned>(synth_seed));
      } else {
        if (import_in.empty()) {
          throw std::runtime_error("spe10-import needs --in or --synthesize");
        }
        field = mrcm::load_spe10(
            import_in, import_layer,
            mrcm::spe10_component_from_string(import_component));
      }
      mrcm::write_spe10_cache(
          import_out, field, import_layer,
          mrcm::spe10_component_from_string(import_component));
      std::cout << "wrote " << import_out << "\n";
      return 0;
    }

    const mrcm::ExperimentConfig cfg = resolve_config(args);
    std::string csv;
    if (solve->parsed()) csv = mrcm::run_solve(cfg);
    if (sweep->parsed()) csv = mrcm::run_alpha_sweep(cfg);
    if (refine->parsed()) csv = mrcm::run_refinement(cfg);
    if (smooth_study->parsed()) csv = mrcm::run_smoothing_study(cfg);
    std::cout << csv;
    std::cerr << "results written to " << cfg.out << "\n";
  } catch (const CLI::ParseError& e) {
    return app.exit(e);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 0;
}
