// Command-line front end: train, reference, compare, selftest.

#include <CLI11.hpp>

#include <chrono>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>

#include "vvpinn/config.hpp"
#include "vvpinn/harness.hpp"
#include "vvpinn/selftest.hpp"

namespace fs = std::filesystem;
using namespace vvpinn;

namespace {

ExperimentConfig config_from(const std::string& path) {
  return path.empty() ? ExperimentConfig{} : load_config(path);
}

EpochObserver progress(std::size_t epochs) {
  const std::size_t every = std::max<std::size_t>(1, epochs / 20);
  return [every, epochs](std::size_t epoch, const LossBreakdown& l) {
    if (epoch % every == 0 || epoch == epochs) {
      std::fprintf(stderr, "epoch %6zu  total %.4e  res %.3e  ic %.3e  bcL %.3e  bcR %.3e\n", epoch, l.total,
                   l.residual, l.initial, l.boundary_left, l.boundary_right);
    }
  };
}

int run_train(int id, const std::string& config_path, const fs::path& out) {
  const ExperimentConfig cfg = config_from(config_path);
  if (!fs::is_directory(out)) throw std::runtime_error("output directory does not exist: " + out.string());
  const TrainResult result = train(burgers(), test_case(id), cfg.train, progress(cfg.train.epochs));
  write_training_artifacts(out, result);
  std::printf("final total loss %.6e after %zu epochs\n", result.history.back().total, cfg.train.epochs);
  return 0;
}

int run_reference(int id, std::size_t cells, double t_end, const fs::path& out) {
  const TestCase tc = test_case(id);
  const Grid1D grid(tc.a, tc.b, cells);
  const CellField field = solve_to(burgers(), grid, tc.u0, tc.boundary, t_end);
  std::ofstream os(out);
  if (!os) throw std::runtime_error("cannot write " + out.string());
  write_profile_csv(os, grid, field);
  return 0;
}

int run_compare(int id, const std::string& config_path, const fs::path& out, bool plot_data) {
  const ExperimentConfig cfg = config_from(config_path);
  RunOptions options;
  options.plot_data = plot_data;
  options.observer = progress(cfg.train.epochs);
  const CaseOutcome outcome = run_case(id, cfg, out, options);
  for (const PanelComparison& p : outcome.panels) {
    std::printf("case %d t=%.2f  l1 %.4e  linf %.4e  linf_smooth %.4e  shock ref %.4f pinn %.4f\n", id, p.t_eval,
                p.report.l1, p.report.linf, p.report.linf_smooth, p.reference_shock_x, p.prediction_shock_x);
  }
  return 0;
}

int run_selftest() {
  bool ok = true;
  for (const selftest::SuiteResult& r : selftest::run_all()) {
    std::printf("[%s] %-36s %6.2fs  %s\n", r.passed ? "PASS" : "FAIL", r.name.c_str(), r.seconds, r.detail.c_str());
    ok = ok && r.passed;
  }
  return ok ? 0 : 1;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Vanishing-viscosity PINN solver for Burgers' equation with weak boundary conditions"};
  app.require_subcommand(1);

  int case_id = 1;
  std::string config_path;
  std::string out_dir = ".";
  auto* train_cmd = app.add_subcommand("train", "Train the network for a test case");
  train_cmd->add_option("--case", case_id, "Test case id")->required()->check(CLI::Range(1, 3));
  train_cmd->add_option("--config", config_path, "Config file")->check(CLI::ExistingFile);
  train_cmd->add_option("--out", out_dir, "Output directory");

  std::size_t cells = kDefaultReferenceCells;
  double t_end = 0.5;
  std::string out_file;
  auto* ref_cmd = app.add_subcommand("reference", "Solve the finite-volume reference");
  ref_cmd->add_option("--case", case_id, "Test case id")->required()->check(CLI::Range(1, 3));
  ref_cmd->add_option("--cells", cells, "Number of cells")->required()->check(CLI::PositiveNumber);
  ref_cmd->add_option("--t-end", t_end, "Final time")->required()->check(CLI::PositiveNumber);
  ref_cmd->add_option("--out", out_file, "Output CSV")->required();

  bool plot_data = false;
  auto* cmp_cmd = app.add_subcommand("compare", "Train and compare with the reference at t = 0.5, 0.75");
  cmp_cmd->add_option("--case", case_id, "Test case id")->required()->check(CLI::Range(1, 3));
  cmp_cmd->add_option("--config", config_path, "Config file")->check(CLI::ExistingFile);
  cmp_cmd->add_option("--out", out_dir, "Output directory")->required();
  cmp_cmd->add_flag("--plot-data", plot_data, "Also write per-panel plot files");

  auto* self_cmd = app.add_subcommand("selftest", "Run the property suites");

  CLI11_PARSE(app, argc, argv);

  try {
    if (*train_cmd) return run_train(case_id, config_path, out_dir);
    if (*ref_cmd) return run_reference(case_id, cells, t_end, out_file);
    if (*cmp_cmd) return run_compare(case_id, config_path, out_dir, plot_data);
    if (*self_cmd) return run_selftest();
  } catch (const TrainingDiverged& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 3;
  } catch (const std::exception& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 2;
  }
  return 0;
}
