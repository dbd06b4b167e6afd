#include "vvpinn/harness.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <stdexcept>
#include <string>

#include "vvpinn/flux.hpp"

namespace vvpinn {
namespace {

std::string time_tag(double t) {
  char buf[16];
  std::snprintf(buf, sizeof buf, "%.2f", t);
  return buf;
}

std::ofstream open_output(const std::filesystem::path& path) {
  std::ofstream os(path);
  if (!os) throw std::runtime_error("cannot write " + path.string());
  return os;
}

void write_comparison_csv(const std::filesystem::path& path, const Grid1D& grid, const PanelComparison& panel) {
  std::ofstream os = open_output(path);
  os << "x,u_pinn,u_ref\n";
  char line[96];
  for (std::size_t i = 0; i < grid.n_cells; ++i) {
    std::snprintf(line, sizeof line, "%.17g,%.17g,%.17g\n", grid.center(i), panel.prediction[i],
                  panel.reference.values[i]);
    os << line;
  }
}

// Plot panel on a uniform 401-point grid; the reference is read from the
// cell containing each point.
void write_panel_csv(const std::filesystem::path& path, const Grid1D& grid, const NetworkParameters& params,
                     const PanelComparison& panel) {
  constexpr int kPoints = 401;
  std::ofstream os = open_output(path);
  os << "x,u_pinn,u_ref\n";
  char line[96];
  for (int k = 0; k < kPoints; ++k) {
    const double x = grid.a + (grid.b - grid.a) * k / (kPoints - 1);
    auto cell = static_cast<std::size_t>(std::floor((x - grid.a) / grid.dx()));
    cell = std::min(cell, grid.n_cells - 1);
    std::snprintf(line, sizeof line, "%.17g,%.17g,%.17g\n", x, forward(params, x, panel.t_eval),
                  panel.reference.values[cell]);
    os << line;
  }
}

}  // namespace

std::vector<std::size_t> discontinuity_mask(const Grid1D& grid, const CellField& ref, double threshold) {
  if (!(threshold > 0.0)) throw std::invalid_argument("discontinuity_mask: threshold must be positive");
  const std::size_t n = ref.values.size();
  std::vector<bool> flagged(n, false);
  for (std::size_t i = 0; i + 1 < n; ++i) {
    if (std::abs(ref.values[i + 1] - ref.values[i]) > threshold) flagged[i] = flagged[i + 1] = true;
  }
  const auto radius = static_cast<std::ptrdiff_t>(std::floor(kMaskRadius / grid.dx() + 1e-9));
  std::vector<bool> mask(n, false);
  for (std::size_t i = 0; i < n; ++i) {
    if (!flagged[i]) continue;
    const std::ptrdiff_t lo = std::max<std::ptrdiff_t>(0, static_cast<std::ptrdiff_t>(i) - radius);
    const std::ptrdiff_t hi = std::min<std::ptrdiff_t>(static_cast<std::ptrdiff_t>(n) - 1,
                                                       static_cast<std::ptrdiff_t>(i) + radius);
    for (std::ptrdiff_t j = lo; j <= hi; ++j) mask[static_cast<std::size_t>(j)] = true;
  }
  std::vector<std::size_t> cells;
  for (std::size_t i = 0; i < n; ++i) {
    if (mask[i]) cells.push_back(i);
  }
  return cells;
}

ErrorReport error_report(const Grid1D& grid, const CellField& ref, std::span<const double> approx,
                         double threshold) {
  if (approx.size() != ref.values.size() || ref.values.size() != grid.n_cells) {
    throw std::invalid_argument("error_report: size mismatch");
  }
  const std::vector<std::size_t> masked = discontinuity_mask(grid, ref, threshold);
  std::vector<bool> excluded(grid.n_cells, false);
  for (std::size_t i : masked) excluded[i] = true;

  ErrorReport r;
  r.t_eval = ref.time;
  for (std::size_t i = 0; i < grid.n_cells; ++i) {
    const double e = std::abs(approx[i] - ref.values[i]);
    r.l1 += e;
    r.linf = std::max(r.linf, e);
    if (!excluded[i]) r.linf_smooth = std::max(r.linf_smooth, e);
  }
  r.l1 *= grid.dx();
  return r;
}

double steepest_descent_location(const Grid1D& grid, std::span<const double> values) {
  if (values.size() < 2) throw std::invalid_argument("steepest_descent_location: need two values");
  std::size_t best = 0;
  double drop = values[0] - values[1];
  for (std::size_t i = 1; i + 1 < values.size(); ++i) {
    const double d = values[i] - values[i + 1];
    if (d > drop) {
      drop = d;
      best = i;
    }
  }
  return grid.edge(best + 1);
}

std::vector<double> sample_network(const NetworkParameters& params, const Grid1D& grid, double t) {
  const std::vector<double> centers = grid.centers();
  const Eigen::VectorXd xs =
      Eigen::Map<const Eigen::VectorXd>(centers.data(), static_cast<Eigen::Index>(centers.size()));
  const Eigen::VectorXd u = forward_batch(params, xs, Eigen::VectorXd::Constant(xs.size(), t));
  return {u.data(), u.data() + u.size()};
}

std::vector<PanelComparison> compare_with_reference(const ConvexFlux& flux, const TestCase& tc,
                                                    const NetworkParameters& params, std::size_t ref_cells) {
  const Grid1D grid(tc.a, tc.b, ref_cells);
  std::vector<PanelComparison> panels;
  CellField field = project_initial(grid, tc.u0);
  for (double t : kEvalTimes) {
    field = advance_to(flux, grid, std::move(field), tc.boundary, t);
    PanelComparison p;
    p.t_eval = t;
    p.reference = field;
    p.prediction = sample_network(params, grid, t);
    p.report = error_report(grid, p.reference, p.prediction);
    p.reference_shock_x = steepest_descent_location(grid, p.reference.values);
    p.prediction_shock_x = steepest_descent_location(grid, p.prediction);
    panels.push_back(std::move(p));
  }
  return panels;
}

void write_training_artifacts(const std::filesystem::path& out_dir, const TrainResult& result) {
  std::ofstream history = open_output(out_dir / "loss_history.csv");
  write_loss_history_csv(history, result.history);
  save_checkpoint(out_dir / "checkpoint.txt", result.params);
}

CaseOutcome run_case(int id, const ExperimentConfig& cfg, const std::filesystem::path& out_dir,
                     const RunOptions& options) {
  if (!std::filesystem::is_directory(out_dir)) {
    throw std::runtime_error("output directory does not exist: " + out_dir.string());
  }
  const TestCase tc = test_case(id);
  const ConvexFlux flux = burgers();

  CaseOutcome outcome;
  outcome.training = train(flux, tc, cfg.train, options.observer);
  outcome.grid = Grid1D(tc.a, tc.b, cfg.ref_cells);
  outcome.panels = compare_with_reference(flux, tc, outcome.training.params, cfg.ref_cells);

  write_training_artifacts(out_dir, outcome.training);
  std::ofstream summary = open_output(out_dir / "summary.csv");
  summary << "case,t_eval,l1,linf,linf_smooth,ref_shock_x,pinn_shock_x\n";
  char line[200];
  for (const PanelComparison& p : outcome.panels) {
    write_comparison_csv(out_dir / ("profile_t" + time_tag(p.t_eval) + ".csv"), outcome.grid, p);
    std::snprintf(line, sizeof line, "%d,%.17g,%.17g,%.17g,%.17g,%.17g,%.17g\n", id, p.t_eval, p.report.l1,
                  p.report.linf, p.report.linf_smooth, p.reference_shock_x, p.prediction_shock_x);
    summary << line;
    if (options.plot_data) {
      write_panel_csv(out_dir / ("panel_case" + std::to_string(id) + "_t" + time_tag(p.t_eval) + ".csv"),
                      outcome.grid, outcome.training.params, p);
    }
  }
  std::ofstream used = open_output(out_dir / "config_used.txt");
  write_config(used, cfg);
  return outcome;
}

}  // namespace vvpinn
