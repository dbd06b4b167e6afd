#pragma once

#include <array>
#include <filesystem>
#include <span>
#include <vector>

#include "vvpinn/cases.hpp"
#include "vvpinn/config.hpp"
#include "vvpinn/fv_reference.hpp"
#include "vvpinn/network.hpp"
#include "vvpinn/pinn.hpp"

namespace vvpinn {

/// Evaluation times of the comparison panels.
inline constexpr std::array<double, 2> kEvalTimes{0.5, 0.75};

/// Jump per cell above which the reference is treated as discontinuous.
inline constexpr double kJumpThreshold = 0.05;
/// Half-width of the region excluded around a detected discontinuity.
inline constexpr double kMaskRadius = 0.05;

struct ErrorReport {
  double t_eval = 0.0;
  double l1 = 0.0;           ///< midpoint sum of |u - u_ref| dx
  double linf = 0.0;         ///< max over cell centers
  double linf_smooth = 0.0;  ///< max over cells outside the discontinuity mask
};

/// Sorted indices of cells adjacent to a jump |u_{i+1} - u_i| > threshold,
/// dilated by kMaskRadius / dx cells.
std::vector<std::size_t> discontinuity_mask(const Grid1D& grid, const CellField& ref, double threshold);

ErrorReport error_report(const Grid1D& grid, const CellField& ref, std::span<const double> approx,
                         double threshold = kJumpThreshold);

/// Interface x_{i+1/2} with the largest downward jump u_i - u_{i+1}.
double steepest_descent_location(const Grid1D& grid, std::span<const double> values);

/// Network sampled at the cell centers of `grid` at time t.
std::vector<double> sample_network(const NetworkParameters& params, const Grid1D& grid, double t);

struct PanelComparison {
  double t_eval = 0.0;
  CellField reference;
  std::vector<double> prediction;
  ErrorReport report;
  double reference_shock_x = 0.0;
  double prediction_shock_x = 0.0;
};

/// Reference solution at each evaluation time compared with the network.
std::vector<PanelComparison> compare_with_reference(const ConvexFlux& flux, const TestCase& tc,
                                                    const NetworkParameters& params, std::size_t ref_cells);

struct RunOptions {
  bool plot_data = false;
  EpochObserver observer;
};

struct CaseOutcome {
  TrainResult training;
  Grid1D grid;
  std::vector<PanelComparison> panels;
};

/// Trains, solves the reference, and writes into `out_dir` (which must exist):
/// profile_t0.50.csv / profile_t0.75.csv (`x,u_pinn,u_ref`), loss_history.csv,
/// checkpoint.txt, summary.csv and, with plot_data, panel_case<N>_t<T>.csv.
CaseOutcome run_case(int id, const ExperimentConfig& cfg, const std::filesystem::path& out_dir,
                     const RunOptions& options = {});

/// Writes the loss history and checkpoint of a finished training run.
void write_training_artifacts(const std::filesystem::path& out_dir, const TrainResult& result);

}  // namespace vvpinn
