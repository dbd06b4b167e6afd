#pragma once

#include <Eigen/Dense>

#include <cstdint>
#include <functional>
#include <iosfwd>
#include <stdexcept>
#include <vector>

#include "vvpinn/cases.hpp"
#include "vvpinn/flux.hpp"
#include "vvpinn/network.hpp"

namespace vvpinn {

/// Fixed full-batch training points.
struct CollocationSet {
  Eigen::VectorXd interior_x;  ///< in (a, b)
  Eigen::VectorXd interior_t;  ///< in (0, T]
  Eigen::VectorXd initial_x;   ///< in (a, b)
  Eigen::VectorXd boundary_t;  ///< in (0, T], shared by both boundaries
};

CollocationSet sample_collocation(double a, double b, double horizon, std::size_t n_interior,
                                  std::size_t n_initial, std::size_t n_boundary, std::uint64_t seed);

struct TrainConfig {
  double epsilon = 0.01;
  double learning_rate = 1e-3;
  std::size_t epochs = 5000;
  double w_res = 1.0;
  double w_ic = 1.0;
  double w_bc = 1.0;
  std::size_t n_interior = 10000;
  std::size_t n_initial = 256;
  std::size_t n_boundary = 128;
  std::uint64_t seed = 42;
  double T = 1.0;
  Architecture arch;

  /// Throws std::invalid_argument on an inconsistent configuration.
  void validate() const;
};

struct LossBreakdown {
  double residual = 0.0;
  double initial = 0.0;
  double boundary_left = 0.0;
  double boundary_right = 0.0;
  double total = 0.0;

  friend bool operator==(const LossBreakdown&, const LossBreakdown&) = default;
};

/// u_t + a(u) u_x - epsilon u_xx of the network at (x, t).
double pde_residual(const NetworkParameters& params, const ConvexFlux& flux, double epsilon,
                    double x, double t);

/// Loss terms evaluated point by point through `forward` / `forward_jet`.
LossBreakdown assemble_loss(const NetworkParameters& params, const ConvexFlux& flux,
                            const TestCase& tc, const CollocationSet& colloc, const TrainConfig& cfg);

struct LossAndGradient {
  LossBreakdown loss;
  Eigen::VectorXd gradient;  ///< aligned with NetworkParameters::flatten()
};

/// Batched loss recorded on a tape, with its exact parameter gradient.
/// The boundary penalty is differentiated through the piecewise-exact slope
/// of the Riemann trace.
LossAndGradient loss_and_gradient(const NetworkParameters& params, const ConvexFlux& flux,
                                  const TestCase& tc, const CollocationSet& colloc,
                                  const TrainConfig& cfg);

struct AdamConfig {
  double beta1 = 0.9;
  double beta2 = 0.999;
  double epsilon = 1e-8;
};

struct AdamState {
  Eigen::VectorXd m;
  Eigen::VectorXd v;
  std::size_t step = 0;

  AdamState() = default;
  explicit AdamState(Eigen::Index size) : m(Eigen::VectorXd::Zero(size)), v(Eigen::VectorXd::Zero(size)) {}
};

/// Bias-corrected Adam update of `params` in place.
void adam_step(Eigen::VectorXd& params, const Eigen::VectorXd& grads, AdamState& state,
               double learning_rate, const AdamConfig& hyper = {});

class TrainingDiverged : public std::runtime_error {
 public:
  TrainingDiverged(std::size_t epoch, const std::string& what)
      : std::runtime_error(what), epoch_(epoch) {}
  std::size_t epoch() const { return epoch_; }

 private:
  std::size_t epoch_;
};

struct TrainResult {
  NetworkParameters params;
  /// history[k] is the loss after k updates; epochs + 1 entries.
  std::vector<LossBreakdown> history;
};

using EpochObserver = std::function<void(std::size_t epoch, const LossBreakdown&)>;

/// Full-batch Adam on a collocation set drawn once from cfg.seed.
/// Throws TrainingDiverged when the loss stops being finite.
TrainResult train(const ConvexFlux& flux, const TestCase& tc, const TrainConfig& cfg,
                  const EpochObserver& observer = {});

/// `epoch,residual,initial,boundary_left,boundary_right,total`.
void write_loss_history_csv(std::ostream& os, const std::vector<LossBreakdown>& history);

}  // namespace vvpinn
