#include "vvpinn/pinn.hpp"

#include <cmath>
#include <cstdio>
#include <ostream>
#include <random>

#include "vvpinn/riemann.hpp"

namespace vvpinn {
namespace {

// Uniform draw in the open interval (0, 1).
double open_unit(std::mt19937_64& rng) {
  std::uniform_real_distribution<double> dist(0.0, 1.0);
  double u = 0.0;
  while (u == 0.0) u = dist(rng);
  return u;
}

double weighted_total(const LossBreakdown& l, const TrainConfig& cfg) {
  return cfg.w_res * l.residual + cfg.w_ic * l.initial + cfg.w_bc * (l.boundary_left + l.boundary_right);
}

bool finite(const LossBreakdown& l) {
  return std::isfinite(l.residual) && std::isfinite(l.initial) && std::isfinite(l.boundary_left) &&
         std::isfinite(l.boundary_right) && std::isfinite(l.total);
}

}  // namespace

CollocationSet sample_collocation(double a, double b, double horizon, std::size_t n_interior,
                                  std::size_t n_initial, std::size_t n_boundary, std::uint64_t seed) {
  std::seed_seq seq{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32), 0xC011u};
  std::mt19937_64 rng(seq);
  CollocationSet c;
  c.interior_x.resize(static_cast<Eigen::Index>(n_interior));
  c.interior_t.resize(static_cast<Eigen::Index>(n_interior));
  for (Eigen::Index k = 0; k < c.interior_x.size(); ++k) {
    c.interior_x[k] = a + (b - a) * open_unit(rng);
    c.interior_t[k] = horizon * open_unit(rng);
  }
  c.initial_x.resize(static_cast<Eigen::Index>(n_initial));
  for (Eigen::Index k = 0; k < c.initial_x.size(); ++k) c.initial_x[k] = a + (b - a) * open_unit(rng);
  c.boundary_t.resize(static_cast<Eigen::Index>(n_boundary));
  for (Eigen::Index k = 0; k < c.boundary_t.size(); ++k) c.boundary_t[k] = horizon * open_unit(rng);
  return c;
}

void TrainConfig::validate() const {
  if (!(epsilon > 0.0)) throw std::invalid_argument("config: epsilon must be positive");
  if (!(learning_rate > 0.0)) throw std::invalid_argument("config: learning_rate must be positive");
  if (!(w_res >= 0.0 && w_ic >= 0.0 && w_bc >= 0.0)) throw std::invalid_argument("config: weights must be >= 0");
  if (w_res == 0.0 && w_ic == 0.0 && w_bc == 0.0) throw std::invalid_argument("config: all loss weights are zero");
  if (n_interior == 0 || n_initial == 0 || n_boundary == 0) {
    throw std::invalid_argument("config: collocation counts must be positive");
  }
  if (!(T > 0.0)) throw std::invalid_argument("config: T must be positive");
}

double pde_residual(const NetworkParameters& params, const ConvexFlux& flux, double epsilon,
                    double x, double t) {
  const InputJet u = forward_jet(params, InputJet::seed_x(x), InputJet::seed_t(t));
  return u.dt + flux.speed(u.v) * u.dx - epsilon * u.dxx;
}

LossBreakdown assemble_loss(const NetworkParameters& params, const ConvexFlux& flux,
                            const TestCase& tc, const CollocationSet& colloc, const TrainConfig& cfg) {
  LossBreakdown l;
  for (Eigen::Index k = 0; k < colloc.interior_x.size(); ++k) {
    const double r = pde_residual(params, flux, cfg.epsilon, colloc.interior_x[k], colloc.interior_t[k]);
    l.residual += r * r;
  }
  l.residual /= static_cast<double>(colloc.interior_x.size());

  for (Eigen::Index k = 0; k < colloc.initial_x.size(); ++k) {
    const double x = colloc.initial_x[k];
    const double e = forward(params, x, 0.0) - tc.u0.value(x);
    l.initial += e * e;
  }
  l.initial /= static_cast<double>(colloc.initial_x.size());

  for (Eigen::Index k = 0; k < colloc.boundary_t.size(); ++k) {
    const double t = colloc.boundary_t[k];
    const double rl = left_boundary_residual(flux, tc.boundary.left(t), forward(params, tc.a, t));
    const double rr = right_boundary_residual(flux, tc.boundary.right(t), forward(params, tc.b, t));
    l.boundary_left += rl * rl;
    l.boundary_right += rr * rr;
  }
  l.boundary_left /= static_cast<double>(colloc.boundary_t.size());
  l.boundary_right /= static_cast<double>(colloc.boundary_t.size());
  l.total = weighted_total(l, cfg);
  return l;
}

LossAndGradient loss_and_gradient(const NetworkParameters& params, const ConvexFlux& flux,
                                  const TestCase& tc, const CollocationSet& colloc,
                                  const TrainConfig& cfg) {
  Tape tape;
  const RecordedNetwork net = record_parameters(tape, params);

  // Interior residual u_t + a(u) u_x - eps u_xx.
  const Eigen::Index n = colloc.interior_x.size();
  Var jets = record_forward(tape, net, seeded_input_jets(colloc.interior_x, colloc.interior_t), 4);
  Var u = tape.cols(jets, 0, n);
  Var ux = tape.cols(jets, n, n);
  Var ut = tape.cols(jets, 2 * n, n);
  Var uxx = tape.cols(jets, 3 * n, n);
  const Matrix& uv = u.value();
  Matrix speed(1, n);
  Matrix curvature(1, n);
  for (Eigen::Index k = 0; k < n; ++k) {
    speed(0, k) = flux.speed(uv(0, k));
    curvature(0, k) = flux.curvature(uv(0, k));
  }
  Var a_of_u = tape.pointwise(u, std::move(speed), std::move(curvature));
  Var residual = tape.sub(tape.add(ut, tape.mul(a_of_u, ux)), tape.scale(uxx, cfg.epsilon));
  Var residual_loss = tape.mean(tape.square(residual));

  // Initial mismatch.
  const Eigen::Index ni = colloc.initial_x.size();
  Var u_init = record_forward(tape, net, plain_inputs(colloc.initial_x, Eigen::VectorXd::Zero(ni)), 1);
  Matrix target(1, ni);
  for (Eigen::Index k = 0; k < ni; ++k) target(0, k) = tc.u0.value(colloc.initial_x[k]);
  Var initial_loss = tape.mean(tape.square(tape.sub(u_init, tape.constant(std::move(target)))));

  // Weak boundary penalties through the Riemann fixed-point residual.
  const Eigen::Index nb = colloc.boundary_t.size();
  auto boundary_loss = [&](double x_edge, bool left) {
    Var trace = record_forward(
        tape, net, plain_inputs(Eigen::VectorXd::Constant(nb, x_edge), colloc.boundary_t), 1);
    const Matrix& tv = trace.value();
    Matrix value(1, nb);
    Matrix slope(1, nb);
    for (Eigen::Index k = 0; k < nb; ++k) {
      const double t = colloc.boundary_t[k];
      const BoundaryResidual r = left ? left_boundary_residual_slope(flux, tc.boundary.left(t), tv(0, k))
                                      : right_boundary_residual_slope(flux, tc.boundary.right(t), tv(0, k));
      value(0, k) = r.value;
      slope(0, k) = r.d_trace;
    }
    return tape.mean(tape.square(tape.pointwise(trace, std::move(value), std::move(slope))));
  };
  Var left_loss = boundary_loss(tc.a, true);
  Var right_loss = boundary_loss(tc.b, false);

  Var total = tape.add(tape.add(tape.scale(residual_loss, cfg.w_res), tape.scale(initial_loss, cfg.w_ic)),
                       tape.scale(tape.add(left_loss, right_loss), cfg.w_bc));

  LossAndGradient out;
  out.loss.residual = residual_loss.scalar();
  out.loss.initial = initial_loss.scalar();
  out.loss.boundary_left = left_loss.scalar();
  out.loss.boundary_right = right_loss.scalar();
  out.loss.total = total.scalar();
  out.gradient = loss_gradient(tape, total, net.flat);
  return out;
}

void adam_step(Eigen::VectorXd& params, const Eigen::VectorXd& grads, AdamState& state,
               double learning_rate, const AdamConfig& hyper) {
  if (grads.size() != params.size() || state.m.size() != params.size() || state.v.size() != params.size()) {
    throw std::invalid_argument("adam_step: shape mismatch");
  }
  ++state.step;
  const double step = static_cast<double>(state.step);
  const double c1 = 1.0 - std::pow(hyper.beta1, step);
  const double c2 = 1.0 - std::pow(hyper.beta2, step);
  state.m = hyper.beta1 * state.m + (1.0 - hyper.beta1) * grads;
  state.v = hyper.beta2 * state.v + (1.0 - hyper.beta2) * grads.cwiseProduct(grads);
  params.array() -= learning_rate * (state.m.array() / c1) / ((state.v.array() / c2).sqrt() + hyper.epsilon);
}

TrainResult train(const ConvexFlux& flux, const TestCase& tc, const TrainConfig& cfg,
                  const EpochObserver& observer) {
  cfg.validate();
  const CollocationSet colloc =
      sample_collocation(tc.a, tc.b, cfg.T, cfg.n_interior, cfg.n_initial, cfg.n_boundary, cfg.seed);

  TrainResult result;
  result.params = init_network(cfg.seed, cfg.arch);
  result.history.reserve(cfg.epochs + 1);
  Eigen::VectorXd theta = result.params.flatten();
  AdamState state(theta.size());

  for (std::size_t epoch = 0;; ++epoch) {
    const LossAndGradient lg = loss_and_gradient(result.params, flux, tc, colloc, cfg);
    if (!finite(lg.loss) || !lg.gradient.allFinite()) {
      throw TrainingDiverged(epoch, "training diverged: non-finite loss or gradient at epoch " +
                                        std::to_string(epoch));
    }
    result.history.push_back(lg.loss);
    if (observer) observer(epoch, lg.loss);
    if (epoch == cfg.epochs) break;
    adam_step(theta, lg.gradient, state, cfg.learning_rate);
    result.params.assign(theta);
  }
  return result;
}

void write_loss_history_csv(std::ostream& os, const std::vector<LossBreakdown>& history) {
  os << "epoch,residual,initial,boundary_left,boundary_right,total\n";
  char line[160];
  for (std::size_t k = 0; k < history.size(); ++k) {
    const LossBreakdown& l = history[k];
    std::snprintf(line, sizeof line, "%zu,%.17g,%.17g,%.17g,%.17g,%.17g\n", k, l.residual, l.initial,
                  l.boundary_left, l.boundary_right, l.total);
    os << line;
  }
}

}  // namespace vvpinn
