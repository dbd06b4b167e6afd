#include "vvpinn/selftest.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <random>
#include <sstream>

#include "vvpinn/cases.hpp"
#include "vvpinn/flux.hpp"
#include "vvpinn/fv_reference.hpp"
#include "vvpinn/network.hpp"
#include "vvpinn/pinn.hpp"
#include "vvpinn/riemann.hpp"

namespace vvpinn::selftest {
namespace {

using Clock = std::chrono::steady_clock;

class Recorder {
 public:
  explicit Recorder(std::string name) : start_(Clock::now()) { result_.name = std::move(name); }

  void check(bool ok, const std::string& what) {
    if (!ok && failures_++ < 5) detail_ << (detail_.tellp() > 0 ? "; " : "") << what;
  }
  void note(const std::string& what) { notes_ << (notes_.tellp() > 0 ? "; " : "") << what; }

  SuiteResult finish() {
    result_.seconds = std::chrono::duration<double>(Clock::now() - start_).count();
    result_.passed = failures_ == 0;
    result_.detail = failures_ == 0 ? notes_.str() : detail_.str();
    return result_;
  }

 private:
  SuiteResult result_;
  Clock::time_point start_;
  std::size_t failures_ = 0;
  std::ostringstream detail_;
  std::ostringstream notes_;
};

std::string fmt(const char* pattern, double a, double b = 0.0, double c = 0.0) {
  char buf[256];
  std::snprintf(buf, sizeof buf, pattern, a, b, c);
  return buf;
}

// Set of values taken by a map over a state grid, sorted for lookup.
std::vector<double> attainable(const std::vector<double>& states, auto&& trace) {
  std::vector<double> out;
  out.reserve(states.size());
  for (double s : states) out.push_back(trace(s));
  std::sort(out.begin(), out.end());
  return out;
}

double distance_to(const std::vector<double>& sorted, double v) {
  auto it = std::lower_bound(sorted.begin(), sorted.end(), v);
  double d = std::numeric_limits<double>::infinity();
  if (it != sorted.end()) d = std::min(d, std::abs(*it - v));
  if (it != sorted.begin()) d = std::min(d, std::abs(*std::prev(it) - v));
  return d;
}

// Exact cell average of clamp(x / t, -1, 1) through its antiderivative.
double rarefaction_antiderivative(double x, double t) {
  if (x < -t) return -x - 0.5 * t;
  if (x > t) return x - 0.5 * t;
  return 0.5 * x * x / t;
}

double rarefaction_l1(const Grid1D& grid, const CellField& field) {
  double err = 0.0;
  for (std::size_t i = 0; i < grid.n_cells; ++i) {
    const double avg = (rarefaction_antiderivative(grid.edge(i + 1), field.time) -
                        rarefaction_antiderivative(grid.edge(i), field.time)) /
                       grid.dx();
    err += std::abs(field.values[i] - avg);
  }
  return err * grid.dx();
}

// Extended-precision evaluation of the network, written independently of
// forward()/forward_jet().
long double mlp_long(const NetworkParameters& p, long double x, long double t) {
  std::vector<long double> a{x, t};
  for (std::size_t l = 0; l < p.layer_count(); ++l) {
    const DenseLayer& layer = p.layer(l);
    std::vector<long double> z(static_cast<std::size_t>(layer.weight.rows()));
    for (Eigen::Index r = 0; r < layer.weight.rows(); ++r) {
      long double acc = layer.bias[r];
      for (Eigen::Index c = 0; c < layer.weight.cols(); ++c) {
        acc += static_cast<long double>(layer.weight(r, c)) * a[static_cast<std::size_t>(c)];
      }
      z[static_cast<std::size_t>(r)] = l + 1 == p.layer_count() ? acc : std::tanh(acc);
    }
    a.swap(z);
  }
  return a.front();
}

}  // namespace

SuiteResult riemann_invariants() {
  Recorder rec("riemann invariants");
  const ConvexFlux flux = burgers();

  std::vector<double> states;
  for (int k = -30; k <= 30; ++k) states.push_back(k / 10.0);
  std::vector<double> speeds;
  for (int k = -40; k <= 40; ++k) speeds.push_back(k / 20.0);

  for (double u : states) {
    for (double xi : speeds) {
      for (Side side : {Side::FromLeft, Side::FromRight}) {
        rec.check(fan_value(flux, xi, u, u, side) == u, fmt("consistency fails at u=%g xi=%g", u, xi));
      }
    }
  }

  int rh_checked = 0;
  for (double uL : states) {
    for (double uR : states) {
      if (uL == uR) continue;
      for (Side side : {Side::FromLeft, Side::FromRight}) {
        double previous = fan_value(flux, speeds.front(), uL, uR, side);
        for (double xi : speeds) {
          const double w = fan_value(flux, xi, uL, uR, side);
          if (uL < uR) {
            rec.check(w >= previous, fmt("rarefaction not monotone for (%g, %g) at xi=%g", uL, uR, xi));
          } else {
            rec.check(w <= previous && (w == uL || w == uR),
                      fmt("shock fan not two-valued for (%g, %g) at xi=%g", uL, uR, xi));
          }
          previous = w;
        }
      }
      if (uL > uR) {
        const double s = shock_speed(flux, uL, uR);
        rec.check(std::abs(flux.eval(uL) - flux.eval(uR) - s * (uL - uR)) <= 1e-12,
                  fmt("Rankine-Hugoniot fails for (%g, %g)", uL, uR));
        ++rh_checked;
      }
      const double g = godunov_flux(flux, uL, uR);
      const double gl = flux.eval(fan_value(flux, 0.0, uL, uR, Side::FromLeft));
      const double gr = flux.eval(fan_value(flux, 0.0, uL, uR, Side::FromRight));
      rec.check(std::abs(g - gl) <= 1e-12 && std::abs(g - gr) <= 1e-12,
                fmt("godunov flux differs from f(W(0)) for (%g, %g)", uL, uR));
    }
  }

  for (std::size_t i = 0; i + 1 < states.size(); ++i) {
    for (double other : states) {
      rec.check(godunov_flux(flux, states[i + 1], other) >= godunov_flux(flux, states[i], other),
                fmt("godunov flux decreasing in uL near (%g, %g)", states[i], other));
      rec.check(godunov_flux(flux, other, states[i + 1]) <= godunov_flux(flux, other, states[i]),
                fmt("godunov flux increasing in uR near (%g, %g)", other, states[i]));
    }
  }

  // Brute-force admissible sets: data on [-1, 1] step 0.01, traces on
  // [-2, 2] step 0.01, free Riemann state on [-3, 3] step 0.005.
  std::vector<double> free_states;
  for (int k = -600; k <= 600; ++k) free_states.push_back(k / 200.0);
  std::size_t pairs = 0;
  std::size_t admissible_left = 0;
  for (int i = -100; i <= 100; ++i) {
    const double datum = i / 100.0;
    const auto left_set = attainable(free_states, [&](double uR) {
      return fan_value(flux, 0.0, datum, uR, Side::FromRight);
    });
    const auto right_set = attainable(free_states, [&](double uL) {
      return fan_value(flux, 0.0, uL, datum, Side::FromLeft);
    });
    for (int j = -200; j <= 200; ++j) {
      const double v = j / 100.0;
      const bool left_residual_zero = std::abs(left_boundary_residual(flux, datum, v)) < 1e-12;
      const bool left_brute = distance_to(left_set, v) < 1e-9;
      rec.check(left_residual_zero == left_brute, fmt("left admissibility mismatch at l=%g v=%g", datum, v));
      const bool right_residual_zero = std::abs(right_boundary_residual(flux, datum, v)) < 1e-12;
      const bool right_brute = distance_to(right_set, v) < 1e-9;
      rec.check(right_residual_zero == right_brute, fmt("right admissibility mismatch at r=%g v=%g", datum, v));
      admissible_left += left_brute ? 1 : 0;
      ++pairs;
    }
  }
  rec.note(std::to_string(pairs) + " (datum, trace) pairs, " + std::to_string(admissible_left) +
           " left-admissible; " + std::to_string(rh_checked) + " shocks checked");
  return rec.finish();
}

SuiteResult godunov_extremization(std::size_t pairs) {
  Recorder rec("godunov extremization");
  const ConvexFlux flux = burgers();
  std::mt19937_64 rng(20240611);
  std::uniform_real_distribution<double> dist(-2.0, 2.0);
  constexpr double h = 1e-4;
  double worst = 0.0;
  for (std::size_t k = 0; k < pairs; ++k) {
    const double uL = dist(rng);
    const double uR = dist(rng);
    const double lo = std::min(uL, uR);
    const double hi = std::max(uL, uR);
    const auto steps = static_cast<std::size_t>(std::ceil((hi - lo) / h));
    double brute = uL >= uR ? -std::numeric_limits<double>::infinity() : std::numeric_limits<double>::infinity();
    for (std::size_t s = 0; s <= steps; ++s) {
      const double u = s == steps ? hi : lo + static_cast<double>(s) * h;
      const double f = flux.eval(u);
      brute = uL >= uR ? std::max(brute, f) : std::min(brute, f);
    }
    const double err = std::abs(godunov_flux(flux, uL, uR) - brute);
    worst = std::max(worst, err);
    rec.check(err <= 1e-8, fmt("godunov(%g, %g) off by %g", uL, uR, err));
  }
  rec.note(std::to_string(pairs) + " pairs, max deviation " + fmt("%.3g", worst));
  return rec.finish();
}

SuiteResult fv_convergence() {
  Recorder rec("fv convergence");
  const ConvexFlux flux = burgers();
  const TestCase tc = test_case(3);

  std::vector<double> errors;
  std::ostringstream summary;
  for (std::size_t cells : {250u, 500u, 1000u, 2000u}) {
    const Grid1D grid(tc.a, tc.b, cells);
    const CellField field = solve_to(flux, grid, tc.u0, tc.boundary, 0.5);
    rec.check(std::abs(field.time - 0.5) <= 1e-12, "solve_to missed t_end");
    errors.push_back(rarefaction_l1(grid, field));
    summary << (errors.size() > 1 ? ", " : "") << cells << ":" << fmt("%.3e", errors.back());
  }
  rec.check(errors.back() <= 5e-3, fmt("L1 error %.3e at 2000 cells exceeds 5e-3", errors.back()));
  double min_ratio = std::numeric_limits<double>::infinity();
  for (std::size_t k = 0; k + 1 < errors.size(); ++k) {
    const double ratio = errors[k] / errors[k + 1];
    min_ratio = std::min(min_ratio, ratio);
    rec.check(ratio >= 1.7, fmt("error ratio %.3f below 1.7", ratio));
  }

  // Conservation up to boundary fluxes, with the weak boundary conditions of
  // every test case active.
  double worst_balance = 0.0;
  for (int id : kCaseIds) {
    const TestCase c = test_case(id);
    const Grid1D grid(c.a, c.b, 200);
    CellField field = project_initial(grid, c.u0);
    for (int n = 0; n < 300; ++n) {
      const StepOutcome out = step_detailed(flux, grid, field, c.boundary, kDefaultCfl);
      double before = 0.0;
      double after = 0.0;
      for (double v : field.values) before += v * grid.dx();
      for (double v : out.field.values) after += v * grid.dx();
      const double balance = std::abs((after - before) - out.dt * (out.left_flux - out.right_flux));
      worst_balance = std::max(worst_balance, balance);
      field = out.field;
    }
  }
  rec.check(worst_balance <= 1e-10, fmt("conservation defect %.3e", worst_balance));

  // Maximum principle with constant data inside the initial range.
  {
    BoundaryData bd{[](double) { return -1.0; }, [](double) { return 1.0; }};
    const Grid1D grid(-1.0, 1.0, 400);
    CellField field = project_initial(grid, test_case(1).u0);
    const double lo = -1.0;  // min(u0, l, r)
    const double hi = 1.0;   // max(u0, l, r)
    for (int n = 0; n < 400; ++n) {
      field = step(flux, grid, field, bd, kDefaultCfl);
      for (double v : field.values) rec.check(v >= lo - 1e-12 && v <= hi + 1e-12, "maximum principle violated");
    }
  }

  rec.note("L1 " + summary.str() + "; min ratio " + fmt("%.3f", min_ratio) + "; conservation defect " +
           fmt("%.2e", worst_balance));
  return rec.finish();
}

SuiteResult loss_gradient_check() {
  Recorder rec("loss gradient vs finite differences");
  const ConvexFlux flux = burgers();
  double worst = 0.0;
  for (int id : kCaseIds) {
    const TestCase tc = test_case(id);
    TrainConfig cfg;
    cfg.arch.hidden = {2, 2, 2};
    cfg.n_interior = cfg.n_initial = cfg.n_boundary = 5;
    const CollocationSet colloc =
        sample_collocation(tc.a, tc.b, cfg.T, cfg.n_interior, cfg.n_initial, cfg.n_boundary, 100 + id);

    NetworkParameters params = init_network(7 + static_cast<std::uint64_t>(id), cfg.arch);
    Eigen::VectorXd theta = params.flatten();
    std::mt19937_64 rng(99 + id);
    std::normal_distribution<double> jitter(0.0, 0.3);
    for (Eigen::Index k = 0; k < theta.size(); ++k) theta[k] += jitter(rng);
    params.assign(theta);

    const LossAndGradient lg = loss_and_gradient(params, flux, tc, colloc, cfg);
    NetworkParameters probe = params;
    for (Eigen::Index k = 0; k < theta.size(); ++k) {
      const double h = 1e-6 * std::max(1.0, std::abs(theta[k]));
      Eigen::VectorXd shifted = theta;
      shifted[k] = theta[k] + h;
      probe.assign(shifted);
      const double up = assemble_loss(probe, flux, tc, colloc, cfg).total;
      shifted[k] = theta[k] - h;
      probe.assign(shifted);
      const double down = assemble_loss(probe, flux, tc, colloc, cfg).total;
      const double fd = (up - down) / (2.0 * h);
      // Relative error with a 1e-4 floor so that near-zero components are
      // judged on absolute agreement.
      const double rel = std::abs(lg.gradient[k] - fd) / std::max({std::abs(lg.gradient[k]), std::abs(fd), 1e-4});
      worst = std::max(worst, rel);
      rec.check(rel < 1e-5, fmt("case %g parameter %g: relative error %.3e", id, static_cast<double>(k), rel));
    }
  }
  rec.note("max relative error " + fmt("%.3e", worst));
  return rec.finish();
}

SuiteResult input_jet_check() {
  Recorder rec("input jets vs finite differences");
  const NetworkParameters params = init_network(42);
  std::mt19937_64 rng(314159);
  std::uniform_real_distribution<double> xs(-1.0, 1.0);
  std::uniform_real_distribution<double> ts(0.0, 1.0);
  constexpr long double h = 1e-4L;
  double worst = 0.0;
  for (int k = 0; k < 100; ++k) {
    const double x = xs(rng);
    const double t = ts(rng);
    const InputJet jet = forward_jet(params, InputJet::seed_x(x), InputJet::seed_t(t));
    const long double u0 = mlp_long(params, x, t);
    const long double dx = (mlp_long(params, x + h, t) - mlp_long(params, x - h, t)) / (2 * h);
    const long double dt = (mlp_long(params, x, t + h) - mlp_long(params, x, t - h)) / (2 * h);
    const long double dxx = (-mlp_long(params, x + 2 * h, t) + 16 * mlp_long(params, x + h, t) - 30 * u0 +
                             16 * mlp_long(params, x - h, t) - mlp_long(params, x - 2 * h, t)) /
                            (12 * h * h);
    const double values[4][2] = {{jet.v, static_cast<double>(u0)},
                                 {jet.dx, static_cast<double>(dx)},
                                 {jet.dt, static_cast<double>(dt)},
                                 {jet.dxx, static_cast<double>(dxx)}};
    for (const auto& [exact, approx] : values) {
      const double rel = std::abs(exact - approx) / std::max({std::abs(exact), std::abs(approx), 1e-4});
      worst = std::max(worst, rel);
      rec.check(rel < 1e-5, fmt("jet mismatch at (%g, %g): relative error %.3e", x, t, rel));
    }
  }
  rec.note("max relative error " + fmt("%.3e", worst));
  return rec.finish();
}

std::vector<SuiteResult> run_all() {
  return {riemann_invariants(), godunov_extremization(), fv_convergence(), loss_gradient_check(),
          input_jet_check()};
}

}  // namespace vvpinn::selftest
