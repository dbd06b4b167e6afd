// Acceptance suite: one PASS/FAIL line per criterion.

#include <CLI11.hpp>

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <string>
#include <vector>

#include "vvpinn/cases.hpp"
#include "vvpinn/config.hpp"
#include "vvpinn/harness.hpp"
#include "vvpinn/selftest.hpp"

using namespace vvpinn;
namespace fs = std::filesystem;

namespace {

constexpr double kRiemannSeconds = 10.0;
constexpr double kFvSeconds = 30.0;
constexpr double kTrainSeconds = 15.0 * 60.0;
constexpr double kFinalLoss = 1e-2;
constexpr double kL1 = 0.1;
constexpr double kLinfSmooth = 0.1;
constexpr double kShockTolerance = 0.05;
constexpr std::size_t kDeterminismEpochs = 200;

int failures = 0;

void report(const std::string& id, bool ok, const std::string& what, const std::string& detail) {
  std::printf("[%s] %s %s: %s\n", ok ? "PASS" : "FAIL", id.c_str(), what.c_str(), detail.c_str());
  std::fflush(stdout);
  if (!ok) ++failures;
}

std::string fmt(const char* f, auto... args) {
  char buf[512];
  std::snprintf(buf, sizeof buf, f, args...);
  return buf;
}

double seconds_since(std::chrono::steady_clock::time_point t0) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

// Largest gap between the viscous (Cole-Hopf) and inviscid solutions of the
// whole-line rarefaction uL < uR, sampled around the head corner xi = uR.
double viscous_corner_gap(double ul, double ur, double epsilon, double t) {
  const double h = 1e-5;
  const double reach = 1.5;
  double worst = 0.0;
  for (int k = 0; k <= 200; ++k) {
    const double xi = ur - 0.5 + k * (1.0 / 200.0);
    const double x = xi * t;
    const int n = static_cast<int>(2 * reach / h);
    std::vector<double> logw(n + 1);
    double peak = -1e300;
    for (int j = 0; j <= n; ++j) {
      const double y = x - reach + j * h;
      const double antiderivative = y < 0 ? ul * y : ur * y;
      logw[j] = -(x - y) * (x - y) / (4 * epsilon * t) - antiderivative / (2 * epsilon);
      peak = std::max(peak, logw[j]);
    }
    double num = 0.0;
    double den = 0.0;
    for (int j = 0; j <= n; ++j) {
      const double y = x - reach + j * h;
      const double w = std::exp(logw[j] - peak);
      num += (x - y) / t * w;
      den += w;
    }
    worst = std::max(worst, std::abs(num / den - std::clamp(xi, ul, ur)));
  }
  return worst;
}

void viscous_note() {
  std::string detail;
  const double eps = TrainConfig{}.epsilon;
  for (int id : {1, 3}) {
    const double ul = id == 1 ? 0.0 : -1.0;  // case 1: fan entering at x = a
    for (double t : kEvalTimes) {
      detail += fmt("case %d t=%.2f %.4f; ", id, t, viscous_corner_gap(ul, 1.0, eps, t));
    }
  }
  std::printf("[INFO] C6 note: exact viscous vs inviscid gap at the rarefaction heads (unmasked kinks): %s\n",
              detail.c_str());
  std::fflush(stdout);
}

bool finite(const LossBreakdown& l) {
  return std::isfinite(l.residual) && std::isfinite(l.initial) && std::isfinite(l.boundary_left) &&
         std::isfinite(l.boundary_right) && std::isfinite(l.total);
}

void property_criteria() {
  const auto riemann = selftest::riemann_invariants();
  report("C1", riemann.passed && riemann.seconds < kRiemannSeconds, "riemann/godunov invariants",
         fmt("%.2fs (limit %.0fs) %s", riemann.seconds, kRiemannSeconds, riemann.detail.c_str()));

  const auto godunov = selftest::godunov_extremization(10000);
  report("C2", godunov.passed, "godunov vs brute-force extremization", godunov.detail);

  const auto fv = selftest::fv_convergence();
  report("C3", fv.passed && fv.seconds < kFvSeconds, "fv convergence on the rarefaction",
         fmt("%.2fs (limit %.0fs) %s", fv.seconds, kFvSeconds, fv.detail.c_str()));

  const auto grad = selftest::loss_gradient_check();
  const auto jets = selftest::input_jet_check();
  report("C4", grad.passed && jets.passed, "autodiff vs finite differences",
         "loss gradient: " + grad.detail + "; input jets: " + jets.detail);
}

void training_criteria(const fs::path& out) {
  bool ok5 = true;
  std::string detail5;
  bool ok6 = true;
  std::string detail6;

  for (int id : kCaseIds) {
    const fs::path dir = out / ("case" + std::to_string(id));
    fs::create_directories(dir);
    const ExperimentConfig cfg;  // defaults

    std::fprintf(stderr, "case %d: training %zu epochs\n", id, cfg.train.epochs);
    RunOptions options;
    options.plot_data = true;
    options.observer = [id](std::size_t epoch, const LossBreakdown& l) {
      if (epoch % 500 == 0) std::fprintf(stderr, "  case %d epoch %5zu loss %.6e\n", id, epoch, l.total);
    };

    const auto t0 = std::chrono::steady_clock::now();
    CaseOutcome outcome;
    try {
      outcome = run_case(id, cfg, dir, options);
    } catch (const TrainingDiverged& e) {
      ok5 = ok6 = false;
      detail5 += fmt("case %d diverged at epoch %zu; ", id, e.epoch());
      detail6 += fmt("case %d not trained; ", id);
      continue;
    }
    const double elapsed = seconds_since(t0);

    const auto& history = outcome.training.history;
    bool all_finite = true;
    for (const auto& l : history) all_finite = all_finite && finite(l);
    const double final_loss = history.back().total;

    TrainConfig rerun = cfg.train;
    rerun.epochs = kDeterminismEpochs;
    const TrainResult again = train(burgers(), test_case(id), rerun);
    bool identical = again.history.size() == kDeterminismEpochs + 1;
    for (std::size_t k = 0; identical && k <= kDeterminismEpochs; ++k) identical = again.history[k] == history[k];

    const bool case_ok = elapsed < kTrainSeconds && final_loss < kFinalLoss && all_finite && identical;
    ok5 = ok5 && case_ok;
    detail5 += fmt("case %d %.0fs loss %.3e finite=%d deterministic=%d; ", id, elapsed, final_loss,
                   int(all_finite), int(identical));

    for (const auto& panel : outcome.panels) {
      const auto& r = panel.report;
      bool panel_ok = r.l1 <= kL1 && r.linf_smooth <= kLinfSmooth;
      std::string shock;
      if (id != 3) {
        const double gap = std::abs(panel.prediction_shock_x - panel.reference_shock_x);
        panel_ok = panel_ok && gap <= kShockTolerance;
        shock = fmt(" shock %.4f vs %.4f", panel.prediction_shock_x, panel.reference_shock_x);
      }
      ok6 = ok6 && panel_ok;
      detail6 += fmt("case %d t=%.2f l1 %.4f linf_smooth %.4f%s; ", id, panel.t_eval, r.l1, r.linf_smooth,
                     shock.c_str());
    }
  }

  report("C5", ok5, "training reproduction", detail5);
  report("C6", ok6, "comparison with the reference", detail6);
  viscous_note();
}

void viscosity_trend(const fs::path& out) {
  const double epsilons[] = {0.04, 0.02, 0.01};
  std::vector<double> errors;
  std::string detail;
  for (double eps : epsilons) {
    const fs::path dir = out / fmt("trend_eps%.2f", eps);
    fs::create_directories(dir);
    ExperimentConfig cfg;
    cfg.train.epsilon = eps;
    std::fprintf(stderr, "viscosity trend: case 1, epsilon %.2f\n", eps);
    const CaseOutcome outcome = run_case(1, cfg, dir);
    errors.push_back(outcome.panels.front().report.l1);
    detail += fmt("eps %.2f l1 %.4f; ", eps, errors.back());
  }
  bool ok = true;
  for (std::size_t k = 1; k < errors.size(); ++k) ok = ok && errors[k] <= errors[k - 1];
  report("C7", ok, "vanishing-viscosity trend", detail);
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"vvpinn acceptance suite"};
  std::string out = "acceptance_runs";
  bool trend = false;
  bool properties_only = false;
  app.add_option("--out", out, "Directory for training artifacts");
  app.add_flag("--viscosity-trend", trend, "Run only the slow viscosity trend criterion");
  app.add_flag("--properties-only", properties_only, "Skip the training criteria");
  CLI11_PARSE(app, argc, argv);

  fs::create_directories(out);
  try {
    if (trend) {
      viscosity_trend(out);
    } else {
      property_criteria();
      if (!properties_only) training_criteria(out);
    }
  } catch (const std::exception& e) {
    std::printf("[FAIL] error: %s\n", e.what());
    return 1;
  }
  return failures == 0 ? 0 : 1;
}
