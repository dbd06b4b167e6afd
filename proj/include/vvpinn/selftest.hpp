#pragma once

#include <string>
#include <vector>

namespace vvpinn::selftest {

/// Outcome of one property suite.
struct SuiteResult {
  std::string name;
  bool passed = false;
  std::string detail;
  double seconds = 0.0;
};

/// Riemann/Godunov invariants, including brute-force equivalence of the
/// weak-boundary residuals on a 201 x 401 (datum, trace) grid.
SuiteResult riemann_invariants();

/// Godunov flux against brute-force extremization of f (spacing 1e-4) over
/// random state pairs.
SuiteResult godunov_extremization(std::size_t pairs = 10000);

/// Godunov scheme on the rarefaction case against clamp(x/t, -1, 1) at
/// t = 0.5: error at 2000 cells and ratios across 250 -> 2000, plus
/// conservation and maximum-principle checks.
SuiteResult fv_convergence();

/// Tape gradient of the assembled loss against central finite differences,
/// shrunk network (3 hidden layers of 2) and 5 points of each kind.
SuiteResult loss_gradient_check();

/// Jet derivatives of the full network against finite differences of an
/// independent extended-precision evaluation at 100 random points.
SuiteResult input_jet_check();

std::vector<SuiteResult> run_all();

}  // namespace vvpinn::selftest
