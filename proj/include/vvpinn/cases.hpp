#pragma once

#include <array>
#include <string>

#include "vvpinn/fv_reference.hpp"

namespace vvpinn {

/// Initial-boundary value problem for Burgers' equation on (a, b).
struct TestCase {
  int id = 0;
  std::string name;
  double a = -1.0;
  double b = 1.0;
  InitialData u0;
  BoundaryData boundary;
};

inline constexpr std::array<int, 3> kCaseIds{1, 2, 3};

/// Shared left datum l(t) = t - 0.5; case-specific initial and right data:
///   1: u0 = 1 on (a,0), 0 on (0,b);  r = 0
///   2: u0 = -sin(pi x);              r = 0
///   3: u0 = -1 on (a,0), 1 on (0,b); r = 1
/// Throws std::invalid_argument for other ids.
TestCase test_case(int id);

}  // namespace vvpinn
