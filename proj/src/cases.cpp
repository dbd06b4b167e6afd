#include "vvpinn/cases.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>

namespace vvpinn {

TestCase test_case(int id) {
  TestCase tc;
  tc.id = id;
  tc.a = -1.0;
  tc.b = 1.0;
  tc.boundary.left = [](double t) { return t - 0.5; };
  switch (id) {
    case 1:
      tc.name = "shock";
      tc.u0.value = [](double x) { return x < 0.0 ? 1.0 : 0.0; };
      tc.u0.antiderivative = [](double x) { return x < 0.0 ? x : 0.0; };
      tc.boundary.right = [](double) { return 0.0; };
      break;
    case 2:
      tc.name = "sine";
      tc.u0.value = [](double x) { return -std::sin(std::numbers::pi * x); };
      tc.u0.antiderivative = [](double x) { return std::cos(std::numbers::pi * x) / std::numbers::pi; };
      tc.boundary.right = [](double) { return 0.0; };
      break;
    case 3:
      tc.name = "rarefaction";
      tc.u0.value = [](double x) { return x < 0.0 ? -1.0 : 1.0; };
      tc.u0.antiderivative = [](double x) { return std::abs(x); };
      tc.boundary.right = [](double) { return 1.0; };
      break;
    default:
      throw std::invalid_argument("unknown test case id " + std::to_string(id) + " (expected 1, 2 or 3)");
  }
  return tc;
}

}  // namespace vvpinn
