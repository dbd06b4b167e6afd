#include <doctest.h>

#include <cmath>
#include <random>
#include <sstream>
#include <stdexcept>

#include "vvpinn/network.hpp"

using namespace vvpinn;

TEST_CASE("default architecture has 921 parameters") {
  const NetworkParameters p = init_network(1);
  CHECK(p.count() == 921);
  CHECK(p.flatten().size() == 921);
  CHECK(p.layer_count() == 4);
  CHECK(p.layer(0).weight.rows() == 20);
  CHECK(p.layer(0).weight.cols() == 2);
  CHECK(p.layer(1).weight.rows() == 20);
  CHECK(p.layer(1).weight.cols() == 20);
  CHECK(p.layer(3).weight.rows() == 1);
  CHECK(p.layer(3).bias.size() == 1);
}

TEST_CASE("init is deterministic and within Glorot bounds") {
  const NetworkParameters a = init_network(42);
  const NetworkParameters b = init_network(42);
  CHECK(a.flatten() == b.flatten());
  CHECK(init_network(43).flatten() != a.flatten());
  for (std::size_t l = 0; l < a.layer_count(); ++l) {
    const Architecture& arch = a.architecture();
    const double bound = std::sqrt(6.0 / (arch.fan_in(l) + arch.fan_out(l)));
    CHECK(a.layer(l).weight.cwiseAbs().maxCoeff() <= bound);
    CHECK(a.layer(l).bias.cwiseAbs().maxCoeff() == 0.0);
  }
}

TEST_CASE("flatten order is row-major weight then bias per layer") {
  NetworkParameters p(Architecture{2, {3}, 1});
  p.layer(0).weight(0, 1) = 5.0;
  p.layer(0).weight(1, 0) = 7.0;
  p.layer(0).bias[2] = 9.0;
  p.layer(1).weight(0, 2) = 11.0;
  const Eigen::VectorXd flat = p.flatten();
  CHECK(flat.size() == 13);
  CHECK(flat[1] == 5.0);
  CHECK(flat[2] == 7.0);
  CHECK(flat[8] == 9.0);
  CHECK(flat[11] == 11.0);
  NetworkParameters q(Architecture{2, {3}, 1});
  q.assign(flat);
  CHECK(q.flatten() == flat);
  CHECK_THROWS_AS(q.assign(Eigen::VectorXd::Zero(5)), std::invalid_argument);
}

TEST_CASE("forward of trivial networks") {
  NetworkParameters p(Architecture{});
  CHECK(forward(p, 0.3, 0.4) == 0.0);
  p.layer(3).bias[0] = -1.25;
  for (double x : {-1.0, 0.0, 0.7}) CHECK(forward(p, x, 0.9) == -1.25);

  // Last layer zeroed with bias c returns exactly c.
  NetworkParameters q = init_network(3);
  q.layer(3).weight.setZero();
  q.layer(3).bias[0] = 0.5;
  CHECK(forward(q, -0.2, 0.1) == 0.5);
  CHECK(forward_jet(NetworkParameters(Architecture{}), InputJet::seed_x(0.1), InputJet::seed_t(0.2)) ==
        InputJet{0, 0, 0, 0});
}

TEST_CASE("seed 42 golden outputs") {
  const NetworkParameters p = init_network(42);
  // Zero biases make every pre-activation vanish at the origin.
  CHECK(forward(p, 0.0, 0.0) == 0.0);
  // Captured from this implementation and frozen for regression.
  CHECK(forward(p, 0.3, 0.7) == doctest::Approx(-0.10858855579912241).epsilon(1e-14));
  CHECK(forward(p, -0.9, 0.1) == doctest::Approx(0.05622091761611285).epsilon(1e-14));
}

TEST_CASE("jet value equals plain forward bitwise, batched forward agrees") {
  const NetworkParameters p = init_network(17);
  std::mt19937_64 rng(1);
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  Eigen::VectorXd xs(100);
  Eigen::VectorXd ts(100);
  for (int k = 0; k < 100; ++k) {
    xs[k] = u(rng);
    ts[k] = 0.5 * (u(rng) + 1.0);
  }
  const Eigen::VectorXd batch = forward_batch(p, xs, ts);
  for (int k = 0; k < 100; ++k) {
    const double plain = forward(p, xs[k], ts[k]);
    const InputJet j = forward_jet(p, InputJet::seed_x(xs[k]), InputJet::seed_t(ts[k]));
    CHECK(j.v == plain);
    CHECK(std::isfinite(j.dxx));
    CHECK(batch[k] == doctest::Approx(plain).epsilon(1e-13).scale(1.0));
  }
}

TEST_CASE("recorded jets agree with scalar jets") {
  const NetworkParameters p = init_network(5);
  Eigen::VectorXd xs(3);
  Eigen::VectorXd ts(3);
  xs << -0.5, 0.1, 0.9;
  ts << 0.2, 0.5, 0.95;
  Tape tape;
  const RecordedNetwork net = record_parameters(tape, p);
  const Matrix out = record_forward(tape, net, seeded_input_jets(xs, ts), 4).value();
  for (int k = 0; k < 3; ++k) {
    const InputJet j = forward_jet(p, InputJet::seed_x(xs[k]), InputJet::seed_t(ts[k]));
    CHECK(out(0, k) == doctest::Approx(j.v).epsilon(1e-13).scale(1.0));
    CHECK(out(0, 3 + k) == doctest::Approx(j.dx).epsilon(1e-12).scale(1.0));
    CHECK(out(0, 6 + k) == doctest::Approx(j.dt).epsilon(1e-12).scale(1.0));
    CHECK(out(0, 9 + k) == doctest::Approx(j.dxx).epsilon(1e-12).scale(1.0));
  }
}

TEST_CASE("checkpoint round trip and header") {
  const NetworkParameters p = init_network(42);
  std::stringstream ss;
  save_checkpoint(ss, p);
  const std::string text = ss.str();
  CHECK(text.find("seed 42\n") != std::string::npos);
  CHECK(text.find("shape 20 2\n") != std::string::npos);
  CHECK(text.find("shape 1 20\n") != std::string::npos);
  CHECK(text.find("count 921\n") != std::string::npos);
  const NetworkParameters q = load_checkpoint(ss);
  CHECK(q.architecture() == p.architecture());
  CHECK(q.seed() == 42);
  CHECK(q.flatten() == p.flatten());

  std::istringstream truncated("seed 1\nlayers 1\nshape 1 2\ncount 3\n0.5\n");
  CHECK_THROWS_AS(load_checkpoint(truncated), std::runtime_error);
}
