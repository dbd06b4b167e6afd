#include <doctest.h>

#include <cmath>
#include <random>
#include <stdexcept>

#include "vvpinn/autodiff.hpp"
#include "vvpinn/cases.hpp"
#include "vvpinn/network.hpp"
#include "vvpinn/pinn.hpp"

using namespace vvpinn;

TEST_CASE("jet seeds") {
  CHECK(InputJet::seed_x(2.0) == InputJet{2.0, 1.0, 0.0, 0.0});
  CHECK(InputJet::seed_t(3.0) == InputJet{3.0, 0.0, 1.0, 0.0});
  CHECK(InputJet::constant(4.0) == InputJet{4.0, 0.0, 0.0, 0.0});
}

TEST_CASE("jet arithmetic examples") {
  CHECK(jet_mul(InputJet::seed_x(3), InputJet::seed_x(3)) == InputJet{9, 6, 0, 2});
  CHECK(jet_tanh(InputJet::seed_x(0)) == InputJet{0, 1, 0, 0});
  const InputJet xt = jet_mul(InputJet::seed_x(2), InputJet::seed_t(5));
  CHECK(xt == InputJet{10, 5, 2, 0});
  CHECK(jet_add(InputJet::seed_x(1), InputJet::constant(2)) == InputJet{3, 1, 0, 0});
}

TEST_CASE("jet_tanh matches finite differences of tanh") {
  const double x = 0.5;
  const InputJet j = jet_tanh(InputJet::seed_x(x));
  const long double h = 1e-5L;
  const long double lx = x;
  const long double d1 = (std::tanh(lx + h) - std::tanh(lx - h)) / (2 * h);
  const long double d2 = (std::tanh(lx + h) - 2 * std::tanh(lx) + std::tanh(lx - h)) / (h * h);
  CHECK(j.v == std::tanh(x));
  CHECK(std::abs(j.dx - static_cast<double>(d1)) / std::abs(j.dx) < 1e-8);
  CHECK(std::abs(j.dxx - static_cast<double>(d2)) / std::abs(j.dxx) < 1e-8);
  CHECK(j.dt == 0.0);
}

TEST_CASE("tape: square of a single weight") {
  Eigen::MatrixXd w(1, 1);
  w(0, 0) = 3.0;
  Tape tape;
  const Var wv = tape.parameter(w);
  const Var loss = tape.mul(wv, wv);
  const Var params[] = {wv};
  const Eigen::VectorXd g = loss_gradient(tape, loss, params);
  CHECK(g.size() == 1);
  CHECK(g[0] == 6.0);
}

TEST_CASE("tape: recording errors") {
  Tape empty;
  CHECK_THROWS_AS(loss_gradient(empty, Var{}, {}), std::logic_error);

  Eigen::MatrixXd w = Eigen::MatrixXd::Constant(2, 2, 0.5);
  Tape tape;
  const Var wv = tape.parameter(w);
  const Var loss = tape.sum(tape.square(wv));
  w(1, 0) = 2.0;
  const Var params[] = {wv};
  CHECK_THROWS_AS(loss_gradient(tape, loss, params), std::logic_error);

  Tape other;
  const Var not_scalar = other.parameter(w);
  CHECK_THROWS_AS(other.backward(not_scalar), std::logic_error);
}

TEST_CASE("tape: elementwise ops and reductions") {
  Eigen::MatrixXd a(2, 3);
  a << 1, -2, 3, 0.5, 4, -1;
  Eigen::MatrixXd b(2, 3);
  b << 2, 1, -1, 3, 0.25, 2;
  Tape tape;
  const Var av = tape.parameter(a);
  const Var bv = tape.parameter(b);
  // mean((a*b - 2a)^2) + sum(cols(b, 1, 2))
  const Var expr = tape.add(tape.mean(tape.square(tape.sub(tape.mul(av, bv), tape.scale(av, 2.0)))),
                            tape.sum(tape.cols(bv, 1, 2)));
  const Var params[] = {av, bv};
  const Eigen::VectorXd g = loss_gradient(tape, expr, params);
  // dL/da = (2/6)(ab - 2a)(b - 2), dL/db = (2/6)(ab - 2a) a + [col >= 1]
  Eigen::Index k = 0;
  for (Eigen::Index r = 0; r < 2; ++r) {
    for (Eigen::Index c = 0; c < 3; ++c) {
      const double e = a(r, c) * b(r, c) - 2 * a(r, c);
      CHECK(g[k++] == doctest::Approx(e * (b(r, c) - 2) / 3.0).epsilon(1e-14));
    }
  }
  for (Eigen::Index r = 0; r < 2; ++r) {
    for (Eigen::Index c = 0; c < 3; ++c) {
      const double e = a(r, c) * b(r, c) - 2 * a(r, c);
      CHECK(g[k++] == doctest::Approx(e * a(r, c) / 3.0 + (c >= 1 ? 1.0 : 0.0)).epsilon(1e-14));
    }
  }
}

TEST_CASE("tape: jet_tanh adjoint matches finite differences of a scalar functional") {
  // L = sum(c .* jet_tanh(z)) over all four channels.
  std::mt19937_64 rng(5);
  std::normal_distribution<double> nd(0.0, 1.0);
  const Eigen::Index w = 3;
  const Eigen::Index n = 4;
  Eigen::MatrixXd z(w, 4 * n);
  Eigen::MatrixXd c(w, 4 * n);
  for (Eigen::Index i = 0; i < z.size(); ++i) {
    z.data()[i] = nd(rng);
    c.data()[i] = nd(rng);
  }
  auto functional = [&](const Eigen::MatrixXd& zz) {
    Tape t;
    const Var out = t.jet_tanh(t.constant(zz), 4);
    return out.value().cwiseProduct(c).sum();
  };
  Tape tape;
  const Var zv = tape.parameter(z);
  const Var loss = tape.sum(tape.mul(tape.jet_tanh(zv, 4), tape.constant(c)));
  tape.backward(loss);
  const Eigen::MatrixXd g = tape.grad(zv);
  for (Eigen::Index i = 0; i < z.size(); ++i) {
    Eigen::MatrixXd up = z;
    Eigen::MatrixXd down = z;
    up.data()[i] += 1e-6;
    down.data()[i] -= 1e-6;
    const double fd = (functional(up) - functional(down)) / 2e-6;
    CHECK(g.data()[i] == doctest::Approx(fd).epsilon(1e-7).scale(1.0));
  }
}

TEST_CASE("zero-weight network: only the output bias sees the mean output") {
  NetworkParameters p(Architecture{});
  p.layer(3).bias[0] = 0.4;
  std::mt19937_64 rng(11);
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  Eigen::VectorXd xs(10);
  Eigen::VectorXd ts(10);
  for (Eigen::Index k = 0; k < 10; ++k) {
    xs[k] = u(rng);
    ts[k] = u(rng);
  }
  Tape tape;
  const RecordedNetwork net = record_parameters(tape, p);
  const Var loss = tape.mean(record_forward(tape, net, plain_inputs(xs, ts), 1));
  CHECK(loss.scalar() == doctest::Approx(0.4));
  const Eigen::VectorXd g = loss_gradient(tape, loss, net.flat);
  CHECK(g.size() == 921);
  CHECK(g[920] == doctest::Approx(1.0).epsilon(1e-15));
  CHECK(g.head(920).cwiseAbs().maxCoeff() == 0.0);

  // Finite differences agree: perturbing any inner parameter leaves the
  // mean output unchanged to first order.
  Eigen::VectorXd theta = p.flatten();
  for (Eigen::Index k : {0, 100, 500, 900, 920}) {
    NetworkParameters q = p;
    Eigen::VectorXd up = theta;
    Eigen::VectorXd down = theta;
    up[k] += 1e-6;
    down[k] -= 1e-6;
    q.assign(up);
    const double fu = forward_batch(q, xs, ts).mean();
    q.assign(down);
    const double fdn = forward_batch(q, xs, ts).mean();
    CHECK((fu - fdn) / 2e-6 == doctest::Approx(g[k]).scale(1.0).epsilon(1e-8));
  }
}

TEST_CASE("full network loss gradient matches finite differences for 10 seeds") {
  const ConvexFlux flux = burgers();
  double worst = 0.0;
  for (std::uint64_t seed = 1; seed <= 10; ++seed) {
    const TestCase tc = test_case(static_cast<int>(seed % 3) + 1);
    TrainConfig cfg;
    cfg.n_interior = 6;
    cfg.n_initial = 4;
    cfg.n_boundary = 3;
    const CollocationSet colloc = sample_collocation(tc.a, tc.b, cfg.T, 6, 4, 3, seed + 1000);
    NetworkParameters p = init_network(seed);
    Eigen::VectorXd theta = p.flatten();
    std::mt19937_64 rng(seed);
    std::normal_distribution<double> jitter(0.0, 0.05);
    for (Eigen::Index k = 0; k < theta.size(); ++k) theta[k] += jitter(rng);
    p.assign(theta);
    const Eigen::VectorXd g = loss_and_gradient(p, flux, tc, colloc, cfg).gradient;
    NetworkParameters q = p;
    for (Eigen::Index k = 0; k < theta.size(); ++k) {
      const double h = 1e-6 * std::max(1.0, std::abs(theta[k]));
      Eigen::VectorXd s = theta;
      s[k] += h;
      q.assign(s);
      const double up = assemble_loss(q, flux, tc, colloc, cfg).total;
      s[k] -= 2 * h;
      q.assign(s);
      const double down = assemble_loss(q, flux, tc, colloc, cfg).total;
      const double fd = (up - down) / (2 * h);
      worst = std::max(worst, std::abs(g[k] - fd) / std::max({std::abs(g[k]), std::abs(fd), 1e-4}));
    }
  }
  MESSAGE("max relative gradient error " << worst);
  CHECK(worst < 1e-5);
}

TEST_CASE("gradient is linear in the loss weights") {
  const ConvexFlux flux = burgers();
  const TestCase tc = test_case(2);
  TrainConfig cfg;
  const CollocationSet colloc = sample_collocation(tc.a, tc.b, cfg.T, 50, 20, 10, 4);
  const NetworkParameters p = init_network(8);
  auto grad_with = [&](double wr, double wi, double wb) {
    TrainConfig c = cfg;
    c.w_res = wr;
    c.w_ic = wi;
    c.w_bc = wb;
    return loss_and_gradient(p, flux, tc, colloc, c).gradient;
  };
  const double alpha = 0.7;
  const double beta = 2.5;
  const Eigen::VectorXd combined = grad_with(alpha, beta, 0.0);
  const Eigen::VectorXd separate = alpha * grad_with(1.0, 0.0, 0.0) + beta * grad_with(0.0, 1.0, 0.0);
  CHECK((combined - separate).cwiseAbs().maxCoeff() <= 1e-12);
}
