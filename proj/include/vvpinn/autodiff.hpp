#pragma once

#include <Eigen/Dense>

#include <cstddef>
#include <functional>
#include <span>
#include <vector>

namespace vvpinn {

// ---------------------------------------------------------------------------
// Forward mode: input jets
// ---------------------------------------------------------------------------

/// Value with exact d/dx, d/dt and d2/dx2 components. Mixed and second time
/// derivatives are not carried.
struct InputJet {
  double v = 0.0;
  double dx = 0.0;
  double dt = 0.0;
  double dxx = 0.0;

  static constexpr InputJet constant(double c) { return {c, 0.0, 0.0, 0.0}; }
  static constexpr InputJet seed_x(double x) { return {x, 1.0, 0.0, 0.0}; }
  static constexpr InputJet seed_t(double t) { return {t, 0.0, 1.0, 0.0}; }

  friend bool operator==(const InputJet&, const InputJet&) = default;
};

constexpr InputJet jet_add(const InputJet& a, const InputJet& b) {
  return {a.v + b.v, a.dx + b.dx, a.dt + b.dt, a.dxx + b.dxx};
}

constexpr InputJet jet_mul(const InputJet& a, const InputJet& b) {
  return {a.v * b.v, a.v * b.dx + a.dx * b.v, a.v * b.dt + a.dt * b.v,
          a.v * b.dxx + 2.0 * a.dx * b.dx + a.dxx * b.v};
}

constexpr InputJet jet_scale(double c, const InputJet& a) {
  return {c * a.v, c * a.dx, c * a.dt, c * a.dxx};
}

InputJet jet_tanh(const InputJet& a);

constexpr InputJet operator+(const InputJet& a, const InputJet& b) { return jet_add(a, b); }
constexpr InputJet operator*(const InputJet& a, const InputJet& b) { return jet_mul(a, b); }
constexpr InputJet operator*(double c, const InputJet& a) { return jet_scale(c, a); }

// ---------------------------------------------------------------------------
// Reverse mode: matrix-valued gradient tape
// ---------------------------------------------------------------------------

using Matrix = Eigen::MatrixXd;

/// Elementwise tanh for batches (agrees with std::tanh to a few ulps).
Matrix batch_tanh(const Eigen::Ref<const Matrix>& z);

class Tape;

/// Handle to a node recorded on a Tape.
class Var {
 public:
  Var() = default;
  std::size_t id() const { return id_; }
  bool valid() const { return tape_ != nullptr; }
  const Matrix& value() const;
  double scalar() const;

 private:
  friend class Tape;
  Var(const Tape* tape, std::size_t id) : tape_(tape), id_(id) {}
  const Tape* tape_ = nullptr;
  std::size_t id_ = 0;
};

/// Records a composition of matrix operations and propagates adjoints
/// backwards. A batch of input jets is stored as a width x (4 n) matrix with
/// column blocks [value | d/dx | d/dt | d2/dx2]; `jet_tanh` and `add_bias`
/// understand that layout.
///
/// A Tape is single-use and not shareable across threads.
class Tape {
 public:
  Tape() = default;
  Tape(const Tape&) = delete;
  Tape& operator=(const Tape&) = delete;

  Var constant(Matrix value);

  /// Differentiable leaf bound to caller-owned storage. The storage must
  /// outlive the tape; `loss_gradient` rejects it if it has been modified
  /// after recording.
  Var parameter(Eigen::Ref<const Matrix> source);

  Var matmul(Var a, Var b);
  Var add(Var a, Var b);
  Var sub(Var a, Var b);
  Var mul(Var a, Var b);                 ///< elementwise
  Var scale(Var a, double c);
  Var square(Var a);
  Var mean(Var a);                       ///< 1x1
  Var sum(Var a);                        ///< 1x1
  Var cols(Var a, Eigen::Index start, Eigen::Index count);

  /// z + b 1^T applied to the first `count` columns only (b is rows x 1).
  Var add_bias(Var z, Var b, Eigen::Index count);

  /// Elementwise map whose value and slope were computed by the caller.
  Var pointwise(Var a, Matrix value, Matrix slope);

  /// tanh lifted to jet blocks; `channels` is 1 (plain values) or 4.
  Var jet_tanh(Var z, int channels);

  /// Runs the adjoint sweep from a 1x1 root.
  void backward(Var root);

  /// Adjoint of a node after `backward` (zeros if it did not influence root).
  Matrix grad(Var v) const;

  std::size_t size() const { return nodes_.size(); }
  bool empty() const { return nodes_.empty(); }

  /// True if every parameter leaf still matches its bound storage.
  bool parameters_unchanged() const;

 private:
  friend class Var;
  struct Node {
    Matrix value;
    Matrix adjoint;
    bool needs_grad = false;
    std::function<void(Tape&, const Node&)> backprop;
  };
  struct Binding {
    std::size_t node;
    const double* data;
    Eigen::Index rows;
    Eigen::Index cols;
    Eigen::Index outer_stride;
  };

  Var push(Matrix value, bool needs_grad, std::function<void(Tape&, const Node&)> backprop);
  const Node& node(Var v) const;
  bool needs(Var v) const { return node(v).needs_grad; }
  void accumulate(Var v, const Matrix& contribution);
  template <class Expr>
  void accumulate_expr(Var v, const Expr& contribution);

  std::vector<Node> nodes_;
  std::vector<Binding> bindings_;
};

/// Adjoint gradient of a scalar loss with respect to `parameters`, each
/// flattened row-major and concatenated in order.
/// Throws std::logic_error if the tape is empty, the loss is not 1x1, or a
/// bound parameter was mutated after recording.
Eigen::VectorXd loss_gradient(Tape& tape, Var loss, std::span<const Var> parameters);

}  // namespace vvpinn
