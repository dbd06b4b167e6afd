#include "vvpinn/autodiff.hpp"

#include <cmath>
#include <stdexcept>
#include <utility>

namespace vvpinn {

InputJet jet_tanh(const InputJet& a) {
  const double s = std::tanh(a.v);
  const double d1 = 1.0 - s * s;
  const double d2 = -2.0 * s * d1;
  return {s, d1 * a.dx, d1 * a.dt, d2 * a.dx * a.dx + d1 * a.dxx};
}

Matrix batch_tanh(const Eigen::Ref<const Matrix>& z) {
  // 1 - 2 / (exp(2z) + 1) vectorizes through Eigen's packet exp.
  return (1.0 - 2.0 / ((2.0 * z.array()).exp() + 1.0)).matrix();
}

const Matrix& Var::value() const {
  if (tape_ == nullptr) throw std::logic_error("Var: not recorded on a tape");
  return tape_->node(*this).value;
}

double Var::scalar() const {
  const Matrix& m = value();
  if (m.rows() != 1 || m.cols() != 1) throw std::logic_error("Var: not a scalar");
  return m(0, 0);
}

Var Tape::push(Matrix value, bool needs_grad, std::function<void(Tape&, const Node&)> backprop) {
  nodes_.push_back(Node{std::move(value), Matrix(), needs_grad, std::move(backprop)});
  return Var(this, nodes_.size() - 1);
}

const Tape::Node& Tape::node(Var v) const {
  if (v.tape_ != this || v.id_ >= nodes_.size()) {
    throw std::logic_error("Tape: variable belongs to a different tape");
  }
  return nodes_[v.id_];
}

void Tape::accumulate(Var v, const Matrix& contribution) { accumulate_expr(v, contribution); }

template <class Expr>
void Tape::accumulate_expr(Var v, const Expr& contribution) {
  Node& n = nodes_[v.id_];
  if (!n.needs_grad) return;
  if (n.adjoint.size() == 0) {
    n.adjoint = contribution;
  } else {
    n.adjoint += contribution;
  }
}

Var Tape::constant(Matrix value) { return push(std::move(value), false, nullptr); }

Var Tape::parameter(Eigen::Ref<const Matrix> source) {
  Var v = push(Matrix(source), true, nullptr);
  bindings_.push_back(Binding{v.id_, source.data(), source.rows(), source.cols(), source.outerStride()});
  return v;
}

bool Tape::parameters_unchanged() const {
  for (const Binding& b : bindings_) {
    Eigen::Map<const Matrix, 0, Eigen::OuterStride<>> current(b.data, b.rows, b.cols,
                                                              Eigen::OuterStride<>(b.outer_stride));
    if (current != nodes_[b.node].value) return false;
  }
  return true;
}

Var Tape::matmul(Var a, Var b) {
  const Matrix& av = node(a).value;
  const Matrix& bv = node(b).value;
  if (av.cols() != bv.rows()) throw std::invalid_argument("Tape::matmul: shape mismatch");
  Matrix out;
  out.noalias() = av * bv;
  return push(std::move(out), needs(a) || needs(b), [a, b](Tape& t, const Node& self) {
    if (t.needs(a)) t.accumulate_expr(a, self.adjoint * t.node(b).value.transpose());
    if (t.needs(b)) t.accumulate_expr(b, t.node(a).value.transpose() * self.adjoint);
  });
}

Var Tape::add(Var a, Var b) {
  const Matrix& av = node(a).value;
  const Matrix& bv = node(b).value;
  if (av.rows() != bv.rows() || av.cols() != bv.cols()) {
    throw std::invalid_argument("Tape::add: shape mismatch");
  }
  return push(av + bv, needs(a) || needs(b), [a, b](Tape& t, const Node& self) {
    t.accumulate(a, self.adjoint);
    t.accumulate(b, self.adjoint);
  });
}

Var Tape::sub(Var a, Var b) {
  const Matrix& av = node(a).value;
  const Matrix& bv = node(b).value;
  if (av.rows() != bv.rows() || av.cols() != bv.cols()) {
    throw std::invalid_argument("Tape::sub: shape mismatch");
  }
  return push(av - bv, needs(a) || needs(b), [a, b](Tape& t, const Node& self) {
    t.accumulate(a, self.adjoint);
    t.accumulate_expr(b, -self.adjoint);
  });
}

Var Tape::mul(Var a, Var b) {
  const Matrix& av = node(a).value;
  const Matrix& bv = node(b).value;
  if (av.rows() != bv.rows() || av.cols() != bv.cols()) {
    throw std::invalid_argument("Tape::mul: shape mismatch");
  }
  return push(av.cwiseProduct(bv), needs(a) || needs(b), [a, b](Tape& t, const Node& self) {
    if (t.needs(a)) t.accumulate_expr(a, self.adjoint.cwiseProduct(t.node(b).value));
    if (t.needs(b)) t.accumulate_expr(b, self.adjoint.cwiseProduct(t.node(a).value));
  });
}

Var Tape::scale(Var a, double c) {
  return push(c * node(a).value, needs(a),
              [a, c](Tape& t, const Node& self) { t.accumulate_expr(a, c * self.adjoint); });
}

Var Tape::square(Var a) {
  return push(node(a).value.array().square().matrix(), needs(a), [a](Tape& t, const Node& self) {
    t.accumulate_expr(a, 2.0 * self.adjoint.cwiseProduct(t.node(a).value));
  });
}

Var Tape::sum(Var a) {
  Matrix out(1, 1);
  out(0, 0) = node(a).value.sum();
  return push(std::move(out), needs(a), [a](Tape& t, const Node& self) {
    const Matrix& av = t.node(a).value;
    t.accumulate_expr(a, Matrix::Constant(av.rows(), av.cols(), self.adjoint(0, 0)));
  });
}

Var Tape::mean(Var a) {
  const Matrix& av = node(a).value;
  if (av.size() == 0) throw std::invalid_argument("Tape::mean: empty operand");
  const double inv = 1.0 / static_cast<double>(av.size());
  Matrix out(1, 1);
  out(0, 0) = av.sum() * inv;
  return push(std::move(out), needs(a), [a, inv](Tape& t, const Node& self) {
    const Matrix& v = t.node(a).value;
    t.accumulate_expr(a, Matrix::Constant(v.rows(), v.cols(), self.adjoint(0, 0) * inv));
  });
}

Var Tape::cols(Var a, Eigen::Index start, Eigen::Index count) {
  const Matrix& av = node(a).value;
  if (start < 0 || count < 0 || start + count > av.cols()) {
    throw std::invalid_argument("Tape::cols: range out of bounds");
  }
  return push(av.middleCols(start, count), needs(a), [a, start, count](Tape& t, const Node& self) {
    Node& parent = t.nodes_[a.id_];
    if (!parent.needs_grad) return;
    if (parent.adjoint.size() == 0) parent.adjoint = Matrix::Zero(parent.value.rows(), parent.value.cols());
    parent.adjoint.middleCols(start, count) += self.adjoint;
  });
}

Var Tape::add_bias(Var z, Var b, Eigen::Index count) {
  const Matrix& zv = node(z).value;
  const Matrix& bv = node(b).value;
  if (bv.cols() != 1 || bv.rows() != zv.rows() || count > zv.cols()) {
    throw std::invalid_argument("Tape::add_bias: shape mismatch");
  }
  Matrix out = zv;
  out.leftCols(count).colwise() += bv.col(0);
  return push(std::move(out), needs(z) || needs(b), [z, b, count](Tape& t, const Node& self) {
    t.accumulate(z, self.adjoint);
    if (t.needs(b)) t.accumulate_expr(b, self.adjoint.leftCols(count).rowwise().sum());
  });
}

Var Tape::pointwise(Var a, Matrix value, Matrix slope) {
  const Matrix& av = node(a).value;
  if (value.rows() != av.rows() || value.cols() != av.cols() || slope.rows() != av.rows() ||
      slope.cols() != av.cols()) {
    throw std::invalid_argument("Tape::pointwise: shape mismatch");
  }
  return push(std::move(value), needs(a), [a, slope = std::move(slope)](Tape& t, const Node& self) {
    t.accumulate_expr(a, self.adjoint.cwiseProduct(slope));
  });
}

Var Tape::jet_tanh(Var z, int channels) {
  const Matrix& zv = node(z).value;
  if (channels != 1 && channels != 4) throw std::invalid_argument("Tape::jet_tanh: channels must be 1 or 4");
  if (zv.cols() % channels != 0) throw std::invalid_argument("Tape::jet_tanh: column count");
  const Eigen::Index n = zv.cols() / channels;
  const Eigen::Index w = zv.rows();

  Matrix s = batch_tanh(zv.leftCols(n));
  Matrix d1 = (1.0 - s.array().square()).matrix();
  Matrix out(w, zv.cols());
  out.leftCols(n) = s;

  if (channels == 1) {
    return push(std::move(out), needs(z), [z, d1 = std::move(d1)](Tape& t, const Node& self) {
      t.accumulate_expr(z, self.adjoint.cwiseProduct(d1));
    });
  }

  Matrix d2 = (-2.0 * s.array() * d1.array()).matrix();
  const auto zx = zv.middleCols(n, n).array();
  const auto zt = zv.middleCols(2 * n, n).array();
  const auto zxx = zv.middleCols(3 * n, n).array();
  out.middleCols(n, n) = (d1.array() * zx).matrix();
  out.middleCols(2 * n, n) = (d1.array() * zt).matrix();
  out.middleCols(3 * n, n) = (d2.array() * zx.square() + d1.array() * zxx).matrix();

  return push(std::move(out), needs(z),
              [z, n, s = std::move(s), d1 = std::move(d1), d2 = std::move(d2)](Tape& t, const Node& self) {
                if (!t.needs(z)) return;
                const Matrix& in = t.node(z).value;
                const auto zx = in.middleCols(n, n).array();
                const auto zt = in.middleCols(2 * n, n).array();
                const auto zxx = in.middleCols(3 * n, n).array();
                const auto gv = self.adjoint.middleCols(0, n).array();
                const auto gx = self.adjoint.middleCols(n, n).array();
                const auto gt = self.adjoint.middleCols(2 * n, n).array();
                const auto gxx = self.adjoint.middleCols(3 * n, n).array();
                const auto a1 = d1.array();
                const auto a2 = d2.array();
                const auto a3 = (6.0 * s.array().square() - 2.0) * a1;

                Matrix contribution(in.rows(), in.cols());
                contribution.middleCols(0, n) =
                    (gv * a1 + (gx * zx + gt * zt + gxx * zxx) * a2 + gxx * a3 * zx.square()).matrix();
                contribution.middleCols(n, n) = (gx * a1 + 2.0 * gxx * a2 * zx).matrix();
                contribution.middleCols(2 * n, n) = (gt * a1).matrix();
                contribution.middleCols(3 * n, n) = (gxx * a1).matrix();
                t.accumulate(z, contribution);
              });
}

void Tape::backward(Var root) {
  const Node& r = node(root);
  if (r.value.rows() != 1 || r.value.cols() != 1) {
    throw std::logic_error("Tape::backward: root must be a scalar");
  }
  for (Node& n : nodes_) n.adjoint.resize(0, 0);
  if (!r.needs_grad) return;
  nodes_[root.id_].adjoint = Matrix::Ones(1, 1);
  for (std::size_t i = root.id_ + 1; i-- > 0;) {
    const Node& n = nodes_[i];
    if (!n.needs_grad || n.adjoint.size() == 0 || !n.backprop) continue;
    n.backprop(*this, n);
  }
}

Matrix Tape::grad(Var v) const {
  const Node& n = node(v);
  if (n.adjoint.size() == 0) return Matrix::Zero(n.value.rows(), n.value.cols());
  return n.adjoint;
}

Eigen::VectorXd loss_gradient(Tape& tape, Var loss, std::span<const Var> parameters) {
  if (tape.empty()) throw std::logic_error("loss_gradient: empty recording");
  if (!tape.parameters_unchanged()) {
    throw std::logic_error("loss_gradient: parameters were mutated after recording");
  }
  tape.backward(loss);

  Eigen::Index total = 0;
  for (const Var& p : parameters) total += p.value().size();
  Eigen::VectorXd flat(total);
  Eigen::Index k = 0;
  for (const Var& p : parameters) {
    const Matrix g = tape.grad(p);
    for (Eigen::Index r = 0; r < g.rows(); ++r) {
      for (Eigen::Index c = 0; c < g.cols(); ++c) flat[k++] = g(r, c);
    }
  }
  return flat;
}

}  // namespace vvpinn
