#include "vvpinn/network.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <istream>
#include <ostream>
#include <random>
#include <sstream>
#include <stdexcept>
#include <string>

namespace vvpinn {

std::size_t Architecture::parameter_count() const {
  std::size_t total = 0;
  for (std::size_t l = 0; l < layer_count(); ++l) {
    total += static_cast<std::size_t>(fan_out(l)) * static_cast<std::size_t>(fan_in(l) + 1);
  }
  return total;
}

NetworkParameters::NetworkParameters(Architecture arch, std::uint64_t seed)
    : arch_(std::move(arch)), seed_(seed) {
  if (arch_.inputs <= 0 || arch_.outputs <= 0) throw std::invalid_argument("Architecture: empty input or output");
  for (int w : arch_.hidden) {
    if (w <= 0) throw std::invalid_argument("Architecture: hidden widths must be positive");
  }
  layers_.resize(arch_.layer_count());
  for (std::size_t l = 0; l < layers_.size(); ++l) {
    layers_[l].weight = Eigen::MatrixXd::Zero(arch_.fan_out(l), arch_.fan_in(l));
    layers_[l].bias = Eigen::VectorXd::Zero(arch_.fan_out(l));
  }
}

Eigen::VectorXd NetworkParameters::flatten() const {
  Eigen::VectorXd flat(static_cast<Eigen::Index>(count()));
  Eigen::Index k = 0;
  for (const DenseLayer& layer : layers_) {
    for (Eigen::Index r = 0; r < layer.weight.rows(); ++r) {
      for (Eigen::Index c = 0; c < layer.weight.cols(); ++c) flat[k++] = layer.weight(r, c);
    }
    for (Eigen::Index r = 0; r < layer.bias.size(); ++r) flat[k++] = layer.bias[r];
  }
  return flat;
}

void NetworkParameters::assign(const Eigen::VectorXd& flat) {
  if (static_cast<std::size_t>(flat.size()) != count()) {
    throw std::invalid_argument("NetworkParameters::assign: size mismatch");
  }
  Eigen::Index k = 0;
  for (DenseLayer& layer : layers_) {
    for (Eigen::Index r = 0; r < layer.weight.rows(); ++r) {
      for (Eigen::Index c = 0; c < layer.weight.cols(); ++c) layer.weight(r, c) = flat[k++];
    }
    for (Eigen::Index r = 0; r < layer.bias.size(); ++r) layer.bias[r] = flat[k++];
  }
}

bool NetworkParameters::all_finite() const {
  for (const DenseLayer& layer : layers_) {
    if (!layer.weight.allFinite() || !layer.bias.allFinite()) return false;
  }
  return true;
}

NetworkParameters init_network(std::uint64_t seed, const Architecture& arch) {
  NetworkParameters params(arch, seed);
  std::mt19937_64 rng(seed);
  for (std::size_t l = 0; l < params.layer_count(); ++l) {
    DenseLayer& layer = params.layer(l);
    const double bound = std::sqrt(6.0 / static_cast<double>(arch.fan_in(l) + arch.fan_out(l)));
    std::uniform_real_distribution<double> dist(-bound, bound);
    for (Eigen::Index r = 0; r < layer.weight.rows(); ++r) {
      for (Eigen::Index c = 0; c < layer.weight.cols(); ++c) layer.weight(r, c) = dist(rng);
    }
  }
  return params;
}

namespace {

// Shared scalar evaluation for double and InputJet.
template <class T, class Tanh>
T evaluate(const NetworkParameters& params, const T& x, const T& t, Tanh&& activation, T zero) {
  std::vector<T> current{x, t};
  std::vector<T> next;
  const std::size_t last = params.layer_count() - 1;
  for (std::size_t l = 0; l <= last; ++l) {
    const DenseLayer& layer = params.layer(l);
    next.assign(static_cast<std::size_t>(layer.weight.rows()), zero);
    for (Eigen::Index r = 0; r < layer.weight.rows(); ++r) {
      T acc = zero;
      for (Eigen::Index c = 0; c < layer.weight.cols(); ++c) {
        acc = acc + layer.weight(r, c) * current[static_cast<std::size_t>(c)];
      }
      acc = acc + T{layer.bias[r]};
      next[static_cast<std::size_t>(r)] = l == last ? acc : activation(acc);
    }
    current.swap(next);
  }
  return current.front();
}

}  // namespace

double forward(const NetworkParameters& params, double x, double t) {
  return evaluate<double>(params, x, t, [](double z) { return std::tanh(z); }, 0.0);
}

InputJet forward_jet(const NetworkParameters& params, const InputJet& x, const InputJet& t) {
  return evaluate<InputJet>(params, x, t, [](const InputJet& z) { return jet_tanh(z); },
                            InputJet::constant(0.0));
}

Eigen::VectorXd forward_batch(const NetworkParameters& params, const Eigen::VectorXd& xs,
                              const Eigen::VectorXd& ts) {
  Eigen::MatrixXd a = plain_inputs(xs, ts);
  const std::size_t last = params.layer_count() - 1;
  for (std::size_t l = 0; l <= last; ++l) {
    const DenseLayer& layer = params.layer(l);
    Eigen::MatrixXd z = layer.weight * a;
    z.colwise() += layer.bias;
    a = l == last ? std::move(z) : batch_tanh(z);
  }
  return a.row(0).transpose();
}

RecordedNetwork record_parameters(Tape& tape, const NetworkParameters& params) {
  RecordedNetwork net;
  for (std::size_t l = 0; l < params.layer_count(); ++l) {
    const DenseLayer& layer = params.layer(l);
    net.weights.push_back(tape.parameter(layer.weight));
    net.biases.push_back(tape.parameter(layer.bias));
    net.flat.push_back(net.weights.back());
    net.flat.push_back(net.biases.back());
  }
  return net;
}

Matrix seeded_input_jets(const Eigen::VectorXd& xs, const Eigen::VectorXd& ts) {
  if (xs.size() != ts.size()) throw std::invalid_argument("seeded_input_jets: size mismatch");
  const Eigen::Index n = xs.size();
  Matrix in = Matrix::Zero(2, 4 * n);
  in.row(0).head(n) = xs.transpose();
  in.row(1).head(n) = ts.transpose();
  in.row(0).segment(n, n).setOnes();
  in.row(1).segment(2 * n, n).setOnes();
  return in;
}

Matrix plain_inputs(const Eigen::VectorXd& xs, const Eigen::VectorXd& ts) {
  if (xs.size() != ts.size()) throw std::invalid_argument("plain_inputs: size mismatch");
  Matrix in(2, xs.size());
  in.row(0) = xs.transpose();
  in.row(1) = ts.transpose();
  return in;
}

Var record_forward(Tape& tape, const RecordedNetwork& net, const Matrix& inputs, int channels) {
  if (inputs.cols() % channels != 0) throw std::invalid_argument("record_forward: column count");
  const Eigen::Index n = inputs.cols() / channels;
  Var a = tape.constant(inputs);
  const std::size_t last = net.weights.size() - 1;
  for (std::size_t l = 0; l <= last; ++l) {
    Var z = tape.add_bias(tape.matmul(net.weights[l], a), net.biases[l], n);
    a = l == last ? z : tape.jet_tanh(z, channels);
  }
  return a;
}

void save_checkpoint(std::ostream& os, const NetworkParameters& params) {
  const Architecture& arch = params.architecture();
  os << "# vvpinn network checkpoint v1\n";
  os << "seed " << params.seed() << "\n";
  os << "layers " << arch.layer_count() << "\n";
  for (std::size_t l = 0; l < arch.layer_count(); ++l) {
    os << "shape " << arch.fan_out(l) << ' ' << arch.fan_in(l) << "\n";
  }
  os << "count " << params.count() << "\n";
  const Eigen::VectorXd flat = params.flatten();
  char line[40];
  for (Eigen::Index k = 0; k < flat.size(); ++k) {
    std::snprintf(line, sizeof line, "%.17g\n", flat[k]);
    os << line;
  }
}

void save_checkpoint(const std::filesystem::path& path, const NetworkParameters& params) {
  std::ofstream os(path);
  if (!os) throw std::runtime_error("cannot write checkpoint: " + path.string());
  save_checkpoint(os, params);
}

NetworkParameters load_checkpoint(std::istream& is) {
  std::string line;
  auto next_line = [&]() {
    while (std::getline(is, line)) {
      if (!line.empty() && line[0] != '#') return true;
    }
    return false;
  };
  auto expect = [&](const std::string& key) {
    if (!next_line()) throw std::runtime_error("checkpoint: missing '" + key + "'");
    std::istringstream ls(line);
    std::string word;
    ls >> word;
    if (word != key) throw std::runtime_error("checkpoint: expected '" + key + "', got '" + word + "'");
    return ls;
  };

  std::uint64_t seed = 0;
  expect("seed") >> seed;
  std::size_t layers = 0;
  expect("layers") >> layers;
  if (layers < 1) throw std::runtime_error("checkpoint: no layers");
  Architecture arch;
  arch.hidden.clear();
  for (std::size_t l = 0; l < layers; ++l) {
    int rows = 0;
    int cols = 0;
    expect("shape") >> rows >> cols;
    if (l == 0) arch.inputs = cols;
    if (l + 1 < layers) {
      arch.hidden.push_back(rows);
    } else {
      arch.outputs = rows;
    }
  }
  std::size_t count = 0;
  expect("count") >> count;
  NetworkParameters params(arch, seed);
  if (count != params.count()) throw std::runtime_error("checkpoint: count does not match shapes");
  Eigen::VectorXd flat(static_cast<Eigen::Index>(count));
  for (std::size_t k = 0; k < count; ++k) {
    if (!next_line()) throw std::runtime_error("checkpoint: truncated values");
    flat[static_cast<Eigen::Index>(k)] = std::stod(line);
  }
  params.assign(flat);
  return params;
}

NetworkParameters load_checkpoint(const std::filesystem::path& path) {
  std::ifstream is(path);
  if (!is) throw std::runtime_error("cannot read checkpoint: " + path.string());
  return load_checkpoint(is);
}

}  // namespace vvpinn
