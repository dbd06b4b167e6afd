#pragma once

#include <Eigen/Dense>

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <vector>

#include "vvpinn/autodiff.hpp"

namespace vvpinn {

/// Fully connected tanh network (x, t) -> u with a linear output layer.
struct Architecture {
  int inputs = 2;
  std::vector<int> hidden{20, 20, 20};
  int outputs = 1;

  std::size_t layer_count() const { return hidden.size() + 1; }
  int fan_in(std::size_t layer) const { return layer == 0 ? inputs : hidden[layer - 1]; }
  int fan_out(std::size_t layer) const { return layer == hidden.size() ? outputs : hidden[layer]; }
  std::size_t parameter_count() const;

  friend bool operator==(const Architecture&, const Architecture&) = default;
};

struct DenseLayer {
  Eigen::MatrixXd weight;  ///< fan_out x fan_in
  Eigen::VectorXd bias;    ///< fan_out
};

/// Weights and biases of every layer. Flattening order: layer by layer,
/// weight row-major followed by bias.
class NetworkParameters {
 public:
  NetworkParameters() = default;
  explicit NetworkParameters(Architecture arch, std::uint64_t seed = 0);  ///< all zeros

  const Architecture& architecture() const { return arch_; }
  std::uint64_t seed() const { return seed_; }

  std::size_t layer_count() const { return layers_.size(); }
  const DenseLayer& layer(std::size_t i) const { return layers_.at(i); }
  DenseLayer& layer(std::size_t i) { return layers_.at(i); }

  std::size_t count() const { return arch_.parameter_count(); }
  Eigen::VectorXd flatten() const;
  void assign(const Eigen::VectorXd& flat);
  bool all_finite() const;

 private:
  Architecture arch_;
  std::uint64_t seed_ = 0;
  std::vector<DenseLayer> layers_;
};

/// Glorot-uniform weights (bound sqrt(6 / (fan_in + fan_out))), zero biases.
NetworkParameters init_network(std::uint64_t seed, const Architecture& arch = Architecture{});

double forward(const NetworkParameters& params, double x, double t);

/// Same operation order as `forward`, lifted to jets; the value component
/// is bitwise equal to `forward`.
InputJet forward_jet(const NetworkParameters& params, const InputJet& x, const InputJet& t);

/// Batched plain evaluation at the points (xs[k], ts[k]).
Eigen::VectorXd forward_batch(const NetworkParameters& params, const Eigen::VectorXd& xs,
                              const Eigen::VectorXd& ts);

/// Parameter leaves of one recording, in flattening order (W1, b1, W2, ...).
struct RecordedNetwork {
  std::vector<Var> weights;
  std::vector<Var> biases;
  std::vector<Var> flat;
};

RecordedNetwork record_parameters(Tape& tape, const NetworkParameters& params);

/// Input block for `record_forward` with seeded x and t jets: 2 x (4 n).
Matrix seeded_input_jets(const Eigen::VectorXd& xs, const Eigen::VectorXd& ts);

/// Input block for plain evaluation: 2 x n.
Matrix plain_inputs(const Eigen::VectorXd& xs, const Eigen::VectorXd& ts);

/// Records the network applied to an input block of `channels` jet channels
/// (1 or 4). Returns a 1 x (channels n) node.
Var record_forward(Tape& tape, const RecordedNetwork& net, const Matrix& inputs, int channels);

/// Text checkpoint: header with shapes and seed, then the flattened values.
void save_checkpoint(std::ostream& os, const NetworkParameters& params);
void save_checkpoint(const std::filesystem::path& path, const NetworkParameters& params);
NetworkParameters load_checkpoint(std::istream& is);
NetworkParameters load_checkpoint(const std::filesystem::path& path);

}  // namespace vvpinn
