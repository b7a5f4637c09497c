#pragma once

#include <cstddef>
#include <vector>

#include <Eigen/Core>

#include "probsafe/util/random.hpp"

namespace probsafe::rl {

struct DenseLayer {
  Eigen::MatrixXd weight;  ///< out x in
  Eigen::VectorXd bias;    ///< out
};

/// Fully connected network with tanh hidden units and a linear output
/// layer. Batches are column-major: one sample per column.
class Mlp {
 public:
  Mlp() = default;
  /// Zero-initialised network with the given layer widths, input first.
  explicit Mlp(const std::vector<int>& sizes);

  /// Orthogonal weights scaled by `hidden_gain` (hidden layers) and
  /// `output_gain` (last layer), zero biases.
  static Mlp orthogonal(const std::vector<int>& sizes, double hidden_gain, double output_gain, util::Rng& rng);

  int input_size() const;
  int output_size() const;
  std::vector<int> sizes() const;
  std::size_t parameter_count() const;

  std::vector<DenseLayer>& layers() noexcept { return layers_; }
  const std::vector<DenseLayer>& layers() const noexcept { return layers_; }

  /// Activations of every layer, input first; filled by forward().
  struct Tape {
    std::vector<Eigen::MatrixXd> activations;
  };

  Eigen::MatrixXd forward(const Eigen::MatrixXd& input) const;
  Eigen::MatrixXd forward(const Eigen::MatrixXd& input, Tape& tape) const;
  Eigen::VectorXd forward_one(const Eigen::VectorXd& input) const;

  /// Accumulates dLoss/dparams into `grads` (same shape) given
  /// dLoss/doutput for the batch recorded in `tape`.
  void backward(const Tape& tape, const Eigen::MatrixXd& grad_output, Mlp& grads) const;

  void set_zero();
  bool all_finite() const;

  /// Appends weights (column-major) then bias of each layer.
  void flatten_into(Eigen::VectorXd& out, Eigen::Index& offset) const;
  void assign_from(const Eigen::VectorXd& in, Eigen::Index& offset);

 private:
  std::vector<DenseLayer> layers_;
};

}  // namespace probsafe::rl
