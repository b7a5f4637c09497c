#include "probsafe/rl/mlp.hpp"

#include <stdexcept>

#include <Eigen/QR>

namespace probsafe::rl {

Mlp::Mlp(const std::vector<int>& sizes) {
  if (sizes.size() < 2) throw std::invalid_argument("an MLP needs at least input and output sizes");
  for (const int s : sizes) {
    if (s < 1) throw std::invalid_argument("layer widths must be positive");
  }
  for (std::size_t l = 0; l + 1 < sizes.size(); ++l) {
    layers_.push_back({Eigen::MatrixXd::Zero(sizes[l + 1], sizes[l]), Eigen::VectorXd::Zero(sizes[l + 1])});
  }
}

namespace {

Eigen::MatrixXd orthogonal_matrix(int rows, int cols, double gain, util::Rng& rng) {
  const bool transpose = rows < cols;
  const int m = transpose ? cols : rows;
  const int n = transpose ? rows : cols;
  Eigen::MatrixXd g(m, n);
  for (int j = 0; j < n; ++j) {
    for (int i = 0; i < m; ++i) g(i, j) = rng.normal();
  }
  Eigen::HouseholderQR<Eigen::MatrixXd> qr(g);
  Eigen::MatrixXd q = qr.householderQ() * Eigen::MatrixXd::Identity(m, n);
  const Eigen::MatrixXd r = qr.matrixQR().topRows(n).triangularView<Eigen::Upper>();
  for (int j = 0; j < n; ++j) {
    if (r(j, j) < 0.0) q.col(j) *= -1.0;
  }
  q *= gain;
  return transpose ? Eigen::MatrixXd(q.transpose()) : q;
}

}  // namespace

Mlp Mlp::orthogonal(const std::vector<int>& sizes, double hidden_gain, double output_gain, util::Rng& rng) {
  Mlp net(sizes);
  for (std::size_t l = 0; l < net.layers_.size(); ++l) {
    auto& layer = net.layers_[l];
    const double gain = l + 1 == net.layers_.size() ? output_gain : hidden_gain;
    layer.weight = orthogonal_matrix(static_cast<int>(layer.weight.rows()), static_cast<int>(layer.weight.cols()),
                                     gain, rng);
  }
  return net;
}

int Mlp::input_size() const { return layers_.empty() ? 0 : static_cast<int>(layers_.front().weight.cols()); }
int Mlp::output_size() const { return layers_.empty() ? 0 : static_cast<int>(layers_.back().weight.rows()); }

std::vector<int> Mlp::sizes() const {
  std::vector<int> out;
  if (layers_.empty()) return out;
  out.push_back(input_size());
  for (const auto& l : layers_) out.push_back(static_cast<int>(l.weight.rows()));
  return out;
}

std::size_t Mlp::parameter_count() const {
  std::size_t n = 0;
  for (const auto& l : layers_) n += static_cast<std::size_t>(l.weight.size() + l.bias.size());
  return n;
}

Eigen::MatrixXd Mlp::forward(const Eigen::MatrixXd& input) const {
  Eigen::MatrixXd a = input;
  for (std::size_t l = 0; l < layers_.size(); ++l) {
    Eigen::MatrixXd z = layers_[l].weight * a;
    z.colwise() += layers_[l].bias;
    a = l + 1 < layers_.size() ? Eigen::MatrixXd(z.array().tanh()) : std::move(z);
  }
  return a;
}

Eigen::MatrixXd Mlp::forward(const Eigen::MatrixXd& input, Tape& tape) const {
  if (input.rows() != input_size()) throw std::invalid_argument("MLP input has the wrong dimension");
  tape.activations.resize(layers_.size() + 1);
  tape.activations[0] = input;
  for (std::size_t l = 0; l < layers_.size(); ++l) {
    Eigen::MatrixXd z = layers_[l].weight * tape.activations[l];
    z.colwise() += layers_[l].bias;
    tape.activations[l + 1] = l + 1 < layers_.size() ? Eigen::MatrixXd(z.array().tanh()) : std::move(z);
  }
  return tape.activations.back();
}

Eigen::VectorXd Mlp::forward_one(const Eigen::VectorXd& input) const {
  if (input.size() != input_size()) throw std::invalid_argument("MLP input has the wrong dimension");
  Eigen::VectorXd a = input;
  for (std::size_t l = 0; l < layers_.size(); ++l) {
    Eigen::VectorXd z = layers_[l].weight * a + layers_[l].bias;
    a = l + 1 < layers_.size() ? Eigen::VectorXd(z.array().tanh()) : std::move(z);
  }
  return a;
}

void Mlp::backward(const Tape& tape, const Eigen::MatrixXd& grad_output, Mlp& grads) const {
  if (tape.activations.size() != layers_.size() + 1) throw std::logic_error("MLP tape does not match network");
  Eigen::MatrixXd delta = grad_output;
  for (std::size_t l = layers_.size(); l-- > 0;) {
    const Eigen::MatrixXd& a_prev = tape.activations[l];
    grads.layers_[l].weight.noalias() += delta * a_prev.transpose();
    grads.layers_[l].bias += delta.rowwise().sum();
    if (l > 0) {
      Eigen::MatrixXd back = layers_[l].weight.transpose() * delta;
      delta = back.array() * (1.0 - a_prev.array().square());
    }
  }
}

void Mlp::set_zero() {
  for (auto& l : layers_) {
    l.weight.setZero();
    l.bias.setZero();
  }
}

bool Mlp::all_finite() const {
  for (const auto& l : layers_) {
    if (!l.weight.allFinite() || !l.bias.allFinite()) return false;
  }
  return true;
}

void Mlp::flatten_into(Eigen::VectorXd& out, Eigen::Index& offset) const {
  for (const auto& l : layers_) {
    out.segment(offset, l.weight.size()) = l.weight.reshaped();
    offset += l.weight.size();
    out.segment(offset, l.bias.size()) = l.bias;
    offset += l.bias.size();
  }
}

void Mlp::assign_from(const Eigen::VectorXd& in, Eigen::Index& offset) {
  for (auto& l : layers_) {
    l.weight.reshaped() = in.segment(offset, l.weight.size());
    offset += l.weight.size();
    l.bias = in.segment(offset, l.bias.size());
    offset += l.bias.size();
  }
}

}  // namespace probsafe::rl
