#pragma once

#include <Eigen/Dense>
#include <Eigen/Sparse>

#include <cmath>
#include <random>
#include <vector>

namespace rgvlm::iql {

template <typename Scalar>
using MatrixX = Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic>;
template <typename Scalar>
using VectorX = Eigen::Matrix<Scalar, Eigen::Dynamic, 1>;
template <typename Scalar>
using SpMat = Eigen::SparseMatrix<Scalar>;

// Feed-forward net with tanh hidden layers, evaluated on column batches.
// Inputs arrive as sparse matrices (observations are mostly one-hot), which
// keeps the first-layer product cheap. All parameters live in one flat
// vector so the optimizer and the serializer can treat a net as a single
// array; weight matrices are Maps into it.
template <typename Scalar>
class Mlp {
 public:
  Mlp(int input, std::vector<int> hidden, int output) : input_(input), output_(output) {
    std::vector<int> dims;
    dims.push_back(input);
    for (int h : hidden) dims.push_back(h);
    dims.push_back(output);

    int off = 0;
    for (std::size_t l = 0; l + 1 < dims.size(); ++l) {
      Layer layer;
      layer.rows = dims[l + 1];
      layer.cols = dims[l];
      layer.w_off = off;
      off += layer.rows * layer.cols;
      layer.b_off = off;
      off += layer.rows;
      layers_.push_back(layer);
    }
    params_.setZero(off);
  }

  int input_dim() const { return input_; }
  int output_dim() const { return output_; }
  int num_params() const { return static_cast<int>(params_.size()); }
  std::size_t num_layers() const { return layers_.size(); }

  VectorX<Scalar>& params() { return params_; }
  const VectorX<Scalar>& params() const { return params_; }

  // Glorot-uniform weights, zero biases.
  void init(std::mt19937_64& rng) {
    for (const Layer& l : layers_) {
      const Scalar a = std::sqrt(Scalar(6) / Scalar(l.rows + l.cols));
      std::uniform_real_distribution<double> d(-static_cast<double>(a), static_cast<double>(a));
      for (int i = 0; i < l.rows * l.cols; ++i)
        params_[l.w_off + i] = static_cast<Scalar>(d(rng));
      for (int i = 0; i < l.rows; ++i) params_[l.b_off + i] = Scalar(0);
    }
  }

  // Per-call scratch. Reuse across calls to avoid reallocation; forward fills
  // acts[l] with layer l's activations (tanh for hidden, linear for the top).
  struct Workspace {
    std::vector<MatrixX<Scalar>> acts;
    MatrixX<Scalar> delta, delta_next;
  };

  const MatrixX<Scalar>& forward(const SpMat<Scalar>& x, Workspace& ws) const {
    ws.acts.resize(layers_.size());
    for (std::size_t l = 0; l < layers_.size(); ++l) {
      auto W = weight(l);
      auto b = bias(l);
      if (l == 0)
        ws.acts[0].noalias() = W * x;
      else
        ws.acts[l].noalias() = W * ws.acts[l - 1];
      ws.acts[l].colwise() += b;
      if (l + 1 < layers_.size()) ws.acts[l] = ws.acts[l].array().tanh();
    }
    return ws.acts.back();
  }

  // dY is dLoss/dOutput for the forward pass recorded in ws. Accumulates
  // parameter gradients into grad (same layout as params; caller zeroes it).
  void backward(const SpMat<Scalar>& x, Workspace& ws, const MatrixX<Scalar>& dY,
                VectorX<Scalar>& grad) const {
    ws.delta = dY;
    for (std::size_t l = layers_.size(); l-- > 0;) {
      auto dW = weight_view(grad, l);
      auto db = bias_view(grad, l);
      if (l == 0)
        dW.noalias() += ws.delta * x.transpose();
      else
        dW.noalias() += ws.delta * ws.acts[l - 1].transpose();
      db += ws.delta.rowwise().sum();
      if (l > 0) {
        ws.delta_next.noalias() = weight(l).transpose() * ws.delta;
        // tanh'(z) = 1 - tanh(z)^2, and acts holds tanh(z)
        ws.delta_next.array() *= Scalar(1) - ws.acts[l - 1].array().square();
        ws.delta.swap(ws.delta_next);
      }
    }
  }

  Eigen::Map<const MatrixX<Scalar>> weight(std::size_t l) const {
    return {params_.data() + layers_[l].w_off, layers_[l].rows, layers_[l].cols};
  }
  Eigen::Map<const VectorX<Scalar>> bias(std::size_t l) const {
    return {params_.data() + layers_[l].b_off, layers_[l].rows};
  }

 private:
  struct Layer {
    int rows = 0, cols = 0, w_off = 0, b_off = 0;
  };

  Eigen::Map<MatrixX<Scalar>> weight_view(VectorX<Scalar>& v, std::size_t l) const {
    return {v.data() + layers_[l].w_off, layers_[l].rows, layers_[l].cols};
  }
  Eigen::Map<VectorX<Scalar>> bias_view(VectorX<Scalar>& v, std::size_t l) const {
    return {v.data() + layers_[l].b_off, layers_[l].rows};
  }

  std::vector<Layer> layers_;
  VectorX<Scalar> params_;
  int input_, output_;
};

}  // namespace rgvlm::iql
