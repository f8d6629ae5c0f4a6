#pragma once

#include <Eigen/Dense>
#include <cstdint>
#include <stdexcept>
#include <string>
#include <variant>
#include <vector>

namespace pfpath {

enum class Act { None, ReLU, Sigmoid };

/// Stack of equal-size image channels.
struct Tensor3 {
  std::vector<Eigen::MatrixXd> ch;
};

using NetInput = std::variant<Eigen::VectorXd, Tensor3>;

struct DenseLayer {
  Eigen::MatrixXd w;  // out x in
  Eigen::VectorXd b;
  Act act = Act::None;
};

/// Valid (no padding) stride-1 convolution; kernels indexed [out][in].
struct ConvLayer {
  int in_ch = 0, out_ch = 0, ksize = 0;
  std::vector<Eigen::MatrixXd> k;  // out_ch * in_ch matrices, ksize x ksize
  Eigen::VectorXd b;               // per output channel
  Act act = Act::None;

  Eigen::MatrixXd& kernel(int o, int i) { return k[static_cast<size_t>(o * in_ch + i)]; }
  const Eigen::MatrixXd& kernel(int o, int i) const { return k[static_cast<size_t>(o * in_ch + i)]; }
};

/// Non-overlapping max pool; trailing rows/columns that do not fill a window
/// are dropped.
struct PoolLayer {
  int size = 2;
};

struct FlattenLayer {};

using Layer = std::variant<DenseLayer, ConvLayer, PoolLayer, FlattenLayer>;

struct Network {
  std::vector<Layer> layers;

  size_t parameter_count() const;
  /// Row-major flattened parameters, layer by layer (weights then biases).
  std::vector<double> flat_parameters() const;
  void set_flat_parameters(const std::vector<double>& p);
};

struct DivergenceError : std::runtime_error {
  long iteration;
  DivergenceError(long it)
      : std::runtime_error("training diverged (loss is not finite) at iteration " + std::to_string(it)),
        iteration(it) {}
};

/// Forward pass; output passes through each layer's activation (the nets
/// built below end in a sigmoid, so scores land in (0,1)).
Eigen::VectorXd forward(const Network& net, const NetInput& x);

struct Sample {
  NetInput x;
  double y;
};

/// Sum of squared errors over the batch.
double loss(const Network& net, const std::vector<Sample>& batch);

/// Gradient of `loss` with respect to every parameter, same shape as the
/// network (returned as a Network whose entries hold the partials). The ReLU
/// subgradient at 0 is 0.
Network gradient(const Network& net, const std::vector<Sample>& batch);

/// params += scale * grads
void axpy_parameters(Network& params, const Network& grads, double scale);

struct TrainConfig {
  double gamma = 1e-3;        // step size gamma(k) = gamma / (1 + gamma_decay * k)
  double gamma_decay = 0.0;
  int batch = 32;
  int epochs = 100;
  std::uint64_t seed = 0;
  double init_scale = 1.0;
};

struct TrainTrace {
  std::vector<double> epoch_loss;  // full-dataset loss after each epoch
};

/// Minibatch SGD: each iteration draws a fresh random size-b subset and steps
/// against the loss gradient on it. Deterministic given the seed. Throws
/// DivergenceError when the loss stops being finite.
TrainTrace train(Network& net, const TrainConfig& cfg, const std::vector<Sample>& data);

/// Input dim -> hidden widths (ReLU) -> 1 (sigmoid). Weights are uniform on
/// [-a, a] with a = sqrt(6/(fan_in+fan_out)) * init_scale; biases start at 0.
/// An empty `hidden` gives the logistic-regression degenerate case.
Network make_mlp(int input_dim, const std::vector<int>& hidden, std::uint64_t seed,
                 double init_scale = 1.0);

/// channels x h x w -> conv3x3(8) -> pool2 -> conv3x3(16) -> pool2 ->
/// dense(64) -> 1 (sigmoid).
Network make_cnn(int channels, int height, int width, std::uint64_t seed, double init_scale = 1.0);

struct EnsembleModel {
  Network mlp;
  Network cnn;

  /// phi_ensemble = phi_MLP(pca vector) * phi_CNN(psi channels)
  double score(const Eigen::VectorXd& pca_vec, const Tensor3& channels) const;
};

// ---- evaluation ----

struct Confusion {
  long tp = 0, fp = 0, fn = 0, tn = 0;
  long total() const { return tp + fp + fn + tn; }
  double tpr() const { return tp + fn == 0 ? 0.0 : double(tp) / double(tp + fn); }
  double tnr() const { return tn + fp == 0 ? 0.0 : double(tn) / double(tn + fp); }
};

/// Predict positive iff score >= tau.
Confusion confusion_at(const std::vector<double>& scores, const std::vector<int>& labels,
                       double tau);

struct RocPoint {
  double tau;
  Confusion c;
};

struct RocCurve {
  std::vector<RocPoint> points;  // tau ascending
  double auc = 0.0;
};

/// Sweeps tau over the score set (plus a sentinel above the maximum) and
/// integrates TPR over TNR by the trapezoid rule. Throws
/// std::invalid_argument when labels are single-class.
RocCurve roc_curve(const std::vector<double>& scores, const std::vector<int>& labels);

}  // namespace pfpath
