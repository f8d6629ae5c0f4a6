#include "pfpath/nn.hpp"

#include <algorithm>
#include <cmath>

#include "pfpath/rng.hpp"

namespace pfpath {

namespace {

using MatX = Eigen::MatrixXd;
using VecX = Eigen::VectorXd;

double sigmoid(double x) { return 1.0 / (1.0 + std::exp(-x)); }

void apply_act_inplace(Act act, MatX& m) {
  switch (act) {
    case Act::None: return;
    case Act::ReLU: m = m.cwiseMax(0.0); return;
    case Act::Sigmoid: m = m.unaryExpr([](double x) { return sigmoid(x); }); return;
  }
}

void apply_act_inplace(Act act, VecX& v) {
  switch (act) {
    case Act::None: return;
    case Act::ReLU: v = v.cwiseMax(0.0); return;
    case Act::Sigmoid: v = v.unaryExpr([](double x) { return sigmoid(x); }); return;
  }
}

// derivative of the activation expressed through its output value
double act_deriv(Act act, double out) {
  switch (act) {
    case Act::None: return 1.0;
    case Act::ReLU: return out > 0.0 ? 1.0 : 0.0;
    case Act::Sigmoid: return out * (1.0 - out);
  }
  return 1.0;
}

struct LayerCache {
  NetInput out;
  std::vector<Eigen::MatrixXi> pool_src;  // per channel, linear input index per output cell
};

NetInput forward_layer(const Layer& layer, const NetInput& in, LayerCache* cache) {
  if (const auto* d = std::get_if<DenseLayer>(&layer)) {
    const auto* v = std::get_if<VecX>(&in);
    if (!v) throw std::invalid_argument("dense layer expects a vector input (flatten first)");
    if (v->size() != d->w.cols()) throw std::invalid_argument("dense layer: dimension mismatch");
    VecX z = d->w * (*v) + d->b;
    apply_act_inplace(d->act, z);
    return z;
  }
  if (const auto* c = std::get_if<ConvLayer>(&layer)) {
    const auto* t = std::get_if<Tensor3>(&in);
    if (!t) throw std::invalid_argument("conv layer expects channels");
    if (static_cast<int>(t->ch.size()) != c->in_ch)
      throw std::invalid_argument("conv layer: channel count mismatch");
    const Eigen::Index oh = t->ch[0].rows() - c->ksize + 1;
    const Eigen::Index ow = t->ch[0].cols() - c->ksize + 1;
    if (oh < 1 || ow < 1) throw std::invalid_argument("conv layer: input smaller than kernel");
    Tensor3 out;
    out.ch.reserve(static_cast<size_t>(c->out_ch));
    for (int o = 0; o < c->out_ch; ++o) {
      MatX z = MatX::Constant(oh, ow, c->b(o));
      for (int i = 0; i < c->in_ch; ++i) {
        const MatX& img = t->ch[static_cast<size_t>(i)];
        const MatX& ker = c->kernel(o, i);
        for (Eigen::Index r = 0; r < oh; ++r)
          for (Eigen::Index cc = 0; cc < ow; ++cc)
            z(r, cc) += (ker.array() * img.block(r, cc, c->ksize, c->ksize).array()).sum();
      }
      apply_act_inplace(c->act, z);
      out.ch.push_back(std::move(z));
    }
    return out;
  }
  if (const auto* p = std::get_if<PoolLayer>(&layer)) {
    const auto* t = std::get_if<Tensor3>(&in);
    if (!t) throw std::invalid_argument("pool layer expects channels");
    Tensor3 out;
    if (cache) cache->pool_src.clear();
    for (const MatX& img : t->ch) {
      const Eigen::Index oh = img.rows() / p->size, ow = img.cols() / p->size;
      MatX pooled(oh, ow);
      Eigen::MatrixXi src(oh, ow);
      for (Eigen::Index r = 0; r < oh; ++r)
        for (Eigen::Index c = 0; c < ow; ++c) {
          double best = -std::numeric_limits<double>::infinity();
          Eigen::Index bu = 0, bv = 0;
          for (int u = 0; u < p->size; ++u)
            for (int v = 0; v < p->size; ++v) {
              double x = img(r * p->size + u, c * p->size + v);
              if (x > best) {
                best = x;
                bu = r * p->size + u;
                bv = c * p->size + v;
              }
            }
          pooled(r, c) = best;
          src(r, c) = static_cast<int>(bu * img.cols() + bv);
        }
      out.ch.push_back(std::move(pooled));
      if (cache) cache->pool_src.push_back(std::move(src));
    }
    return out;
  }
  // flatten
  const auto* t = std::get_if<Tensor3>(&in);
  if (!t) throw std::invalid_argument("flatten expects channels");
  Eigen::Index n = 0;
  for (const MatX& img : t->ch) n += img.size();
  VecX v(n);
  Eigen::Index at = 0;
  for (const MatX& img : t->ch)
    for (Eigen::Index r = 0; r < img.rows(); ++r)
      for (Eigen::Index c = 0; c < img.cols(); ++c) v(at++) = img(r, c);
  return v;
}

Network zero_like(const Network& net) {
  Network g = net;
  for (Layer& l : g.layers) {
    if (auto* d = std::get_if<DenseLayer>(&l)) {
      d->w.setZero();
      d->b.setZero();
    } else if (auto* c = std::get_if<ConvLayer>(&l)) {
      for (auto& k : c->k) k.setZero();
      c->b.setZero();
    }
  }
  return g;
}

// Backpropagate one sample's output gradient through the network, adding the
// parameter partials into `grads`.
void backward_sample(const Network& net, const NetInput& x, const VecX& dloss_dout,
                     const std::vector<LayerCache>& caches, Network& grads) {
  // Gradient flowing backward, in the shape of each layer's output.
  NetInput delta = dloss_dout;

  for (size_t li = net.layers.size(); li-- > 0;) {
    const Layer& layer = net.layers[li];
    const NetInput& in = li == 0 ? x : caches[li - 1].out;
    const NetInput& out = caches[li].out;

    if (const auto* d = std::get_if<DenseLayer>(&layer)) {
      VecX dz = std::get<VecX>(delta);
      const VecX& outv = std::get<VecX>(out);
      for (Eigen::Index i = 0; i < dz.size(); ++i) dz(i) *= act_deriv(d->act, outv(i));
      auto& gd = std::get<DenseLayer>(grads.layers[li]);
      gd.w.noalias() += dz * std::get<VecX>(in).transpose();
      gd.b += dz;
      delta = VecX(d->w.transpose() * dz);
    } else if (const auto* c = std::get_if<ConvLayer>(&layer)) {
      Tensor3 dz = std::get<Tensor3>(delta);
      const Tensor3& outt = std::get<Tensor3>(out);
      for (int o = 0; o < c->out_ch; ++o)
        for (Eigen::Index r = 0; r < dz.ch[static_cast<size_t>(o)].rows(); ++r)
          for (Eigen::Index cc = 0; cc < dz.ch[static_cast<size_t>(o)].cols(); ++cc)
            dz.ch[static_cast<size_t>(o)](r, cc) *=
                act_deriv(c->act, outt.ch[static_cast<size_t>(o)](r, cc));
      auto& gc = std::get<ConvLayer>(grads.layers[li]);
      const Tensor3& int3 = std::get<Tensor3>(in);
      Tensor3 din;
      din.ch.assign(int3.ch.size(), MatX::Zero(int3.ch[0].rows(), int3.ch[0].cols()));
      const Eigen::Index oh = dz.ch[0].rows(), ow = dz.ch[0].cols();
      for (int o = 0; o < c->out_ch; ++o) {
        gc.b(o) += dz.ch[static_cast<size_t>(o)].sum();
        for (int i = 0; i < c->in_ch; ++i) {
          MatX& gk = gc.kernel(o, i);
          const MatX& img = int3.ch[static_cast<size_t>(i)];
          const MatX& ker = c->kernel(o, i);
          for (Eigen::Index r = 0; r < oh; ++r)
            for (Eigen::Index cc = 0; cc < ow; ++cc) {
              double dv = dz.ch[static_cast<size_t>(o)](r, cc);
              if (dv == 0.0) continue;
              gk += dv * img.block(r, cc, c->ksize, c->ksize);
              din.ch[static_cast<size_t>(i)].block(r, cc, c->ksize, c->ksize) += dv * ker;
            }
        }
      }
      delta = std::move(din);
    } else if (const auto* p = std::get_if<PoolLayer>(&layer)) {
      (void)p;
      const Tensor3& dout = std::get<Tensor3>(delta);
      const Tensor3& int3 = std::get<Tensor3>(in);
      Tensor3 din;
      din.ch.assign(int3.ch.size(), MatX::Zero(int3.ch[0].rows(), int3.ch[0].cols()));
      const auto& srcs = caches[li].pool_src;
      for (size_t ch = 0; ch < dout.ch.size(); ++ch) {
        const MatX& g = dout.ch[ch];
        const Eigen::MatrixXi& src = srcs[ch];
        const Eigen::Index cols = int3.ch[ch].cols();
        for (Eigen::Index r = 0; r < g.rows(); ++r)
          for (Eigen::Index c = 0; c < g.cols(); ++c) {
            int lin = src(r, c);
            din.ch[ch](lin / cols, lin % cols) += g(r, c);
          }
      }
      delta = std::move(din);
    } else {
      // flatten: reshape the vector gradient back into channels
      const VecX& g = std::get<VecX>(delta);
      const Tensor3& int3 = std::get<Tensor3>(in);
      Tensor3 din;
      Eigen::Index at = 0;
      for (const MatX& img : int3.ch) {
        MatX m(img.rows(), img.cols());
        for (Eigen::Index r = 0; r < img.rows(); ++r)
          for (Eigen::Index c = 0; c < img.cols(); ++c) m(r, c) = g(at++);
        din.ch.push_back(std::move(m));
      }
      delta = std::move(din);
    }
  }
}

}  // namespace

size_t Network::parameter_count() const {
  size_t n = 0;
  for (const Layer& l : layers) {
    if (const auto* d = std::get_if<DenseLayer>(&l))
      n += static_cast<size_t>(d->w.size() + d->b.size());
    else if (const auto* c = std::get_if<ConvLayer>(&l)) {
      for (const auto& k : c->k) n += static_cast<size_t>(k.size());
      n += static_cast<size_t>(c->b.size());
    }
  }
  return n;
}

std::vector<double> Network::flat_parameters() const {
  std::vector<double> out;
  out.reserve(parameter_count());
  for (const Layer& l : layers) {
    if (const auto* d = std::get_if<DenseLayer>(&l)) {
      for (Eigen::Index r = 0; r < d->w.rows(); ++r)
        for (Eigen::Index c = 0; c < d->w.cols(); ++c) out.push_back(d->w(r, c));
      for (Eigen::Index i = 0; i < d->b.size(); ++i) out.push_back(d->b(i));
    } else if (const auto* cl = std::get_if<ConvLayer>(&l)) {
      for (const auto& k : cl->k)
        for (Eigen::Index r = 0; r < k.rows(); ++r)
          for (Eigen::Index c = 0; c < k.cols(); ++c) out.push_back(k(r, c));
      for (Eigen::Index i = 0; i < cl->b.size(); ++i) out.push_back(cl->b(i));
    }
  }
  return out;
}

void Network::set_flat_parameters(const std::vector<double>& p) {
  if (p.size() != parameter_count())
    throw std::invalid_argument("set_flat_parameters: size mismatch");
  size_t at = 0;
  for (Layer& l : layers) {
    if (auto* d = std::get_if<DenseLayer>(&l)) {
      for (Eigen::Index r = 0; r < d->w.rows(); ++r)
        for (Eigen::Index c = 0; c < d->w.cols(); ++c) d->w(r, c) = p[at++];
      for (Eigen::Index i = 0; i < d->b.size(); ++i) d->b(i) = p[at++];
    } else if (auto* cl = std::get_if<ConvLayer>(&l)) {
      for (auto& k : cl->k)
        for (Eigen::Index r = 0; r < k.rows(); ++r)
          for (Eigen::Index c = 0; c < k.cols(); ++c) k(r, c) = p[at++];
      for (Eigen::Index i = 0; i < cl->b.size(); ++i) cl->b(i) = p[at++];
    }
  }
}

Eigen::VectorXd forward(const Network& net, const NetInput& x) {
  NetInput cur = x;
  for (const Layer& l : net.layers) cur = forward_layer(l, cur, nullptr);
  const auto* v = std::get_if<VecX>(&cur);
  if (!v) throw std::logic_error("forward: network did not end in a vector");
  return *v;
}

double loss(const Network& net, const std::vector<Sample>& batch) {
  if (batch.empty()) throw std::invalid_argument("loss: empty batch");
  double acc = 0.0;
  for (const Sample& s : batch) {
    VecX out = forward(net, s.x);
    for (Eigen::Index i = 0; i < out.size(); ++i) {
      double d = out(i) - s.y;
      acc += d * d;
    }
  }
  return acc;
}

Network gradient(const Network& net, const std::vector<Sample>& batch) {
  if (batch.empty()) throw std::invalid_argument("gradient: empty batch");
  Network grads = zero_like(net);
  std::vector<LayerCache> caches(net.layers.size());
  for (const Sample& s : batch) {
    NetInput cur = s.x;
    for (size_t li = 0; li < net.layers.size(); ++li) {
      cur = forward_layer(net.layers[li], cur, &caches[li]);
      caches[li].out = cur;
    }
    const VecX& out = std::get<VecX>(cur);
    VecX dout(out.size());
    for (Eigen::Index i = 0; i < out.size(); ++i) dout(i) = 2.0 * (out(i) - s.y);
    backward_sample(net, s.x, dout, caches, grads);
  }
  return grads;
}

void axpy_parameters(Network& params, const Network& grads, double scale) {
  for (size_t li = 0; li < params.layers.size(); ++li) {
    if (auto* d = std::get_if<DenseLayer>(&params.layers[li])) {
      const auto& gd = std::get<DenseLayer>(grads.layers[li]);
      d->w += scale * gd.w;
      d->b += scale * gd.b;
    } else if (auto* c = std::get_if<ConvLayer>(&params.layers[li])) {
      const auto& gc = std::get<ConvLayer>(grads.layers[li]);
      for (size_t k = 0; k < c->k.size(); ++k) c->k[k] += scale * gc.k[k];
      c->b += scale * gc.b;
    }
  }
}

TrainTrace train(Network& net, const TrainConfig& cfg, const std::vector<Sample>& data) {
  if (data.empty()) throw std::invalid_argument("train: empty dataset");
  if (cfg.batch < 1) throw std::invalid_argument("train: batch size must be >= 1");
  std::mt19937_64 rng(cfg.seed);
  TrainTrace trace;
  long it = 0;
  const size_t n = data.size();
  const size_t b = std::min<size_t>(static_cast<size_t>(cfg.batch), n);
  const size_t iters_per_epoch = (n + b - 1) / b;
  for (int epoch = 0; epoch < cfg.epochs; ++epoch) {
    for (size_t k = 0; k < iters_per_epoch; ++k) {
      std::vector<size_t> idx = sample_indices(n, b, rng);
      std::vector<Sample> batch;
      batch.reserve(idx.size());
      for (size_t i : idx) batch.push_back(data[i]);
      Network g = gradient(net, batch);
      double gamma_k = cfg.gamma / (1.0 + cfg.gamma_decay * static_cast<double>(it));
      axpy_parameters(net, g, -gamma_k);
      ++it;
    }
    double l = loss(net, data);
    if (!std::isfinite(l)) throw DivergenceError(it);
    trace.epoch_loss.push_back(l);
  }
  return trace;
}

namespace {

MatX uniform_matrix(Eigen::Index rows, Eigen::Index cols, double a, std::mt19937_64& rng) {
  std::uniform_real_distribution<double> d(-a, a);
  MatX m(rows, cols);
  for (Eigen::Index r = 0; r < rows; ++r)
    for (Eigen::Index c = 0; c < cols; ++c) m(r, c) = d(rng);
  return m;
}

}  // namespace

Network make_mlp(int input_dim, const std::vector<int>& hidden, std::uint64_t seed,
                 double init_scale) {
  std::mt19937_64 rng(seed);
  Network net;
  std::vector<int> dims;
  dims.push_back(input_dim);
  for (int h : hidden) dims.push_back(h);
  dims.push_back(1);
  for (size_t i = 0; i + 1 < dims.size(); ++i) {
    DenseLayer d;
    const int nin = dims[i], nout = dims[i + 1];
    double a = std::sqrt(6.0 / (nin + nout)) * init_scale;
    d.w = uniform_matrix(nout, nin, a, rng);
    d.b = VecX::Zero(nout);
    d.act = (i + 2 == dims.size()) ? Act::Sigmoid : Act::ReLU;
    net.layers.emplace_back(std::move(d));
  }
  return net;
}

Network make_cnn(int channels, int height, int width, std::uint64_t seed, double init_scale) {
  std::mt19937_64 rng(seed);
  Network net;
  auto add_conv = [&](int in_ch, int out_ch, int ks) {
    ConvLayer c;
    c.in_ch = in_ch;
    c.out_ch = out_ch;
    c.ksize = ks;
    double a = std::sqrt(6.0 / (in_ch * ks * ks + out_ch * ks * ks)) * init_scale;
    for (int o = 0; o < out_ch; ++o)
      for (int i = 0; i < in_ch; ++i) c.k.push_back(uniform_matrix(ks, ks, a, rng));
    c.b = VecX::Zero(out_ch);
    c.act = Act::ReLU;
    net.layers.emplace_back(std::move(c));
  };
  int h = height, w = width;
  add_conv(channels, 8, 3);
  h -= 2, w -= 2;
  net.layers.emplace_back(PoolLayer{2});
  h /= 2, w /= 2;
  add_conv(8, 16, 3);
  h -= 2, w -= 2;
  net.layers.emplace_back(PoolLayer{2});
  h /= 2, w /= 2;
  net.layers.emplace_back(FlattenLayer{});
  const int flat = h * w * 16;
  {
    DenseLayer d;
    double a = std::sqrt(6.0 / (flat + 64)) * init_scale;
    d.w = uniform_matrix(64, flat, a, rng);
    d.b = VecX::Zero(64);
    d.act = Act::ReLU;
    net.layers.emplace_back(std::move(d));
  }
  {
    DenseLayer d;
    double a = std::sqrt(6.0 / (64 + 1)) * init_scale;
    d.w = uniform_matrix(1, 64, a, rng);
    d.b = VecX::Zero(1);
    d.act = Act::Sigmoid;
    net.layers.emplace_back(std::move(d));
  }
  return net;
}

double EnsembleModel::score(const Eigen::VectorXd& pca_vec, const Tensor3& channels) const {
  return forward(mlp, pca_vec)(0) * forward(cnn, channels)(0);
}

Confusion confusion_at(const std::vector<double>& scores, const std::vector<int>& labels,
                       double tau) {
  if (scores.size() != labels.size())
    throw std::invalid_argument("confusion_at: scores/labels misaligned");
  Confusion c;
  for (size_t i = 0; i < scores.size(); ++i) {
    bool predicted = scores[i] >= tau;
    if (labels[i] == 1)
      predicted ? ++c.tp : ++c.fn;
    else
      predicted ? ++c.fp : ++c.tn;
  }
  return c;
}

RocCurve roc_curve(const std::vector<double>& scores, const std::vector<int>& labels) {
  if (scores.size() != labels.size() || scores.empty())
    throw std::invalid_argument("roc_curve: scores/labels misaligned or empty");
  long pos = 0, neg = 0;
  for (int l : labels) (l == 1 ? pos : neg)++;
  if (pos == 0 || neg == 0)
    throw std::invalid_argument("roc_curve: AUC undefined for single-class labels");

  std::vector<std::pair<double, int>> sorted(scores.size());
  for (size_t i = 0; i < scores.size(); ++i) sorted[i] = {scores[i], labels[i]};
  std::sort(sorted.begin(), sorted.end());

  RocCurve curve;
  long pos_below = 0, neg_below = 0;
  size_t i = 0;
  while (i < sorted.size()) {
    double tau = sorted[i].first;
    // predicted positive iff score >= tau: everything strictly below tau is negative
    Confusion c;
    c.tp = pos - pos_below;
    c.fp = neg - neg_below;
    c.fn = pos_below;
    c.tn = neg_below;
    curve.points.push_back({tau, c});
    while (i < sorted.size() && sorted[i].first == tau) {
      (sorted[i].second == 1 ? pos_below : neg_below)++;
      ++i;
    }
  }
  Confusion all_neg;
  all_neg.fn = pos;
  all_neg.tn = neg;
  curve.points.push_back({sorted.back().first + 1.0, all_neg});

  double auc = 0.0;
  for (size_t j = 0; j + 1 < curve.points.size(); ++j) {
    double x0 = curve.points[j].c.tnr(), x1 = curve.points[j + 1].c.tnr();
    double y0 = curve.points[j].c.tpr(), y1 = curve.points[j + 1].c.tpr();
    auc += (x1 - x0) * (y0 + y1) / 2.0;
  }
  curve.auc = auc;
  return curve;
}

}  // namespace pfpath
