// Copyright 2026 The commgad Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "commgad/model.hpp"

#include <cmath>
#include <sstream>

#include "commgad/error.hpp"
#include "commgad/random.hpp"

namespace commgad {
namespace {

Linear zero_linear(std::size_t in, std::size_t out) { return {Matrix(in, out), Matrix(1, out)}; }
Mlp zero_mlp(std::size_t in, std::size_t hidden, std::size_t out) {
  return {zero_linear(in, hidden), zero_linear(hidden, out)};
}

void glorot_fill(Matrix& w, Rng& rng) {
  const double limit = std::sqrt(6.0 / static_cast<double>(w.rows() + w.cols()));
  for (double& v : w.data()) v = rng.uniform(-limit, limit);
}

bool is_bias(const std::string& name) { return name.ends_with(".b") || name == "attr_b"; }

bool finite(const Matrix& m) {
  for (double v : m.data()) {
    if (!std::isfinite(v)) return false;
  }
  return true;
}

}  // namespace

void ModelConfig::validate() const {
  if (hidden_dim < 1) throw ConfigError("hidden_dim must be >= 1");
  if (gcn_layers < 1) throw ConfigError("gcn_layers must be >= 1");
  if (!std::isfinite(lambda_x) || lambda_x < 0.0) throw ConfigError("lambda_x must be finite and >= 0");
  if (!std::isfinite(lambda_n) || lambda_n < 0.0) throw ConfigError("lambda_n must be finite and >= 0");
  if (!std::isfinite(sigma_floor) || sigma_floor <= 0.0) throw ConfigError("sigma_floor must be > 0");
}

ModelParams ModelParams::zeros(std::size_t m, const ModelConfig& cfg) {
  cfg.validate();
  const std::size_t d = cfg.hidden_dim;
  ModelParams p;
  p.xi = zero_linear(m, d);
  p.gcn_weights.assign(cfg.gcn_layers, Matrix(d, d));
  p.w_residual = Matrix(m, d);
  p.attr_w = Matrix(m, d);
  p.attr_b = Matrix(1, d);
  p.q = p.k = p.v = Matrix(d, d);
  p.w1 = Matrix(2 * d, d);
  p.w2 = Matrix(d, 2 * d);
  p.phi_x = zero_mlp(d, d, m);
  p.mlp_mu = zero_mlp(d, d, d);
  p.mlp_sigma = zero_mlp(d, d, d);
  return p;
}

ModelParams ModelParams::glorot(std::size_t m, const ModelConfig& cfg) {
  ModelParams p = zeros(m, cfg);
  Rng rng(derive_seed(cfg.seed, SeedStream::kInit));
  const auto names = p.names();
  const auto mats = p.tensors();
  for (std::size_t i = 0; i < mats.size(); ++i) {
    if (!is_bias(names[i])) glorot_fill(*mats[i], rng);
  }
  return p;
}

std::vector<Matrix*> ModelParams::tensors() {
  std::vector<Matrix*> out{&xi.w, &xi.b};
  for (auto& w : gcn_weights) out.push_back(&w);
  for (Matrix* m : {&w_residual, &attr_w, &attr_b, &q, &k, &v, &w1, &w2}) out.push_back(m);
  for (Mlp* mlp : {&phi_x, &mlp_mu, &mlp_sigma}) {
    for (Matrix* m : {&mlp->hidden.w, &mlp->hidden.b, &mlp->out.w, &mlp->out.b}) out.push_back(m);
  }
  return out;
}

std::vector<const Matrix*> ModelParams::tensors() const {
  auto mut = const_cast<ModelParams*>(this)->tensors();
  return {mut.begin(), mut.end()};
}

std::vector<std::string> ModelParams::names() const {
  std::vector<std::string> out{"xi.w", "xi.b"};
  for (std::size_t l = 0; l < gcn_weights.size(); ++l) out.push_back("gcn." + std::to_string(l));
  for (const char* n : {"w_residual", "attr_w", "attr_b", "q", "k", "v", "w1", "w2"}) out.emplace_back(n);
  for (const char* mlp : {"phi_x", "mlp_mu", "mlp_sigma"}) {
    for (const char* part : {".hidden.w", ".hidden.b", ".out.w", ".out.b"}) out.push_back(std::string(mlp) + part);
  }
  return out;
}

std::size_t ModelParams::parameter_count() const {
  std::size_t n = 0;
  for (const Matrix* m : tensors()) n += m->size();
  return n;
}

bool ModelParams::all_finite() const {
  for (const Matrix* m : tensors()) {
    if (!finite(*m)) return false;
  }
  return true;
}

ModelInputs prepare_inputs(const AttributedGraph& g, const CommunityAssignment& communities) {
  ModelInputs in;
  in.features = g.features();
  in.community_avg = community_average_features(g, communities);
  in.a_hat = normalized_adjacency(g);
  in.neighbors = neighbor_lists(g);
  in.has_neighbors.resize(g.num_nodes());
  for (std::size_t v = 0; v < g.num_nodes(); ++v) {
    in.has_neighbors[v] = g.degree(static_cast<NodeId>(v)) > 0 ? 1.0 : 0.0;
  }
  return in;
}

BoundParams bind(Tape& tape, const ModelParams& p) {
  BoundParams b;
  const auto names = p.names();
  const auto mats = p.tensors();
  for (std::size_t i = 0; i < mats.size(); ++i) b.leaves.push_back(tape.leaf(*mats[i], names[i]));
  std::size_t i = 0;
  auto next = [&] { return b.leaves[i++]; };
  b.xi = {next(), next()};
  for (std::size_t l = 0; l < p.gcn_weights.size(); ++l) b.gcn_weights.push_back(next());
  b.w_residual = next();
  b.attr_w = next();
  b.attr_b = next();
  b.q = next();
  b.k = next();
  b.v = next();
  b.w1 = next();
  b.w2 = next();
  for (BoundParams::BoundMlp* mlp : {&b.phi_x, &b.mlp_mu, &b.mlp_sigma}) {
    mlp->hidden = {next(), next()};
    mlp->out = {next(), next()};
  }
  return b;
}

Tensor encode_structure(const SparseAdjacency& a_hat, const Tensor& x_avg, const Tensor& x, const BoundParams& p) {
  Tensor h = ad::relu(ad::add_bias(ad::matmul(x_avg, p.xi.w), p.xi.b));
  for (const Tensor& w : p.gcn_weights) h = ad::relu(ad::matmul(ad::spmm(a_hat, h), w));
  return ad::add(h, ad::matmul(ad::spmm(a_hat, x), p.w_residual));
}

Tensor encode_attributes(const Tensor& x, const BoundParams& p) {
  return ad::relu(ad::add_bias(ad::matmul(x, p.attr_w), p.attr_b));
}

FusionOutput fuse(const Tensor& h1, const Tensor& h2, const BoundParams& p) {
  if (!h1.value().same_shape(h2.value())) {
    throw ShapeError("fuse: encoder outputs " + h1.value().shape_string() + " and " + h2.value().shape_string());
  }
  const std::size_t d = h1.cols();
  const double inv_sqrt_d = 1.0 / std::sqrt(static_cast<double>(d));
  const Tensor q1 = ad::matmul(h1, p.q), q2 = ad::matmul(h2, p.q);
  const Tensor k1 = ad::matmul(h1, p.k), k2 = ad::matmul(h2, p.k);
  const Tensor v1 = ad::matmul(h1, p.v), v2 = ad::matmul(h2, p.v);

  auto attend = [&](const Tensor& query) {
    const Tensor logits = ad::concat_cols(ad::row_dot(query, k1), ad::row_dot(query, k2));
    return ad::softmax_rows(ad::scale(logits, inv_sqrt_d));
  };
  auto mix = [&](const Tensor& weights) {
    auto [w_self, w_other] = ad::split_cols(weights, 1);
    return ad::add(ad::mul_rows(v1, w_self), ad::mul_rows(v2, w_other));
  };

  FusionOutput out;
  out.attn_from1 = attend(q1);
  out.attn_from2 = attend(q2);
  const Tensor h1p = mix(out.attn_from1);
  const Tensor h2p = mix(out.attn_from2);

  const Tensor z = ad::concat_cols(h1p, h2p);
  const Tensor z_down = ad::matmul(z, p.w1);
  const Tensor z_up = ad::matmul(z_down, p.w2);
  std::tie(out.h1, out.h2) = ad::split_cols(z_up, d);

  const std::size_t n = h1.rows();
  out.attention_avg = Matrix(2, 2);
  const Matrix& a1 = out.attn_from1.value();
  const Matrix& a2 = out.attn_from2.value();
  for (std::size_t i = 0; i < n; ++i) {
    out.attention_avg(0, 0) += a1(i, 0);
    out.attention_avg(0, 1) += a1(i, 1);
    out.attention_avg(1, 0) += a2(i, 0);
    out.attention_avg(1, 1) += a2(i, 1);
  }
  if (n > 0) {
    for (double& v : out.attention_avg.data()) v /= static_cast<double>(n);
  }
  return out;
}

Tensor apply_mlp(const Tensor& x, const BoundParams::BoundMlp& mlp) {
  const Tensor hidden = ad::relu(ad::add_bias(ad::matmul(x, mlp.hidden.w), mlp.hidden.b));
  return ad::add_bias(ad::matmul(hidden, mlp.out.w), mlp.out.b);
}

Tensor decode_attributes(const Tensor& h2pp, const BoundParams& p) { return apply_mlp(h2pp, p.phi_x); }

NeighborhoodDecode decode_neighborhood(const Tensor& h1pp, const NeighborLists& neighbors, const BoundParams& p,
                                       const NeighborTarget* frozen) {
  NeighborhoodDecode out;
  out.mu_gen = apply_mlp(h1pp, p.mlp_mu);
  out.sigma_gen = ad::exp_elem(apply_mlp(h1pp, p.mlp_sigma));
  Tape& tape = *h1pp.tape();
  if (frozen) {
    if (!frozen->mu.same_shape(h1pp.value()) || !frozen->sigma.same_shape(h1pp.value())) {
      throw ShapeError("decode_neighborhood: frozen target shape does not match H1''");
    }
    out.mu_true = tape.constant(frozen->mu, "target_mu");
    out.sigma_true = tape.constant(frozen->sigma, "target_sigma");
  } else {
    const SegmentStats stats = segment_mean_std(ad::detach(h1pp), neighbors);
    out.mu_true = stats.mean;
    out.sigma_true = stats.stddev;
  }
  return out;
}

Tensor jsd_neighborhood_loss(const Tensor& mu_t, const Tensor& sigma_t, const Tensor& mu_g, const Tensor& sigma_g,
                             double sigma_floor, std::size_t* clamped) {
  for (const Tensor* x : {&mu_t, &sigma_t, &mu_g, &sigma_g}) {
    for (double v : x->value().data()) {
      if (!std::isfinite(v)) throw NumericalError("jsd_neighborhood_loss: non-finite input");
    }
  }
  const Tensor st = ad::clamp_min(sigma_t, sigma_floor, clamped);
  const Tensor sg = ad::clamp_min(sigma_g, sigma_floor, clamped);
  const Tensor mu_m = ad::scale(ad::add(mu_t, mu_g), 0.5);
  const Tensor var_m = ad::add(ad::scale(ad::add(ad::square(st), ad::square(sg)), 0.5),
                               ad::square(ad::scale(ad::sub(mu_t, mu_g), 0.5)));
  const Tensor sigma_m = ad::sqrt_elem(var_m);
  const Tensor kl_t = gaussian_kl(mu_t, st, mu_m, sigma_m, sigma_floor, clamped);
  const Tensor kl_g = gaussian_kl(mu_g, sg, mu_m, sigma_m, sigma_floor, clamped);
  return ad::scale(ad::add(kl_t, kl_g), 0.5);
}

Tensor feature_loss(const Tensor& x, const Tensor& x_hat) {
  if (!x.value().same_shape(x_hat.value())) {
    throw ShapeError("feature_loss: " + x.value().shape_string() + " vs " + x_hat.value().shape_string());
  }
  return ad::scale(ad::row_sum(ad::square(ad::sub(x_hat, x))), 1.0 / static_cast<double>(x.cols()));
}

Tensor total_loss(const Tensor& feature_loss, const Tensor& h_loss, const ModelConfig& cfg) {
  return ad::add(ad::scale(ad::sum_all(feature_loss), cfg.lambda_x), ad::scale(ad::sum_all(h_loss), cfg.lambda_n));
}

TapedForward forward_on_tape(Tape& tape, const ModelInputs& inputs, const ModelConfig& cfg, const ModelParams& p,
                             const NeighborTarget* frozen) {
  cfg.validate();
  TapedForward out;
  out.params = bind(tape, p);
  const BoundParams& bp = out.params;
  const Tensor x = tape.constant(inputs.features, "X");
  const Tensor x_avg = tape.constant(inputs.community_avg, "X_avg");

  const Tensor h1 = encode_structure(inputs.a_hat, x_avg, x, bp);
  const Tensor h2 = encode_attributes(x, bp);
  const FusionOutput fused = fuse(h1, h2, bp);

  const Tensor x_hat = decode_attributes(fused.h2, bp);
  const Tensor f_loss = feature_loss(x, x_hat);

  const NeighborhoodDecode nd = decode_neighborhood(fused.h1, inputs.neighbors, bp, frozen);
  std::size_t clamps = 0;
  const Tensor jsd = jsd_neighborhood_loss(nd.mu_true, nd.sigma_true, nd.mu_gen, nd.sigma_gen, cfg.sigma_floor, &clamps);
  const Tensor h_loss = ad::mask_rows(jsd, inputs.has_neighbors);

  out.loss = total_loss(f_loss, h_loss, cfg);
  out.target = {nd.mu_true.value(), nd.sigma_true.value()};

  ForwardOutput& fo = out.output;
  const std::size_t n = inputs.num_nodes();
  fo.h_loss.resize(n);
  fo.feature_loss.resize(n);
  for (std::size_t i = 0; i < n; ++i) {
    fo.h_loss[i] = h_loss.value()(i, 0);
    fo.feature_loss[i] = f_loss.value()(i, 0);
  }
  fo.total_loss = out.loss.value()(0, 0);
  fo.attention_avg = fused.attention_avg;
  fo.node_attention = Matrix(n, 4);
  for (std::size_t i = 0; i < n; ++i) {
    fo.node_attention(i, 0) = fused.attn_from1.value()(i, 0);
    fo.node_attention(i, 1) = fused.attn_from1.value()(i, 1);
    fo.node_attention(i, 2) = fused.attn_from2.value()(i, 0);
    fo.node_attention(i, 3) = fused.attn_from2.value()(i, 1);
  }
  fo.sigma_clamps = clamps;
  if (!std::isfinite(fo.total_loss)) {
    std::ostringstream msg;
    msg << "forward: non-finite total loss (" << fo.total_loss << ")";
    throw NumericalError(msg.str());
  }
  return out;
}

ForwardOutput forward(const ModelInputs& inputs, const ModelConfig& cfg, const ModelParams& p) {
  Tape tape;
  return forward_on_tape(tape, inputs, cfg, p).output;
}

LossAndGrad loss_and_gradient(const ModelInputs& inputs, const ModelConfig& cfg, const ModelParams& p,
                              const NeighborTarget* frozen) {
  Tape tape;
  TapedForward tf = forward_on_tape(tape, inputs, cfg, p, frozen);
  tape.backward(tf.loss);
  LossAndGrad out{std::move(tf.output), p};
  auto grads = out.grad.tensors();
  for (std::size_t i = 0; i < grads.size(); ++i) *grads[i] = tf.params.leaves[i].grad();
  return out;
}

}  // namespace commgad
