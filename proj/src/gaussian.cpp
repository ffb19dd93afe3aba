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

#include "commgad/gaussian.hpp"

#include <cmath>

#include "commgad/error.hpp"

namespace commgad {

NeighborLists neighbor_lists(const AttributedGraph& g) {
  NeighborLists out(g.num_nodes());
  for (std::size_t v = 0; v < g.num_nodes(); ++v) {
    const auto nbrs = g.neighbors(static_cast<NodeId>(v));
    out[v].assign(nbrs.begin(), nbrs.end());
  }
  return out;
}

SegmentStats segment_mean_std(const Tensor& h, const NeighborLists& neighbors) {
  Tape& t = *h.tape();
  const Matrix& hv = h.value();
  const std::size_t n = neighbors.size(), d = hv.cols();
  if (n != hv.rows()) throw ShapeError("segment_mean_std: neighbor lists do not match rows of h");
  Matrix mean(n, d), stddev(n, d);
  std::vector<char> isolated(n, 0);
  for (std::size_t v = 0; v < n; ++v) {
    const auto& nb = neighbors[v];
    if (nb.empty()) {
      isolated[v] = 1;
      continue;
    }
    for (NodeId u : nb) {
      if (u >= hv.rows()) throw BoundsError("segment_mean_std: neighbor index out of range");
    }
    const double inv = 1.0 / static_cast<double>(nb.size());
    auto mu = mean.row(v);
    for (NodeId u : nb) {
      const auto r = hv.row(u);
      for (std::size_t k = 0; k < d; ++k) mu[k] += r[k];
    }
    for (double& x : mu) x *= inv;
    auto sd = stddev.row(v);
    for (NodeId u : nb) {
      const auto r = hv.row(u);
      for (std::size_t k = 0; k < d; ++k) {
        const double dev = r[k] - mu[k];
        sd[k] += dev * dev;
      }
    }
    for (double& x : sd) x = std::sqrt(x * inv);
  }

  const std::size_t ih = h.id();
  // Both outputs hold the neighbor lists by pointer; the caller keeps them
  // alive for the lifetime of the tape.
  const NeighborLists* nbl = &neighbors;
  Tensor mean_t = t.record("segment_mean", {ih}, std::move(mean), [ih, nbl](Tape& tp, std::size_t self) {
    if (!tp.requires_grad(ih)) return;
    const Matrix& g = tp.grad(self);
    Matrix& gh = tp.grad(ih);
    for (std::size_t v = 0; v < nbl->size(); ++v) {
      const auto& nb = (*nbl)[v];
      if (nb.empty()) continue;
      const double inv = 1.0 / static_cast<double>(nb.size());
      const auto gv = g.row(v);
      for (NodeId u : nb) {
        auto dst = gh.row(u);
        for (std::size_t k = 0; k < dst.size(); ++k) dst[k] += gv[k] * inv;
      }
    }
  });
  const std::size_t imean = mean_t.id();
  Tensor std_t = t.record("segment_std", {ih}, std::move(stddev), [ih, imean, nbl](Tape& tp, std::size_t self) {
    if (!tp.requires_grad(ih)) return;
    const Matrix& g = tp.grad(self);
    const Matrix& sd = tp.value(self);
    const Matrix& mu = tp.value(imean);
    const Matrix& hv = tp.value(ih);
    Matrix& gh = tp.grad(ih);
    for (std::size_t v = 0; v < nbl->size(); ++v) {
      const auto& nb = (*nbl)[v];
      if (nb.empty()) continue;
      const double inv = 1.0 / static_cast<double>(nb.size());
      for (std::size_t k = 0; k < g.cols(); ++k) {
        if (sd(v, k) <= 0.0) continue;
        const double coef = g(v, k) * inv / sd(v, k);
        for (NodeId u : nb) gh(u, k) += coef * (hv(u, k) - mu(v, k));
      }
    }
  });
  return {mean_t, std_t, std::move(isolated)};
}

Tensor gaussian_kl(const Tensor& mu1, const Tensor& sigma1, const Tensor& mu2, const Tensor& sigma2,
                   double sigma_floor, std::size_t* clamped) {
  const Matrix& m1 = mu1.value();
  for (const Tensor* x : {&sigma1, &mu2, &sigma2}) {
    if (!x->value().same_shape(m1)) throw ShapeError("gaussian_kl: operand shapes differ");
    if (x->tape() != mu1.tape()) throw Error("gaussian_kl: operands recorded on different tapes");
  }
  Tensor s1 = ad::clamp_min(sigma1, sigma_floor, clamped);
  Tensor s2 = ad::clamp_min(sigma2, sigma_floor, clamped);
  Tape& t = *mu1.tape();
  const std::size_t n = m1.rows(), d = m1.cols();
  Matrix out(n, 1);
  {
    const Matrix& a = s1.value();
    const Matrix& m2 = mu2.value();
    const Matrix& b = s2.value();
    for (std::size_t i = 0; i < n; ++i) {
      double acc = 0.0;
      for (std::size_t k = 0; k < d; ++k) {
        const double diff = m1(i, k) - m2(i, k);
        acc += std::log(b(i, k) / a(i, k)) + (a(i, k) * a(i, k) + diff * diff) / (2.0 * b(i, k) * b(i, k)) - 0.5;
      }
      out(i, 0) = acc;
    }
  }
  const std::size_t im1 = mu1.id(), is1 = s1.id(), im2 = mu2.id(), is2 = s2.id();
  return t.record("gaussian_kl", {im1, is1, im2, is2}, std::move(out),
                  [im1, is1, im2, is2](Tape& tp, std::size_t self) {
                    const Matrix& g = tp.grad(self);
                    const Matrix& m1 = tp.value(im1);
                    const Matrix& a = tp.value(is1);
                    const Matrix& m2 = tp.value(im2);
                    const Matrix& b = tp.value(is2);
                    const bool gm1 = tp.requires_grad(im1), gs1 = tp.requires_grad(is1);
                    const bool gm2 = tp.requires_grad(im2), gs2 = tp.requires_grad(is2);
                    for (std::size_t i = 0; i < m1.rows(); ++i) {
                      const double gi = g(i, 0);
                      for (std::size_t k = 0; k < m1.cols(); ++k) {
                        const double diff = m1(i, k) - m2(i, k);
                        const double b2 = b(i, k) * b(i, k);
                        if (gm1) tp.grad(im1)(i, k) += gi * diff / b2;
                        if (gm2) tp.grad(im2)(i, k) -= gi * diff / b2;
                        if (gs1) tp.grad(is1)(i, k) += gi * (a(i, k) / b2 - 1.0 / a(i, k));
                        if (gs2) {
                          tp.grad(is2)(i, k) +=
                              gi * (1.0 / b(i, k) - (a(i, k) * a(i, k) + diff * diff) / (b2 * b(i, k)));
                        }
                      }
                    }
                  });
}

}  // namespace commgad
