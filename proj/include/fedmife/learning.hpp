/*
 * Copyright 2026 The FedMife Authors.
 *
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 *      http://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */

#ifndef FEDMIFE_LEARNING_HPP_
#define FEDMIFE_LEARNING_HPP_

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <fstream>
#include <numeric>
#include <span>
#include <sstream>
#include <string>
#include <vector>

#include "fedmife/bigint.hpp"
#include "fedmife/errors.hpp"

namespace fedmife {

struct LayerShape {
  std::string name;
  std::vector<std::size_t> shape;

  std::size_t count() const {
    return std::accumulate(shape.begin(), shape.end(), std::size_t{1},
                           std::multiplies<>());
  }
  bool operator==(const LayerShape&) const = default;
};

// Flat model parameters plus the layout needed to unflatten them.
struct ModelVector {
  std::vector<double> weights;
  std::vector<LayerShape> layout;

  std::size_t dim() const { return weights.size(); }
  bool operator==(const ModelVector&) const = default;
};

// Row-major feature matrix with one integer class label per row.
struct DatasetShard {
  std::vector<double> features;
  std::size_t feature_dim = 0;
  std::vector<int> labels;

  std::size_t size() const { return labels.size(); }
  std::span<const double> row(std::size_t i) const {
    return {features.data() + i * feature_dim, feature_dim};
  }
  void Validate() const {
    if (features.size() != labels.size() * feature_dim) {
      Fail(ErrorCode::kInvalidArgument, "feature rows do not match labels");
    }
  }
};

// Fully connected ReLU network with a softmax output. No hidden layers gives
// multinomial logistic regression.
struct Architecture {
  std::size_t input_dim = 2;
  std::vector<std::size_t> hidden;
  std::size_t classes = 2;

  static Architecture Logistic(std::size_t input_dim, std::size_t classes) {
    return {input_dim, {}, classes};
  }

  std::vector<std::size_t> widths() const {
    std::vector<std::size_t> w{input_dim};
    w.insert(w.end(), hidden.begin(), hidden.end());
    w.push_back(classes);
    return w;
  }

  std::vector<LayerShape> Layout() const {
    std::vector<LayerShape> out;
    const auto w = widths();
    for (std::size_t l = 0; l + 1 < w.size(); ++l) {
      const std::string name = "dense_" + std::to_string(l);
      out.push_back({name + "/kernel", {w[l], w[l + 1]}});
      out.push_back({name + "/bias", {w[l + 1]}});
    }
    return out;
  }

  std::size_t ParameterCount() const {
    std::size_t n = 0;
    for (const auto& layer : Layout()) n += layer.count();
    return n;
  }

  // Uniform Glorot kernels, zero biases.
  ModelVector Init(Rng& rng) const {
    ModelVector m;
    m.layout = Layout();
    m.weights.reserve(ParameterCount());
    const auto w = widths();
    for (std::size_t l = 0; l + 1 < w.size(); ++l) {
      const double limit =
          std::sqrt(6.0 / static_cast<double>(w[l] + w[l + 1]));
      for (std::size_t k = 0; k < w[l] * w[l + 1]; ++k) {
        m.weights.push_back((2.0 * rng.Uniform01() - 1.0) * limit);
      }
      m.weights.insert(m.weights.end(), w[l + 1], 0.0);
    }
    return m;
  }

  void Check(const ModelVector& m) const {
    if (m.dim() != ParameterCount()) {
      Fail(ErrorCode::kArchitecture,
           "model has " + std::to_string(m.dim()) + " parameters, trainer expects " +
               std::to_string(ParameterCount()));
    }
  }
};

namespace internal {

struct ForwardPass {
  std::vector<std::vector<double>> activations;  // a_0 = input, ..., logits
};

inline void Forward(const Architecture& arch, std::span<const double> w,
                    std::span<const double> x, ForwardPass& pass) {
  const auto widths = arch.widths();
  const std::size_t layers = widths.size() - 1;
  pass.activations.resize(widths.size());
  pass.activations[0].assign(x.begin(), x.end());
  std::size_t offset = 0;
  for (std::size_t l = 0; l < layers; ++l) {
    const std::size_t in = widths[l], out = widths[l + 1];
    const double* kernel = w.data() + offset;
    const double* bias = kernel + in * out;
    offset += in * out + out;
    const auto& a = pass.activations[l];
    auto& z = pass.activations[l + 1];
    z.assign(bias, bias + out);
    for (std::size_t i = 0; i < in; ++i) {
      const double ai = a[i];
      if (ai == 0.0) continue;
      const double* row = kernel + i * out;
      for (std::size_t o = 0; o < out; ++o) z[o] += ai * row[o];
    }
    if (l + 1 < layers) {
      for (double& v : z) v = std::max(v, 0.0);
    }
  }
}

inline void Softmax(std::vector<double>& logits) {
  const double mx = *std::max_element(logits.begin(), logits.end());
  double sum = 0.0;
  for (double& v : logits) {
    v = std::exp(v - mx);
    sum += v;
  }
  for (double& v : logits) v /= sum;
}

}  // namespace internal

// Mean cross-entropy over `rows`; writes the matching gradient into `grad`.
inline double LossAndGradient(const Architecture& arch,
                              std::span<const double> weights,
                              const DatasetShard& data,
                              std::span<const std::size_t> rows,
                              std::vector<double>& grad) {
  const auto widths = arch.widths();
  const std::size_t layers = widths.size() - 1;
  grad.assign(weights.size(), 0.0);
  if (rows.empty()) return 0.0;

  std::vector<std::size_t> offsets(layers);
  for (std::size_t l = 0, off = 0; l < layers; ++l) {
    offsets[l] = off;
    off += widths[l] * widths[l + 1] + widths[l + 1];
  }

  internal::ForwardPass pass;
  std::vector<double> delta, prev_delta;
  double loss = 0.0;
  for (std::size_t r : rows) {
    internal::Forward(arch, weights, data.row(r), pass);
    std::vector<double> probs = pass.activations.back();
    internal::Softmax(probs);
    const int label = data.labels[r];
    loss -= std::log(std::max(probs[label], 1e-300));
    delta = probs;
    delta[label] -= 1.0;
    for (std::size_t l = layers; l-- > 0;) {
      const std::size_t in = widths[l], out = widths[l + 1];
      const auto& a = pass.activations[l];
      double* g_kernel = grad.data() + offsets[l];
      double* g_bias = g_kernel + in * out;
      for (std::size_t i = 0; i < in; ++i) {
        for (std::size_t o = 0; o < out; ++o) g_kernel[i * out + o] += a[i] * delta[o];
      }
      for (std::size_t o = 0; o < out; ++o) g_bias[o] += delta[o];
      if (l == 0) break;
      const double* kernel = weights.data() + offsets[l];
      prev_delta.assign(in, 0.0);
      for (std::size_t i = 0; i < in; ++i) {
        if (a[i] <= 0.0) continue;  // ReLU derivative
        double s = 0.0;
        for (std::size_t o = 0; o < out; ++o) s += kernel[i * out + o] * delta[o];
        prev_delta[i] = s;
      }
      delta.swap(prev_delta);
    }
  }
  const double inv = 1.0 / static_cast<double>(rows.size());
  for (double& g : grad) g *= inv;
  return loss * inv;
}

inline int Predict(const Architecture& arch, std::span<const double> weights,
                   std::span<const double> x) {
  internal::ForwardPass pass;
  internal::Forward(arch, weights, x, pass);
  const auto& logits = pass.activations.back();
  return static_cast<int>(std::max_element(logits.begin(), logits.end()) -
                          logits.begin());
}

struct TrainOptions {
  double learning_rate = 0.1;
  double batch_fraction = 0.01;
  int local_epochs = 1;
  std::uint64_t seed = 0;
};

// Minibatch SGD over shuffled passes of the shard.
inline ModelVector LocalTrain(const Architecture& arch, ModelVector model,
                              const DatasetShard& shard,
                              const TrainOptions& opts) {
  arch.Check(model);
  if (shard.feature_dim != arch.input_dim) {
    Fail(ErrorCode::kArchitecture, "shard feature width does not match model input");
  }
  if (!(opts.batch_fraction > 0 && opts.batch_fraction <= 1)) {
    Fail(ErrorCode::kInvalidArgument, "batch_fraction must lie in (0, 1]");
  }
  if (shard.size() == 0 || opts.local_epochs <= 0) return model;
  const auto batch = std::max<std::size_t>(
      1, static_cast<std::size_t>(
             std::llround(opts.batch_fraction * static_cast<double>(shard.size()))));
  Rng rng(opts.seed);
  std::vector<std::size_t> order(shard.size());
  std::iota(order.begin(), order.end(), 0);
  std::vector<double> grad;
  for (int e = 0; e < opts.local_epochs; ++e) {
    std::shuffle(order.begin(), order.end(), rng.engine());
    for (std::size_t start = 0; start < order.size(); start += batch) {
      const std::size_t len = std::min(batch, order.size() - start);
      LossAndGradient(arch, model.weights, shard,
                      std::span<const std::size_t>(order).subspan(start, len),
                      grad);
      for (std::size_t k = 0; k < grad.size(); ++k) {
        model.weights[k] -= opts.learning_rate * grad[k];
      }
    }
  }
  return model;
}

inline ModelVector PlaintextFedAvg(std::span<const ModelVector> models,
                                   std::span<const std::size_t> subset) {
  if (subset.empty()) Fail(ErrorCode::kInvalidArgument, "empty FedAvg subset");
  const ModelVector& first = models[subset.front()];
  ModelVector out;
  out.layout = first.layout;
  out.weights.assign(first.dim(), 0.0);
  for (std::size_t idx : subset) {
    if (idx >= models.size()) Fail(ErrorCode::kInvalidArgument, "subset index out of range");
    if (models[idx].dim() != first.dim()) {
      Fail(ErrorCode::kDimension, "models disagree on dimension");
    }
    for (std::size_t k = 0; k < out.dim(); ++k) out.weights[k] += models[idx].weights[k];
  }
  for (double& w : out.weights) w /= static_cast<double>(subset.size());
  return out;
}

// Macro-averaged F1 over classes that occur in either truth or prediction.
inline double MacroF1(std::span<const int> truth, std::span<const int> pred,
                      std::size_t classes) {
  if (truth.size() != pred.size() || truth.empty()) {
    Fail(ErrorCode::kInvalidArgument, "F1 needs equal-length, nonempty label lists");
  }
  std::vector<double> tp(classes, 0), fp(classes, 0), fn(classes, 0);
  for (std::size_t i = 0; i < truth.size(); ++i) {
    const auto t = static_cast<std::size_t>(truth[i]);
    const auto p = static_cast<std::size_t>(pred[i]);
    if (t >= classes || p >= classes) {
      Fail(ErrorCode::kInvalidArgument, "label outside class range");
    }
    if (t == p) {
      tp[t] += 1;
    } else {
      fp[p] += 1;
      fn[t] += 1;
    }
  }
  double sum = 0.0;
  std::size_t counted = 0;
  for (std::size_t c = 0; c < classes; ++c) {
    if (tp[c] + fp[c] + fn[c] == 0) continue;
    sum += 2 * tp[c] / (2 * tp[c] + fp[c] + fn[c]);
    ++counted;
  }
  return sum / static_cast<double>(counted);
}

inline double EvaluateF1(const Architecture& arch, const ModelVector& model,
                         const DatasetShard& test) {
  arch.Check(model);
  std::vector<int> pred(test.size());
  for (std::size_t i = 0; i < test.size(); ++i) {
    pred[i] = Predict(arch, model.weights, test.row(i));
  }
  return MacroF1(test.labels, pred, arch.classes);
}

// Gaussian blobs: class k is centred at centers[k] with isotropic spread.
struct BlobSpec {
  std::size_t classes = 2;
  std::size_t features = 2;
  double separation = 1.0;  // scale of the class centres
  double spread = 1.0;      // per-coordinate standard deviation
  std::uint64_t center_seed = 1;
};

inline std::vector<std::vector<double>> BlobCenters(const BlobSpec& spec) {
  Rng rng(spec.center_seed);
  std::vector<std::vector<double>> centers(spec.classes,
                                           std::vector<double>(spec.features));
  for (auto& c : centers) {
    for (double& v : c) v = rng.Gaussian(spec.separation);
  }
  return centers;
}

inline DatasetShard MakeBlobs(const BlobSpec& spec, std::size_t samples,
                              Rng& rng) {
  if (spec.classes < 2 || spec.features < 1) {
    Fail(ErrorCode::kConfig, "blobs need >= 2 classes and >= 1 feature");
  }
  const auto centers = BlobCenters(spec);
  DatasetShard data;
  data.feature_dim = spec.features;
  data.features.reserve(samples * spec.features);
  data.labels.reserve(samples);
  for (std::size_t i = 0; i < samples; ++i) {
    const std::size_t k = i % spec.classes;
    for (double c : centers[k]) data.features.push_back(c + rng.Gaussian(spec.spread));
    data.labels.push_back(static_cast<int>(k));
  }
  return data;
}

inline DatasetShard SelectRows(const DatasetShard& data,
                               std::span<const std::size_t> rows) {
  DatasetShard out;
  out.feature_dim = data.feature_dim;
  out.features.reserve(rows.size() * data.feature_dim);
  out.labels.reserve(rows.size());
  for (std::size_t r : rows) {
    const auto x = data.row(r);
    out.features.insert(out.features.end(), x.begin(), x.end());
    out.labels.push_back(data.labels[r]);
  }
  return out;
}

// Uniform random disjoint shards of `shard_size` rows each.
inline std::vector<DatasetShard> PartitionShards(const DatasetShard& pool,
                                                 std::size_t parts,
                                                 std::size_t shard_size,
                                                 Rng& rng) {
  if (parts * shard_size > pool.size()) {
    Fail(ErrorCode::kConfig, "dataset has " + std::to_string(pool.size()) +
                                 " rows, need " + std::to_string(parts * shard_size));
  }
  std::vector<std::size_t> order(pool.size());
  std::iota(order.begin(), order.end(), 0);
  std::shuffle(order.begin(), order.end(), rng.engine());
  std::vector<DatasetShard> shards;
  shards.reserve(parts);
  for (std::size_t p = 0; p < parts; ++p) {
    shards.push_back(SelectRows(
        pool, std::span<const std::size_t>(order).subspan(p * shard_size, shard_size)));
  }
  return shards;
}

// CSV with a header row; `label_column` names the integer class column and
// every other column is a numeric feature.
inline DatasetShard LoadCsv(const std::string& path,
                            const std::string& label_column) {
  std::ifstream in(path);
  if (!in) Fail(ErrorCode::kIo, "cannot read " + path);
  auto split = [](const std::string& line) {
    std::vector<std::string> cells;
    std::stringstream ss(line);
    std::string cell;
    while (std::getline(ss, cell, ',')) cells.push_back(cell);
    if (!line.empty() && line.back() == ',') cells.emplace_back();
    return cells;
  };
  std::string line;
  if (!std::getline(in, line)) Fail(ErrorCode::kConfig, path + ": empty file");
  if (!line.empty() && line.back() == '\r') line.pop_back();
  const auto header = split(line);
  const auto label_it = std::find(header.begin(), header.end(), label_column);
  if (label_it == header.end()) {
    Fail(ErrorCode::kConfig, path + ":1: no column named '" + label_column + "'");
  }
  const auto label_idx = static_cast<std::size_t>(label_it - header.begin());
  DatasetShard data;
  data.feature_dim = header.size() - 1;
  std::size_t line_no = 1;
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    const auto cells = split(line);
    if (cells.size() != header.size()) {
      Fail(ErrorCode::kConfig, path + ":" + std::to_string(line_no) + ": expected " +
                                   std::to_string(header.size()) + " columns");
    }
    for (std::size_t c = 0; c < cells.size(); ++c) {
      try {
        std::size_t used = 0;
        if (c == label_idx) {
          const int label = std::stoi(cells[c], &used);
          if (label < 0) throw std::invalid_argument("negative label");
          data.labels.push_back(label);
        } else {
          data.features.push_back(std::stod(cells[c], &used));
        }
        if (used != cells[c].size()) throw std::invalid_argument("trailing text");
      } catch (const std::exception&) {
        Fail(ErrorCode::kConfig, path + ":" + std::to_string(line_no) +
                                     ": bad value '" + cells[c] + "'");
      }
    }
  }
  return data;
}

}  // namespace fedmife

#endif  // FEDMIFE_LEARNING_HPP_
