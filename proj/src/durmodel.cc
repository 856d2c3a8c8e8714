// src/durmodel.cc

// Copyright 2026  Accentsim Authors

// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//  http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "accentsim/durmodel.h"

#include <algorithm>
#include <cmath>
#include <limits>

#include "accentsim/error.h"
#include "accentsim/unitseq.h"

namespace accentsim {

namespace {

constexpr double kLayerNormEps = 1e-5;

// Activations of one utterance pass, kept for backpropagation. All arrays
// are [position][channel] row-major with F channels unless noted.
struct Caches {
  size_t n = 0;
  std::vector<double> pre1;   // conv1 output before ReLU
  std::vector<double> norm1;  // layernorm1 normalized values (x-hat)
  std::vector<double> istd1;  // per-position 1/sqrt(var+eps)
  std::vector<double> mask1;  // dropout scale factors (0 or 1/(1-p))
  std::vector<double> drop1;  // block-1 output fed to conv2
  std::vector<double> pre2;
  std::vector<double> norm2;
  std::vector<double> istd2;
  std::vector<double> mask2;
  std::vector<double> drop2;  // fed to the projection
  std::vector<double> out;    // predicted log durations, length n
};

void conv_forward(const double *in, size_t n, uint32_t c_in, uint32_t c_out,
                  uint32_t kernel, const double *w, const double *b,
                  double *out) {
  const int pad = static_cast<int>(kernel) / 2;
  for (size_t t = 0; t < n; ++t) {
    for (uint32_t f = 0; f < c_out; ++f) {
      double acc = b[f];
      for (uint32_t tap = 0; tap < kernel; ++tap) {
        const int src = static_cast<int>(t) + static_cast<int>(tap) - pad;
        if (src < 0 || src >= static_cast<int>(n)) continue;
        const double *row = in + static_cast<size_t>(src) * c_in;
        const double *wrow = w + (static_cast<size_t>(f) * c_in) * kernel + tap;
        for (uint32_t c = 0; c < c_in; ++c) {
          acc += wrow[static_cast<size_t>(c) * kernel] * row[c];
        }
      }
      out[t * c_out + f] = acc;
    }
  }
}

// Accumulates weight/bias gradients and (optionally) input gradients.
void conv_backward(const double *in, const double *d_out, size_t n,
                   uint32_t c_in, uint32_t c_out, uint32_t kernel,
                   const double *w, double *d_w, double *d_b, double *d_in) {
  const int pad = static_cast<int>(kernel) / 2;
  for (size_t t = 0; t < n; ++t) {
    for (uint32_t f = 0; f < c_out; ++f) {
      const double g = d_out[t * c_out + f];
      if (g == 0.0) continue;
      d_b[f] += g;
      for (uint32_t tap = 0; tap < kernel; ++tap) {
        const int src = static_cast<int>(t) + static_cast<int>(tap) - pad;
        if (src < 0 || src >= static_cast<int>(n)) continue;
        const double *row = in + static_cast<size_t>(src) * c_in;
        const size_t wbase = (static_cast<size_t>(f) * c_in) * kernel + tap;
        for (uint32_t c = 0; c < c_in; ++c) {
          d_w[wbase + static_cast<size_t>(c) * kernel] += g * row[c];
        }
        if (d_in) {
          double *drow = d_in + static_cast<size_t>(src) * c_in;
          for (uint32_t c = 0; c < c_in; ++c) {
            drow[c] += g * w[wbase + static_cast<size_t>(c) * kernel];
          }
        }
      }
    }
  }
}

// ReLU -> layernorm(channel dim) -> dropout, one block position at a time.
// Writes normalized values and 1/std so the backward pass can reuse them.
void block_tail_forward(const double *pre, size_t n, uint32_t f_dim,
                        const double *gain, const double *bias,
                        double dropout_rate, bool training, Rng *rng,
                        double *norm, double *istd, double *mask,
                        double *out) {
  const bool use_dropout = training && dropout_rate > 0.0;
  const double keep_scale = use_dropout ? 1.0 / (1.0 - dropout_rate) : 1.0;
  for (size_t t = 0; t < n; ++t) {
    const double *p = pre + t * f_dim;
    double mean = 0.0;
    for (uint32_t f = 0; f < f_dim; ++f) mean += std::max(p[f], 0.0);
    mean /= f_dim;
    double var = 0.0;
    for (uint32_t f = 0; f < f_dim; ++f) {
      const double d = std::max(p[f], 0.0) - mean;
      var += d * d;
    }
    var /= f_dim;
    const double inv = 1.0 / std::sqrt(var + kLayerNormEps);
    istd[t] = inv;
    for (uint32_t f = 0; f < f_dim; ++f) {
      const double xhat = (std::max(p[f], 0.0) - mean) * inv;
      norm[t * f_dim + f] = xhat;
      double v = gain[f] * xhat + bias[f];
      double m = 1.0;
      if (use_dropout) {
        m = rng->uniform_real() < dropout_rate ? 0.0 : keep_scale;
      }
      if (mask) mask[t * f_dim + f] = m;
      out[t * f_dim + f] = v * m;
    }
  }
}

// Backward through dropout -> layernorm -> ReLU for one block.
void block_tail_backward(const double *pre, const double *norm,
                         const double *istd, const double *mask,
                         const double *d_out, size_t n, uint32_t f_dim,
                         const double *gain, double *d_gain, double *d_bias,
                         double *d_pre) {
  std::vector<double> dxhat(f_dim);
  for (size_t t = 0; t < n; ++t) {
    double mean_dxhat = 0.0;
    double mean_dxhat_xhat = 0.0;
    for (uint32_t f = 0; f < f_dim; ++f) {
      const size_t i = t * f_dim + f;
      const double dv = d_out[i] * (mask ? mask[i] : 1.0);
      d_gain[f] += dv * norm[i];
      d_bias[f] += dv;
      dxhat[f] = dv * gain[f];
      mean_dxhat += dxhat[f];
      mean_dxhat_xhat += dxhat[f] * norm[i];
    }
    mean_dxhat /= f_dim;
    mean_dxhat_xhat /= f_dim;
    for (uint32_t f = 0; f < f_dim; ++f) {
      const size_t i = t * f_dim + f;
      const double d_relu =
          istd[t] * (dxhat[f] - mean_dxhat - norm[i] * mean_dxhat_xhat);
      d_pre[i] = pre[i] > 0.0 ? d_relu : 0.0;
    }
  }
}

void check_units(std::span<const uint32_t> units, uint32_t k) {
  for (uint32_t id : units) {
    if (id >= k)
      throw ValidationError("duration model: unit id " + std::to_string(id) +
                            " out of range for K=" + std::to_string(k));
  }
}

std::vector<double> embed(const DurationModel &model,
                          std::span<const uint32_t> units) {
  const uint32_t e_dim = model.config.embed_dim;
  const ParamLayout lay = model.layout();
  std::vector<double> x(units.size() * e_dim);
  for (size_t t = 0; t < units.size(); ++t) {
    const double *row =
        model.params.data() + lay.embedding +
        static_cast<size_t>(units[t]) * e_dim;
    std::copy(row, row + e_dim, x.begin() + t * e_dim);
  }
  return x;
}

// Full pass; fills caches when given (needed for backprop).
std::vector<double> forward_impl(const DurationModel &model,
                                 std::span<const uint32_t> units,
                                 bool training, Rng *rng, Caches *caches) {
  const DurationModelConfig &cfg = model.config;
  const ParamLayout lay = model.layout();
  const uint32_t e_dim = cfg.embed_dim;
  const uint32_t f_dim = cfg.filter_size;
  const size_t n = units.size();
  const double *p = model.params.data();

  Caches local;
  Caches &c = caches ? *caches : local;
  c.n = n;
  c.pre1.assign(n * f_dim, 0.0);
  c.norm1.assign(n * f_dim, 0.0);
  c.istd1.assign(n, 0.0);
  c.drop1.assign(n * f_dim, 0.0);
  c.pre2.assign(n * f_dim, 0.0);
  c.norm2.assign(n * f_dim, 0.0);
  c.istd2.assign(n, 0.0);
  c.drop2.assign(n * f_dim, 0.0);
  c.out.assign(n, 0.0);
  const bool want_masks = caches && training && cfg.dropout_rate > 0.0;
  if (want_masks) {
    c.mask1.assign(n * f_dim, 1.0);
    c.mask2.assign(n * f_dim, 1.0);
  } else {
    c.mask1.clear();
    c.mask2.clear();
  }

  const std::vector<double> x0 = embed(model, units);

  conv_forward(x0.data(), n, e_dim, f_dim, cfg.kernel_size, p + lay.conv1_w,
               p + lay.conv1_b, c.pre1.data());
  block_tail_forward(c.pre1.data(), n, f_dim, p + lay.ln1_gain,
                     p + lay.ln1_bias, cfg.dropout_rate, training, rng,
                     c.norm1.data(), c.istd1.data(),
                     want_masks ? c.mask1.data() : nullptr, c.drop1.data());

  conv_forward(c.drop1.data(), n, f_dim, f_dim, cfg.kernel_size,
               p + lay.conv2_w, p + lay.conv2_b, c.pre2.data());
  block_tail_forward(c.pre2.data(), n, f_dim, p + lay.ln2_gain,
                     p + lay.ln2_bias, cfg.dropout_rate, training, rng,
                     c.norm2.data(), c.istd2.data(),
                     want_masks ? c.mask2.data() : nullptr, c.drop2.data());

  for (size_t t = 0; t < n; ++t) {
    double acc = p[lay.proj_b];
    const double *row = c.drop2.data() + t * f_dim;
    const double *w = p + lay.proj_w;
    for (uint32_t f = 0; f < f_dim; ++f) acc += w[f] * row[f];
    c.out[t] = acc;
  }
  return c.out;
}

}  // namespace

ParamLayout ParamLayout::from_config(const DurationModelConfig &cfg) {
  const size_t k = cfg.codebook_size;
  const size_t e = cfg.embed_dim;
  const size_t f = cfg.filter_size;
  const size_t ker = cfg.kernel_size;
  ParamLayout lay;
  size_t off = 0;
  lay.embedding = off;
  off += k * e;
  lay.conv1_w = off;
  off += f * e * ker;
  lay.conv1_b = off;
  off += f;
  lay.ln1_gain = off;
  off += f;
  lay.ln1_bias = off;
  off += f;
  lay.conv2_w = off;
  off += f * f * ker;
  lay.conv2_b = off;
  off += f;
  lay.ln2_gain = off;
  off += f;
  lay.ln2_bias = off;
  off += f;
  lay.proj_w = off;
  off += f;
  lay.proj_b = off;
  off += 1;
  lay.total = off;
  return lay;
}

void validate(const DurationModelConfig &cfg) {
  if (cfg.codebook_size == 0)
    throw ValidationError("duration model config: codebook_size must be >= 1");
  if (cfg.embed_dim == 0 || cfg.filter_size == 0)
    throw ValidationError("duration model config: embed/filter dims must be >= 1");
  if (cfg.kernel_size == 0 || cfg.kernel_size % 2 == 0)
    throw ValidationError("duration model config: kernel_size must be odd");
  if (cfg.dropout_rate < 0.0 || cfg.dropout_rate >= 1.0)
    throw ValidationError("duration model config: dropout_rate must be in [0,1)");
  if (!(cfg.learning_rate > 0.0))
    throw ValidationError("duration model config: learning_rate must be positive");
  if (cfg.epochs == 0)
    throw ValidationError("duration model config: epochs must be >= 1");
  if (cfg.batch_utterances == 0)
    throw ValidationError("duration model config: batch_utterances must be >= 1");
  if (cfg.max_duration == 0)
    throw ValidationError("duration model config: max_duration must be >= 1");
}

void validate(const DurationModel &model) {
  validate(model.config);
  const ParamLayout lay = model.layout();
  if (model.params.size() != lay.total)
    throw ValidationError("duration model: parameter vector size mismatch");
  for (double v : model.params) {
    if (!std::isfinite(v))
      throw ValidationError("duration model: non-finite parameter");
  }
}

std::vector<TrainingExample> build_training_set(
    const std::vector<UnitSequence> &corpus) {
  std::vector<TrainingExample> out;
  out.reserve(corpus.size());
  for (const UnitSequence &s : corpus) {
    const RunLengthSequence rle = run_length_encode(s);
    TrainingExample ex;
    ex.input_units.reserve(rle.runs.size());
    ex.target_durations.reserve(rle.runs.size());
    for (const Run &r : rle.runs) {
      ex.input_units.push_back(r.unit);
      ex.target_durations.push_back(r.duration);
    }
    out.push_back(std::move(ex));
  }
  return out;
}

std::vector<double> forward(const DurationModel &model,
                            std::span<const uint32_t> input_units,
                            bool training, Rng *rng) {
  validate(model);
  check_units(input_units, model.config.codebook_size);
  if (training && model.config.dropout_rate > 0.0 && rng == nullptr)
    throw ValidationError("forward: training pass with dropout needs an rng");
  if (input_units.empty()) return {};
  return forward_impl(model, input_units, training, rng, nullptr);
}

LossAndGrads loss_and_gradients(const DurationModel &model,
                                const std::vector<TrainingExample> &batch,
                                Rng *rng) {
  validate(model);
  if (batch.empty())
    throw ValidationError("loss_and_gradients: batch must not be empty");
  if (model.config.dropout_rate > 0.0 && rng == nullptr)
    throw ValidationError("loss_and_gradients: dropout needs an rng");
  const DurationModelConfig &cfg = model.config;
  const ParamLayout lay = model.layout();
  const uint32_t e_dim = cfg.embed_dim;
  const uint32_t f_dim = cfg.filter_size;
  const double *p = model.params.data();

  size_t total_positions = 0;
  for (const TrainingExample &ex : batch) {
    if (ex.input_units.size() != ex.target_durations.size())
      throw ValidationError("training example: input/target length mismatch");
    if (ex.input_units.empty())
      throw ValidationError("training example: empty sequence");
    check_units(ex.input_units, cfg.codebook_size);
    for (uint32_t d : ex.target_durations) {
      if (d == 0)
        throw ValidationError("training example: zero target duration");
    }
    total_positions += ex.input_units.size();
  }

  LossAndGrads result;
  result.grads.assign(lay.total, 0.0);
  double *g = result.grads.data();
  const double inv_m = 1.0 / static_cast<double>(total_positions);

  Caches c;
  std::vector<double> d_drop2, d_pre2, d_drop1, d_pre1, d_x0, d_out;
  for (const TrainingExample &ex : batch) {
    const size_t n = ex.input_units.size();
    const std::vector<double> y =
        forward_impl(model, ex.input_units, /*training=*/true, rng, &c);

    d_out.assign(n, 0.0);
    for (size_t t = 0; t < n; ++t) {
      const double err = y[t] - std::log(static_cast<double>(
                                    ex.target_durations[t]));
      result.loss += err * err * inv_m;
      d_out[t] = 2.0 * err * inv_m;
    }

    // projection backward
    d_drop2.assign(n * f_dim, 0.0);
    for (size_t t = 0; t < n; ++t) {
      const double dy = d_out[t];
      if (dy == 0.0) continue;
      g[lay.proj_b] += dy;
      const double *row = c.drop2.data() + t * f_dim;
      const double *w = p + lay.proj_w;
      for (uint32_t f = 0; f < f_dim; ++f) {
        g[lay.proj_w + f] += dy * row[f];
        d_drop2[t * f_dim + f] = dy * w[f];
      }
    }

    // block 2 backward
    d_pre2.assign(n * f_dim, 0.0);
    block_tail_backward(c.pre2.data(), c.norm2.data(), c.istd2.data(),
                        c.mask2.empty() ? nullptr : c.mask2.data(),
                        d_drop2.data(), n, f_dim, p + lay.ln2_gain,
                        g + lay.ln2_gain, g + lay.ln2_bias, d_pre2.data());
    d_drop1.assign(n * f_dim, 0.0);
    conv_backward(c.drop1.data(), d_pre2.data(), n, f_dim, f_dim,
                  cfg.kernel_size, p + lay.conv2_w, g + lay.conv2_w,
                  g + lay.conv2_b, d_drop1.data());

    // block 1 backward
    d_pre1.assign(n * f_dim, 0.0);
    block_tail_backward(c.pre1.data(), c.norm1.data(), c.istd1.data(),
                        c.mask1.empty() ? nullptr : c.mask1.data(),
                        d_drop1.data(), n, f_dim, p + lay.ln1_gain,
                        g + lay.ln1_gain, g + lay.ln1_bias, d_pre1.data());
    const std::vector<double> x0 = embed(model, ex.input_units);
    d_x0.assign(n * e_dim, 0.0);
    conv_backward(x0.data(), d_pre1.data(), n, e_dim, f_dim, cfg.kernel_size,
                  p + lay.conv1_w, g + lay.conv1_w, g + lay.conv1_b,
                  d_x0.data());

    // embedding backward
    for (size_t t = 0; t < n; ++t) {
      double *row = g + lay.embedding +
                    static_cast<size_t>(ex.input_units[t]) * e_dim;
      const double *src = d_x0.data() + t * e_dim;
      for (uint32_t e = 0; e < e_dim; ++e) row[e] += src[e];
    }
  }
  return result;
}

DurationModel init_model(const DurationModelConfig &cfg) {
  validate(cfg);
  DurationModel model;
  model.config = cfg;
  const ParamLayout lay = ParamLayout::from_config(cfg);
  model.params.assign(lay.total, 0.0);
  Rng rng = Rng::derive(cfg.seed, 1);

  const double emb_sd = 1.0 / std::sqrt(static_cast<double>(cfg.embed_dim));
  for (size_t i = lay.embedding; i < lay.conv1_w; ++i)
    model.params[i] = rng.gaussian(0.0, emb_sd);
  const double c1_sd =
      std::sqrt(2.0 / static_cast<double>(cfg.embed_dim * cfg.kernel_size));
  for (size_t i = lay.conv1_w; i < lay.conv1_b; ++i)
    model.params[i] = rng.gaussian(0.0, c1_sd);
  std::fill(model.params.begin() + lay.ln1_gain,
            model.params.begin() + lay.ln1_bias, 1.0);
  const double c2_sd =
      std::sqrt(2.0 / static_cast<double>(cfg.filter_size * cfg.kernel_size));
  for (size_t i = lay.conv2_w; i < lay.conv2_b; ++i)
    model.params[i] = rng.gaussian(0.0, c2_sd);
  std::fill(model.params.begin() + lay.ln2_gain,
            model.params.begin() + lay.ln2_bias, 1.0);
  const double pw_sd = 1.0 / std::sqrt(static_cast<double>(cfg.filter_size));
  for (size_t i = lay.proj_w; i < lay.proj_b; ++i)
    model.params[i] = rng.gaussian(0.0, pw_sd);
  return model;
}

TrainResult train(const std::vector<TrainingExample> &training_set,
                  const DurationModelConfig &cfg) {
  validate(cfg);
  if (training_set.empty())
    throw ValidationError("train: training set must not be empty");

  DurationModel model = init_model(cfg);
  const ParamLayout lay = model.layout();
  Rng train_rng = Rng::derive(cfg.seed, 2);

  std::vector<double> adam_m(lay.total, 0.0);
  std::vector<double> adam_v(lay.total, 0.0);
  uint64_t step = 0;

  std::vector<size_t> order(training_set.size());
  for (size_t i = 0; i < order.size(); ++i) order[i] = i;

  TrainResult result;
  result.epoch_losses.reserve(cfg.epochs);
  std::vector<TrainingExample> batch;
  for (uint32_t epoch = 0; epoch < cfg.epochs; ++epoch) {
    train_rng.shuffle(order);
    double epoch_loss = 0.0;
    size_t epoch_positions = 0;
    for (size_t start = 0; start < order.size();
         start += cfg.batch_utterances) {
      const size_t end =
          std::min(order.size(), start + cfg.batch_utterances);
      batch.clear();
      size_t batch_positions = 0;
      for (size_t i = start; i < end; ++i) {
        batch.push_back(training_set[order[i]]);
        batch_positions += batch.back().input_units.size();
      }
      LossAndGrads lg = loss_and_gradients(model, batch, &train_rng);
      if (!std::isfinite(lg.loss))
        throw TrainingDivergedError("train: non-finite loss at epoch " +
                                    std::to_string(epoch));
      epoch_loss += lg.loss * static_cast<double>(batch_positions);
      epoch_positions += batch_positions;

      ++step;
      const double bc1 = 1.0 - std::pow(cfg.adam_beta1, static_cast<double>(step));
      const double bc2 = 1.0 - std::pow(cfg.adam_beta2, static_cast<double>(step));
      bool finite = true;
      for (size_t i = 0; i < lay.total; ++i) {
        adam_m[i] = cfg.adam_beta1 * adam_m[i] +
                    (1.0 - cfg.adam_beta1) * lg.grads[i];
        adam_v[i] = cfg.adam_beta2 * adam_v[i] +
                    (1.0 - cfg.adam_beta2) * lg.grads[i] * lg.grads[i];
        const double m_hat = adam_m[i] / bc1;
        const double v_hat = adam_v[i] / bc2;
        model.params[i] -=
            cfg.learning_rate * m_hat / (std::sqrt(v_hat) + cfg.adam_eps);
        finite = finite && std::isfinite(model.params[i]);
      }
      if (!finite)
        throw TrainingDivergedError(
            "train: parameters became non-finite at epoch " +
            std::to_string(epoch));
    }
    result.epoch_losses.push_back(epoch_loss /
                                  static_cast<double>(epoch_positions));
  }
  result.model = std::move(model);
  return result;
}

std::vector<uint32_t> predict_durations(const DurationModel &model,
                                        std::span<const uint32_t> input_units) {
  const std::vector<double> log_durs =
      forward(model, input_units, /*training=*/false, nullptr);
  std::vector<uint32_t> out(log_durs.size());
  const int64_t max_d = static_cast<int64_t>(model.config.max_duration);
  for (size_t i = 0; i < log_durs.size(); ++i) {
    int64_t d = round_half_away_from_zero(std::exp(log_durs[i]));
    d = std::clamp<int64_t>(d, 1, max_d);
    out[i] = static_cast<uint32_t>(d);
  }
  return out;
}

}  // namespace accentsim
