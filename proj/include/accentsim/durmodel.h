// include/accentsim/durmodel.h

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

#ifndef ACCENTSIM_DURMODEL_H_
#define ACCENTSIM_DURMODEL_H_

#include <cmath>
#include <cstdint>
#include <span>
#include <vector>

#include "accentsim/rng.h"
#include "accentsim/types.h"

namespace accentsim {

// Unit duration predictor: embedding -> [conv1d -> ReLU -> layernorm ->
// dropout] x 2 -> linear, one predicted natural-log duration per position.
// The same stack FastSpeech2-style TTS systems use for phoneme lengths,
// here applied to de-duplicated unit sequences.
struct DurationModelConfig {
  uint32_t codebook_size = 0;  // K
  uint32_t embed_dim = 128;    // E
  uint32_t filter_size = 256;  // F
  uint32_t kernel_size = 3;    // odd, same-length padding
  double dropout_rate = 0.5;   // [0, 1)
  double learning_rate = 1e-3;
  double adam_beta1 = 0.9;
  double adam_beta2 = 0.999;
  double adam_eps = 1e-8;
  uint32_t epochs = 1;
  uint32_t batch_utterances = 16;
  uint64_t seed = 0;
  uint32_t max_duration = 100;
};

// Offsets of each parameter tensor inside the flat parameter vector. The
// serialization order of DPRD files is exactly this order.
struct ParamLayout {
  size_t embedding = 0;   // K x E
  size_t conv1_w = 0;     // F x E x kernel, [out][in][tap]
  size_t conv1_b = 0;     // F
  size_t ln1_gain = 0;    // F
  size_t ln1_bias = 0;    // F
  size_t conv2_w = 0;     // F x F x kernel
  size_t conv2_b = 0;     // F
  size_t ln2_gain = 0;    // F
  size_t ln2_bias = 0;    // F
  size_t proj_w = 0;      // F
  size_t proj_b = 0;      // 1
  size_t total = 0;

  static ParamLayout from_config(const DurationModelConfig &cfg);
};

struct DurationModel {
  DurationModelConfig config;
  std::vector<double> params;  // layout per ParamLayout::from_config(config)

  ParamLayout layout() const { return ParamLayout::from_config(config); }
};

struct TrainingExample {
  std::vector<uint32_t> input_units;      // de-duplicated ids
  std::vector<uint32_t> target_durations;  // same length, all >= 1
};

struct TrainResult {
  DurationModel model;
  std::vector<double> epoch_losses;  // position-weighted mean per epoch
};

// One (dedup(s), run durations of s) example per utterance; the frame-wise
// stream itself is the ground truth, no alignment needed.
std::vector<TrainingExample> build_training_set(
    const std::vector<UnitSequence> &corpus);

// Per-position predicted log duration. With training=true dropout masks are
// drawn from `rng`; with training=false the pass is deterministic and `rng`
// may be null.
std::vector<double> forward(const DurationModel &model,
                            std::span<const uint32_t> input_units,
                            bool training, Rng *rng);

// Mean squared error in log-duration space over all positions of the batch,
// plus gradients for every parameter (explicit backpropagation).
struct LossAndGrads {
  double loss = 0.0;
  std::vector<double> grads;  // same layout as model.params
};
LossAndGrads loss_and_gradients(const DurationModel &model,
                                const std::vector<TrainingExample> &batch,
                                Rng *rng);

// Adam on shuffled utterance batches for cfg.epochs. Deterministic given
// cfg.seed. Throws TrainingDivergedError if the loss goes non-finite.
TrainResult train(const std::vector<TrainingExample> &training_set,
                  const DurationModelConfig &cfg);

// Fresh model with seeded random initialization (what train() starts from).
DurationModel init_model(const DurationModelConfig &cfg);

// exp, then round half away from zero, then clamp to [1, max_duration].
std::vector<uint32_t> predict_durations(const DurationModel &model,
                                        std::span<const uint32_t> input_units);

inline int64_t round_half_away_from_zero(double v) {
  return std::llround(v);  // llround rounds halfway cases away from zero
}

void validate(const DurationModelConfig &cfg);
void validate(const DurationModel &model);

}  // namespace accentsim

#endif  // ACCENTSIM_DURMODEL_H_
