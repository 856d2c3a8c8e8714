// include/accentsim/synthgen.h

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

#ifndef ACCENTSIM_SYNTHGEN_H_
#define ACCENTSIM_SYNTHGEN_H_

#include <string>
#include <vector>

#include "accentsim/tokenizer.h"
#include "accentsim/types.h"

namespace accentsim {

// Target pooled run-length statistics for generated unit streams. The
// integer duration distribution is a rounded clipped Gaussian calibrated
// so that the post-rounding moments hit (duration_mean, duration_sd).
struct RhythmProfile {
  std::string name;
  double duration_mean = 1.0;  // frames, >= 1
  double duration_sd = 0.0;
  enum class Distribution { kRoundedClippedGaussian } distribution =
      Distribution::kRoundedClippedGaussian;
};

// Near-isochronous rhythm (low run-length variance).
RhythmProfile mora_profile();
// High run-length variance rhythm.
RhythmProfile stress_profile();

struct SynthConfig {
  uint32_t k = 50;
  uint32_t dim = 8;
  double centroid_scale = 10.0;  // minimum pairwise centroid distance
  double noise_sd = 0.3;         // isotropic per-frame feature noise
  uint32_t min_utterance_frames = 40;
  uint32_t max_utterance_frames = 160;
  uint32_t num_utterances = 0;
  enum class Transition { kUniformRandomDistinct } unit_transition =
      Transition::kUniformRandomDistinct;
  uint64_t seed = 0;
};

// Probability mass over integer durations (index = duration, entry 0 is
// always zero) whose mean/sd match the profile targets.
std::vector<double> duration_pmf(const RhythmProfile &profile);

// Deterministic per-unit duration assignment: pmf quota over the k units,
// refined so the uniform-usage pooled moments track the profile, then
// placed in seeded shuffled order.
std::vector<uint32_t> unit_duration_table(const RhythmProfile &profile,
                                          uint32_t k, uint64_t seed);

// K centroids from a seeded Gaussian draw, rescaled so the minimum pairwise
// distance is at least cfg.centroid_scale.
Codebook gen_codebook(const SynthConfig &cfg);

struct GeneratedUtterance {
  FeatureMatrix features;
  UnitSequence units;  // ground-truth frame-wise ids
};

// One utterance: uniform distinct-successor unit walk, per-unit durations
// from the profile table, total length clipped to the configured range,
// features = centroid + Gaussian noise. The RNG stream depends only on
// (cfg.seed, utterance_index), so generation order does not matter.
GeneratedUtterance gen_utterance(const Codebook &cb,
                                 const RhythmProfile &profile,
                                 const SynthConfig &cfg,
                                 uint32_t utterance_index);

struct CorpusManifestEntry {
  std::string feature_path;  // relative to the output directory
  std::string unit_path;
};

struct GenCorpusResult {
  std::vector<CorpusManifestEntry> entries;
  std::vector<std::string> warnings;
};

// Writes FMAT + ground-truth unit files plus manifest.tsv into out_dir.
// Fully reproducible from cfg.seed.
GenCorpusResult gen_corpus(const Codebook &cb, const RhythmProfile &profile,
                           const SynthConfig &cfg, const std::string &out_dir);

}  // namespace accentsim

#endif  // ACCENTSIM_SYNTHGEN_H_
