// include/accentsim/accent.h

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

#ifndef ACCENTSIM_ACCENT_H_
#define ACCENTSIM_ACCENT_H_

#include <optional>
#include <string>
#include <vector>

#include "accentsim/durmodel.h"
#include "accentsim/tokenizer.h"
#include "accentsim/types.h"

namespace accentsim {

// baseline: pass the frame-wise sequence through unchanged.
// dedup_only: de-duplicate and leave durations to a downstream decoder.
// dur_mod: de-duplicate, re-predict every duration, expand.
enum class PipelineMode { kBaseline, kDedupOnly, kDurMod };

// Duration modification of one frame-wise unit sequence. The model is only
// consulted in kDurMod mode.
UnitSequence modify_sequence(const UnitSequence &s, const DurationModel *model,
                             PipelineMode mode);

// encode_frames then modify_sequence: the full simulation step for one
// utterance.
UnitSequence simulate_accent(const FeatureMatrix &features, const Codebook &cb,
                             const DurationModel *model, PipelineMode mode);

struct BatchFileReport {
  std::string input_path;
  std::string output_path;    // empty on failure
  uint32_t input_frames = 0;  // 0 on failure
  uint32_t output_frames = 0;
  uint32_t run_count = 0;     // runs in the output
  bool ok = false;
  std::string error;  // empty when ok
};

// Runs the pipeline over every feature file in the manifest, writing one
// unit-sequence file per input into out_dir plus summary.tsv. Per-file
// failures are recorded and do not stop the batch; report order follows
// the manifest.
std::vector<BatchFileReport> batch_simulate(
    const std::vector<std::string> &feature_paths, const Codebook &cb,
    const DurationModel *model, PipelineMode mode, const std::string &out_dir);

// Same pipeline over already-encoded unit files (skips quantization).
std::vector<BatchFileReport> batch_simulate_units(
    const std::vector<std::string> &unit_paths, const DurationModel *model,
    PipelineMode mode, const std::string &out_dir);

void write_batch_summary(const std::vector<BatchFileReport> &reports,
                         const std::string &out_dir);

}  // namespace accentsim

#endif  // ACCENTSIM_ACCENT_H_
