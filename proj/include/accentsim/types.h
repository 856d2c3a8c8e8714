// include/accentsim/types.h

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

#ifndef ACCENTSIM_TYPES_H_
#define ACCENTSIM_TYPES_H_

#include <cstdint>
#include <span>
#include <string>
#include <vector>

namespace accentsim {

// Per-utterance T x D frame features (SSL-layer activations, posteriors,
// or synthetic equivalents), row-major. All values finite.
struct FeatureMatrix {
  uint32_t num_frames = 0;  // T >= 1
  uint32_t dim = 0;         // D >= 1
  float frame_shift_ms = 20.0f;
  std::vector<float> data;  // num_frames * dim, row-major

  std::span<const float> frame(uint32_t t) const {
    return std::span<const float>(data.data() + static_cast<size_t>(t) * dim,
                                  dim);
  }
};

// Frame-wise discrete token stream. Every id < codebook_size.
struct UnitSequence {
  std::vector<uint32_t> units;
  uint32_t codebook_size = 0;
};

struct Run {
  uint32_t unit = 0;
  uint32_t duration = 0;  // frames, >= 1

  friend bool operator==(const Run &, const Run &) = default;
};

// (unit, duration) factorization of a UnitSequence. Adjacent runs carry
// distinct unit ids.
struct RunLengthSequence {
  std::vector<Run> runs;
  uint32_t codebook_size = 0;
};

enum class Stress : uint8_t { kStressed, kUnstressed, kNone };

struct PhonemeSpan {
  std::string label;
  uint32_t start_frame = 0;
  uint32_t end_frame = 0;  // exclusive, > start_frame
  Stress stress = Stress::kNone;
  bool is_vowel = false;
  bool is_voiced = false;

  uint32_t duration_frames() const { return end_frame - start_frame; }
};

// Externally produced phoneme segmentation. Spans are sorted by start and
// non-overlapping. Silence/pause labels ("sil", "sp", "") are retained on
// load and filtered by consumers.
struct PhonemeAlignment {
  std::vector<PhonemeSpan> spans;
};

inline bool is_silence_label(const std::string &label) {
  return label.empty() || label == "sil" || label == "sp";
}

// Per-frame pitch/intensity. pitch 0 means unvoiced; voiced pitch lies in
// [20, 2000] Hz. Both arrays have the same length.
struct ProsodyTrack {
  std::vector<double> pitch_hz;
  std::vector<double> intensity_db;

  uint32_t num_frames() const {
    return static_cast<uint32_t>(pitch_hz.size());
  }
};

// Throw ValidationError if the value breaks its documented invariants.
void validate(const FeatureMatrix &m);
void validate(const UnitSequence &s);
void validate(const RunLengthSequence &r);
void validate(const PhonemeAlignment &a);
void validate(const ProsodyTrack &p);

}  // namespace accentsim

#endif  // ACCENTSIM_TYPES_H_
