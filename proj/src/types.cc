// src/types.cc

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

#include "accentsim/types.h"

#include <cmath>

#include "accentsim/error.h"

namespace accentsim {

void validate(const FeatureMatrix &m) {
  if (m.num_frames == 0) throw ValidationError("feature matrix: T must be >= 1");
  if (m.dim == 0) throw ValidationError("feature matrix: D must be >= 1");
  if (!(m.frame_shift_ms > 0.0f))
    throw ValidationError("feature matrix: frame_shift_ms must be positive");
  if (m.data.size() != static_cast<size_t>(m.num_frames) * m.dim)
    throw ValidationError("feature matrix: data size does not match T*D");
  for (float v : m.data) {
    if (!std::isfinite(v))
      throw ValidationError("feature matrix: non-finite value in frames");
  }
}

void validate(const UnitSequence &s) {
  if (s.codebook_size == 0)
    throw ValidationError("unit sequence: codebook size must be >= 1");
  if (s.units.empty()) throw ValidationError("unit sequence: length must be >= 1");
  for (uint32_t id : s.units) {
    if (id >= s.codebook_size)
      throw ValidationError("unit sequence: id " + std::to_string(id) +
                            " out of range for K=" +
                            std::to_string(s.codebook_size));
  }
}

void validate(const RunLengthSequence &r) {
  if (r.codebook_size == 0)
    throw ValidationError("run-length sequence: codebook size must be >= 1");
  if (r.runs.empty())
    throw ValidationError("run-length sequence: must contain at least one run");
  for (size_t i = 0; i < r.runs.size(); ++i) {
    if (r.runs[i].duration == 0)
      throw ValidationError("run-length sequence: zero duration at run " +
                            std::to_string(i));
    if (r.runs[i].unit >= r.codebook_size)
      throw ValidationError("run-length sequence: unit id out of range");
    if (i > 0 && r.runs[i].unit == r.runs[i - 1].unit)
      throw ValidationError(
          "run-length sequence: adjacent runs share unit id " +
          std::to_string(r.runs[i].unit));
  }
}

void validate(const PhonemeAlignment &a) {
  uint32_t prev_end = 0;
  for (size_t i = 0; i < a.spans.size(); ++i) {
    const PhonemeSpan &s = a.spans[i];
    if (s.end_frame <= s.start_frame)
      throw ValidationError("alignment: span " + std::to_string(i) +
                            " has start >= end");
    if (i > 0 && s.start_frame < prev_end)
      throw ValidationError("alignment: span " + std::to_string(i) +
                            " overlaps its predecessor");
    prev_end = s.end_frame;
  }
}

void validate(const ProsodyTrack &p) {
  if (p.pitch_hz.size() != p.intensity_db.size())
    throw ValidationError("prosody track: pitch/intensity length mismatch");
  if (p.pitch_hz.empty())
    throw ValidationError("prosody track: must contain at least one frame");
  for (double v : p.pitch_hz) {
    if (!std::isfinite(v) || v < 0.0)
      throw ValidationError("prosody track: pitch must be finite and >= 0");
    if (v != 0.0 && (v < 20.0 || v > 2000.0))
      throw ValidationError("prosody track: voiced pitch outside [20, 2000] Hz");
  }
  for (double v : p.intensity_db) {
    if (!std::isfinite(v))
      throw ValidationError("prosody track: non-finite intensity");
  }
}

}  // namespace accentsim
