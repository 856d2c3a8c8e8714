// include/accentsim/eval.h

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

#ifndef ACCENTSIM_EVAL_H_
#define ACCENTSIM_EVAL_H_

#include <cstdint>
#include <span>
#include <utility>
#include <vector>

#include "accentsim/types.h"

namespace accentsim {

enum class DistanceKind { kCosine, kEuclidean, kSymmetricKl };

// Monotone alignment between two frame sequences: starts at (0,0), ends at
// (T1-1, T2-1), each step advances i and/or j by one.
struct AlignmentPath {
  std::vector<std::pair<uint32_t, uint32_t>> steps;
};

struct DtwResult {
  AlignmentPath path;
  double cost = 0.0;
};

// Classic dynamic-programming alignment over steps {(1,0),(0,1),(1,1)},
// unweighted. Among equal-cost predecessors the diagonal is preferred,
// then (1,0), then (0,1). For kSymmetricKl rows must be non-negative and
// sum to ~1; values are floored at 1e-10 before logs.
DtwResult dtw_align(const FeatureMatrix &a, const FeatureMatrix &b,
                    DistanceKind distance);

// Standard Pearson product-moment coefficient. Throws
// InsufficientDataError for fewer than two samples and
// DegenerateInputError when either input has zero variance.
double pearson(std::span<const double> x, std::span<const double> y);

// (test, reference) value pairs collected along a DTW path at steps where
// both frames are voiced.
struct AlignedVoicedPairs {
  std::vector<double> test_pitch, ref_pitch;
  std::vector<double> test_intensity, ref_intensity;
};
AlignedVoicedPairs collect_aligned_voiced_pairs(const FeatureMatrix &test_feat,
                                                const ProsodyTrack &test_pros,
                                                const FeatureMatrix &ref_feat,
                                                const ProsodyTrack &ref_pros,
                                                DistanceKind distance);

// Mean over references of per-reference voiced-frame Pearson correlations.
// References whose pair sets are degenerate are skipped and counted; if all
// are degenerate a DegenerateInputError is thrown.
struct ProsodyCorrResult {
  double pitch_corr = 0.0;
  double intensity_corr = 0.0;
  uint32_t refs_used = 0;
  uint32_t refs_skipped = 0;
};
ProsodyCorrResult prosody_correlation(
    const FeatureMatrix &test_feat, const ProsodyTrack &test_pros,
    const std::vector<std::pair<const FeatureMatrix *, const ProsodyTrack *>>
        &refs,
    DistanceKind distance);

// Pearson between per-phoneme frame counts after dropping silence labels.
// Requires identical label sequences (LabelMismatchError otherwise).
double duration_correlation(const PhonemeAlignment &test,
                            const PhonemeAlignment &ref);

// Mean duration of stressed vs unstressed vowel spans, in milliseconds.
struct VowelDurationRatio {
  double stressed_ms = 0.0;
  double unstressed_ms = 0.0;
  double ratio = 0.0;
};
VowelDurationRatio vowel_duration_ratio(
    const std::vector<PhonemeAlignment> &alignments, double frame_shift_ms);

}  // namespace accentsim

#endif  // ACCENTSIM_EVAL_H_
