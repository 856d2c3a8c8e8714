// src/eval.cc

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

#include "accentsim/eval.h"

#include <algorithm>
#include <cmath>
#include <limits>

#include "accentsim/error.h"

namespace accentsim {

namespace {

constexpr double kKlFloor = 1e-10;

double frame_distance(const float *a, const float *b, uint32_t dim,
                      DistanceKind kind) {
  switch (kind) {
    case DistanceKind::kEuclidean: {
      double acc = 0.0;
      for (uint32_t d = 0; d < dim; ++d) {
        const double diff = static_cast<double>(a[d]) - b[d];
        acc += diff * diff;
      }
      return std::sqrt(acc);
    }
    case DistanceKind::kCosine: {
      double dot = 0.0, na = 0.0, nb = 0.0;
      for (uint32_t d = 0; d < dim; ++d) {
        dot += static_cast<double>(a[d]) * b[d];
        na += static_cast<double>(a[d]) * a[d];
        nb += static_cast<double>(b[d]) * b[d];
      }
      const bool zero_a = na < 1e-24;
      const bool zero_b = nb < 1e-24;
      if (zero_a && zero_b) return 0.0;
      if (zero_a || zero_b) return 1.0;
      const double sim = dot / (std::sqrt(na) * std::sqrt(nb));
      return std::max(0.0, 1.0 - sim);
    }
    case DistanceKind::kSymmetricKl: {
      double acc = 0.0;
      for (uint32_t d = 0; d < dim; ++d) {
        const double p = std::max(static_cast<double>(a[d]), kKlFloor);
        const double q = std::max(static_cast<double>(b[d]), kKlFloor);
        acc += (p - q) * (std::log(p) - std::log(q));
      }
      return acc;
    }
  }
  return 0.0;
}

void check_kl_rows(const FeatureMatrix &m, const char *which) {
  for (uint32_t t = 0; t < m.num_frames; ++t) {
    double sum = 0.0;
    for (float v : m.frame(t)) {
      if (v < 0.0f)
        throw ValidationError(std::string("dtw_align: ") + which +
                              " has negative values; symmetric_kl needs "
                              "row-stochastic features");
      sum += static_cast<double>(v);
    }
    if (std::abs(sum - 1.0) > 1e-3)
      throw ValidationError(std::string("dtw_align: ") + which + " row " +
                            std::to_string(t) +
                            " does not sum to ~1 for symmetric_kl");
  }
}

}  // namespace

DtwResult dtw_align(const FeatureMatrix &a, const FeatureMatrix &b,
                    DistanceKind distance) {
  validate(a);
  validate(b);
  if (a.dim != b.dim)
    throw ValidationError("dtw_align: feature dimension mismatch (" +
                          std::to_string(a.dim) + " vs " +
                          std::to_string(b.dim) + ")");
  if (distance == DistanceKind::kSymmetricKl) {
    check_kl_rows(a, "first input");
    check_kl_rows(b, "second input");
  }

  const size_t t1 = a.num_frames;
  const size_t t2 = b.num_frames;
  std::vector<double> cost(t1 * t2);
  // predecessor per cell: 0 = diagonal, 1 = (i-1, j), 2 = (i, j-1), 3 = none
  std::vector<uint8_t> pred(t1 * t2, 3);

  for (size_t i = 0; i < t1; ++i) {
    const float *fa = a.data.data() + i * a.dim;
    for (size_t j = 0; j < t2; ++j) {
      const double d =
          frame_distance(fa, b.data.data() + j * b.dim, a.dim, distance);
      const size_t idx = i * t2 + j;
      if (i == 0 && j == 0) {
        cost[idx] = d;
        continue;
      }
      double best = std::numeric_limits<double>::infinity();
      uint8_t from = 3;
      // preference order on ties: diagonal, then (1,0), then (0,1)
      if (i > 0 && j > 0 && cost[idx - t2 - 1] < best) {
        best = cost[idx - t2 - 1];
        from = 0;
      }
      if (i > 0 && cost[idx - t2] < best) {
        best = cost[idx - t2];
        from = 1;
      }
      if (j > 0 && cost[idx - 1] < best) {
        best = cost[idx - 1];
        from = 2;
      }
      cost[idx] = d + best;
      pred[idx] = from;
    }
  }

  DtwResult result;
  result.cost = cost[t1 * t2 - 1];
  size_t i = t1 - 1, j = t2 - 1;
  result.path.steps.emplace_back(static_cast<uint32_t>(i),
                                 static_cast<uint32_t>(j));
  while (i != 0 || j != 0) {
    switch (pred[i * t2 + j]) {
      case 0:
        --i;
        --j;
        break;
      case 1:
        --i;
        break;
      case 2:
        --j;
        break;
      default:
        throw Error("dtw_align: corrupt predecessor table");
    }
    result.path.steps.emplace_back(static_cast<uint32_t>(i),
                                   static_cast<uint32_t>(j));
  }
  std::reverse(result.path.steps.begin(), result.path.steps.end());
  return result;
}

double pearson(std::span<const double> x, std::span<const double> y) {
  if (x.size() != y.size())
    throw ValidationError("pearson: input lengths differ");
  const size_t n = x.size();
  if (n < 2)
    throw InsufficientDataError("pearson: need at least 2 samples, got " +
                                std::to_string(n));
  double mx = 0.0, my = 0.0;
  for (size_t i = 0; i < n; ++i) {
    mx += x[i];
    my += y[i];
  }
  mx /= static_cast<double>(n);
  my /= static_cast<double>(n);
  double sxy = 0.0, sxx = 0.0, syy = 0.0;
  for (size_t i = 0; i < n; ++i) {
    const double dx = x[i] - mx;
    const double dy = y[i] - my;
    sxy += dx * dy;
    sxx += dx * dx;
    syy += dy * dy;
  }
  if (sxx == 0.0 || syy == 0.0)
    throw DegenerateInputError("pearson: zero variance input");
  // rounding can push the quotient an ulp past the mathematical range
  return std::clamp(sxy / (std::sqrt(sxx) * std::sqrt(syy)), -1.0, 1.0);
}

AlignedVoicedPairs collect_aligned_voiced_pairs(const FeatureMatrix &test_feat,
                                                const ProsodyTrack &test_pros,
                                                const FeatureMatrix &ref_feat,
                                                const ProsodyTrack &ref_pros,
                                                DistanceKind distance) {
  validate(test_pros);
  validate(ref_pros);
  if (test_pros.num_frames() != test_feat.num_frames)
    throw ValidationError(
        "prosody: test track length does not match test features");
  if (ref_pros.num_frames() != ref_feat.num_frames)
    throw ValidationError(
        "prosody: reference track length does not match reference features");

  const DtwResult dtw = dtw_align(test_feat, ref_feat, distance);
  AlignedVoicedPairs pairs;
  for (const auto &[i, j] : dtw.path.steps) {
    // both frames must be voiced
    if (test_pros.pitch_hz[i] <= 0.0 || ref_pros.pitch_hz[j] <= 0.0) continue;
    pairs.test_pitch.push_back(test_pros.pitch_hz[i]);
    pairs.ref_pitch.push_back(ref_pros.pitch_hz[j]);
    pairs.test_intensity.push_back(test_pros.intensity_db[i]);
    pairs.ref_intensity.push_back(ref_pros.intensity_db[j]);
  }
  return pairs;
}

ProsodyCorrResult prosody_correlation(
    const FeatureMatrix &test_feat, const ProsodyTrack &test_pros,
    const std::vector<std::pair<const FeatureMatrix *, const ProsodyTrack *>>
        &refs,
    DistanceKind distance) {
  if (refs.empty())
    throw ValidationError("prosody_correlation: need at least one reference");
  ProsodyCorrResult result;
  double pitch_sum = 0.0, intensity_sum = 0.0;
  for (const auto &[ref_feat, ref_pros] : refs) {
    const AlignedVoicedPairs pairs = collect_aligned_voiced_pairs(
        test_feat, test_pros, *ref_feat, *ref_pros, distance);
    try {
      const double pc = pearson(pairs.test_pitch, pairs.ref_pitch);
      const double ic = pearson(pairs.test_intensity, pairs.ref_intensity);
      pitch_sum += pc;
      intensity_sum += ic;
      ++result.refs_used;
    } catch (const InsufficientDataError &) {
      ++result.refs_skipped;
    } catch (const DegenerateInputError &) {
      ++result.refs_skipped;
    }
  }
  if (result.refs_used == 0)
    throw DegenerateInputError(
        "prosody_correlation: every reference yielded a degenerate pair set");
  result.pitch_corr = pitch_sum / result.refs_used;
  result.intensity_corr = intensity_sum / result.refs_used;
  return result;
}

double duration_correlation(const PhonemeAlignment &test,
                            const PhonemeAlignment &ref) {
  validate(test);
  validate(ref);
  std::vector<double> test_durs, ref_durs;
  std::vector<const std::string *> test_labels, ref_labels;
  for (const PhonemeSpan &s : test.spans) {
    if (is_silence_label(s.label)) continue;
    test_labels.push_back(&s.label);
    test_durs.push_back(static_cast<double>(s.duration_frames()));
  }
  for (const PhonemeSpan &s : ref.spans) {
    if (is_silence_label(s.label)) continue;
    ref_labels.push_back(&s.label);
    ref_durs.push_back(static_cast<double>(s.duration_frames()));
  }
  if (test_labels.size() != ref_labels.size())
    throw LabelMismatchError(
        "duration_correlation: phoneme counts differ after silence removal (" +
        std::to_string(test_labels.size()) + " vs " +
        std::to_string(ref_labels.size()) + ")");
  for (size_t i = 0; i < test_labels.size(); ++i) {
    if (*test_labels[i] != *ref_labels[i])
      throw LabelMismatchError("duration_correlation: label mismatch at " +
                               std::to_string(i) + " (" + *test_labels[i] +
                               " vs " + *ref_labels[i] + ")");
  }
  if (test_durs.size() < 2)
    throw InsufficientDataError(
        "duration_correlation: need at least 2 phonemes");
  return pearson(test_durs, ref_durs);
}

VowelDurationRatio vowel_duration_ratio(
    const std::vector<PhonemeAlignment> &alignments, double frame_shift_ms) {
  if (!(frame_shift_ms > 0.0))
    throw ValidationError("vowel_duration_ratio: frame shift must be positive");
  double stressed_sum = 0.0, unstressed_sum = 0.0;
  uint64_t stressed_n = 0, unstressed_n = 0;
  for (const PhonemeAlignment &a : alignments) {
    validate(a);
    for (const PhonemeSpan &s : a.spans) {
      if (!s.is_vowel || is_silence_label(s.label)) continue;
      if (s.stress == Stress::kStressed) {
        stressed_sum += s.duration_frames();
        ++stressed_n;
      } else if (s.stress == Stress::kUnstressed) {
        unstressed_sum += s.duration_frames();
        ++unstressed_n;
      }
    }
  }
  if (stressed_n == 0 || unstressed_n == 0)
    throw InsufficientDataError(
        "vowel_duration_ratio: need at least one stressed and one unstressed "
        "vowel span");
  VowelDurationRatio r;
  r.stressed_ms = stressed_sum / stressed_n * frame_shift_ms;
  r.unstressed_ms = unstressed_sum / unstressed_n * frame_shift_ms;
  r.ratio = r.stressed_ms / r.unstressed_ms;
  return r;
}

}  // namespace accentsim
