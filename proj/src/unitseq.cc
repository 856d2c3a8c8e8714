// src/unitseq.cc

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

#include "accentsim/unitseq.h"

#include <cmath>

#include "accentsim/error.h"

namespace accentsim {

RunLengthSequence run_length_encode(const UnitSequence &s) {
  validate(s);
  RunLengthSequence out;
  out.codebook_size = s.codebook_size;
  for (uint32_t id : s.units) {
    if (!out.runs.empty() && out.runs.back().unit == id) {
      ++out.runs.back().duration;
    } else {
      out.runs.push_back(Run{id, 1});
    }
  }
  return out;
}

UnitSequence run_length_decode(const RunLengthSequence &r) {
  validate(r);
  UnitSequence out;
  out.codebook_size = r.codebook_size;
  size_t total = 0;
  for (const Run &run : r.runs) total += run.duration;
  out.units.reserve(total);
  for (const Run &run : r.runs) {
    out.units.insert(out.units.end(), run.duration, run.unit);
  }
  return out;
}

UnitSequence deduplicate(const UnitSequence &s) {
  validate(s);
  UnitSequence out;
  out.codebook_size = s.codebook_size;
  for (uint32_t id : s.units) {
    if (out.units.empty() || out.units.back() != id) out.units.push_back(id);
  }
  return out;
}

DurationStats duration_stats(const std::vector<UnitSequence> &corpus) {
  if (corpus.empty())
    throw ValidationError("duration_stats: corpus must not be empty");
  double sum = 0.0;
  double sum_sq = 0.0;
  uint64_t count = 0;
  for (const UnitSequence &s : corpus) {
    const RunLengthSequence rle = run_length_encode(s);
    for (const Run &run : rle.runs) {
      const double d = static_cast<double>(run.duration);
      sum += d;
      sum_sq += d * d;
      ++count;
    }
  }
  DurationStats stats;
  stats.count = count;
  stats.mean = sum / static_cast<double>(count);
  const double var =
      sum_sq / static_cast<double>(count) - stats.mean * stats.mean;
  stats.sd = std::sqrt(var > 0.0 ? var : 0.0);
  return stats;
}

}  // namespace accentsim
