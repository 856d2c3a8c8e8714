// include/accentsim/unitseq.h

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

#ifndef ACCENTSIM_UNITSEQ_H_
#define ACCENTSIM_UNITSEQ_H_

#include <vector>

#include "accentsim/types.h"

namespace accentsim {

// Pooled run-duration statistics of a unit corpus. Unit duration is the
// number of consecutive repetitions of the same unit; runs never merge
// across utterance boundaries.
struct DurationStats {
  double mean = 0.0;  // frames, >= 1
  double sd = 0.0;    // population standard deviation (divisor N)
  uint64_t count = 0;  // number of runs pooled
};

// Maximal-run factorization: (2,2,1,2,3,3) -> [(2,2),(1,1),(2,1),(3,2)].
RunLengthSequence run_length_encode(const UnitSequence &s);

// Inverse of run_length_encode. Throws ValidationError on zero durations
// or adjacent equal unit ids.
UnitSequence run_length_decode(const RunLengthSequence &r);

// Collapse consecutive repetitions, discarding durations.
UnitSequence deduplicate(const UnitSequence &s);

DurationStats duration_stats(const std::vector<UnitSequence> &corpus);

}  // namespace accentsim

#endif  // ACCENTSIM_UNITSEQ_H_
