// include/accentsim/tokenizer.h

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

#ifndef ACCENTSIM_TOKENIZER_H_
#define ACCENTSIM_TOKENIZER_H_

#include <cstdint>
#include <vector>

#include "accentsim/types.h"

namespace accentsim {

// Trained k-means quantizer: the speech-to-unit codebook.
struct Codebook {
  uint32_t k = 0;
  uint32_t dim = 0;
  double training_inertia = 0.0;
  std::vector<double> centroids;  // k * dim, row-major

  const double *centroid(uint32_t c) const {
    return centroids.data() + static_cast<size_t>(c) * dim;
  }
};

struct KMeansConfig {
  uint32_t k = 0;
  uint32_t max_iterations = 100;
  double rel_tolerance = 1e-6;
  uint64_t seed = 0;
  enum class Init { kMeansPlusPlus, kRandom } init = Init::kMeansPlusPlus;
  // independent seedings; the lowest-inertia run wins
  uint32_t restarts = 10;
};

// Optional diagnostics for the winning restart; inertia_per_iteration[i]
// is the total inertia measured at assignment step i (non-increasing).
struct KMeansTrace {
  std::vector<double> inertia_per_iteration;
  uint32_t iterations = 0;
};

// Full-batch Lloyd with k-means++ seeding. Deterministic given cfg.seed.
// Empty clusters are re-seeded to the frame farthest from their previous
// centroid. Throws InsufficientDataError when total frames < k and
// ValidationError on dimension mismatch.
Codebook train_codebook(const std::vector<FeatureMatrix> &corpus,
                        const KMeansConfig &cfg, KMeansTrace *trace = nullptr);

// Per-frame nearest-centroid id under squared Euclidean distance; ties go
// to the lowest centroid index.
UnitSequence encode_frames(const FeatureMatrix &m, const Codebook &cb);

// Sum over all frames of squared distance to the nearest centroid.
double inertia(const std::vector<FeatureMatrix> &corpus, const Codebook &cb);

void validate(const Codebook &cb);

}  // namespace accentsim

#endif  // ACCENTSIM_TOKENIZER_H_
