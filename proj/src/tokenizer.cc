// src/tokenizer.cc

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

#include "accentsim/tokenizer.h"

#include <cmath>
#include <limits>

#include "accentsim/error.h"
#include "accentsim/rng.h"

namespace accentsim {

namespace {

double sq_dist(const double *a, const double *b, uint32_t dim) {
  double acc = 0.0;
  for (uint32_t d = 0; d < dim; ++d) {
    const double diff = a[d] - b[d];
    acc += diff * diff;
  }
  return acc;
}

// Gather all frames of the corpus into one contiguous double buffer and
// check that dimensions agree.
std::vector<double> collect_frames(const std::vector<FeatureMatrix> &corpus,
                                   uint32_t *dim_out, size_t *n_out) {
  uint32_t dim = 0;
  size_t n = 0;
  for (const FeatureMatrix &m : corpus) {
    validate(m);
    if (dim == 0) dim = m.dim;
    if (m.dim != dim)
      throw ValidationError("k-means: feature dimension mismatch across corpus");
    n += m.num_frames;
  }
  std::vector<double> frames;
  frames.reserve(n * dim);
  for (const FeatureMatrix &m : corpus) {
    for (float v : m.data) frames.push_back(static_cast<double>(v));
  }
  *dim_out = dim;
  *n_out = n;
  return frames;
}

// Index of the nearest centroid; ties broken toward the lowest index.
uint32_t nearest_centroid(const double *frame, const std::vector<double> &cents,
                          uint32_t k, uint32_t dim, double *dist_out) {
  uint32_t best = 0;
  double best_d = std::numeric_limits<double>::infinity();
  for (uint32_t c = 0; c < k; ++c) {
    const double d = sq_dist(frame, cents.data() + static_cast<size_t>(c) * dim, dim);
    if (d < best_d) {
      best_d = d;
      best = c;
    }
  }
  if (dist_out) *dist_out = best_d;
  return best;
}

// Greedy k-means++: first center uniform; each later center is chosen from
// 2 + log2(k) candidates sampled proportionally to squared distance from
// the nearest chosen center, keeping the candidate that minimizes the
// resulting potential. Plain D^2 sampling occasionally double-seeds a
// cluster at larger k; the greedy variant avoids that.
std::vector<double> seed_kmeanspp(const std::vector<double> &frames, size_t n,
                                  uint32_t dim, uint32_t k, Rng &rng) {
  std::vector<double> cents;
  cents.reserve(static_cast<size_t>(k) * dim);
  std::vector<double> d2(n, 0.0);

  const size_t first = static_cast<size_t>(rng.uniform_u64(n));
  cents.insert(cents.end(), frames.begin() + first * dim,
               frames.begin() + (first + 1) * dim);
  double total = 0.0;
  for (size_t i = 0; i < n; ++i) {
    d2[i] = sq_dist(frames.data() + i * dim, cents.data(), dim);
    total += d2[i];
  }

  uint32_t trials = 2;
  for (uint32_t t = k; t > 1; t >>= 1) ++trials;

  std::vector<double> cand_d2(n);
  std::vector<double> best_d2(n);
  for (uint32_t c = 1; c < k; ++c) {
    size_t best_pick = 0;
    double best_total = std::numeric_limits<double>::infinity();
    for (uint32_t trial = 0; trial < trials; ++trial) {
      size_t pick;
      if (total > 0.0) {
        const double target = rng.uniform_real() * total;
        double acc = 0.0;
        pick = n - 1;
        for (size_t i = 0; i < n; ++i) {
          acc += d2[i];
          if (acc >= target) {
            pick = i;
            break;
          }
        }
      } else {
        // all remaining mass at distance zero: duplicate frames; any
        // frame keeps the potential at zero
        pick = static_cast<size_t>(rng.uniform_u64(n));
      }
      const double *cand = frames.data() + pick * dim;
      double cand_total = 0.0;
      for (size_t i = 0; i < n; ++i) {
        const double d = sq_dist(frames.data() + i * dim, cand, dim);
        cand_d2[i] = d < d2[i] ? d : d2[i];
        cand_total += cand_d2[i];
      }
      if (cand_total < best_total) {
        best_total = cand_total;
        best_pick = pick;
        best_d2.swap(cand_d2);
      }
    }
    cents.insert(cents.end(), frames.begin() + best_pick * dim,
                 frames.begin() + (best_pick + 1) * dim);
    d2.swap(best_d2);
    total = best_total;
  }
  return cents;
}

std::vector<double> seed_random(const std::vector<double> &frames, size_t n,
                                uint32_t dim, uint32_t k, Rng &rng) {
  // sample k distinct frame indices
  std::vector<size_t> idx(n);
  for (size_t i = 0; i < n; ++i) idx[i] = i;
  for (uint32_t c = 0; c < k; ++c) {
    const size_t j = c + static_cast<size_t>(rng.uniform_u64(n - c));
    std::swap(idx[c], idx[j]);
  }
  std::vector<double> cents;
  cents.reserve(static_cast<size_t>(k) * dim);
  for (uint32_t c = 0; c < k; ++c) {
    cents.insert(cents.end(), frames.begin() + idx[c] * dim,
                 frames.begin() + (idx[c] + 1) * dim);
  }
  return cents;
}

}  // namespace

Codebook train_codebook(const std::vector<FeatureMatrix> &corpus,
                        const KMeansConfig &cfg, KMeansTrace *trace) {
  if (cfg.k == 0) throw ValidationError("k-means: k must be >= 1");
  if (cfg.max_iterations == 0)
    throw ValidationError("k-means: max_iterations must be >= 1");
  if (cfg.rel_tolerance < 0.0)
    throw ValidationError("k-means: rel_tolerance must be >= 0");

  uint32_t dim = 0;
  size_t n = 0;
  const std::vector<double> frames = collect_frames(corpus, &dim, &n);
  if (n < cfg.k)
    throw InsufficientDataError("k-means: " + std::to_string(n) +
                                " frames < k=" + std::to_string(cfg.k));

  // one seeded Lloyd run; the best of cfg.restarts runs is kept
  const auto lloyd_run = [&](uint64_t seed, KMeansTrace *run_trace) {
    Rng rng(seed);
    std::vector<double> cents =
        cfg.init == KMeansConfig::Init::kMeansPlusPlus
            ? seed_kmeanspp(frames, n, dim, cfg.k, rng)
            : seed_random(frames, n, dim, cfg.k, rng);

    std::vector<uint32_t> assign(n, 0);
    std::vector<double> sums(static_cast<size_t>(cfg.k) * dim);
    std::vector<size_t> counts(cfg.k);
    double prev_inertia = std::numeric_limits<double>::infinity();
    uint32_t iter = 0;

    for (; iter < cfg.max_iterations; ++iter) {
      // assignment step
      double cur_inertia = 0.0;
      for (size_t i = 0; i < n; ++i) {
        double d = 0.0;
        assign[i] =
            nearest_centroid(frames.data() + i * dim, cents, cfg.k, dim, &d);
        cur_inertia += d;
      }
      if (run_trace) run_trace->inertia_per_iteration.push_back(cur_inertia);

      if (std::isfinite(prev_inertia)) {
        const double improvement =
            prev_inertia > 0.0 ? (prev_inertia - cur_inertia) / prev_inertia
                               : 0.0;
        if (improvement < cfg.rel_tolerance) {
          ++iter;
          break;
        }
      }
      prev_inertia = cur_inertia;

      // update step
      std::fill(sums.begin(), sums.end(), 0.0);
      std::fill(counts.begin(), counts.end(), 0);
      for (size_t i = 0; i < n; ++i) {
        double *s = sums.data() + static_cast<size_t>(assign[i]) * dim;
        const double *f = frames.data() + i * dim;
        for (uint32_t d = 0; d < dim; ++d) s[d] += f[d];
        ++counts[assign[i]];
      }
      std::vector<size_t> repaired;  // frames already used as repair targets
      for (uint32_t c = 0; c < cfg.k; ++c) {
        double *cent = cents.data() + static_cast<size_t>(c) * dim;
        if (counts[c] > 0) {
          const double inv = 1.0 / static_cast<double>(counts[c]);
          const double *s = sums.data() + static_cast<size_t>(c) * dim;
          for (uint32_t d = 0; d < dim; ++d) cent[d] = s[d] * inv;
        } else {
          // empty cluster: re-seed to the frame farthest from the previous
          // centroid, skipping frames claimed by earlier repairs this round
          size_t far_i = 0;
          double far_d = -1.0;
          for (size_t i = 0; i < n; ++i) {
            bool used = false;
            for (size_t r : repaired) {
              if (r == i) {
                used = true;
                break;
              }
            }
            if (used) continue;
            const double d = sq_dist(frames.data() + i * dim, cent, dim);
            if (d > far_d) {
              far_d = d;
              far_i = i;
            }
          }
          repaired.push_back(far_i);
          const double *f = frames.data() + far_i * dim;
          for (uint32_t d = 0; d < dim; ++d) cent[d] = f[d];
        }
      }
    }
    if (run_trace) run_trace->iterations = iter;

    // measure inertia against the centroids actually returned (the loop
    // may have ended on an update step)
    double final_inertia = 0.0;
    for (size_t i = 0; i < n; ++i) {
      double d = 0.0;
      nearest_centroid(frames.data() + i * dim, cents, cfg.k, dim, &d);
      final_inertia += d;
    }
    return std::pair<std::vector<double>, double>(std::move(cents),
                                                  final_inertia);
  };

  std::vector<double> best_cents;
  double best_inertia = std::numeric_limits<double>::infinity();
  KMeansTrace best_trace;
  const uint32_t restarts = cfg.restarts == 0 ? 1 : cfg.restarts;
  for (uint32_t r = 0; r < restarts; ++r) {
    KMeansTrace run_trace;
    auto [cents, run_inertia] =
        lloyd_run(mix64(cfg.seed) ^ mix64(r), trace ? &run_trace : nullptr);
    if (run_inertia < best_inertia) {
      best_inertia = run_inertia;
      best_cents = std::move(cents);
      best_trace = std::move(run_trace);
    }
  }
  if (trace) *trace = std::move(best_trace);

  Codebook cb;
  cb.k = cfg.k;
  cb.dim = dim;
  cb.centroids = std::move(best_cents);
  cb.training_inertia = best_inertia;
  return cb;
}

UnitSequence encode_frames(const FeatureMatrix &m, const Codebook &cb) {
  validate(m);
  if (m.dim != cb.dim)
    throw ValidationError("encode_frames: feature dim " +
                          std::to_string(m.dim) + " != codebook dim " +
                          std::to_string(cb.dim));
  UnitSequence out;
  out.codebook_size = cb.k;
  out.units.resize(m.num_frames);
  std::vector<double> frame(m.dim);
  for (uint32_t t = 0; t < m.num_frames; ++t) {
    const float *src = m.data.data() + static_cast<size_t>(t) * m.dim;
    for (uint32_t d = 0; d < m.dim; ++d) frame[d] = static_cast<double>(src[d]);
    out.units[t] = nearest_centroid(frame.data(), cb.centroids, cb.k, cb.dim,
                                    nullptr);
  }
  return out;
}

double inertia(const std::vector<FeatureMatrix> &corpus, const Codebook &cb) {
  double total = 0.0;
  std::vector<double> frame(cb.dim);
  for (const FeatureMatrix &m : corpus) {
    validate(m);
    if (m.dim != cb.dim)
      throw ValidationError("inertia: feature dim mismatch with codebook");
    for (uint32_t t = 0; t < m.num_frames; ++t) {
      const float *src = m.data.data() + static_cast<size_t>(t) * m.dim;
      for (uint32_t d = 0; d < m.dim; ++d)
        frame[d] = static_cast<double>(src[d]);
      double d = 0.0;
      nearest_centroid(frame.data(), cb.centroids, cb.k, cb.dim, &d);
      total += d;
    }
  }
  return total;
}

void validate(const Codebook &cb) {
  if (cb.k == 0 || cb.dim == 0)
    throw ValidationError("codebook: k and dim must be >= 1");
  if (cb.centroids.size() != static_cast<size_t>(cb.k) * cb.dim)
    throw ValidationError("codebook: centroid buffer size mismatch");
  if (cb.training_inertia < 0.0 || !std::isfinite(cb.training_inertia))
    throw ValidationError("codebook: training inertia must be finite and >= 0");
  for (double v : cb.centroids) {
    if (!std::isfinite(v))
      throw ValidationError("codebook: non-finite centroid value");
  }
  for (uint32_t a = 0; a < cb.k; ++a) {
    for (uint32_t b = a + 1; b < cb.k; ++b) {
      if (sq_dist(cb.centroid(a), cb.centroid(b), cb.dim) == 0.0)
        throw ValidationError("codebook: centroids " + std::to_string(a) +
                              " and " + std::to_string(b) + " are identical");
    }
  }
}

}  // namespace accentsim
