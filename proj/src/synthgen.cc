// src/synthgen.cc

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

#include "accentsim/synthgen.h"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <limits>

#include "accentsim/dataio.h"
#include "accentsim/error.h"
#include "accentsim/rng.h"

namespace accentsim {

namespace {

// RNG stream indices under cfg.seed.
constexpr uint64_t kCodebookStream = 0;
constexpr uint64_t kTableStream = 1;
constexpr uint64_t kUtteranceStreamBase = 2;

double normal_cdf(double x) {
  return 0.5 * (1.0 + std::erf(x / std::sqrt(2.0)));
}

// pmf of max(1, round(N(mu, sigma))), truncated at vmax with the tail mass
// folded into the last bin.
std::vector<double> rounded_clipped_gaussian_pmf(double mu, double sigma,
                                                 uint32_t vmax) {
  std::vector<double> p(vmax + 1, 0.0);
  if (sigma <= 0.0) {
    const int64_t v = std::max<int64_t>(1, std::llround(mu));
    p[std::min<uint64_t>(static_cast<uint64_t>(v), vmax)] = 1.0;
    return p;
  }
  p[1] = normal_cdf((1.5 - mu) / sigma);
  for (uint32_t v = 2; v < vmax; ++v) {
    p[v] = normal_cdf((v + 0.5 - mu) / sigma) -
           normal_cdf((v - 0.5 - mu) / sigma);
  }
  p[vmax] = std::max(0.0, 1.0 - normal_cdf((vmax - 0.5 - mu) / sigma));
  return p;
}

void pmf_moments(const std::vector<double> &p, double *mean, double *sd) {
  double m = 0.0, m2 = 0.0;
  for (size_t v = 0; v < p.size(); ++v) {
    m += static_cast<double>(v) * p[v];
    m2 += static_cast<double>(v) * v * p[v];
  }
  *mean = m;
  const double var = m2 - m * m;
  *sd = std::sqrt(var > 0.0 ? var : 0.0);
}

uint32_t pmf_vmax(const RhythmProfile &profile) {
  const double hi = profile.duration_mean + 8.0 * profile.duration_sd + 2.0;
  return static_cast<uint32_t>(std::clamp(hi, 4.0, 64.0));
}

void validate_profile(const RhythmProfile &profile) {
  if (!(profile.duration_mean >= 1.0))
    throw ValidationError("rhythm profile: duration_mean must be >= 1");
  if (profile.duration_sd < 0.0)
    throw ValidationError("rhythm profile: duration_sd must be >= 0");
}

}  // namespace

RhythmProfile mora_profile() { return {"mora", 1.26, 0.58}; }

RhythmProfile stress_profile() { return {"stress", 1.45, 0.97}; }

std::vector<double> duration_pmf(const RhythmProfile &profile) {
  validate_profile(profile);
  const uint32_t vmax = pmf_vmax(profile);
  if (profile.duration_sd == 0.0) {
    return rounded_clipped_gaussian_pmf(profile.duration_mean, 0.0, vmax);
  }
  // solve for the underlying Gaussian parameters whose rounded/clipped
  // moments reach the targets; rounding inflates the mean near 1 and
  // shrinks the sd, so a fixed-point on both parameters is used
  double mu = profile.duration_mean;
  double sigma = profile.duration_sd;
  for (int it = 0; it < 400; ++it) {
    const std::vector<double> p = rounded_clipped_gaussian_pmf(mu, sigma, vmax);
    double m = 0.0, s = 0.0;
    pmf_moments(p, &m, &s);
    const double dm = profile.duration_mean - m;
    double ratio = 1.0;
    if (s > 1e-12) ratio = std::clamp(profile.duration_sd / s, 0.5, 1.5);
    mu += dm;
    sigma *= ratio;
    if (std::abs(dm) < 1e-12 && std::abs(ratio - 1.0) < 1e-12) break;
  }
  return rounded_clipped_gaussian_pmf(mu, sigma, vmax);
}

std::vector<uint32_t> unit_duration_table(const RhythmProfile &profile,
                                          uint32_t k, uint64_t seed) {
  if (k == 0) throw ValidationError("unit_duration_table: k must be >= 1");
  const std::vector<double> pmf = duration_pmf(profile);
  const size_t vmax = pmf.size() - 1;

  // largest-remainder quota of the k slots over duration values
  std::vector<uint32_t> counts(pmf.size(), 0);
  std::vector<std::pair<double, size_t>> remainders;
  uint32_t assigned = 0;
  for (size_t v = 1; v <= vmax; ++v) {
    const double exact = pmf[v] * k;
    counts[v] = static_cast<uint32_t>(exact);
    assigned += counts[v];
    remainders.emplace_back(-(exact - counts[v]), v);
  }
  std::sort(remainders.begin(), remainders.end());
  for (size_t i = 0; assigned < k && i < remainders.size(); ++i) {
    ++counts[remainders[i].second];
    ++assigned;
  }

  // greedy single-slot moves to pull the uniform-usage pooled moments onto
  // the profile targets (quota alone can be off by several percent at
  // small k)
  const double tm = profile.duration_mean;
  const double ts = profile.duration_sd;
  auto rel_err = [&](const std::vector<uint32_t> &c) {
    double m = 0.0, m2 = 0.0;
    for (size_t v = 1; v <= vmax; ++v) {
      m += static_cast<double>(v) * c[v];
      m2 += static_cast<double>(v) * v * c[v];
    }
    m /= k;
    m2 /= k;
    const double s = std::sqrt(std::max(0.0, m2 - m * m));
    const double em = (m - tm) / tm;
    const double es = ts > 0.0 ? (s - ts) / ts : s;
    return em * em + es * es;
  };
  bool improved = true;
  while (improved) {
    improved = false;
    double best = rel_err(counts);
    size_t best_from = 0, best_to = 0;
    for (size_t a = 1; a <= vmax; ++a) {
      if (counts[a] == 0) continue;
      for (size_t b = 1; b <= vmax; ++b) {
        if (a == b) continue;
        --counts[a];
        ++counts[b];
        const double e = rel_err(counts);
        if (e < best - 1e-15) {
          best = e;
          best_from = a;
          best_to = b;
        }
        ++counts[a];
        --counts[b];
      }
    }
    if (best_from != best_to) {
      --counts[best_from];
      ++counts[best_to];
      improved = true;
    }
  }

  std::vector<uint32_t> table;
  table.reserve(k);
  for (size_t v = 1; v <= vmax; ++v) {
    table.insert(table.end(), counts[v], static_cast<uint32_t>(v));
  }
  Rng rng = Rng::derive(seed, kTableStream);
  rng.shuffle(table);
  return table;
}

Codebook gen_codebook(const SynthConfig &cfg) {
  if (cfg.k == 0 || cfg.dim == 0)
    throw ValidationError("gen_codebook: k and dim must be >= 1");
  if (!(cfg.centroid_scale > 0.0))
    throw ValidationError("gen_codebook: centroid_scale must be positive");
  Rng rng = Rng::derive(cfg.seed, kCodebookStream);
  Codebook cb;
  cb.k = cfg.k;
  cb.dim = cfg.dim;
  cb.centroids.resize(static_cast<size_t>(cfg.k) * cfg.dim);
  for (double &v : cb.centroids) v = rng.gaussian();

  if (cfg.k > 1) {
    double min_d2 = std::numeric_limits<double>::infinity();
    for (uint32_t a = 0; a < cfg.k; ++a) {
      for (uint32_t b = a + 1; b < cfg.k; ++b) {
        double d2 = 0.0;
        const double *pa = cb.centroid(a);
        const double *pb = cb.centroid(b);
        for (uint32_t d = 0; d < cfg.dim; ++d) {
          const double diff = pa[d] - pb[d];
          d2 += diff * diff;
        }
        min_d2 = std::min(min_d2, d2);
      }
    }
    const double min_d = std::sqrt(min_d2);
    if (min_d > 0.0) {
      const double scale = cfg.centroid_scale / min_d;
      for (double &v : cb.centroids) v *= scale;
    }
  }
  return cb;
}

GeneratedUtterance gen_utterance(const Codebook &cb,
                                 const RhythmProfile &profile,
                                 const SynthConfig &cfg,
                                 uint32_t utterance_index) {
  validate_profile(profile);
  if (cb.k != cfg.k || cb.dim != cfg.dim)
    throw ValidationError("gen_utterance: codebook does not match config");
  if (cfg.min_utterance_frames == 0 ||
      cfg.max_utterance_frames < cfg.min_utterance_frames)
    throw ValidationError("gen_utterance: bad utterance length range");

  const std::vector<uint32_t> table =
      unit_duration_table(profile, cfg.k, cfg.seed);
  Rng rng = Rng::derive(cfg.seed, kUtteranceStreamBase + utterance_index);

  const uint32_t span =
      cfg.max_utterance_frames - cfg.min_utterance_frames + 1;
  // soft target; generation stops at the first run boundary past it, so a
  // run is only ever clipped by the hard maximum
  const uint32_t target_len =
      cfg.min_utterance_frames + static_cast<uint32_t>(rng.uniform_u64(span));

  GeneratedUtterance out;
  out.units.codebook_size = cfg.k;
  out.units.units.reserve(target_len);
  uint32_t prev = cfg.k;  // sentinel: no previous unit
  while (out.units.units.size() < target_len) {
    uint32_t unit;
    if (cfg.k == 1) {
      unit = 0;
    } else if (prev == cfg.k) {
      unit = static_cast<uint32_t>(rng.uniform_u64(cfg.k));
    } else {
      unit = static_cast<uint32_t>(rng.uniform_u64(cfg.k - 1));
      if (unit >= prev) ++unit;
    }
    uint32_t duration = table[unit];
    const uint32_t room =
        cfg.max_utterance_frames -
        static_cast<uint32_t>(out.units.units.size());
    if (duration > room) duration = room;
    out.units.units.insert(out.units.units.end(), duration, unit);
    prev = unit;
  }

  const uint32_t total_len = static_cast<uint32_t>(out.units.units.size());
  out.features.num_frames = total_len;
  out.features.dim = cfg.dim;
  out.features.frame_shift_ms = 20.0f;
  out.features.data.resize(static_cast<size_t>(total_len) * cfg.dim);
  for (uint32_t t = 0; t < total_len; ++t) {
    const double *cent = cb.centroid(out.units.units[t]);
    float *dst = out.features.data.data() + static_cast<size_t>(t) * cfg.dim;
    for (uint32_t d = 0; d < cfg.dim; ++d) {
      double v = cent[d];
      if (cfg.noise_sd > 0.0) v += cfg.noise_sd * rng.gaussian();
      dst[d] = static_cast<float>(v);
    }
  }
  return out;
}

GenCorpusResult gen_corpus(const Codebook &cb, const RhythmProfile &profile,
                           const SynthConfig &cfg,
                           const std::string &out_dir) {
  namespace fs = std::filesystem;
  std::error_code ec;
  fs::create_directories(out_dir, ec);
  if (ec && !fs::is_directory(out_dir))
    throw IoError("gen_corpus: cannot create output directory '" + out_dir +
                  "'");

  GenCorpusResult result;
  if (cfg.noise_sd >= cfg.centroid_scale / 2.0) {
    result.warnings.push_back(
        "noise_sd >= centroid_scale/2: generated frames may not be "
        "recoverable by nearest-centroid encoding");
  }

  uint32_t written = 0;
  try {
    for (uint32_t i = 0; i < cfg.num_utterances; ++i) {
      const GeneratedUtterance utt = gen_utterance(cb, profile, cfg, i);
      char feat_name[32], unit_name[32];
      std::snprintf(feat_name, sizeof(feat_name), "utt_%05u.fmat", i);
      std::snprintf(unit_name, sizeof(unit_name), "utt_%05u.units", i);
      store_feature_matrix_file(utt.features,
                                (fs::path(out_dir) / feat_name).string());
      store_unit_sequence_file(utt.units,
                               (fs::path(out_dir) / unit_name).string());
      result.entries.push_back({feat_name, unit_name});
      ++written;
    }
  } catch (const IoError &e) {
    throw IoError("gen_corpus: aborted after writing " +
                  std::to_string(written) + " of " +
                  std::to_string(cfg.num_utterances) + " utterances: " +
                  e.what());
  }

  std::ofstream manifest(fs::path(out_dir) / "manifest.tsv");
  if (!manifest) throw IoError("gen_corpus: cannot write manifest.tsv");
  for (const CorpusManifestEntry &e : result.entries) {
    manifest << e.feature_path << '\t' << e.unit_path << '\n';
  }
  manifest.flush();
  if (!manifest) throw IoError("gen_corpus: manifest write failed");
  return result;
}

}  // namespace accentsim
