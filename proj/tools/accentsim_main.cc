// tools/accentsim_main.cc

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

//
// accentsim: duration-accent simulation over discrete speech units.
//
//   gen-corpus    synthesize a labeled unit/feature corpus
//   train-kmeans  train the unit codebook (speech-to-unit quantizer)
//   encode        quantize feature files into unit sequences
//   train-durpred train the unit duration predictor
//   simulate      apply baseline / dedup / dur-mod to a corpus
//   stats         pooled unit-duration statistics
//   evaluate      DTW-aligned prosody correlations and vowel ratios
//
// Exit codes: 0 success, 2 usage or config error, 3 partial data failure,
// 4 internal error.
//

#include <CLI11.hpp>
#include <cinttypes>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include "accentsim/accent.h"
#include "accentsim/dataio.h"
#include "accentsim/durmodel.h"
#include "accentsim/error.h"
#include "accentsim/eval.h"
#include "accentsim/synthgen.h"
#include "accentsim/tokenizer.h"
#include "accentsim/unitseq.h"

namespace fs = std::filesystem;
using namespace accentsim;

namespace {

constexpr int kExitOk = 0;
constexpr int kExitUsage = 2;
constexpr int kExitPartial = 3;
constexpr int kExitInternal = 4;

std::string fmt_double(double v) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

// Paths inside a manifest are relative to the manifest's directory.
std::string resolve_path(const std::string &manifest_path,
                         const std::string &entry) {
  const fs::path p(entry);
  if (p.is_absolute()) return entry;
  return (fs::path(manifest_path).parent_path() / p).string();
}

// Column `col` of every manifest row, resolved. Rows with too few columns
// fall back to the first column so single-column manifests work for both
// feature and unit listings.
std::vector<std::string> manifest_column(const std::string &manifest_path,
                                         size_t col) {
  const auto rows = load_manifest_file(manifest_path);
  std::vector<std::string> out;
  out.reserve(rows.size());
  for (const auto &row : rows) {
    const std::string &cell = col < row.size() ? row[col] : row[0];
    out.push_back(resolve_path(manifest_path, cell));
  }
  return out;
}

// Parse with the documented exit taxonomy: help exits 0, any parse or
// config problem exits 2.
#define ACCENTSIM_PARSE(app, argc, argv)                        \
  try {                                                         \
    (app).parse((argc), (argv));                                \
  } catch (const CLI::ParseError &e) {                          \
    (app).exit(e);                                              \
    return e.get_exit_code() == 0 ? kExitOk : kExitUsage;       \
  }

void attach_config(CLI::App &app) {
  app.set_config("--config", "", "key=value config file; flags override it");
  app.allow_config_extras(false);
}

// ---------------------------------------------------------------- commands

int cmd_train_kmeans(int argc, char **argv) {
  CLI::App app{"train the k-means unit codebook"};
  attach_config(app);
  std::string features, out;
  KMeansConfig cfg;
  app.add_option("--features", features, "manifest of FMAT files")->required();
  app.add_option("--k", cfg.k, "number of clusters")->required();
  app.add_option("--seed", cfg.seed, "random seed")->default_val(0);
  app.add_option("--max-iter", cfg.max_iterations, "Lloyd iteration cap")
      ->default_val(100);
  app.add_option("--tol", cfg.rel_tolerance,
                 "relative inertia improvement threshold")
      ->default_val(1e-6);
  app.add_option("--restarts", cfg.restarts,
                 "independent seedings, best inertia kept")
      ->default_val(10);
  app.add_option("--out", out, "output codebook (KMCB)")->required();
  ACCENTSIM_PARSE(app, argc, argv);

  std::vector<FeatureMatrix> corpus;
  for (const std::string &path : manifest_column(features, 0)) {
    corpus.push_back(load_feature_matrix_file(path));
  }
  if (corpus.empty()) throw InsufficientDataError("empty feature manifest");

  KMeansTrace trace;
  const Codebook cb = train_codebook(corpus, cfg, &trace);
  store_codebook_file(cb, out);
  std::printf("inertia\titerations\n%s\t%u\n",
              fmt_double(cb.training_inertia).c_str(), trace.iterations);
  return kExitOk;
}

int cmd_encode(int argc, char **argv) {
  CLI::App app{"encode feature files into unit sequences"};
  attach_config(app);
  std::string features, codebook, out_dir;
  app.add_option("--features", features, "manifest of FMAT files")->required();
  app.add_option("--codebook", codebook, "trained codebook (KMCB)")->required();
  app.add_option("--out-dir", out_dir, "output directory")->required();
  ACCENTSIM_PARSE(app, argc, argv);

  const Codebook cb = load_codebook_file(codebook);
  std::error_code ec;
  fs::create_directories(out_dir, ec);

  std::printf("input\tframes\toutput\tstatus\n");
  bool any_failed = false;
  for (const std::string &path : manifest_column(features, 0)) {
    try {
      const FeatureMatrix m = load_feature_matrix_file(path);
      const UnitSequence units = encode_frames(m, cb);
      const std::string out_path =
          (fs::path(out_dir) / (fs::path(path).stem().string() + ".units"))
              .string();
      store_unit_sequence_file(units, out_path);
      std::printf("%s\t%u\t%s\tok\n", path.c_str(), m.num_frames,
                  out_path.c_str());
    } catch (const Error &e) {
      any_failed = true;
      std::printf("%s\t0\t\terror: %s\n", path.c_str(), e.what());
      std::fprintf(stderr, "encode: %s: %s\n", path.c_str(), e.what());
    }
  }
  return any_failed ? kExitPartial : kExitOk;
}

int cmd_train_durpred(int argc, char **argv) {
  CLI::App app{"train the unit duration predictor"};
  attach_config(app);
  std::string units, out, loss_out;
  DurationModelConfig cfg;
  app.add_option("--units", units, "manifest of unit files")->required();
  app.add_option("--out", out, "output model (DPRD)")->required();
  app.add_option("--loss-out", loss_out,
                 "per-epoch loss TSV (default: <out>.loss.tsv)");
  app.add_option("--embed-dim", cfg.embed_dim)->default_val(128);
  app.add_option("--filter-size", cfg.filter_size)->default_val(256);
  app.add_option("--kernel-size", cfg.kernel_size)->default_val(3);
  app.add_option("--dropout", cfg.dropout_rate)->default_val(0.5);
  app.add_option("--learning-rate", cfg.learning_rate)->default_val(1e-3);
  app.add_option("--beta1", cfg.adam_beta1)->default_val(0.9);
  app.add_option("--beta2", cfg.adam_beta2)->default_val(0.999);
  app.add_option("--adam-eps", cfg.adam_eps)->default_val(1e-8);
  app.add_option("--epochs", cfg.epochs, "training epochs")->default_val(10);
  app.add_option("--batch", cfg.batch_utterances)->default_val(16);
  app.add_option("--seed", cfg.seed)->default_val(0);
  app.add_option("--max-duration", cfg.max_duration)->default_val(100);
  ACCENTSIM_PARSE(app, argc, argv);
  if (loss_out.empty()) loss_out = out + ".loss.tsv";

  std::vector<UnitSequence> corpus;
  for (const std::string &path : manifest_column(units, 1)) {
    corpus.push_back(load_unit_sequence_file(path));
  }
  if (corpus.empty())
    throw InsufficientDataError("empty unit manifest; nothing to train on");
  cfg.codebook_size = corpus.front().codebook_size;
  for (const UnitSequence &s : corpus) {
    if (s.codebook_size != cfg.codebook_size)
      throw ValidationError("unit files disagree on codebook size");
  }

  const TrainResult result = train(build_training_set(corpus), cfg);
  store_duration_model_file(result.model, out);

  std::ofstream loss_file(loss_out, std::ios::trunc);
  if (!loss_file) throw IoError("cannot write '" + loss_out + "'");
  loss_file << "epoch\tloss\n";
  for (size_t i = 0; i < result.epoch_losses.size(); ++i) {
    loss_file << i << '\t' << fmt_double(result.epoch_losses[i]) << '\n';
  }
  loss_file.flush();
  if (!loss_file) throw IoError("loss TSV write failed");
  std::printf("final_loss\tepochs\n%s\t%zu\n",
              fmt_double(result.epoch_losses.back()).c_str(),
              result.epoch_losses.size());
  return kExitOk;
}

int cmd_simulate(int argc, char **argv) {
  CLI::App app{"apply accent-duration modification to a corpus"};
  attach_config(app);
  std::string features, units, codebook, model_path, mode_str, out_dir;
  app.add_option("--features", features, "manifest of FMAT files");
  app.add_option("--units", units, "manifest of unit files");
  app.add_option("--codebook", codebook, "codebook (needed with --features)");
  app.add_option("--model", model_path, "duration model (needed for dur-mod)");
  app.add_option("--mode", mode_str, "baseline | dedup | dur-mod")->required();
  app.add_option("--out-dir", out_dir, "output directory")->required();
  ACCENTSIM_PARSE(app, argc, argv);

  PipelineMode mode;
  if (mode_str == "baseline") {
    mode = PipelineMode::kBaseline;
  } else if (mode_str == "dedup") {
    mode = PipelineMode::kDedupOnly;
  } else if (mode_str == "dur-mod") {
    mode = PipelineMode::kDurMod;
  } else {
    std::fprintf(stderr, "simulate: unknown --mode '%s'\n", mode_str.c_str());
    return kExitUsage;
  }
  if (features.empty() == units.empty()) {
    std::fprintf(stderr, "simulate: give exactly one of --features/--units\n");
    return kExitUsage;
  }
  if (!features.empty() && codebook.empty()) {
    std::fprintf(stderr, "simulate: --features needs --codebook\n");
    return kExitUsage;
  }
  if (mode == PipelineMode::kDurMod && model_path.empty()) {
    std::fprintf(stderr, "simulate: --mode dur-mod needs --model\n");
    return kExitUsage;
  }

  std::optional<DurationModel> model;
  if (!model_path.empty()) model = load_duration_model_file(model_path);
  const DurationModel *model_ptr = model ? &*model : nullptr;

  std::vector<BatchFileReport> reports;
  if (!features.empty()) {
    const Codebook cb = load_codebook_file(codebook);
    reports = batch_simulate(manifest_column(features, 0), cb, model_ptr, mode,
                             out_dir);
  } else {
    reports = batch_simulate_units(manifest_column(units, 1), model_ptr, mode,
                                   out_dir);
  }
  write_batch_summary(reports, out_dir);
  size_t failed = 0;
  for (const BatchFileReport &r : reports) {
    if (!r.ok) {
      ++failed;
      std::fprintf(stderr, "simulate: %s: %s\n", r.input_path.c_str(),
                   r.error.c_str());
    }
  }
  std::printf("processed\tfailed\n%zu\t%zu\n", reports.size(), failed);
  return failed > 0 ? kExitPartial : kExitOk;
}

int cmd_stats(int argc, char **argv) {
  CLI::App app{"pooled unit-duration statistics"};
  attach_config(app);
  std::string units;
  app.add_option("--units", units, "manifest of unit files")->required();
  ACCENTSIM_PARSE(app, argc, argv);

  std::vector<UnitSequence> corpus;
  for (const std::string &path : manifest_column(units, 1)) {
    corpus.push_back(load_unit_sequence_file(path));
  }
  const DurationStats stats = duration_stats(corpus);
  std::printf("mean\tsd\tcount\n%s\t%s\t%" PRIu64 "\n",
              fmt_double(stats.mean).c_str(), fmt_double(stats.sd).c_str(),
              stats.count);
  return kExitOk;
}

// evaluate helpers ---------------------------------------------------------

struct RefBundle {
  std::string features;
  std::string prosody;    // may be empty
  std::string alignment;  // may be empty
};

RefBundle parse_ref_bundle(const std::string &manifest_path,
                           const std::string &cell) {
  RefBundle b;
  std::vector<std::string> parts;
  size_t start = 0;
  while (true) {
    const size_t pos = cell.find(';', start);
    if (pos == std::string::npos) {
      parts.push_back(cell.substr(start));
      break;
    }
    parts.push_back(cell.substr(start, pos - start));
    start = pos + 1;
  }
  if (parts.empty() || parts[0].empty())
    throw ParseError("evaluate: reference bundle needs a feature path: '" +
                     cell + "'");
  b.features = resolve_path(manifest_path, parts[0]);
  if (parts.size() > 1 && !parts[1].empty())
    b.prosody = resolve_path(manifest_path, parts[1]);
  if (parts.size() > 2 && !parts[2].empty())
    b.alignment = resolve_path(manifest_path, parts[2]);
  return b;
}

struct EvalCell {
  bool valid = false;
  double value = 0.0;
  std::string na_reason = "NA";

  std::string text() const { return valid ? fmt_double(value) : na_reason; }
};

int cmd_evaluate(int argc, char **argv) {
  CLI::App app{"prosody correlations and vowel-duration ratios"};
  attach_config(app);
  std::string pairs, report_path, distance_str = "cosine";
  app.add_option("--pairs", pairs,
                 "manifest: test_feat <TAB> test_prosody|- <TAB> "
                 "test_align|- <TAB> ref(feat;prosody[;align])...")
      ->required();
  app.add_option("--report", report_path, "output report TSV")->required();
  app.add_option("--distance", distance_str,
                 "cosine | euclidean | symmetric-kl");
  ACCENTSIM_PARSE(app, argc, argv);

  DistanceKind distance;
  if (distance_str == "cosine") {
    distance = DistanceKind::kCosine;
  } else if (distance_str == "euclidean") {
    distance = DistanceKind::kEuclidean;
  } else if (distance_str == "symmetric-kl") {
    distance = DistanceKind::kSymmetricKl;
  } else {
    std::fprintf(stderr, "evaluate: unknown --distance '%s'\n",
                 distance_str.c_str());
    return kExitUsage;
  }

  const auto rows = load_manifest_file(pairs);
  std::ofstream report(report_path, std::ios::trunc);
  if (!report) throw IoError("cannot write '" + report_path + "'");
  report << "utterance\tpitch_corr\tintensity_corr\tduration_corr\t"
            "prosody_refs_used\tprosody_refs_skipped\tduration_refs_used\n";

  bool any_failed = false;
  std::vector<double> mean_pitch, mean_intensity, mean_duration;
  std::vector<double> pooled_test_pitch, pooled_ref_pitch;
  std::vector<double> pooled_test_intensity, pooled_ref_intensity;
  std::vector<double> pooled_test_durs, pooled_ref_durs;
  std::vector<PhonemeAlignment> test_alignments;
  std::optional<float> shared_frame_shift;

  for (const auto &row : rows) {
    if (row.size() < 4) {
      any_failed = true;
      std::fprintf(stderr, "evaluate: manifest row needs >= 4 columns\n");
      continue;
    }
    const std::string utt = row[0];
    EvalCell pitch, intensity, duration;
    uint32_t refs_used = 0, refs_skipped = 0, dur_refs = 0;

    try {
      const FeatureMatrix test_feat =
          load_feature_matrix_file(resolve_path(pairs, row[0]));
      std::optional<ProsodyTrack> test_pros;
      if (row[1] != "-")
        test_pros = load_prosody_file(resolve_path(pairs, row[1]));
      std::optional<PhonemeAlignment> test_align;
      if (row[2] != "-")
        test_align = load_alignment_file(resolve_path(pairs, row[2]));
      if (test_align) {
        test_alignments.push_back(*test_align);
        if (shared_frame_shift &&
            *shared_frame_shift != test_feat.frame_shift_ms)
          throw ValidationError(
              "test feature files disagree on frame_shift_ms");
        shared_frame_shift = test_feat.frame_shift_ms;
      }

      double pitch_sum = 0, intensity_sum = 0, duration_sum = 0;
      bool label_mismatch_seen = false;
      uint32_t prosody_refs_attempted = 0;
      for (size_t c = 3; c < row.size(); ++c) {
        const RefBundle ref = parse_ref_bundle(pairs, row[c]);

        if (test_pros && !ref.prosody.empty()) {
          ++prosody_refs_attempted;
          const FeatureMatrix ref_feat = load_feature_matrix_file(ref.features);
          const ProsodyTrack ref_pros = load_prosody_file(ref.prosody);
          try {
            const AlignedVoicedPairs pair_set = collect_aligned_voiced_pairs(
                test_feat, *test_pros, ref_feat, ref_pros, distance);
            const double pc = pearson(pair_set.test_pitch, pair_set.ref_pitch);
            const double ic =
                pearson(pair_set.test_intensity, pair_set.ref_intensity);
            pitch_sum += pc;
            intensity_sum += ic;
            ++refs_used;
            pooled_test_pitch.insert(pooled_test_pitch.end(),
                                     pair_set.test_pitch.begin(),
                                     pair_set.test_pitch.end());
            pooled_ref_pitch.insert(pooled_ref_pitch.end(),
                                    pair_set.ref_pitch.begin(),
                                    pair_set.ref_pitch.end());
            pooled_test_intensity.insert(pooled_test_intensity.end(),
                                         pair_set.test_intensity.begin(),
                                         pair_set.test_intensity.end());
            pooled_ref_intensity.insert(pooled_ref_intensity.end(),
                                        pair_set.ref_intensity.begin(),
                                        pair_set.ref_intensity.end());
          } catch (const DegenerateInputError &) {
            ++refs_skipped;
          } catch (const InsufficientDataError &) {
            ++refs_skipped;
          }
        }

        if (test_align && !ref.alignment.empty()) {
          const PhonemeAlignment ref_align = load_alignment_file(ref.alignment);
          try {
            duration_sum += duration_correlation(*test_align, ref_align);
            ++dur_refs;
            for (const PhonemeSpan &s : test_align->spans) {
              if (!is_silence_label(s.label))
                pooled_test_durs.push_back(s.duration_frames());
            }
            for (const PhonemeSpan &s : ref_align.spans) {
              if (!is_silence_label(s.label))
                pooled_ref_durs.push_back(s.duration_frames());
            }
          } catch (const LabelMismatchError &) {
            label_mismatch_seen = true;
          } catch (const InsufficientDataError &) {
          } catch (const DegenerateInputError &) {
          }
        }
      }

      if (refs_used > 0) {
        pitch = {true, pitch_sum / refs_used, ""};
        intensity = {true, intensity_sum / refs_used, ""};
        mean_pitch.push_back(pitch.value);
        mean_intensity.push_back(intensity.value);
      } else if (prosody_refs_attempted > 0) {
        pitch.na_reason = intensity.na_reason = "NA:degenerate";
      }
      if (dur_refs > 0) {
        duration = {true, duration_sum / dur_refs, ""};
        mean_duration.push_back(duration.value);
      } else if (label_mismatch_seen) {
        duration.na_reason = "NA:label-mismatch";
      }
    } catch (const Error &e) {
      any_failed = true;
      pitch.na_reason = intensity.na_reason = duration.na_reason = "NA:error";
      std::fprintf(stderr, "evaluate: %s: %s\n", utt.c_str(), e.what());
    }

    report << utt << '\t' << pitch.text() << '\t' << intensity.text() << '\t'
           << duration.text() << '\t' << refs_used << '\t' << refs_skipped
           << '\t' << dur_refs << '\n';
  }

  const auto mean_of = [](const std::vector<double> &v) -> EvalCell {
    if (v.empty()) return {};
    double s = 0;
    for (double x : v) s += x;
    return {true, s / static_cast<double>(v.size()), ""};
  };
  const auto pooled_corr = [](const std::vector<double> &x,
                              const std::vector<double> &y) -> EvalCell {
    try {
      return {true, pearson(x, y), ""};
    } catch (const Error &) {
      return {false, 0.0, "NA:degenerate"};
    }
  };

  report << "AGGREGATE_MEAN\t" << mean_of(mean_pitch).text() << '\t'
         << mean_of(mean_intensity).text() << '\t'
         << mean_of(mean_duration).text() << "\t-\t-\t-\n";
  report << "AGGREGATE_POOLED\t"
         << pooled_corr(pooled_test_pitch, pooled_ref_pitch).text() << '\t'
         << pooled_corr(pooled_test_intensity, pooled_ref_intensity).text()
         << '\t' << pooled_corr(pooled_test_durs, pooled_ref_durs).text()
         << "\t-\t-\t-\n";
  report.flush();
  if (!report) throw IoError("report write failed");

  if (!test_alignments.empty()) {
    try {
      const VowelDurationRatio vr = vowel_duration_ratio(
          test_alignments,
          shared_frame_shift ? static_cast<double>(*shared_frame_shift) : 20.0);
      std::printf("stressed_ms\tunstressed_ms\tratio\n%s\t%s\t%s\n",
                  fmt_double(vr.stressed_ms).c_str(),
                  fmt_double(vr.unstressed_ms).c_str(),
                  fmt_double(vr.ratio).c_str());
    } catch (const InsufficientDataError &e) {
      std::fprintf(stderr, "evaluate: vowel ratio unavailable: %s\n", e.what());
    }
  }
  return any_failed ? kExitPartial : kExitOk;
}

int cmd_gen_corpus(int argc, char **argv) {
  CLI::App app{"generate a synthetic labeled corpus"};
  attach_config(app);
  std::string profile_name, out_dir, codebook_out;
  SynthConfig cfg;
  double mean = 0.0, sd = -1.0;
  app.add_option("--profile", profile_name, "mora | stress | custom")
      ->required();
  app.add_option("--k", cfg.k, "codebook size")->default_val(50);
  app.add_option("--n", cfg.num_utterances, "number of utterances")
      ->required();
  app.add_option("--seed", cfg.seed)->default_val(0);
  app.add_option("--out-dir", out_dir, "output directory")->required();
  app.add_option("--mean", mean, "custom profile mean run length (frames)");
  app.add_option("--sd", sd, "custom profile run-length sd");
  app.add_option("--codebook-out", codebook_out,
                 "also write the generating codebook (KMCB)");
  app.add_option("--dim", cfg.dim)->default_val(8);
  app.add_option("--noise-sd", cfg.noise_sd)->default_val(0.3);
  app.add_option("--centroid-scale", cfg.centroid_scale)->default_val(10.0);
  app.add_option("--min-frames", cfg.min_utterance_frames)->default_val(40);
  app.add_option("--max-frames", cfg.max_utterance_frames)->default_val(160);
  ACCENTSIM_PARSE(app, argc, argv);

  RhythmProfile profile;
  if (profile_name == "mora") {
    profile = mora_profile();
  } else if (profile_name == "stress") {
    profile = stress_profile();
  } else if (profile_name == "custom") {
    if (app.count("--mean") == 0 || app.count("--sd") == 0) {
      std::fprintf(stderr,
                   "gen-corpus: --profile custom needs --mean and --sd\n");
      return kExitUsage;
    }
    profile = RhythmProfile{"custom", mean, sd};
  } else {
    std::fprintf(stderr, "gen-corpus: unknown --profile '%s'\n",
                 profile_name.c_str());
    return kExitUsage;
  }

  const Codebook cb = gen_codebook(cfg);
  const GenCorpusResult result = gen_corpus(cb, profile, cfg, out_dir);
  if (!codebook_out.empty()) store_codebook_file(cb, codebook_out);
  for (const std::string &w : result.warnings) {
    std::fprintf(stderr, "gen-corpus: warning: %s\n", w.c_str());
  }
  std::printf("utterances\tmanifest\n%zu\t%s\n", result.entries.size(),
              (fs::path(out_dir) / "manifest.tsv").string().c_str());
  return kExitOk;
}

void print_usage() {
  std::fprintf(
      stderr,
      "usage: accentsim <command> [options]\n"
      "commands: gen-corpus train-kmeans encode train-durpred simulate\n"
      "          stats evaluate\n"
      "run 'accentsim <command> --help' for command options\n");
}

}  // namespace

int main(int argc, char **argv) {
  if (argc < 2) {
    print_usage();
    return kExitUsage;
  }
  const std::string cmd = argv[1];
  try {
    if (cmd == "train-kmeans") return cmd_train_kmeans(argc - 1, argv + 1);
    if (cmd == "encode") return cmd_encode(argc - 1, argv + 1);
    if (cmd == "train-durpred") return cmd_train_durpred(argc - 1, argv + 1);
    if (cmd == "simulate") return cmd_simulate(argc - 1, argv + 1);
    if (cmd == "stats") return cmd_stats(argc - 1, argv + 1);
    if (cmd == "evaluate") return cmd_evaluate(argc - 1, argv + 1);
    if (cmd == "gen-corpus") return cmd_gen_corpus(argc - 1, argv + 1);
    if (cmd == "--help" || cmd == "-h" || cmd == "help") {
      print_usage();
      return kExitOk;
    }
    std::fprintf(stderr, "accentsim: unknown command '%s'\n", cmd.c_str());
    print_usage();
    return kExitUsage;
  } catch (const Error &e) {
    std::fprintf(stderr, "accentsim %s: %s\n", cmd.c_str(), e.what());
    return kExitUsage;
  } catch (const std::exception &e) {
    std::fprintf(stderr, "accentsim %s: internal error: %s\n", cmd.c_str(),
                 e.what());
    return kExitInternal;
  }
}
