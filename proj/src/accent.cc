// src/accent.cc

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

#include "accentsim/accent.h"

#include <filesystem>
#include <fstream>

#include "accentsim/dataio.h"
#include "accentsim/error.h"
#include "accentsim/unitseq.h"

namespace accentsim {

namespace fs = std::filesystem;

UnitSequence modify_sequence(const UnitSequence &s, const DurationModel *model,
                             PipelineMode mode) {
  validate(s);
  switch (mode) {
    case PipelineMode::kBaseline:
      return s;
    case PipelineMode::kDedupOnly:
      return deduplicate(s);
    case PipelineMode::kDurMod: {
      if (model == nullptr)
        throw ValidationError("modify_sequence: dur_mod mode needs a model");
      // ids are validated against the model's K inside the forward pass
      const UnitSequence dedup = deduplicate(s);
      const std::vector<uint32_t> durations =
          predict_durations(*model, dedup.units);
      RunLengthSequence rle;
      rle.codebook_size = dedup.codebook_size;
      rle.runs.reserve(dedup.units.size());
      for (size_t i = 0; i < dedup.units.size(); ++i) {
        rle.runs.push_back(Run{dedup.units[i], durations[i]});
      }
      return run_length_decode(rle);
    }
  }
  throw Error("modify_sequence: unreachable");
}

UnitSequence simulate_accent(const FeatureMatrix &features, const Codebook &cb,
                             const DurationModel *model, PipelineMode mode) {
  const UnitSequence encoded = encode_frames(features, cb);
  return modify_sequence(encoded, model, mode);
}

namespace {

// Shared batch driver: `encode` maps an input path to the frame-wise
// sequence the pipeline starts from.
template <typename EncodeFn>
std::vector<BatchFileReport> run_batch(const std::vector<std::string> &paths,
                                       const DurationModel *model,
                                       PipelineMode mode,
                                       const std::string &out_dir,
                                       EncodeFn encode) {
  if (mode == PipelineMode::kDurMod && model == nullptr)
    throw ValidationError("batch_simulate: dur_mod mode needs a model");
  std::error_code ec;
  fs::create_directories(out_dir, ec);
  if (ec && !fs::is_directory(out_dir))
    throw IoError("batch_simulate: cannot create output directory '" +
                  out_dir + "'");

  std::vector<BatchFileReport> reports;
  reports.reserve(paths.size());
  for (const std::string &path : paths) {
    BatchFileReport rep;
    rep.input_path = path;
    try {
      const UnitSequence input = encode(path);
      const UnitSequence output = modify_sequence(input, model, mode);
      const RunLengthSequence rle = run_length_encode(output);

      std::string name = fs::path(path).stem().string() + ".units";
      const fs::path out_path = fs::path(out_dir) / name;
      if (fs::exists(out_path))
        throw IoError("output name collision: '" + name + "'");
      store_unit_sequence_file(output, out_path.string());

      rep.output_path = out_path.string();
      rep.input_frames = static_cast<uint32_t>(input.units.size());
      rep.output_frames = static_cast<uint32_t>(output.units.size());
      rep.run_count = static_cast<uint32_t>(rle.runs.size());
      rep.ok = true;
    } catch (const Error &e) {
      rep.ok = false;
      rep.error = e.what();
    }
    reports.push_back(std::move(rep));
  }
  return reports;
}

}  // namespace

std::vector<BatchFileReport> batch_simulate(
    const std::vector<std::string> &feature_paths, const Codebook &cb,
    const DurationModel *model, PipelineMode mode,
    const std::string &out_dir) {
  return run_batch(feature_paths, model, mode, out_dir,
                   [&](const std::string &path) {
                     const FeatureMatrix m = load_feature_matrix_file(path);
                     return encode_frames(m, cb);
                   });
}

std::vector<BatchFileReport> batch_simulate_units(
    const std::vector<std::string> &unit_paths, const DurationModel *model,
    PipelineMode mode, const std::string &out_dir) {
  return run_batch(unit_paths, model, mode, out_dir,
                   [](const std::string &path) {
                     return load_unit_sequence_file(path);
                   });
}

void write_batch_summary(const std::vector<BatchFileReport> &reports,
                         const std::string &out_dir) {
  const fs::path path = fs::path(out_dir) / "summary.tsv";
  std::ofstream out(path);
  if (!out) throw IoError("cannot write '" + path.string() + "'");
  out << "input\tinput_frames\toutput_frames\trun_count\tstatus\n";
  for (const BatchFileReport &r : reports) {
    if (r.ok) {
      out << r.input_path << '\t' << r.input_frames << '\t' << r.output_frames
          << '\t' << r.run_count << "\tok\n";
    } else {
      out << r.input_path << "\t0\t0\t0\terror: " << r.error << '\n';
    }
  }
  out.flush();
  if (!out) throw IoError("summary write failed");
}

}  // namespace accentsim
