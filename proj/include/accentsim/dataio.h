// include/accentsim/dataio.h

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
// Persistent artifact formats. All binary layouts are little-endian with
// fixed-width fields and are read/written strictly sequentially.
//
//   FMAT v1 (feature matrix):
//     "FMAT" | u32 version | u32 T | u32 D | f32 frame_shift_ms
//     | T*D f32 row-major frames
//   KMCB v1 (codebook):
//     "KMCB" | u32 version | u32 K | u32 D | f64 training_inertia
//     | K*D f64 row-major centroids
//   DPRD v1 (duration model):
//     "DPRD" | u32 version
//     | u32 K | u32 E | u32 F | u32 kernel | f64 dropout | f64 lr
//     | f64 beta1 | f64 beta2 | f64 adam_eps | u32 epochs | u32 batch
//     | u64 seed | u32 max_duration
//     | f64 parameters in ParamLayout order (embedding, conv1 w/b,
//       ln1 gain/bias, conv2 w/b, ln2 gain/bias, proj w/b)
//
// Text artifacts:
//   unit sequence:  "K <codebook_size>" header line, then whitespace-
//                   separated unit ids (one utterance per file)
//   alignment TSV:  label <TAB> start <TAB> end <TAB> S|U|- <TAB> 0|1
//                   <TAB> 0|1   (stress, vowel, voiced)
//   prosody TSV:    pitch_hz <TAB> intensity_db, one row per frame
//   manifest:       one entry per line, TAB-separated path columns
//

#ifndef ACCENTSIM_DATAIO_H_
#define ACCENTSIM_DATAIO_H_

#include <iosfwd>
#include <string>
#include <vector>

#include "accentsim/durmodel.h"
#include "accentsim/tokenizer.h"
#include "accentsim/types.h"

namespace accentsim {

// Binary artifacts. Stores return the number of bytes written; for every
// kind load(store(x)) == x bit-exactly.
size_t store_feature_matrix(const FeatureMatrix &m, std::ostream &sink);
FeatureMatrix load_feature_matrix(std::istream &source);

size_t store_codebook(const Codebook &cb, std::ostream &sink);
Codebook load_codebook(std::istream &source);

size_t store_duration_model(const DurationModel &model, std::ostream &sink);
DurationModel load_duration_model(std::istream &source);

// Text artifacts.
void store_unit_sequence(const UnitSequence &s, std::ostream &sink);
UnitSequence load_unit_sequence(std::istream &source);

PhonemeAlignment load_alignment(std::istream &source);
ProsodyTrack load_prosody(std::istream &source);

// One entry per line, columns split on TAB; blank lines skipped.
std::vector<std::vector<std::string>> load_manifest(std::istream &source);

// File wrappers; throw IoError when the file cannot be opened.
FeatureMatrix load_feature_matrix_file(const std::string &path);
void store_feature_matrix_file(const FeatureMatrix &m, const std::string &path);
Codebook load_codebook_file(const std::string &path);
void store_codebook_file(const Codebook &cb, const std::string &path);
DurationModel load_duration_model_file(const std::string &path);
void store_duration_model_file(const DurationModel &model,
                               const std::string &path);
UnitSequence load_unit_sequence_file(const std::string &path);
void store_unit_sequence_file(const UnitSequence &s, const std::string &path);
PhonemeAlignment load_alignment_file(const std::string &path);
ProsodyTrack load_prosody_file(const std::string &path);
std::vector<std::vector<std::string>> load_manifest_file(
    const std::string &path);

}  // namespace accentsim

#endif  // ACCENTSIM_DATAIO_H_
