// src/dataio.cc

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

#include "accentsim/dataio.h"

#include <bit>
#include <charconv>
#include <cmath>
#include <cstring>
#include <fstream>
#include <istream>
#include <ostream>
#include <sstream>

#include "accentsim/error.h"

namespace accentsim {

namespace {

constexpr uint32_t kFmatVersion = 1;
constexpr uint32_t kKmcbVersion = 1;
constexpr uint32_t kDprdVersion = 1;

// Guard against absurd sizes from corrupt headers before allocating.
constexpr uint64_t kMaxElements = 1ull << 31;

void write_bytes(std::ostream &sink, const void *data, size_t n) {
  sink.write(static_cast<const char *>(data), static_cast<std::streamsize>(n));
  if (!sink) throw IoError("write failed");
}

void write_u32(std::ostream &sink, uint32_t v) {
  char b[4] = {static_cast<char>(v & 0xff), static_cast<char>((v >> 8) & 0xff),
               static_cast<char>((v >> 16) & 0xff),
               static_cast<char>((v >> 24) & 0xff)};
  write_bytes(sink, b, 4);
}

void write_u64(std::ostream &sink, uint64_t v) {
  char b[8];
  for (int i = 0; i < 8; ++i) b[i] = static_cast<char>((v >> (8 * i)) & 0xff);
  write_bytes(sink, b, 8);
}

void write_f32(std::ostream &sink, float v) {
  write_u32(sink, std::bit_cast<uint32_t>(v));
}

void write_f64(std::ostream &sink, double v) {
  write_u64(sink, std::bit_cast<uint64_t>(v));
}

void read_exact(std::istream &source, void *out, size_t n, const char *what) {
  source.read(static_cast<char *>(out), static_cast<std::streamsize>(n));
  if (static_cast<size_t>(source.gcount()) != n) {
    if (source.bad()) throw IoError(std::string("read failed in ") + what);
    throw TruncationError(std::string("stream ended while reading ") + what);
  }
}

uint32_t read_u32(std::istream &source, const char *what) {
  unsigned char b[4];
  read_exact(source, b, 4, what);
  return static_cast<uint32_t>(b[0]) | (static_cast<uint32_t>(b[1]) << 8) |
         (static_cast<uint32_t>(b[2]) << 16) |
         (static_cast<uint32_t>(b[3]) << 24);
}

uint64_t read_u64(std::istream &source, const char *what) {
  unsigned char b[8];
  read_exact(source, b, 8, what);
  uint64_t v = 0;
  for (int i = 0; i < 8; ++i) v |= static_cast<uint64_t>(b[i]) << (8 * i);
  return v;
}

float read_f32(std::istream &source, const char *what) {
  return std::bit_cast<float>(read_u32(source, what));
}

double read_f64(std::istream &source, const char *what) {
  return std::bit_cast<double>(read_u64(source, what));
}

void write_magic(std::ostream &sink, const char magic[4]) {
  write_bytes(sink, magic, 4);
}

void expect_magic(std::istream &source, const char magic[4],
                  const char *kind) {
  char got[4];
  read_exact(source, got, 4, "magic tag");
  if (std::memcmp(got, magic, 4) != 0)
    throw FormatError(std::string("bad magic for ") + kind + ": expected '" +
                      std::string(magic, 4) + "', got '" +
                      std::string(got, 4) + "'");
}

void expect_version(std::istream &source, uint32_t expected,
                    const char *kind) {
  const uint32_t v = read_u32(source, "version");
  if (v != expected)
    throw FormatError(std::string(kind) + ": unsupported version " +
                      std::to_string(v) + " (expected " +
                      std::to_string(expected) + ")");
}

// Bulk little-endian payload I/O; on little-endian hosts this is a single
// raw read/write.
template <typename T>
void write_array_le(std::ostream &sink, const std::vector<T> &v) {
  static_assert(sizeof(T) == 4 || sizeof(T) == 8);
  if constexpr (std::endian::native == std::endian::little) {
    if (!v.empty()) write_bytes(sink, v.data(), v.size() * sizeof(T));
  } else {
    for (T x : v) {
      if constexpr (sizeof(T) == 4)
        write_u32(sink, std::bit_cast<uint32_t>(x));
      else
        write_u64(sink, std::bit_cast<uint64_t>(x));
    }
  }
}

template <typename T>
void read_array_le(std::istream &source, std::vector<T> &out, size_t count,
                   const char *what) {
  static_assert(sizeof(T) == 4 || sizeof(T) == 8);
  out.clear();
  out.reserve(count);
  // chunked so that a corrupt header cannot trigger a giant allocation
  constexpr size_t kChunk = 1 << 18;
  std::vector<T> buf;
  size_t remaining = count;
  while (remaining > 0) {
    const size_t n = remaining < kChunk ? remaining : kChunk;
    buf.resize(n);
    if constexpr (std::endian::native == std::endian::little) {
      read_exact(source, buf.data(), n * sizeof(T), what);
    } else {
      for (size_t i = 0; i < n; ++i) {
        if constexpr (sizeof(T) == 4)
          buf[i] = std::bit_cast<T>(read_u32(source, what));
        else
          buf[i] = std::bit_cast<T>(read_u64(source, what));
      }
    }
    out.insert(out.end(), buf.begin(), buf.end());
    remaining -= n;
  }
}

uint64_t parse_u64_token(const std::string &tok, const char *what) {
  uint64_t value = 0;
  const auto [ptr, ec] =
      std::from_chars(tok.data(), tok.data() + tok.size(), value);
  if (ec != std::errc() || ptr != tok.data() + tok.size())
    throw ParseError(std::string(what) + ": not a non-negative integer: '" +
                     tok + "'");
  return value;
}

double parse_double_token(const std::string &tok, const char *what) {
  try {
    size_t pos = 0;
    const double v = std::stod(tok, &pos);
    if (pos != tok.size()) throw std::invalid_argument(tok);
    return v;
  } catch (const std::exception &) {
    throw ParseError(std::string(what) + ": not a number: '" + tok + "'");
  }
}

std::vector<std::string> split_tabs(const std::string &line) {
  std::vector<std::string> cols;
  size_t start = 0;
  while (true) {
    const size_t pos = line.find('\t', start);
    if (pos == std::string::npos) {
      cols.push_back(line.substr(start));
      break;
    }
    cols.push_back(line.substr(start, pos - start));
    start = pos + 1;
  }
  return cols;
}

std::string strip_cr(std::string line) {
  if (!line.empty() && line.back() == '\r') line.pop_back();
  return line;
}

template <typename T, typename Loader>
T load_from_file(const std::string &path, Loader loader, bool binary) {
  std::ifstream in(path, binary ? std::ios::binary : std::ios::in);
  if (!in) throw IoError("cannot open '" + path + "' for reading");
  return loader(in);
}

template <typename Storer>
void store_to_file(const std::string &path, Storer storer, bool binary) {
  std::ofstream out(path,
                    binary ? std::ios::binary | std::ios::trunc : std::ios::trunc);
  if (!out) throw IoError("cannot open '" + path + "' for writing");
  storer(out);
  out.flush();
  if (!out) throw IoError("write failed for '" + path + "'");
}

}  // namespace

size_t store_feature_matrix(const FeatureMatrix &m, std::ostream &sink) {
  validate(m);
  write_magic(sink, "FMAT");
  write_u32(sink, kFmatVersion);
  write_u32(sink, m.num_frames);
  write_u32(sink, m.dim);
  write_f32(sink, m.frame_shift_ms);
  write_array_le(sink, m.data);
  if (!sink) throw IoError("store_feature_matrix: sink failed");
  return 20 + m.data.size() * 4;
}

FeatureMatrix load_feature_matrix(std::istream &source) {
  expect_magic(source, "FMAT", "feature matrix");
  expect_version(source, kFmatVersion, "feature matrix");
  FeatureMatrix m;
  m.num_frames = read_u32(source, "frame count");
  m.dim = read_u32(source, "dimension");
  m.frame_shift_ms = read_f32(source, "frame shift");
  if (m.num_frames == 0 || m.dim == 0)
    throw ValidationError("feature matrix: zero frames or dimension");
  const uint64_t count =
      static_cast<uint64_t>(m.num_frames) * m.dim;
  if (count > kMaxElements)
    throw ValidationError("feature matrix: implausible size in header");
  read_array_le(source, m.data, count, "frame payload");
  validate(m);
  return m;
}

size_t store_codebook(const Codebook &cb, std::ostream &sink) {
  validate(cb);
  write_magic(sink, "KMCB");
  write_u32(sink, kKmcbVersion);
  write_u32(sink, cb.k);
  write_u32(sink, cb.dim);
  write_f64(sink, cb.training_inertia);
  write_array_le(sink, cb.centroids);
  if (!sink) throw IoError("store_codebook: sink failed");
  return 24 + cb.centroids.size() * 8;
}

Codebook load_codebook(std::istream &source) {
  expect_magic(source, "KMCB", "codebook");
  expect_version(source, kKmcbVersion, "codebook");
  Codebook cb;
  cb.k = read_u32(source, "cluster count");
  cb.dim = read_u32(source, "dimension");
  cb.training_inertia = read_f64(source, "training inertia");
  if (cb.k == 0 || cb.dim == 0)
    throw ValidationError("codebook: zero clusters or dimension");
  const uint64_t count = static_cast<uint64_t>(cb.k) * cb.dim;
  if (count > kMaxElements)
    throw ValidationError("codebook: implausible size in header");
  read_array_le(source, cb.centroids, count, "centroid payload");
  validate(cb);
  return cb;
}

size_t store_duration_model(const DurationModel &model, std::ostream &sink) {
  validate(model);
  const DurationModelConfig &c = model.config;
  write_magic(sink, "DPRD");
  write_u32(sink, kDprdVersion);
  write_u32(sink, c.codebook_size);
  write_u32(sink, c.embed_dim);
  write_u32(sink, c.filter_size);
  write_u32(sink, c.kernel_size);
  write_f64(sink, c.dropout_rate);
  write_f64(sink, c.learning_rate);
  write_f64(sink, c.adam_beta1);
  write_f64(sink, c.adam_beta2);
  write_f64(sink, c.adam_eps);
  write_u32(sink, c.epochs);
  write_u32(sink, c.batch_utterances);
  write_u64(sink, c.seed);
  write_u32(sink, c.max_duration);
  write_array_le(sink, model.params);
  if (!sink) throw IoError("store_duration_model: sink failed");
  return 4 + 4 + 4 * 4 + 8 * 5 + 4 * 2 + 8 + 4 + model.params.size() * 8;
}

DurationModel load_duration_model(std::istream &source) {
  expect_magic(source, "DPRD", "duration model");
  expect_version(source, kDprdVersion, "duration model");
  DurationModel model;
  DurationModelConfig &c = model.config;
  c.codebook_size = read_u32(source, "codebook size");
  c.embed_dim = read_u32(source, "embedding dim");
  c.filter_size = read_u32(source, "filter size");
  c.kernel_size = read_u32(source, "kernel size");
  c.dropout_rate = read_f64(source, "dropout rate");
  c.learning_rate = read_f64(source, "learning rate");
  c.adam_beta1 = read_f64(source, "adam beta1");
  c.adam_beta2 = read_f64(source, "adam beta2");
  c.adam_eps = read_f64(source, "adam eps");
  c.epochs = read_u32(source, "epochs");
  c.batch_utterances = read_u32(source, "batch size");
  c.seed = read_u64(source, "seed");
  c.max_duration = read_u32(source, "max duration");
  validate(c);
  const ParamLayout lay = ParamLayout::from_config(c);
  if (lay.total > kMaxElements)
    throw ValidationError("duration model: implausible size in header");
  read_array_le(source, model.params, lay.total, "parameter payload");
  validate(model);
  return model;
}

void store_unit_sequence(const UnitSequence &s, std::ostream &sink) {
  validate(s);
  sink << "K " << s.codebook_size << '\n';
  for (size_t i = 0; i < s.units.size(); ++i) {
    if (i > 0) sink << ' ';
    sink << s.units[i];
  }
  sink << '\n';
  if (!sink) throw IoError("store_unit_sequence: sink failed");
}

UnitSequence load_unit_sequence(std::istream &source) {
  std::string tag;
  if (!(source >> tag)) throw ParseError("unit sequence: empty input");
  if (tag != "K")
    throw ParseError("unit sequence: expected 'K <codebook_size>' header, got '" +
                     tag + "'");
  std::string ktok;
  if (!(source >> ktok))
    throw ParseError("unit sequence: missing codebook size in header");
  const uint64_t k = parse_u64_token(ktok, "unit sequence header");
  if (k == 0 || k > UINT32_MAX)
    throw ValidationError("unit sequence: codebook size out of range");

  UnitSequence s;
  s.codebook_size = static_cast<uint32_t>(k);
  std::string tok;
  while (source >> tok) {
    const uint64_t id = parse_u64_token(tok, "unit sequence");
    if (id >= k)
      throw ValidationError("unit sequence: id " + std::to_string(id) +
                            " out of range for K=" + std::to_string(k));
    s.units.push_back(static_cast<uint32_t>(id));
  }
  if (source.bad()) throw IoError("unit sequence: read failed");
  validate(s);
  return s;
}

PhonemeAlignment load_alignment(std::istream &source) {
  PhonemeAlignment a;
  std::string raw;
  size_t lineno = 0;
  while (std::getline(source, raw)) {
    ++lineno;
    const std::string line = strip_cr(raw);
    if (line.empty()) continue;
    const std::vector<std::string> cols = split_tabs(line);
    if (cols.size() != 6)
      throw ParseError("alignment line " + std::to_string(lineno) +
                       ": expected 6 tab-separated columns, got " +
                       std::to_string(cols.size()));
    PhonemeSpan span;
    span.label = cols[0];
    const uint64_t start = parse_u64_token(cols[1], "alignment start");
    const uint64_t end = parse_u64_token(cols[2], "alignment end");
    if (end > UINT32_MAX || start > UINT32_MAX)
      throw ValidationError("alignment line " + std::to_string(lineno) +
                            ": frame index out of range");
    span.start_frame = static_cast<uint32_t>(start);
    span.end_frame = static_cast<uint32_t>(end);
    if (cols[3] == "S")
      span.stress = Stress::kStressed;
    else if (cols[3] == "U")
      span.stress = Stress::kUnstressed;
    else if (cols[3] == "-")
      span.stress = Stress::kNone;
    else
      throw ParseError("alignment line " + std::to_string(lineno) +
                       ": stress must be S, U or -, got '" + cols[3] + "'");
    if (cols[4] != "0" && cols[4] != "1")
      throw ParseError("alignment line " + std::to_string(lineno) +
                       ": vowel flag must be 0 or 1");
    if (cols[5] != "0" && cols[5] != "1")
      throw ParseError("alignment line " + std::to_string(lineno) +
                       ": voiced flag must be 0 or 1");
    span.is_vowel = cols[4] == "1";
    span.is_voiced = cols[5] == "1";
    a.spans.push_back(std::move(span));
  }
  if (source.bad()) throw IoError("alignment: read failed");
  validate(a);
  return a;
}

ProsodyTrack load_prosody(std::istream &source) {
  ProsodyTrack p;
  std::string raw;
  size_t lineno = 0;
  while (std::getline(source, raw)) {
    ++lineno;
    const std::string line = strip_cr(raw);
    if (line.empty()) continue;
    const std::vector<std::string> cols = split_tabs(line);
    if (cols.size() != 2)
      throw ParseError("prosody line " + std::to_string(lineno) +
                       ": expected 2 tab-separated columns, got " +
                       std::to_string(cols.size()));
    p.pitch_hz.push_back(parse_double_token(cols[0], "prosody pitch"));
    p.intensity_db.push_back(parse_double_token(cols[1], "prosody intensity"));
  }
  if (source.bad()) throw IoError("prosody: read failed");
  validate(p);
  return p;
}

std::vector<std::vector<std::string>> load_manifest(std::istream &source) {
  std::vector<std::vector<std::string>> rows;
  std::string raw;
  while (std::getline(source, raw)) {
    const std::string line = strip_cr(raw);
    if (line.empty()) continue;
    rows.push_back(split_tabs(line));
  }
  if (source.bad()) throw IoError("manifest: read failed");
  return rows;
}

FeatureMatrix load_feature_matrix_file(const std::string &path) {
  return load_from_file<FeatureMatrix>(
      path, [](std::istream &in) { return load_feature_matrix(in); }, true);
}

void store_feature_matrix_file(const FeatureMatrix &m,
                               const std::string &path) {
  store_to_file(path, [&](std::ostream &out) { store_feature_matrix(m, out); },
                true);
}

Codebook load_codebook_file(const std::string &path) {
  return load_from_file<Codebook>(
      path, [](std::istream &in) { return load_codebook(in); }, true);
}

void store_codebook_file(const Codebook &cb, const std::string &path) {
  store_to_file(path, [&](std::ostream &out) { store_codebook(cb, out); },
                true);
}

DurationModel load_duration_model_file(const std::string &path) {
  return load_from_file<DurationModel>(
      path, [](std::istream &in) { return load_duration_model(in); }, true);
}

void store_duration_model_file(const DurationModel &model,
                               const std::string &path) {
  store_to_file(path,
                [&](std::ostream &out) { store_duration_model(model, out); },
                true);
}

UnitSequence load_unit_sequence_file(const std::string &path) {
  return load_from_file<UnitSequence>(
      path, [](std::istream &in) { return load_unit_sequence(in); }, false);
}

void store_unit_sequence_file(const UnitSequence &s, const std::string &path) {
  store_to_file(path, [&](std::ostream &out) { store_unit_sequence(s, out); },
                false);
}

PhonemeAlignment load_alignment_file(const std::string &path) {
  return load_from_file<PhonemeAlignment>(
      path, [](std::istream &in) { return load_alignment(in); }, false);
}

ProsodyTrack load_prosody_file(const std::string &path) {
  return load_from_file<ProsodyTrack>(
      path, [](std::istream &in) { return load_prosody(in); }, false);
}

std::vector<std::vector<std::string>> load_manifest_file(
    const std::string &path) {
  return load_from_file<std::vector<std::vector<std::string>>>(
      path, [](std::istream &in) { return load_manifest(in); }, false);
}

}  // namespace accentsim
