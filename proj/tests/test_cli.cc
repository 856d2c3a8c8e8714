// tests/test_cli.cc

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

#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>
#include <sys/wait.h>

#include <cstdlib>
#include <fstream>
#include <sstream>

#include "accentsim/dataio.h"
#include "test_util.h"

#ifndef ACCENTSIM_CLI_PATH
#error "ACCENTSIM_CLI_PATH must be defined by the build"
#endif

using namespace accentsim;

namespace {

struct RunResult {
  int exit_code = -1;
  std::string out;
  std::string err;
};

std::string slurp(const std::string &path) {
  std::ifstream in(path, std::ios::binary);
  return std::string(std::istreambuf_iterator<char>(in), {});
}

RunResult run_cli(const std::string &args, const testutil::TempDir &scratch) {
  const std::string out_path = scratch.file("stdout.txt");
  const std::string err_path = scratch.file("stderr.txt");
  const std::string cmd = std::string(ACCENTSIM_CLI_PATH) + " " + args +
                          " > " + out_path + " 2> " + err_path;
  const int status = std::system(cmd.c_str());
  RunResult r;
  r.exit_code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
  r.out = slurp(out_path);
  r.err = slurp(err_path);
  return r;
}

void write_file(const std::string &path, const std::string &content) {
  std::ofstream out(path, std::ios::trunc);
  out << content;
}

size_t count_files_with_extension(const std::filesystem::path &dir,
                                  const std::string &ext) {
  size_t n = 0;
  for (const auto &entry : std::filesystem::directory_iterator(dir)) {
    if (entry.path().extension() == ext) ++n;
  }
  return n;
}

}  // namespace

TEST_CASE("unknown command and bare invocation exit 2") {
  testutil::TempDir dir("cli_usage");
  CHECK(run_cli("frobnicate", dir).exit_code == 2);
  CHECK(run_cli("", dir).exit_code == 2);
  CHECK(run_cli("help", dir).exit_code == 0);
}

TEST_CASE("gen-corpus writes n feature/unit pairs and a manifest") {
  testutil::TempDir dir("cli_gen");
  const RunResult r = run_cli(
      "gen-corpus --profile mora --k 10 --n 10 --seed 4 --out-dir " +
          dir.file("corpus") + " --dim 3 --min-frames 20 --max-frames 50",
      dir);
  REQUIRE(r.exit_code == 0);
  CHECK(count_files_with_extension(dir.file("corpus"), ".fmat") == 10);
  CHECK(count_files_with_extension(dir.file("corpus"), ".units") == 10);
  const auto manifest = load_manifest_file(dir.file("corpus") +
                                           "/manifest.tsv");
  CHECK(manifest.size() == 10);
}

TEST_CASE("gen-corpus custom profile requires mean and sd") {
  testutil::TempDir dir("cli_gen_custom");
  CHECK(run_cli("gen-corpus --profile custom --n 5 --out-dir " +
                    dir.file("x"),
                dir).exit_code == 2);
  CHECK(run_cli("gen-corpus --profile custom --n 5 --mean 2.0 --sd 0.5 "
                "--out-dir " +
                    dir.file("y"),
                dir).exit_code == 0);
}

TEST_CASE("full chain with determinism and recoverability") {
  testutil::TempDir dir("cli_chain");
  const std::string corpus = dir.file("corpus");
  REQUIRE(run_cli("gen-corpus --profile mora --k 8 --n 12 --seed 21 "
                  "--noise-sd 0 --dim 3 --min-frames 20 --max-frames 60 "
                  "--out-dir " +
                      corpus,
                  dir).exit_code == 0);

  SUBCASE("train-kmeans is reproducible and reports inertia TSV") {
    const RunResult a = run_cli("train-kmeans --features " + corpus +
                                    "/manifest.tsv --k 8 --seed 9 --out " +
                                    dir.file("a.kmcb"),
                                dir);
    REQUIRE(a.exit_code == 0);
    CHECK(a.out.substr(0, 19) == "inertia\titerations\n");
    const RunResult b = run_cli("train-kmeans --features " + corpus +
                                    "/manifest.tsv --k 8 --seed 9 --out " +
                                    dir.file("b.kmcb"),
                                dir);
    REQUIRE(b.exit_code == 0);
    CHECK(slurp(dir.file("a.kmcb")) == slurp(dir.file("b.kmcb")));
    CHECK(a.out == b.out);
  }

  SUBCASE("k larger than the corpus frame count exits 2") {
    const RunResult r = run_cli("train-kmeans --features " + corpus +
                                    "/manifest.tsv --k 100000 --seed 1 "
                                    "--out " +
                                    dir.file("x.kmcb"),
                                dir);
    CHECK(r.exit_code == 2);
    CHECK(r.err.find("frames < k") != std::string::npos);
  }

  SUBCASE("zero-noise encode with the generating codebook recovers the "
          "ground-truth unit files byte for byte") {
    const std::string corpus2 = dir.file("corpus2");
    REQUIRE(run_cli("gen-corpus --profile mora --k 8 --n 6 --seed 33 "
                    "--noise-sd 0 --dim 3 --min-frames 20 --max-frames 50 "
                    "--codebook-out " +
                        dir.file("true.kmcb") + " --out-dir " + corpus2,
                    dir).exit_code == 0);
    REQUIRE(run_cli("encode --features " + corpus2 +
                        "/manifest.tsv --codebook " + dir.file("true.kmcb") +
                        " --out-dir " + dir.file("encoded2"),
                    dir).exit_code == 0);
    const auto manifest = load_manifest_file(corpus2 + "/manifest.tsv");
    REQUIRE(manifest.size() == 6);
    for (const auto &row : manifest) {
      const std::string stem =
          std::filesystem::path(row[0]).stem().string();
      CHECK(slurp(corpus2 + "/" + row[1]) ==
            slurp(dir.file("encoded2") + "/" + stem + ".units"));
    }
  }

  SUBCASE("encode with a trained codebook preserves sequence lengths") {
    REQUIRE(run_cli("train-kmeans --features " + corpus +
                        "/manifest.tsv --k 8 --seed 9 --out " +
                        dir.file("cb.kmcb"),
                    dir).exit_code == 0);
    REQUIRE(run_cli("encode --features " + corpus +
                        "/manifest.tsv --codebook " + dir.file("cb.kmcb") +
                        " --out-dir " + dir.file("encoded"),
                    dir).exit_code == 0);
    const auto manifest = load_manifest_file(corpus + "/manifest.tsv");
    for (const auto &row : manifest) {
      const UnitSequence truth =
          load_unit_sequence_file(corpus + "/" + row[1]);
      const std::string stem =
          std::filesystem::path(row[0]).stem().string();
      const UnitSequence encoded = load_unit_sequence_file(
          dir.file("encoded") + "/" + stem + ".units");
      REQUIRE(encoded.units.size() == truth.units.size());
    }
  }
}

TEST_CASE("encode partial failure exits 3 and reports the bad file") {
  testutil::TempDir dir("cli_encode_fail");
  const std::string corpus = dir.file("corpus");
  REQUIRE(run_cli("gen-corpus --profile mora --k 6 --n 3 --seed 2 --dim 2 "
                  "--min-frames 10 --max-frames 20 --out-dir " +
                      corpus,
                  dir).exit_code == 0);
  REQUIRE(run_cli("train-kmeans --features " + corpus +
                      "/manifest.tsv --k 6 --seed 2 --out " +
                      dir.file("cb.kmcb"),
                  dir).exit_code == 0);

  write_file(dir.file("bad.fmat"), "XMATnotreally");
  write_file(dir.file("mixed.tsv"), corpus + "/utt_00000.fmat\n" +
                                        dir.file("bad.fmat") + "\n" + corpus +
                                        "/utt_00001.fmat\n");
  const RunResult r = run_cli("encode --features " + dir.file("mixed.tsv") +
                                  " --codebook " + dir.file("cb.kmcb") +
                                  " --out-dir " + dir.file("enc"),
                              dir);
  CHECK(r.exit_code == 3);
  CHECK(r.out.find("bad.fmat") != std::string::npos);
  CHECK(r.out.find("error") != std::string::npos);
  CHECK(count_files_with_extension(dir.file("enc"), ".units") == 2);
}

TEST_CASE("encode with an empty manifest exits 0") {
  testutil::TempDir dir("cli_encode_empty");
  const std::string corpus = dir.file("corpus");
  REQUIRE(run_cli("gen-corpus --profile mora --k 4 --n 2 --seed 3 --dim 2 "
                  "--min-frames 10 --max-frames 15 --out-dir " +
                      corpus,
                  dir).exit_code == 0);
  REQUIRE(run_cli("train-kmeans --features " + corpus +
                      "/manifest.tsv --k 4 --seed 3 --out " +
                      dir.file("cb.kmcb"),
                  dir).exit_code == 0);
  write_file(dir.file("empty.tsv"), "");
  const RunResult r = run_cli("encode --features " + dir.file("empty.tsv") +
                                  " --codebook " + dir.file("cb.kmcb") +
                                  " --out-dir " + dir.file("enc"),
                              dir);
  CHECK(r.exit_code == 0);
  CHECK(r.out == "input\tframes\toutput\tstatus\n");
}

TEST_CASE("train-durpred determinism and empty manifest") {
  testutil::TempDir dir("cli_durpred");
  const std::string corpus = dir.file("corpus");
  REQUIRE(run_cli("gen-corpus --profile mora --k 6 --n 8 --seed 13 --dim 2 "
                  "--min-frames 15 --max-frames 40 --out-dir " +
                      corpus,
                  dir).exit_code == 0);

  SUBCASE("fixed seed gives identical DPRD bytes") {
    const std::string opts = " --embed-dim 6 --filter-size 6 --epochs 2 "
                             "--seed 5 --units " +
                             corpus + "/manifest.tsv";
    REQUIRE(run_cli("train-durpred" + opts + " --out " + dir.file("a.dprd"),
                    dir).exit_code == 0);
    REQUIRE(run_cli("train-durpred" + opts + " --out " + dir.file("b.dprd"),
                    dir).exit_code == 0);
    CHECK(slurp(dir.file("a.dprd")) == slurp(dir.file("b.dprd")));
    CHECK(slurp(dir.file("a.dprd.loss.tsv")) ==
          slurp(dir.file("b.dprd.loss.tsv")));
    CHECK(slurp(dir.file("a.dprd.loss.tsv")).substr(0, 11) == "epoch\tloss\n");
  }

  SUBCASE("empty manifest exits 2") {
    write_file(dir.file("empty.tsv"), "");
    const RunResult r = run_cli("train-durpred --units " +
                                    dir.file("empty.tsv") + " --out " +
                                    dir.file("x.dprd"),
                                dir);
    CHECK(r.exit_code == 2);
  }

  SUBCASE("config file values apply and flags override them") {
    write_file(dir.file("dur.conf"),
               "# model shape\nembed-dim=6\nfilter-size=6\nepochs=2\nseed=5\n");
    const std::string base = "train-durpred --units " + corpus +
                             "/manifest.tsv --config " + dir.file("dur.conf");
    REQUIRE(run_cli(base + " --out " + dir.file("c.dprd"), dir).exit_code ==
            0);
    // same settings spelled out on the command line give identical bytes
    REQUIRE(run_cli("train-durpred --units " + corpus +
                        "/manifest.tsv --embed-dim 6 --filter-size 6 "
                        "--epochs 2 --seed 5 --out " +
                        dir.file("d.dprd"),
                    dir).exit_code == 0);
    CHECK(slurp(dir.file("c.dprd")) == slurp(dir.file("d.dprd")));

    // a flag overrides the config value
    REQUIRE(run_cli(base + " --epochs 1 --out " + dir.file("e.dprd"), dir)
                .exit_code == 0);
    const std::string loss = slurp(dir.file("e.dprd.loss.tsv"));
    CHECK(loss.find("1\t") == std::string::npos);  // only epoch 0 logged
  }

  SUBCASE("unknown config key exits 2") {
    write_file(dir.file("bad.conf"), "not-an-option=3\n");
    const RunResult r = run_cli("train-durpred --units " + corpus +
                                    "/manifest.tsv --config " +
                                    dir.file("bad.conf") + " --out " +
                                    dir.file("x.dprd"),
                                dir);
    CHECK(r.exit_code == 2);
  }
}

TEST_CASE("simulate modes and usage errors") {
  testutil::TempDir dir("cli_simulate");
  const std::string corpus = dir.file("corpus");
  REQUIRE(run_cli("gen-corpus --profile stress --k 6 --n 6 --seed 17 "
                  "--noise-sd 0 --dim 2 --min-frames 15 --max-frames 40 "
                  "--out-dir " +
                      corpus,
                  dir).exit_code == 0);

  SUBCASE("dur-mod without --model exits 2") {
    const RunResult r = run_cli("simulate --units " + corpus +
                                    "/manifest.tsv --mode dur-mod --out-dir " +
                                    dir.file("sim"),
                                dir);
    CHECK(r.exit_code == 2);
  }
  SUBCASE("both --features and --units exits 2") {
    const RunResult r = run_cli(
        "simulate --features a.tsv --units b.tsv --mode baseline --out-dir " +
            dir.file("sim"),
        dir);
    CHECK(r.exit_code == 2);
  }
  SUBCASE("dur-mod over features runs the full pipeline") {
    REQUIRE(run_cli("train-kmeans --features " + corpus +
                        "/manifest.tsv --k 6 --seed 2 --out " +
                        dir.file("cb.kmcb"),
                    dir).exit_code == 0);
    REQUIRE(run_cli("train-durpred --units " + corpus +
                        "/manifest.tsv --embed-dim 6 --filter-size 6 "
                        "--epochs 2 --seed 8 --out " +
                        dir.file("m.dprd"),
                    dir).exit_code == 0);
    const RunResult r = run_cli(
        "simulate --features " + corpus + "/manifest.tsv --codebook " +
            dir.file("cb.kmcb") + " --model " + dir.file("m.dprd") +
            " --mode dur-mod --out-dir " + dir.file("sim_feat"),
        dir);
    REQUIRE(r.exit_code == 0);
    CHECK(count_files_with_extension(dir.file("sim_feat"), ".units") == 6);
    const std::string summary = slurp(dir.file("sim_feat") + "/summary.tsv");
    CHECK(summary.find("error") == std::string::npos);
  }

  SUBCASE("baseline over units is the identity") {
    REQUIRE(run_cli("simulate --units " + corpus +
                        "/manifest.tsv --mode baseline --out-dir " +
                        dir.file("sim"),
                    dir).exit_code == 0);
    const auto manifest = load_manifest_file(corpus + "/manifest.tsv");
    for (const auto &row : manifest) {
      const UnitSequence input =
          load_unit_sequence_file(corpus + "/" + row[1]);
      const std::string stem =
          std::filesystem::path(row[1]).stem().string();
      const UnitSequence output =
          load_unit_sequence_file(dir.file("sim") + "/" + stem + ".units");
      REQUIRE(output.units == input.units);
    }
    CHECK(slurp(dir.file("sim") + "/summary.tsv")
              .starts_with("input\tinput_frames\toutput_frames\trun_count"));
  }
}

TEST_CASE("stats prints the worked-example TSV") {
  testutil::TempDir dir("cli_stats");
  write_file(dir.file("u.units"), "K 4\n2 2 1 2 3 3\n");
  write_file(dir.file("units.tsv"), dir.file("u.units") + "\n");
  const RunResult r = run_cli("stats --units " + dir.file("units.tsv"), dir);
  REQUIRE(r.exit_code == 0);
  CHECK(r.out == "mean\tsd\tcount\n1.5\t0.5\t4\n");
}

TEST_CASE("evaluate") {
  testutil::TempDir dir("cli_eval");
  // 1-D features 0..4, prosody with one unvoiced frame, alignment fixture
  FeatureMatrix feat;
  feat.num_frames = 5;
  feat.dim = 1;
  feat.frame_shift_ms = 10.0f;
  feat.data = {0, 1, 2, 3, 4};
  store_feature_matrix_file(feat, dir.file("t.fmat"));
  write_file(dir.file("t.pros"),
             "100\t60\n110\t61\n0\t62\n120\t63\n130\t64\n");
  write_file(dir.file("t.align"),
             "AE\t0\t2\tS\t1\t1\nT\t2\t3\t-\t0\t0\nIH\t3\t5\tU\t1\t1\n");

  SUBCASE("identical test and reference bundles give correlations 1") {
    const std::string bundle =
        dir.file("t.fmat") + ";" + dir.file("t.pros") + ";" + dir.file("t.align");
    write_file(dir.file("pairs.tsv"), dir.file("t.fmat") + "\t" +
                                          dir.file("t.pros") + "\t" +
                                          dir.file("t.align") + "\t" + bundle +
                                          "\n");
    const RunResult r = run_cli("evaluate --pairs " + dir.file("pairs.tsv") +
                                    " --distance euclidean --report " +
                                    dir.file("report.tsv"),
                                dir);
    REQUIRE(r.exit_code == 0);
    const std::string report = slurp(dir.file("report.tsv"));
    std::istringstream lines(report);
    std::string header, row;
    std::getline(lines, header);
    std::getline(lines, row);
    std::istringstream cells(row);
    std::string utt, pitch, intensity, duration, used, skipped, dur_refs;
    std::getline(cells, utt, '\t');
    std::getline(cells, pitch, '\t');
    std::getline(cells, intensity, '\t');
    std::getline(cells, duration, '\t');
    std::getline(cells, used, '\t');
    std::getline(cells, skipped, '\t');
    std::getline(cells, dur_refs, '\t');
    CHECK(std::stod(pitch) == doctest::Approx(1.0).epsilon(1e-9));
    CHECK(std::stod(intensity) == doctest::Approx(1.0).epsilon(1e-9));
    CHECK(std::stod(duration) == doctest::Approx(1.0).epsilon(1e-9));
    CHECK(used == "1");
    CHECK(skipped == "0");
    CHECK(dur_refs == "1");
    // vowel summary on stdout: stressed 2 frames * 10ms, unstressed 2 * 10
    CHECK(r.out.find("stressed_ms\tunstressed_ms\tratio\n20\t20\t1\n") !=
          std::string::npos);
  }

  SUBCASE("label mismatch reports NA in the duration column only") {
    write_file(dir.file("r.align"),
               "AE\t0\t2\tS\t1\t1\nD\t2\t3\t-\t0\t0\nIH\t3\t5\tU\t1\t1\n");
    const std::string bundle =
        dir.file("t.fmat") + ";" + dir.file("t.pros") + ";" + dir.file("r.align");
    write_file(dir.file("pairs.tsv"), dir.file("t.fmat") + "\t" +
                                          dir.file("t.pros") + "\t" +
                                          dir.file("t.align") + "\t" + bundle +
                                          "\n");
    const RunResult r = run_cli("evaluate --pairs " + dir.file("pairs.tsv") +
                                    " --distance euclidean --report " +
                                    dir.file("report.tsv"),
                                dir);
    REQUIRE(r.exit_code == 0);
    const std::string report = slurp(dir.file("report.tsv"));
    std::istringstream lines(report);
    std::string header, row;
    std::getline(lines, header);
    std::getline(lines, row);
    std::istringstream cells(row);
    std::string utt, pitch, intensity, duration;
    std::getline(cells, utt, '\t');
    std::getline(cells, pitch, '\t');
    std::getline(cells, intensity, '\t');
    std::getline(cells, duration, '\t');
    CHECK(duration == "NA:label-mismatch");
    // pitch and intensity still computed (identical prosody tracks)
    CHECK(std::stod(pitch) == doctest::Approx(1.0).epsilon(1e-9));
    CHECK(std::stod(intensity) == doctest::Approx(1.0).epsilon(1e-9));
  }

  SUBCASE("unreadable test file exits 3 with NA:error row") {
    write_file(dir.file("pairs.tsv"),
               dir.file("missing.fmat") + "\t-\t-\t" + dir.file("t.fmat") +
                   ";" + dir.file("t.pros") + "\n");
    const RunResult r = run_cli("evaluate --pairs " + dir.file("pairs.tsv") +
                                    " --report " + dir.file("report.tsv"),
                                dir);
    CHECK(r.exit_code == 3);
    CHECK(slurp(dir.file("report.tsv")).find("NA:error") != std::string::npos);
  }
}
