// tests/test_durmodel.cc

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

#include <cmath>
#include <cstring>

#include "accentsim/durmodel.h"
#include "accentsim/error.h"
#include "accentsim/unitseq.h"
#include "durmodel_reference.h"
#include "test_util.h"

using namespace accentsim;
using testutil::make_units;

namespace {

DurationModelConfig toy_config(uint32_t k, uint32_t e, uint32_t f,
                               uint32_t kernel) {
  DurationModelConfig cfg;
  cfg.codebook_size = k;
  cfg.embed_dim = e;
  cfg.filter_size = f;
  cfg.kernel_size = kernel;
  cfg.dropout_rate = 0.0;
  return cfg;
}

DurationModel zero_model(const DurationModelConfig &cfg) {
  DurationModel m;
  m.config = cfg;
  m.params.assign(ParamLayout::from_config(cfg).total, 0.0);
  return m;
}

// Central finite differences against the analytic gradients; returns the
// worst relative error over all parameters.
double max_grad_rel_error(DurationModel model,
                          const std::vector<TrainingExample> &batch) {
  const LossAndGrads lg = loss_and_gradients(model, batch, nullptr);
  const double h = 1e-4;
  double worst = 0.0;
  for (size_t i = 0; i < model.params.size(); ++i) {
    const double saved = model.params[i];
    model.params[i] = saved + h;
    const double up = loss_and_gradients(model, batch, nullptr).loss;
    model.params[i] = saved - h;
    const double down = loss_and_gradients(model, batch, nullptr).loss;
    model.params[i] = saved;
    const double fd = (up - down) / (2.0 * h);
    const double denom =
        std::max({std::abs(fd), std::abs(lg.grads[i]), 1e-8});
    worst = std::max(worst, std::abs(fd - lg.grads[i]) / denom);
  }
  return worst;
}

}  // namespace

TEST_CASE("build_training_set worked example") {
  const std::vector<TrainingExample> set =
      build_training_set({make_units({2, 2, 1, 2, 3, 3}, 4)});
  REQUIRE(set.size() == 1);
  CHECK(set[0].input_units == std::vector<uint32_t>{2, 1, 2, 3});
  CHECK(set[0].target_durations == std::vector<uint32_t>{2, 1, 1, 2});

  const std::vector<TrainingExample> single =
      build_training_set({make_units({5}, 6)});
  CHECK(single[0].input_units == std::vector<uint32_t>{5});
  CHECK(single[0].target_durations == std::vector<uint32_t>{1});
}

TEST_CASE("training set reconstructs the original sequence") {
  Rng rng(88);
  for (int i = 0; i < 50; ++i) {
    const UnitSequence s = testutil::random_units(rng, 6, 1, 200);
    const std::vector<TrainingExample> set = build_training_set({s});
    RunLengthSequence rle;
    rle.codebook_size = s.codebook_size;
    for (size_t j = 0; j < set[0].input_units.size(); ++j) {
      rle.runs.push_back(
          Run{set[0].input_units[j], set[0].target_durations[j]});
    }
    REQUIRE(run_length_decode(rle).units == s.units);
  }
}

TEST_CASE("zero model outputs zero everywhere") {
  const DurationModel model = zero_model(toy_config(4, 3, 2, 3));
  const std::vector<uint32_t> input = {0, 1, 2, 3, 1};
  const std::vector<double> out = forward(model, input, false, nullptr);
  REQUIRE(out.size() == 5);
  for (double v : out) CHECK(v == 0.0);
}

TEST_CASE("forward is deterministic with training=false") {
  DurationModelConfig cfg = toy_config(5, 4, 6, 3);
  cfg.dropout_rate = 0.5;  // must not matter outside training
  cfg.seed = 44;
  const DurationModel model = init_model(cfg);
  const std::vector<uint32_t> input = {4, 0, 2, 2, 1, 3};
  const std::vector<double> a = forward(model, input, false, nullptr);
  const std::vector<double> b = forward(model, input, false, nullptr);
  REQUIRE(a.size() == b.size());
  CHECK(std::memcmp(a.data(), b.data(), a.size() * sizeof(double)) == 0);
}

TEST_CASE("hand-set 1x1 network: layernorm over one channel collapses to its bias") {
  // E=F=1: the normalized value is always 0, so each block outputs its
  // layernorm bias and the head sees only bln2
  DurationModel m = zero_model(toy_config(2, 1, 1, 1));
  const ParamLayout lay = m.layout();
  m.params[lay.embedding + 1] = 0.5;  // emb[1]
  m.params[lay.conv1_w] = 2.0;
  m.params[lay.conv1_b] = 0.1;
  m.params[lay.ln1_gain] = 3.0;
  m.params[lay.ln1_bias] = 0.7;
  m.params[lay.conv2_w] = 1.5;
  m.params[lay.conv2_b] = -0.2;
  m.params[lay.ln2_gain] = 4.0;
  m.params[lay.ln2_bias] = -0.3;
  m.params[lay.proj_w] = 2.5;
  m.params[lay.proj_b] = 0.05;

  const std::vector<uint32_t> input = {1};
  const std::vector<double> out = forward(m, input, false, nullptr);
  REQUIRE(out.size() == 1);
  // y = 2.5 * (-0.3) + 0.05
  CHECK(out[0] == doctest::Approx(-0.7).epsilon(1e-12));
}

TEST_CASE("hand-computed two-channel forward pass") {
  // K=1, E=1, F=2, kernel=1, one position; constants derived step by step
  // with independent scalar arithmetic
  DurationModel m = zero_model(toy_config(1, 1, 2, 1));
  const ParamLayout lay = m.layout();
  m.params[lay.embedding] = 0.8;
  m.params[lay.conv1_w + 0] = 1.0;   // w1[f=0][c=0]
  m.params[lay.conv1_w + 1] = -0.5;  // w1[f=1][c=0]
  m.params[lay.conv1_b + 0] = 0.2;
  m.params[lay.conv1_b + 1] = 0.3;
  m.params[lay.ln1_gain + 0] = 1.2;
  m.params[lay.ln1_gain + 1] = 0.9;
  m.params[lay.ln1_bias + 0] = 0.1;
  m.params[lay.ln1_bias + 1] = -0.2;
  m.params[lay.conv2_w + 0] = 0.5;   // w2[f=0][c=0]
  m.params[lay.conv2_w + 1] = -1.0;  // w2[f=0][c=1]
  m.params[lay.conv2_w + 2] = -1.0;  // w2[f=1][c=0]
  m.params[lay.conv2_w + 3] = 0.25;  // w2[f=1][c=1]
  m.params[lay.conv2_b + 0] = 0.05;
  m.params[lay.conv2_b + 1] = 0.6;
  m.params[lay.ln2_gain + 0] = 1.0;
  m.params[lay.ln2_gain + 1] = 2.0;
  m.params[lay.ln2_bias + 0] = 0.0;
  m.params[lay.ln2_bias + 1] = 0.5;
  m.params[lay.proj_w + 0] = 1.5;
  m.params[lay.proj_w + 1] = -2.0;
  m.params[lay.proj_b] = 0.25;

  const std::vector<uint32_t> input = {0};
  const std::vector<double> out = forward(m, input, false, nullptr);
  REQUIRE(out.size() == 1);
  CHECK(out[0] == doctest::Approx(4.74996604856541).epsilon(1e-12));
}

TEST_CASE("unit id out of range is a ValidationError") {
  const DurationModel model = zero_model(toy_config(3, 2, 2, 3));
  const std::vector<uint32_t> input = {0, 3};
  CHECK_THROWS_AS(forward(model, input, false, nullptr), ValidationError);
  CHECK_THROWS_AS(predict_durations(model, input), ValidationError);
}

TEST_CASE("zero model with unit targets: loss and gradients vanish") {
  const DurationModel model = zero_model(toy_config(3, 2, 2, 3));
  TrainingExample ex;
  ex.input_units = {0, 1, 2};
  ex.target_durations = {1, 1, 1};  // ln 1 = 0, exact fit
  const LossAndGrads lg = loss_and_gradients(model, {ex}, nullptr);
  CHECK(lg.loss == 0.0);
  for (double g : lg.grads) CHECK(g == 0.0);
}

TEST_CASE("duplicating an example leaves the loss unchanged") {
  DurationModelConfig cfg = toy_config(4, 3, 3, 3);
  cfg.seed = 7;
  const DurationModel model = init_model(cfg);
  TrainingExample ex;
  ex.input_units = {0, 2, 1, 3};
  ex.target_durations = {2, 1, 3, 1};
  const double once = loss_and_gradients(model, {ex}, nullptr).loss;
  const double twice = loss_and_gradients(model, {ex, ex}, nullptr).loss;
  CHECK(once == doctest::Approx(twice).epsilon(1e-12));
}

TEST_CASE("analytic gradients match central finite differences") {
  // randomized toy configurations, dropout 0, 64-bit arithmetic; fixtures
  // are screened for smoothness (no ReLU kink within the step, healthy
  // layernorm variance, small loss) so the comparison is meaningful
  const auto fixtures = testutil::make_gradcheck_fixtures(8, 0x5EED);
  for (size_t i = 0; i < fixtures.size(); ++i) {
    const double err =
        max_grad_rel_error(fixtures[i].model, fixtures[i].batch);
    CAPTURE(i);
    REQUIRE(err < 1e-4);
  }
}

TEST_CASE("library forward agrees with an independent scalar reference") {
  const auto fixtures = testutil::make_gradcheck_fixtures(12, 0xFEED);
  for (const auto &fx : fixtures) {
    for (const TrainingExample &ex : fx.batch) {
      const auto probe = testutil::reference_forward(fx.model, ex.input_units);
      const std::vector<double> lib =
          forward(fx.model, ex.input_units, false, nullptr);
      REQUIRE(lib.size() == probe.outputs.size());
      for (size_t i = 0; i < lib.size(); ++i) {
        REQUIRE(lib[i] == doctest::Approx(probe.outputs[i]).epsilon(1e-12));
      }
    }
  }
}

TEST_CASE("single example memorization with long training") {
  DurationModelConfig cfg = toy_config(4, 8, 8, 3);
  cfg.dropout_rate = 0.0;
  cfg.learning_rate = 0.01;
  cfg.epochs = 500;
  cfg.batch_utterances = 1;
  cfg.seed = 3;

  TrainingExample ex;
  ex.input_units = {2, 1, 2, 3};
  ex.target_durations = {2, 1, 1, 2};
  const TrainResult result = train({ex}, cfg);

  CHECK(predict_durations(result.model, ex.input_units) ==
        ex.target_durations);
  REQUIRE(result.epoch_losses.size() == 500);
  CHECK(result.epoch_losses.back() < result.epoch_losses.front());
}

TEST_CASE("different seeds reach different parameters but both descend") {
  TrainingExample ex;
  ex.input_units = {0, 1, 0, 2, 1};
  ex.target_durations = {1, 3, 2, 1, 2};
  DurationModelConfig cfg = toy_config(3, 4, 4, 3);
  cfg.epochs = 40;
  cfg.learning_rate = 0.01;

  cfg.seed = 100;
  const TrainResult a = train({ex}, cfg);
  cfg.seed = 200;
  const TrainResult b = train({ex}, cfg);

  CHECK(a.model.params != b.model.params);
  CHECK(a.epoch_losses.back() < a.epoch_losses.front());
  CHECK(b.epoch_losses.back() < b.epoch_losses.front());
}

TEST_CASE("loss strictly decreases over the first optimization step") {
  DurationModelConfig cfg = toy_config(4, 4, 4, 3);
  cfg.seed = 11;
  DurationModel model = init_model(cfg);
  TrainingExample ex;
  ex.input_units = {0, 1, 2, 3, 0};
  ex.target_durations = {2, 4, 1, 3, 2};
  const std::vector<TrainingExample> batch = {ex};

  const LossAndGrads lg = loss_and_gradients(model, batch, nullptr);
  double grad_norm = 0.0;
  for (double g : lg.grads) grad_norm += g * g;
  REQUIRE(grad_norm > 0.0);

  // one Adam step (first-step bias correction makes it lr * sign-ish)
  for (size_t i = 0; i < model.params.size(); ++i) {
    const double m_hat = lg.grads[i];
    const double v_hat = lg.grads[i] * lg.grads[i];
    model.params[i] -=
        cfg.learning_rate * m_hat / (std::sqrt(v_hat) + cfg.adam_eps);
  }
  const double after = loss_and_gradients(model, batch, nullptr).loss;
  CHECK(after < lg.loss);
}

TEST_CASE("training with dropout is reproducible given the seed") {
  std::vector<TrainingExample> set;
  Rng rng(5);
  for (int i = 0; i < 8; ++i) {
    TrainingExample ex;
    const size_t len = 3 + rng.uniform_u64(10);
    for (size_t j = 0; j < len; ++j) {
      ex.input_units.push_back(static_cast<uint32_t>(rng.uniform_u64(5)));
      ex.target_durations.push_back(
          1 + static_cast<uint32_t>(rng.uniform_u64(3)));
    }
    set.push_back(std::move(ex));
  }
  DurationModelConfig cfg = toy_config(5, 4, 4, 3);
  cfg.dropout_rate = 0.5;
  cfg.epochs = 3;
  cfg.seed = 909;
  const TrainResult a = train(set, cfg);
  const TrainResult b = train(set, cfg);
  REQUIRE(a.model.params.size() == b.model.params.size());
  CHECK(std::memcmp(a.model.params.data(), b.model.params.data(),
                    a.model.params.size() * sizeof(double)) == 0);
  CHECK(a.epoch_losses == b.epoch_losses);
}

TEST_CASE("predict_durations rounding and clamping") {
  DurationModelConfig cfg = toy_config(2, 1, 1, 1);
  DurationModel m = zero_model(cfg);
  const ParamLayout lay = m.layout();
  const std::vector<uint32_t> input = {0};

  SUBCASE("zero model predicts duration 1 everywhere") {
    const std::vector<uint32_t> durs =
        predict_durations(m, std::vector<uint32_t>{0, 1, 0});
    CHECK(durs == std::vector<uint32_t>{1, 1, 1});
  }
  SUBCASE("the rounding rule sends halfway cases away from zero") {
    CHECK(round_half_away_from_zero(2.5) == 3);
    CHECK(round_half_away_from_zero(1.5) == 2);
    CHECK(round_half_away_from_zero(2.4999) == 2);
  }
  SUBCASE("raw log output near ln(2.5) rounds by magnitude") {
    // proj bias is the raw output for a zero model
    m.params[lay.proj_b] = std::log(2.6);
    CHECK(predict_durations(m, input) == std::vector<uint32_t>{3});
    m.params[lay.proj_b] = std::log(2.4);
    CHECK(predict_durations(m, input) == std::vector<uint32_t>{2});
  }
  SUBCASE("huge raw output clamps to max_duration") {
    m.params[lay.proj_b] = std::log(1000.0);
    CHECK(predict_durations(m, input) ==
          std::vector<uint32_t>{m.config.max_duration});
  }
  SUBCASE("very negative raw output floors at 1") {
    m.params[lay.proj_b] = -20.0;
    CHECK(predict_durations(m, input) == std::vector<uint32_t>{1});
  }
}

TEST_CASE("config validation") {
  DurationModelConfig cfg = toy_config(2, 2, 2, 2);  // even kernel
  CHECK_THROWS_AS(validate(cfg), ValidationError);
  cfg.kernel_size = 3;
  cfg.dropout_rate = 1.0;
  CHECK_THROWS_AS(validate(cfg), ValidationError);
  cfg.dropout_rate = 0.5;
  CHECK_NOTHROW(validate(cfg));
}

TEST_CASE("empty training set is a ValidationError") {
  DurationModelConfig cfg = toy_config(2, 2, 2, 3);
  CHECK_THROWS_AS(train({}, cfg), ValidationError);
}
