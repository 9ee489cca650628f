// Copyright 2026 The mtqc Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "mtqc/control_env.hpp"

#include <cmath>
#include <numbers>
#include <random>

#include <gtest/gtest.h>

namespace mtqc {
namespace {

AgentAction make_action(double t, double n, std::vector<double> pulses = {}) {
  AgentAction a;
  a.raw[0] = t;
  a.raw[1] = n;
  for (std::size_t j = 0; j < pulses.size(); ++j) a.raw[2 + j] = pulses[j];
  return a;
}

TEST(DecodeAction, Endpoints) {
  const EnvConfig cfg;
  EXPECT_EQ(decode_action(make_action(-1, -1), cfg, 1.0, 1).total_time, 1.0);
  EXPECT_EQ(decode_action(make_action(1, 1), cfg, 1.0, 1).total_time, 20.0);
  EXPECT_EQ(decode_action(make_action(-1, -1), cfg, 1.0, 1).segments, 2);
  EXPECT_EQ(decode_action(make_action(1, 1), cfg, 1.0, 1).segments, 60);
  EXPECT_EQ(decode_action(make_action(0, 0), cfg, 1.0, 1).segments, 31);
  EXPECT_EQ(decode_action(make_action(0, 0, {0.5}), cfg, 1.0, 1).pulses,
            (std::vector<double>{0.5}));
  EXPECT_EQ(decode_action(make_action(0, 0, {1.0, -1.0}), cfg, 1.0, 2).pulses,
            (std::vector<double>{1.0, -1.0}));
  EXPECT_EQ(decode_action(make_action(0, 0, {0.5}), cfg, 2.0, 1).pulses,
            (std::vector<double>{1.0}));
}

TEST(DecodeAction, ClampsAndIgnoresExtraSlots) {
  const EnvConfig cfg;
  const auto d = decode_action(make_action(7, -3, {2.0, 0.3, 0.9}), cfg, 1.0, 1);
  EXPECT_EQ(d.total_time, 20.0);
  EXPECT_EQ(d.segments, 2);
  EXPECT_EQ(d.pulses, (std::vector<double>{1.0}));
}

TEST(DecodeAction, Monotone) {
  const EnvConfig cfg;
  double prev_t = -1;
  int prev_n = 0;
  double prev_u = -2;
  for (int k = 0; k <= 200; ++k) {
    const double r = -1.0 + k / 100.0;
    const auto d = decode_action(make_action(r, r, {r}), cfg, 1.0, 1);
    EXPECT_GT(d.total_time, prev_t);
    EXPECT_GE(d.segments, prev_n);
    EXPECT_GT(d.pulses[0], prev_u);
    EXPECT_LE(std::abs(d.pulses[0]), 1.0);
    prev_t = d.total_time;
    prev_n = d.segments;
    prev_u = d.pulses[0];
  }
}

TEST(DecodeAction, FixedOverrides) {
  EnvConfig cfg;
  cfg.fixed_time = 3.0;
  cfg.fixed_segments = 10;
  const auto d = decode_action(make_action(1, 1), cfg, 1.0, 1);
  EXPECT_EQ(d.total_time, 3.0);
  EXPECT_EQ(d.segments, 10);
}

TEST(Reward, Branches) {
  EXPECT_DOUBLE_EQ(shaped_reward(0.5, 0.0, 0, 0.95), 5.0);
  EXPECT_NEAR(shaped_reward(0.96, 0.80, 3, 0.95), 40.97, 1e-12);
  EXPECT_NEAR(shaped_reward(0.5, 0.5, 1, 0.95), -0.01, 1e-15);
  // 0.9 bonus alone, strict thresholds.
  EXPECT_NEAR(shaped_reward(0.92, 0.92, 2, 0.95), 5.0 - 0.02, 1e-12);
  EXPECT_NEAR(shaped_reward(0.9, 0.9, 2, 0.95), -0.02, 1e-12);
  EXPECT_NEAR(shaped_reward(0.95, 0.95, 2, 0.95), 5.0 - 0.02, 1e-12);
  // t = 0 takes 10 F plus bonuses.
  EXPECT_NEAR(shaped_reward(0.9995, 0.0, 0, 0.999), 9.995 + 25.0, 1e-12);
}

TEST(Encoding, Examples) {
  SystemDescriptor desc{1, 1, 1.0, true, false, true};
  DensityMatrix half{CMatrix::Identity(2, 2) * 0.5};
  const auto o = encode_observation(half, desc);
  ASSERT_EQ(o.size(), 70u);
  EXPECT_EQ(o[0], 0.5);
  EXPECT_EQ(o[1], 0.5);
  for (int k = 2; k < kStateSlots; ++k) EXPECT_EQ(o[k], 0.0);
  EXPECT_EQ((std::array<double, 6>{o[64], o[65], o[66], o[67], o[68], o[69]}), desc.as_array());

  CVector plus(2);
  plus << 1 / std::sqrt(2.0), 1 / std::sqrt(2.0);
  const auto p = encode_observation(DensityMatrix::pure(plus), desc);
  EXPECT_NEAR(p[0], 0.5, 1e-15);
  EXPECT_NEAR(p[1], 0.5, 1e-15);
  EXPECT_NEAR(p[2], 0.5, 1e-15);
  EXPECT_NEAR(p[3], 0.0, 1e-15);
}

CMatrix random_density(Eigen::Index d, std::mt19937_64& rng) {
  std::normal_distribution<double> g;
  CMatrix a(d, d);
  for (Eigen::Index i = 0; i < a.size(); ++i) a.data()[i] = {g(rng), g(rng)};
  CMatrix rho = a * a.adjoint();
  return rho / rho.trace().real();
}

TEST(Encoding, RoundTrip) {
  std::mt19937_64 rng(5);
  for (Eigen::Index d : {2, 4, 8}) {
    for (int rep = 0; rep < 5; ++rep) {
      DensityMatrix rho{random_density(d, rng)};
      const auto obs = encode_observation(rho, SystemDescriptor{});
      for (int k = static_cast<int>(d * d); k < kStateSlots; ++k) EXPECT_EQ(obs[k], 0.0);
      EXPECT_LE((decode_observation(obs, d).matrix - rho.matrix).norm(), 1e-12);
    }
  }
}

TEST(ControlEnv, ResetObservation) {
  const auto& cat = build_catalog();
  ControlEnv env(find_entry(cat, "SQ2"), EnvConfig::closed());
  const auto o = env.reset(3);
  EXPECT_EQ(o[0], 1.0);
  for (int k = 1; k < kStateSlots; ++k) EXPECT_EQ(o[k], 0.0);
  const auto desc = find_entry(cat, "SQ2").descriptor.as_array();
  for (int k = 0; k < 6; ++k) EXPECT_EQ(o[kStateSlots + k], desc[k]);
  EXPECT_EQ(env.reset(3), o);
  EXPECT_EQ(env.total_time(), 0.0);
  EXPECT_EQ(env.segments(), 0);

  ControlEnv tq(find_entry(cat, "TQ1"), EnvConfig::open(0.01));
  const auto t = tq.reset();
  for (int k = 16; k < kStateSlots; ++k) EXPECT_EQ(t[k], 0.0);
  double populations = 0.0;
  for (int k = 0; k < 4; ++k) populations += t[k];
  EXPECT_NEAR(populations, 1.0, 1e-15);
}

TEST(ControlEnv, ZeroDriveRewardIsTimePenalty) {
  // SQ3 has a Z drift which leaves |0> invariant, so zero pulses keep F fixed.
  ControlEnv env(find_entry(build_catalog(), "SQ3"), EnvConfig::closed());
  env.reset();
  const auto first = env.step(make_action(0, 1, {0.0}));
  EXPECT_NEAR(first.reward, 0.0, 1e-15);
  for (int t = 1; t < 5; ++t) {
    const auto s = env.step(make_action(0, 1, {0.0}));
    EXPECT_NEAR(s.reward, -0.01 * t, 1e-12);
    EXPECT_EQ(s.info.step_index, t);
    EXPECT_FALSE(s.done);
  }
}

TEST(ControlEnv, LatchesTandNAndTerminatesAtN) {
  ControlEnv env(find_entry(build_catalog(), "SQ3"), EnvConfig::open(0.01));
  env.reset();
  env.step(make_action(-1, -1, {0.0}));  // T = 1, N = 2
  EXPECT_EQ(env.segments(), 2);
  const auto s = env.step(make_action(1, 1, {0.0}));
  EXPECT_EQ(env.total_time(), 1.0);
  EXPECT_EQ(env.segments(), 2);
  EXPECT_TRUE(s.done);
  EXPECT_DOUBLE_EQ(s.info.effective_time, 1.0);
  EXPECT_THROW(env.step(make_action(0, 0)), std::logic_error);
  const auto sched = env.applied_schedule();
  EXPECT_EQ(sched.segments(), 2);
  EXPECT_DOUBLE_EQ(sched.total_time, 1.0);
}

TEST(ControlEnv, RabiDriveIsMonotoneAndTerminatesEarly) {
  // Zero Z control on SQ2 leaves H = X, so F(t) = sin^2 t rises until pi/2.
  const auto& cat = build_catalog();
  ControlEnv env(find_entry(cat, "SQ2"), EnvConfig::closed());
  env.reset();
  const double raw_t = 2.0 * (3.0 - 1.0) / 19.0 - 1.0;  // T = 3
  double prev = 0.0;
  bool finished = false;
  int steps = 0;
  while (!finished) {
    const auto s = env.step(make_action(raw_t, 1.0, {0.0}));
    EXPECT_GE(s.info.fidelity, prev);
    EXPECT_LE(s.info.effective_time, env.total_time() + 1e-12);
    prev = s.info.fidelity;
    finished = s.done;
    ++steps;
  }
  EXPECT_GE(prev, 0.999);
  EXPECT_LT(steps, env.segments());
  EXPECT_LT(env.applied_schedule().total_time, env.total_time());
}

TEST(ControlEnv, EffectiveTimeEqualsTWithoutEarlyStop) {
  ControlEnv env(find_entry(build_catalog(), "SQ3"), EnvConfig::closed());
  env.reset();
  StepOutcome s;
  do s = env.step(make_action(0.3, -0.5, {0.0}));
  while (!s.done);
  EXPECT_EQ(env.steps_taken(), env.segments());
  EXPECT_NEAR(s.info.effective_time, env.total_time(), 1e-12);
}

TEST(EnvConfig, Validate) {
  EXPECT_NO_THROW(EnvConfig::closed().validate());
  EnvConfig bad;
  bad.t_min = 5;
  bad.t_max = 1;
  EXPECT_THROW(bad.validate(), std::invalid_argument);
  EnvConfig neg = EnvConfig::open(-0.1);
  EXPECT_THROW(neg.validate(), std::invalid_argument);
}

}  // namespace
}  // namespace mtqc
