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

#include "mtqc/robustness.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <random>

#include <gtest/gtest.h>

#include "mtqc/grape.hpp"

namespace mtqc {
namespace {

PulseSchedule constant_schedule(double t, int n, int channels, double value) {
  PulseSchedule s;
  s.total_time = t;
  s.amplitudes = AmplitudeMatrix::Constant(n, channels, value);
  return s;
}

// SQ2 with zero Z control and T = pi/2 is an exact X flip.
PulseSchedule sq2_flip() { return constant_schedule(std::numbers::pi / 2, 4, 1, 0.0); }

TEST(Perturbation, PulseOffsetsAreUniform) {
  std::mt19937_64 rng(3);
  const PulseSchedule base = constant_schedule(1.0, 3, 1, 0.2);
  const int n = 4000;
  std::vector<double> eps;
  for (int k = 0; k < n; ++k) {
    const auto p = perturb_pulses(base, 0.05, rng);
    // One offset per channel, shared by every segment.
    EXPECT_EQ(p.amplitudes(0, 0), p.amplitudes(2, 0));
    eps.push_back(p.amplitudes(0, 0) - 0.2);
  }
  std::sort(eps.begin(), eps.end());
  double ks = 0.0;
  for (int k = 0; k < n; ++k) {
    const double cdf = (eps[k] + 0.05) / 0.1;
    ks = std::max({ks, std::abs(cdf - k / double(n)), std::abs(cdf - (k + 1) / double(n))});
  }
  EXPECT_LT(ks, 1.36 / std::sqrt(double(n)));
  EXPECT_GE(eps.front(), -0.05);
  EXPECT_LE(eps.back(), 0.05);
}

TEST(Perturbation, PerSegmentVariantDiffersAcrossSegments) {
  std::mt19937_64 rng(4);
  const auto p = perturb_pulses(constant_schedule(1.0, 3, 2, 0.0), 0.05, rng, true);
  EXPECT_NE(p.amplitudes(0, 0), p.amplitudes(1, 0));
}

TEST(Perturbation, OffsetsAreNotClamped) {
  const auto p = shift_pulses(constant_schedule(1.0, 2, 2, 1.0), std::vector<double>{0.04, -0.03});
  EXPECT_DOUBLE_EQ(p.amplitudes(1, 0), 1.04);
  EXPECT_DOUBLE_EQ(p.amplitudes(1, 1), 0.97);
  EXPECT_THROW(shift_pulses(p, std::vector<double>{0.1}), std::invalid_argument);
}

TEST(Perturbation, GammaMean) {
  std::mt19937_64 rng(5);
  const int n = 20000;
  double sum = 0.0;
  for (int k = 0; k < n; ++k) {
    const double g = perturb_gamma(0.01, 0.005, rng);
    ASSERT_GE(g, 0.01);
    ASSERT_LE(g, 0.015);
    sum += g;
  }
  EXPECT_NEAR(sum / n, 0.0125, 2e-4);
}

TEST(Rim, MeanInfidelity) {
  const std::vector<double> f = {0.9, 0.95, 1.0};
  EXPECT_NEAR(rim_from_fidelities(f), 0.05, 1e-15);
  EXPECT_THROW(rim_from_fidelities(std::vector<double>{}), std::invalid_argument);
}

TEST(Rim, MatchesMeanInfidelityOfSamples) {
  const auto& e = find_entry(build_catalog(), "SQ2");
  PerturbationModel m;
  const RimResult r = rim(e, sq2_flip(), m, 9);
  ASSERT_EQ(r.fidelities.size(), 15u);
  double expected = 0.0;
  for (double f : r.fidelities) expected += 1.0 - f;
  EXPECT_DOUBLE_EQ(r.rim, expected / 15.0);
}

TEST(Rim, ZeroPerturbationIsNominalInfidelity) {
  const auto& cat = build_catalog();
  for (const char* id : {"SQ2", "SQ4", "TQ26"}) {
    const auto& e = find_entry(cat, id);
    std::mt19937_64 rng(1);
    PulseSchedule s = constant_schedule(2.0, 5, static_cast<int>(e.n_controls()), 0.0);
    std::uniform_real_distribution<double> u(-1, 1);
    for (Eigen::Index k = 0; k < s.amplitudes.size(); ++k) s.amplitudes.data()[k] = u(rng);
    PerturbationModel m;
    m.delta_u = 0.0;
    m.delta_gamma = 0.0;
    const double nominal = transfer_fidelity(e, s, DynamicsMode::kOpen, m.nominal_gamma);
    for (auto kind : {PerturbationKind::kPulse, PerturbationKind::kDecoherence, PerturbationKind::kCombined}) {
      m.kind = kind;
      EXPECT_NEAR(rim(e, s, m, 4).rim, 1.0 - nominal, 1e-9) << id;
    }
  }
}

TEST(Rim, GrowsWithDecoherenceSpread) {
  const auto& e = find_entry(build_catalog(), "SQ2");
  PerturbationModel m;
  m.kind = PerturbationKind::kDecoherence;
  double prev = -1.0;
  for (double dg : {0.0, 0.005, 0.01, 0.02, 0.05}) {
    m.delta_gamma = dg;
    const double r = rim(e, sq2_flip(), m, 11).rim;
    EXPECT_GT(r, prev) << dg;
    prev = r;
  }
}

TEST(Rim, KindNamesRoundTrip) {
  for (auto kind : {PerturbationKind::kPulse, PerturbationKind::kDecoherence, PerturbationKind::kCombined}) {
    EXPECT_EQ(parse_perturbation_kind(to_string(kind)), kind);
  }
  EXPECT_THROW(parse_perturbation_kind("thermal"), std::invalid_argument);
}

std::vector<PulseRecord> sample_records() {
  // SQ3 with zero drive never leaves |0>, so its records fail the filter.
  return {{"SQ2", 0, sq2_flip()},
          {"SQ3", 0, constant_schedule(1.0, 2, 1, 0.0)},
          {"SQ2", 1, constant_schedule(std::numbers::pi / 2, 2, 1, 0.0)},
          {"SQ3", 1, constant_schedule(2.0, 2, 1, 0.0)}};
}

RimCampaignConfig campaign_config(int workers) {
  RimCampaignConfig c;
  for (auto kind : {PerturbationKind::kPulse, PerturbationKind::kDecoherence, PerturbationKind::kCombined}) {
    PerturbationModel m;
    m.kind = kind;
    m.samples = 5;
    c.models.push_back(m);
  }
  c.seed = 77;
  c.workers = workers;
  return c;
}

TEST(RimCampaign, Bookkeeping) {
  const auto report = rim_campaign(build_catalog(), sample_records(), campaign_config(1));
  EXPECT_EQ(report.dropped_records, 2);
  EXPECT_EQ(report.excluded, (std::vector<std::string>{"SQ3"}));
  ASSERT_EQ(report.rows.size(), 3u);
  ASSERT_EQ(report.aggregates.size(), 3u);
  for (const auto& row : report.rows) {
    EXPECT_EQ(row.system_id, "SQ2");
    EXPECT_EQ(row.experiments, 2);
    EXPECT_DOUBLE_EQ(row.rim, (row.per_experiment[0] + row.per_experiment[1]) / 2);
    EXPECT_GT(row.nominal_fidelity, 0.95);
  }
  for (const auto& agg : report.aggregates) {
    EXPECT_EQ(agg.count, 2);
    EXPECT_GE(agg.rim.max, agg.rim.min);
  }
  const std::string csv = rim_rows_csv(report);
  EXPECT_EQ(std::count(csv.begin(), csv.end(), '\n'), 4);
}

TEST(RimCampaign, SingleRecordAggregateEqualsRow) {
  const std::vector<PulseRecord> one = {{"SQ2", 0, sq2_flip()}};
  const auto report = rim_campaign(build_catalog(), one, campaign_config(1));
  for (std::size_t k = 0; k < 3; ++k) EXPECT_EQ(report.aggregates[k].rim.mean, report.rows[k].rim);
}

TEST(RimCampaign, SerialEqualsParallel) {
  const auto serial = rim_campaign(build_catalog(), sample_records(), campaign_config(1));
  const auto parallel = rim_campaign(build_catalog(), sample_records(), campaign_config(4));
  EXPECT_EQ(to_json(serial).dump(), to_json(parallel).dump());
}

TEST(RimCampaign, AllExcluded) {
  const std::vector<PulseRecord> bad = {{"SQ3", 0, constant_schedule(1.0, 2, 1, 0.0)}};
  const auto report = rim_campaign(build_catalog(), bad, campaign_config(2));
  EXPECT_TRUE(report.rows.empty());
  EXPECT_EQ(report.excluded, (std::vector<std::string>{"SQ3"}));
  EXPECT_EQ(report.dropped_records, 1);
  for (const auto& agg : report.aggregates) EXPECT_EQ(agg.count, 0);
}

}  // namespace
}  // namespace mtqc
