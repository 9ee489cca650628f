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

#include "mtqc/dynamics.hpp"

#include <cmath>
#include <numbers>
#include <random>

#include <gtest/gtest.h>

#include "mtqc/catalog.hpp"

namespace mtqc {
namespace {

using qla::Complex;
using qla::kI;

CVector ket(std::initializer_list<Complex> v) {
  CVector out(static_cast<Eigen::Index>(v.size()));
  Eigen::Index i = 0;
  for (auto x : v) out(i++) = x;
  return out;
}

PulseSchedule random_schedule(const CatalogEntry& e, std::mt19937_64& rng) {
  std::uniform_real_distribution<double> t(1.0, 20.0), u(-1.0, 1.0);
  std::uniform_int_distribution<int> n(2, 60);
  PulseSchedule s{t(rng), AmplitudeMatrix(n(rng), static_cast<Eigen::Index>(e.n_controls()))};
  for (Eigen::Index k = 0; k < s.amplitudes.size(); ++k) s.amplitudes.data()[k] = u(rng) * e.amplitude_scale;
  return s;
}

TEST(Liouvillian, ZeroHamiltonianNoChannelsIsZero) {
  EXPECT_EQ(liouvillian(CMatrix::Zero(2, 2), {}).norm(), 0.0);
}

TEST(Liouvillian, DampingOnMaximallyMixedState) {
  const double gamma = 0.3;
  const std::vector<LindbladChannel> ch{{qla::sigma_minus(), gamma}};
  const CMatrix g = liouvillian(CMatrix::Zero(2, 2), ch);
  const CMatrix out = qla::unvec(g * qla::vec(qla::identity(2) * 0.5), 2);
  CMatrix expected = CMatrix::Zero(2, 2);
  expected(0, 0) = 0.5 * gamma;
  expected(1, 1) = -0.5 * gamma;
  EXPECT_LE((out - expected).cwiseAbs().maxCoeff(), 1e-15);
}

TEST(Liouvillian, CommutatorOracle) {
  std::mt19937_64 rng(1);
  std::normal_distribution<double> g;
  const CMatrix h = qla::sigma_z();
  const CMatrix gen = liouvillian(h, {});
  for (int trial = 0; trial < 5; ++trial) {
    CMatrix rho(2, 2);
    for (Eigen::Index k = 0; k < 4; ++k) rho.data()[k] = Complex(g(rng), g(rng));
    const CMatrix oracle = -kI * (h * rho - rho * h);
    EXPECT_LE((qla::unvec(gen * qla::vec(rho), 2) - oracle).cwiseAbs().maxCoeff(), 1e-14);
  }
}

TEST(Liouvillian, GeneralLindbladOracle) {
  // Direct evaluation of the master equation right-hand side.
  std::mt19937_64 rng(2);
  std::normal_distribution<double> g;
  auto rand = [&](int n) {
    CMatrix m(n, n);
    for (Eigen::Index k = 0; k < m.size(); ++k) m.data()[k] = Complex(g(rng), g(rng));
    return m;
  };
  const CMatrix a = rand(4);
  const CMatrix h = (a + a.adjoint()) * 0.5;
  const std::vector<LindbladChannel> ch{{rand(4), 0.2}, {rand(4), 0.7}};
  const CMatrix rho = rand(4);
  CMatrix oracle = -kI * (h * rho - rho * h);
  for (const auto& c : ch) {
    const CMatrix ldl = c.op.adjoint() * c.op;
    oracle += c.rate * (c.op * rho * c.op.adjoint() - 0.5 * (ldl * rho + rho * ldl));
  }
  EXPECT_LE((qla::unvec(liouvillian(h, ch) * qla::vec(rho), 4) - oracle).cwiseAbs().maxCoeff(), 1e-12);
}

TEST(Liouvillian, RejectsNegativeRateAndBadShapes) {
  EXPECT_THROW(liouvillian(qla::sigma_x(), std::vector<LindbladChannel>{{qla::sigma_minus(), -0.1}}),
               std::invalid_argument);
  EXPECT_THROW(liouvillian(qla::sigma_x(), std::vector<LindbladChannel>{{qla::identity(4), 0.1}}),
               std::invalid_argument);
}

TEST(PropagateClosed, RabiRotation) {
  const ControlledHamiltonian ham{qla::sigma_x(), {}};
  const PulseSchedule s{std::numbers::pi / 2, AmplitudeMatrix(1, 0)};
  const auto states = propagate_closed(ham, s, ket({1, 0}));
  ASSERT_EQ(states.size(), 1u);
  EXPECT_LE((states.back() - ket({0, -kI})).norm(), 1e-12);
  EXPECT_NEAR(fidelity(states.back(), ket({0, 1})), 1.0, 1e-12);
}

TEST(PropagateClosed, ZeroGeneratorLeavesStateUnchanged) {
  const ControlledHamiltonian ham{CMatrix::Zero(2, 2), {qla::sigma_x()}};
  for (int n : {1, 5, 17}) {
    const PulseSchedule s{3.0, AmplitudeMatrix::Zero(n, 1)};
    const CVector psi0 = ket({std::sqrt(0.3), Complex(0, std::sqrt(0.7))});
    for (const auto& psi : propagate_closed(ham, s, psi0)) EXPECT_LE((psi - psi0).norm(), 1e-15);
  }
}

TEST(PropagateClosed, NormAndPurityPreserved) {
  std::mt19937_64 rng(4);
  for (const auto& e : build_catalog()) {
    const auto states = propagate_closed(e.ham, random_schedule(e, rng), e.initial);
    for (const auto& psi : states) {
      EXPECT_NEAR(psi.norm(), 1.0, 1e-9);
      const CMatrix rho = psi * psi.adjoint();
      EXPECT_NEAR((rho * rho).trace().real(), 1.0, 1e-9);
    }
  }
}

TEST(PropagateOpen, ClosedLimitAgreement) {
  std::mt19937_64 rng(5);
  for (const auto& e : build_catalog()) {
    const PulseSchedule s = random_schedule(e, rng);
    const auto closed = propagate_closed(e.ham, s, e.initial);
    const auto ch = amplitude_damping_channels(e.n_qubits, 0.0);
    const auto open = propagate_open(e.ham, ch, s, DensityMatrix::pure(e.initial));
    const CMatrix rho_closed = closed.back() * closed.back().adjoint();
    EXPECT_LE((open.back().matrix - rho_closed).cwiseAbs().maxCoeff(), 1e-9) << e.id;
    EXPECT_NEAR(fidelity(open.back(), e.target), fidelity(closed.back(), e.target), 1e-9);
  }
}

TEST(PropagateOpen, AmplitudeDampingDecay) {
  const ControlledHamiltonian ham{CMatrix::Zero(2, 2), {}};
  const auto ch = amplitude_damping_channels(1, 0.01);
  const PulseSchedule s{2.0, AmplitudeMatrix(4, 0)};
  const auto states = propagate_open(ham, ch, s, DensityMatrix::pure(ket({0, 1})));
  EXPECT_NEAR(states.back().matrix(1, 1).real(), std::exp(-0.02), 1e-12);
  EXPECT_NEAR(fidelity(states.back(), ket({0, 1})), 0.980198673306755, 1e-12);
}

TEST(PropagateOpen, TraceHermiticityPositivity) {
  std::mt19937_64 rng(6);
  for (double gamma : {0.0, 0.01, 0.02}) {
    for (const auto& e : build_catalog()) {
      const auto ch = amplitude_damping_channels(e.n_qubits, gamma);
      const auto states = propagate_open(e.ham, ch, random_schedule(e, rng), DensityMatrix::pure(e.initial));
      for (const auto& rho : states) {
        EXPECT_NEAR(rho.matrix.trace().real(), 1.0, 1e-9);
        EXPECT_NEAR(rho.matrix.trace().imag(), 0.0, 1e-9);
        EXPECT_LE((rho.matrix - rho.matrix.adjoint()).cwiseAbs().maxCoeff(), 1e-9);
      }
      EXPECT_TRUE(states.back().is_valid(1e-9)) << e.id;
    }
  }
}

TEST(PropagateOpen, SegmentRefinementConsistency) {
  std::mt19937_64 rng(7);
  for (const auto& id : {"SQ2", "TQ26", "ThQ1"}) {
    const CatalogEntry& e = find_entry(build_catalog(), id);
    const PulseSchedule s = random_schedule(e, rng);
    PulseSchedule fine{s.total_time, AmplitudeMatrix(2 * s.segments(), s.n_controls())};
    for (int k = 0; k < s.segments(); ++k) {
      fine.amplitudes.row(2 * k) = s.amplitudes.row(k);
      fine.amplitudes.row(2 * k + 1) = s.amplitudes.row(k);
    }
    const auto ch = amplitude_damping_channels(e.n_qubits, 0.01);
    const auto rho0 = DensityMatrix::pure(e.initial);
    const auto a = propagate_open(e.ham, ch, s, rho0).back();
    const auto b = propagate_open(e.ham, ch, fine, rho0).back();
    EXPECT_LE((a.matrix - b.matrix).cwiseAbs().maxCoeff(), 1e-9);
    const auto pa = propagate_closed(e.ham, s, e.initial).back();
    const auto pb = propagate_closed(e.ham, fine, e.initial).back();
    EXPECT_LE((pa - pb).norm(), 1e-9);
  }
}

TEST(Fidelity, BasicValues) {
  EXPECT_EQ(fidelity(DensityMatrix::pure(ket({0, 1})), ket({0, 1})), 1.0);
  EXPECT_NEAR(fidelity(DensityMatrix{qla::identity(2) * 0.5}, ket({1, 0})), 0.5, 1e-15);
  EXPECT_THROW(fidelity(DensityMatrix{qla::identity(4)}, ket({1, 0})), std::invalid_argument);
}

TEST(Fidelity, ClampsOnlyNearBounds) {
  DensityMatrix rho{CMatrix::Zero(2, 2)};
  rho.matrix(0, 0) = 1.0 + 5e-10;
  EXPECT_EQ(fidelity(rho, ket({1, 0})), 1.0);
  rho.matrix(0, 0) = 1.0 + 1e-6;
  EXPECT_GT(fidelity(rho, ket({1, 0})), 1.0);
}

TEST(AmplitudeDamping, ChannelLayout) {
  const auto one = amplitude_damping_channels(1, 0.05);
  ASSERT_EQ(one.size(), 1u);
  EXPECT_EQ(one[0].op, qla::sigma_minus());
  EXPECT_EQ(one[0].rate, 0.05);
  const auto two = amplitude_damping_channels(2, 0.05);
  ASSERT_EQ(two.size(), 2u);
  EXPECT_EQ(two[0].op, qla::kron(qla::sigma_minus(), qla::identity(2)));
  EXPECT_EQ(two[1].op, qla::kron(qla::identity(2), qla::sigma_minus()));
  EXPECT_THROW(amplitude_damping_channels(1, -0.01), std::invalid_argument);
}

TEST(ControlledHamiltonianTest, ValidateRejectsNonHermitianAndBadDims) {
  ControlledHamiltonian ok{qla::sigma_z(), {qla::sigma_x()}};
  EXPECT_NO_THROW(ok.validate());
  ControlledHamiltonian bad{qla::sigma_minus(), {}};
  EXPECT_THROW(bad.validate(), std::invalid_argument);
  ControlledHamiltonian odd{qla::identity(3), {}};
  EXPECT_THROW(odd.validate(), std::invalid_argument);
}

TEST(PulseScheduleTest, Validation) {
  PulseSchedule s{1.0, AmplitudeMatrix::Constant(3, 2, 0.5)};
  EXPECT_NO_THROW(s.validate(2, 1.0));
  EXPECT_THROW(s.validate(1), std::invalid_argument);
  EXPECT_THROW(s.validate(2, 0.4), std::invalid_argument);
  PulseSchedule zero_t{0.0, AmplitudeMatrix::Zero(3, 2)};
  EXPECT_THROW(zero_t.validate(2), std::invalid_argument);
  EXPECT_DOUBLE_EQ(s.dt(), 1.0 / 3.0);
  EXPECT_EQ(s.segment(1).size(), 2u);
}

TEST(SegmentGeneratorTest, MatchesLiouvillianAndClosedForm) {
  const CatalogEntry& e = find_entry(build_catalog(), "TQ26");
  const auto ch = amplitude_damping_channels(2, 0.02);
  const std::vector<double> u{0.3, -0.7};
  const SegmentGenerator open(e.ham, ch, DynamicsMode::kOpen);
  EXPECT_LE((open.generator(u) - liouvillian(e.ham.at(u), ch)).cwiseAbs().maxCoeff(), 1e-14);
  const SegmentGenerator closed(e.ham, {}, DynamicsMode::kClosed);
  EXPECT_LE((closed.generator(u) - (-kI * e.ham.at(u))).cwiseAbs().maxCoeff(), 1e-14);
}

}  // namespace
}  // namespace mtqc
