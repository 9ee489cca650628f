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

#include "mtqc/qla.hpp"

#include <cmath>
#include <numbers>
#include <random>

#include <gtest/gtest.h>

namespace mtqc::qla {
namespace {

CMatrix random_matrix(Eigen::Index n, double norm, std::mt19937_64& rng) {
  std::normal_distribution<double> g;
  CMatrix a(n, n);
  for (Eigen::Index k = 0; k < a.size(); ++k) a.data()[k] = Complex(g(rng), g(rng));
  return a * (norm / a.norm());
}

CMatrix random_hermitian(Eigen::Index n, std::mt19937_64& rng) {
  const CMatrix a = random_matrix(n, 1.0, rng);
  return (a + a.adjoint()) * 0.5;
}

// Plain Taylor series, independent of the Pade implementation.
CMatrix taylor_exp(const CMatrix& a) {
  CMatrix term = CMatrix::Identity(a.rows(), a.cols());
  CMatrix sum = term;
  for (int k = 1; k < 60; ++k) {
    term = term * a / static_cast<double>(k);
    sum += term;
  }
  return sum;
}

TEST(Qla, KronIdentity) {
  EXPECT_TRUE(kron(identity(2), identity(2)).isApprox(identity(4)));
}

TEST(Qla, KronSigmaZDiagonal) {
  const CMatrix k = kron(sigma_z(), identity(2));
  const Eigen::Vector4d expected(1, 1, -1, -1);
  for (int i = 0; i < 4; ++i) EXPECT_EQ(k(i, i), Complex(expected[i], 0));
  EXPECT_EQ((k - CMatrix(k.diagonal().asDiagonal())).norm(), 0.0);
}

TEST(Qla, KronSigmaXSigmaXIsAntiDiagonal) {
  const CMatrix k = kron(sigma_x(), sigma_x());
  for (int i = 0; i < 4; ++i) {
    for (int j = 0; j < 4; ++j) EXPECT_EQ(k(i, j), Complex(i + j == 3 ? 1.0 : 0.0, 0.0));
  }
}

TEST(Qla, KronAssociative) {
  std::mt19937_64 rng(3);
  const CMatrix a = random_matrix(2, 1, rng), b = random_matrix(2, 1, rng), c = random_matrix(2, 1, rng);
  EXPECT_LE((kron(kron(a, b), c) - kron(a, kron(b, c))).cwiseAbs().maxCoeff(), 1e-12);
}

TEST(Qla, MatexpZeroIsIdentity) {
  EXPECT_EQ(matexp(CMatrix::Zero(4, 4)), identity(4));
}

TEST(Qla, MatexpRabiClosedForm) {
  const CMatrix u = matexp(-kI * (std::numbers::pi / 2) * sigma_x());
  EXPECT_LE((u - (-kI * sigma_x())).cwiseAbs().maxCoeff(), 1e-14);
}

TEST(Qla, MatexpDiagonal) {
  CMatrix d = CMatrix::Zero(2, 2);
  d(0, 0) = Complex(0.3, -1.2);
  d(1, 1) = Complex(-2.5, 0.4);
  const CMatrix e = matexp(d);
  EXPECT_LE(std::abs(e(0, 0) - std::exp(d(0, 0))), 1e-14);
  EXPECT_LE(std::abs(e(1, 1) - std::exp(d(1, 1))), 1e-14);
  EXPECT_EQ(e(0, 1), Complex(0, 0));
}

TEST(Qla, MatexpMatchesTaylorOracle) {
  std::mt19937_64 rng(11);
  for (Eigen::Index n : {2, 4, 8, 16, 64}) {
    for (int trial = 0; trial < 10; ++trial) {
      std::uniform_real_distribution<double> norm(0.01, 1.0);
      const CMatrix a = random_matrix(n, norm(rng), rng);
      const CMatrix oracle = taylor_exp(a);
      EXPECT_LE((matexp(a) - oracle).norm() / oracle.norm(), 1e-10) << "n=" << n;
    }
  }
}

TEST(Qla, MatexpLargeNormMatchesEigenOracle) {
  std::mt19937_64 rng(5);
  for (Eigen::Index n : {2, 4, 8}) {
    const CMatrix h = random_hermitian(n, rng) * 40.0;
    Eigen::SelfAdjointEigenSolver<CMatrix> es(h);
    const CVector phases = (-kI * es.eigenvalues().cast<Complex>()).array().exp();
    const CMatrix oracle = es.eigenvectors() * phases.asDiagonal() * es.eigenvectors().adjoint();
    EXPECT_LE((matexp(-kI * h) - oracle).cwiseAbs().maxCoeff(), 1e-9);
  }
}

TEST(Qla, MatexpUnitaryForHermitianGenerators) {
  std::mt19937_64 rng(8);
  for (int trial = 0; trial < 20; ++trial) {
    const CMatrix h = random_hermitian(8, rng);
    const CMatrix u = matexp(-kI * h * 7.3);
    EXPECT_LE((u.adjoint() * u - identity(8)).cwiseAbs().maxCoeff(), 1e-9);
  }
}

TEST(Qla, MatexpCommutingSum) {
  std::mt19937_64 rng(9);
  std::normal_distribution<double> g;
  CMatrix a = CMatrix::Zero(4, 4), b = CMatrix::Zero(4, 4);
  for (int i = 0; i < 4; ++i) {
    a(i, i) = Complex(g(rng), g(rng));
    b(i, i) = Complex(g(rng), g(rng));
  }
  // Rotate both into the same non-diagonal basis.
  const CMatrix q = matexp(-kI * random_hermitian(4, rng));
  a = q * a * q.adjoint();
  b = q * b * q.adjoint();
  EXPECT_LE((matexp(a + b) - matexp(a) * matexp(b)).cwiseAbs().maxCoeff(), 1e-9);
}

TEST(Qla, MatexpRejectsNonSquare) {
  EXPECT_THROW(matexp(CMatrix::Zero(2, 3)), std::invalid_argument);
}

TEST(Qla, DaggerTraceMatvec) {
  EXPECT_EQ(dagger(sigma_y()), sigma_y());
  EXPECT_EQ(trace(identity(4)), Complex(4, 0));
  CVector zero(2);
  zero << 1, 0;
  CVector one(2);
  one << 0, 1;
  EXPECT_EQ(matvec(sigma_x(), zero), one);
}

TEST(Qla, ShapeChecks) {
  EXPECT_THROW(matmul(CMatrix::Zero(2, 2), CMatrix::Zero(4, 4)), std::invalid_argument);
  EXPECT_THROW(matvec(CMatrix::Zero(2, 2), CVector::Zero(4)), std::invalid_argument);
  EXPECT_THROW(add(CMatrix::Zero(2, 2), CMatrix::Zero(4, 4)), std::invalid_argument);
}

TEST(Qla, PauliStringOrdersQubitsLeftToRight) {
  EXPECT_EQ(pauli_string("ZX"), kron(sigma_z(), sigma_x()));
  EXPECT_EQ(pauli_string("IXZ"), kron(identity(2), kron(sigma_x(), sigma_z())));
}

TEST(Qla, SigmaMinusLowersOneToZero) {
  CVector one(2);
  one << 0, 1;
  CVector zero(2);
  zero << 1, 0;
  EXPECT_EQ(sigma_minus() * one, zero);
}

TEST(Qla, VecUnvecRoundTripColumnStacking) {
  CMatrix m(2, 2);
  m << 1, 2, 3, 4;
  const CVector v = vec(m);
  EXPECT_EQ(v(1), Complex(3, 0));  // column 0 first
  EXPECT_EQ(unvec(v, 2), m);
}

TEST(Qla, HermitianAndFiniteChecks) {
  EXPECT_TRUE(is_hermitian(sigma_y(), 1e-12));
  EXPECT_FALSE(is_hermitian(sigma_minus(), 1e-12));
  CMatrix bad = identity(2);
  bad(0, 1) = Complex(std::nan(""), 0);
  EXPECT_FALSE(all_finite(bad));
}

}  // namespace
}  // namespace mtqc::qla
