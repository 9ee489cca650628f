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

#pragma once

#include <complex>
#include <string_view>

#include <Eigen/Dense>

/// Dense complex linear algebra for Hilbert spaces of dimension 2, 4 and 8
/// and their 64x64 superoperators. Storage is Eigen's column-major dense
/// matrices; everything here is a pure function.
namespace mtqc::qla {

using Complex = std::complex<double>;
using CMatrix = Eigen::MatrixXcd;
using CVector = Eigen::VectorXcd;

inline constexpr Complex kI{0.0, 1.0};

CMatrix identity(Eigen::Index dim);

CMatrix sigma_x();
CMatrix sigma_y();
CMatrix sigma_z();
/// Lowering operator |0><1|; |1> is the excited state.
CMatrix sigma_minus();

/// Single-qubit operator from one of the letters I, X, Y, Z.
CMatrix pauli(char letter);

/// Tensor product of Pauli letters, leftmost letter acts on qubit 1.
/// "ZX" is sigma_z (x) sigma_x.
CMatrix pauli_string(std::string_view letters);

CMatrix kron(const CMatrix& a, const CMatrix& b);

/// Matrix exponential by scaling and squaring with a degree-13 Pade
/// approximant. Throws std::invalid_argument for non-square input.
CMatrix matexp(const CMatrix& a);

CMatrix dagger(const CMatrix& a);
Complex trace(const CMatrix& a);

// Shape-checked arithmetic; all throw std::invalid_argument on mismatch.
CMatrix matmul(const CMatrix& a, const CMatrix& b);
CVector matvec(const CMatrix& a, const CVector& v);
CMatrix add(const CMatrix& a, const CMatrix& b);
CMatrix scale(const CMatrix& a, Complex s);

bool is_hermitian(const CMatrix& a, double tol);
bool all_finite(const CMatrix& a);

/// Column-stacking vectorization: columns of `a` laid end to end.
CVector vec(const CMatrix& a);
CMatrix unvec(const CVector& v, Eigen::Index dim);

}  // namespace mtqc::qla
