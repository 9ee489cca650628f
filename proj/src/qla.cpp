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

#include <array>
#include <cmath>
#include <stdexcept>
#include <string>

namespace mtqc::qla {

namespace {

void require_same_shape(const CMatrix& a, const CMatrix& b, const char* op) {
  if (a.rows() != b.rows() || a.cols() != b.cols()) {
    throw std::invalid_argument(std::string(op) + ": dimension mismatch");
  }
}

// Higham (2005) degree-13 coefficients and the matching 1-norm bound.
constexpr std::array<double, 14> kPade13 = {
    64764752532480000.0, 32382376266240000.0, 7771770303897600.0,
    1187353796428800.0,  129060195264000.0,   10559470521600.0,
    670442572800.0,      33522128640.0,       1323241920.0,
    40840800.0,          960960.0,            16380.0,
    182.0,               1.0};
constexpr double kTheta13 = 5.371920351148152;

double one_norm(const CMatrix& a) {
  return a.cwiseAbs().colwise().sum().maxCoeff();
}

}  // namespace

CMatrix identity(Eigen::Index dim) { return CMatrix::Identity(dim, dim); }

CMatrix sigma_x() {
  CMatrix m(2, 2);
  m << 0.0, 1.0, 1.0, 0.0;
  return m;
}

CMatrix sigma_y() {
  CMatrix m(2, 2);
  m << 0.0, -kI, kI, 0.0;
  return m;
}

CMatrix sigma_z() {
  CMatrix m(2, 2);
  m << 1.0, 0.0, 0.0, -1.0;
  return m;
}

CMatrix sigma_minus() {
  CMatrix m(2, 2);
  m << 0.0, 1.0, 0.0, 0.0;
  return m;
}

CMatrix pauli(char letter) {
  switch (letter) {
    case 'I':
      return identity(2);
    case 'X':
      return sigma_x();
    case 'Y':
      return sigma_y();
    case 'Z':
      return sigma_z();
    default:
      throw std::invalid_argument(std::string("unknown Pauli letter '") + letter + "'");
  }
}

CMatrix pauli_string(std::string_view letters) {
  if (letters.empty()) {
    throw std::invalid_argument("pauli_string: empty string");
  }
  CMatrix out = pauli(letters.front());
  for (std::size_t k = 1; k < letters.size(); ++k) {
    out = kron(out, pauli(letters[k]));
  }
  return out;
}

CMatrix kron(const CMatrix& a, const CMatrix& b) {
  CMatrix out(a.rows() * b.rows(), a.cols() * b.cols());
  for (Eigen::Index i = 0; i < a.rows(); ++i) {
    for (Eigen::Index j = 0; j < a.cols(); ++j) {
      out.block(i * b.rows(), j * b.cols(), b.rows(), b.cols()) = a(i, j) * b;
    }
  }
  return out;
}

CMatrix matexp(const CMatrix& a) {
  if (a.rows() != a.cols()) {
    throw std::invalid_argument("matexp: matrix is not square");
  }
  const Eigen::Index n = a.rows();
  if (n == 0) return a;

  int squarings = 0;
  const double norm = one_norm(a);
  if (norm == 0.0) return identity(n);
  if (norm > kTheta13) {
    squarings = static_cast<int>(std::ceil(std::log2(norm / kTheta13)));
  }
  const CMatrix x = a * std::ldexp(1.0, -squarings);

  const CMatrix ident = identity(n);
  const CMatrix x2 = x * x;
  const CMatrix x4 = x2 * x2;
  const CMatrix x6 = x4 * x2;
  const auto& b = kPade13;

  CMatrix inner_u = b[13] * x6 + b[11] * x4 + b[9] * x2;
  CMatrix u = x6 * inner_u;
  u += b[7] * x6 + b[5] * x4 + b[3] * x2 + b[1] * ident;
  u = x * u;

  CMatrix inner_v = b[12] * x6 + b[10] * x4 + b[8] * x2;
  CMatrix v = x6 * inner_v;
  v += b[6] * x6 + b[4] * x4 + b[2] * x2 + b[0] * ident;

  CMatrix r = (v - u).partialPivLu().solve(v + u);
  for (int k = 0; k < squarings; ++k) {
    r = r * r;
  }
  return r;
}

CMatrix dagger(const CMatrix& a) { return a.adjoint(); }

Complex trace(const CMatrix& a) {
  if (a.rows() != a.cols()) {
    throw std::invalid_argument("trace: matrix is not square");
  }
  return a.trace();
}

CMatrix matmul(const CMatrix& a, const CMatrix& b) {
  if (a.cols() != b.rows()) {
    throw std::invalid_argument("matmul: dimension mismatch");
  }
  return a * b;
}

CVector matvec(const CMatrix& a, const CVector& v) {
  if (a.cols() != v.size()) {
    throw std::invalid_argument("matvec: dimension mismatch");
  }
  return a * v;
}

CMatrix add(const CMatrix& a, const CMatrix& b) {
  require_same_shape(a, b, "add");
  return a + b;
}

CMatrix scale(const CMatrix& a, Complex s) { return s * a; }

bool is_hermitian(const CMatrix& a, double tol) {
  if (a.rows() != a.cols()) return false;
  return (a - a.adjoint()).cwiseAbs().maxCoeff() <= tol;
}

bool all_finite(const CMatrix& a) {
  for (Eigen::Index k = 0; k < a.size(); ++k) {
    const Complex z = a.data()[k];
    if (!std::isfinite(z.real()) || !std::isfinite(z.imag())) return false;
  }
  return true;
}

CVector vec(const CMatrix& a) {
  return Eigen::Map<const CVector>(a.data(), a.size());
}

CMatrix unvec(const CVector& v, Eigen::Index dim) {
  if (v.size() != dim * dim) {
    throw std::invalid_argument("unvec: length is not dim^2");
  }
  return Eigen::Map<const CMatrix>(v.data(), dim, dim);
}

}  // namespace mtqc::qla
