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
#include <random>
#include <stdexcept>
#include <string>

namespace mtqc {

using qla::Complex;
using qla::kI;

const char* to_string(DynamicsMode mode) {
  return mode == DynamicsMode::kClosed ? "closed" : "open";
}

DynamicsMode parse_dynamics_mode(std::string_view text) {
  if (text == "closed") return DynamicsMode::kClosed;
  if (text == "open") return DynamicsMode::kOpen;
  throw std::invalid_argument("unknown dynamics mode '" + std::string(text) + "'");
}

CMatrix ControlledHamiltonian::at(std::span<const double> amplitudes) const {
  if (amplitudes.size() != controls.size()) {
    throw std::invalid_argument("ControlledHamiltonian::at: expected " +
                                std::to_string(controls.size()) + " amplitudes");
  }
  CMatrix h = drift;
  for (std::size_t j = 0; j < controls.size(); ++j) {
    h += amplitudes[j] * controls[j];
  }
  return h;
}

void ControlledHamiltonian::validate() const {
  const Eigen::Index d = dim();
  if (d != 2 && d != 4 && d != 8) {
    throw std::invalid_argument("Hamiltonian dimension must be 2, 4 or 8");
  }
  if (!qla::is_hermitian(drift, 1e-12)) {
    throw std::invalid_argument("drift is not Hermitian");
  }
  for (const auto& c : controls) {
    if (c.rows() != d || c.cols() != d) {
      throw std::invalid_argument("control dimension does not match drift");
    }
    if (!qla::is_hermitian(c, 1e-12)) {
      throw std::invalid_argument("control operator is not Hermitian");
    }
  }
}

std::span<const double> PulseSchedule::segment(int k) const {
  if (k < 0 || k >= segments()) {
    throw std::out_of_range("pulse schedule: segment index out of range");
  }
  return {amplitudes.data() + static_cast<std::ptrdiff_t>(k) * amplitudes.cols(),
          static_cast<std::size_t>(amplitudes.cols())};
}

void PulseSchedule::validate(std::size_t n_channels, std::optional<double> bound) const {
  if (!(total_time > 0.0) || !std::isfinite(total_time)) {
    throw std::invalid_argument("pulse schedule: total time must be positive");
  }
  if (segments() < 1) {
    throw std::invalid_argument("pulse schedule: at least one segment required");
  }
  if (static_cast<std::size_t>(n_controls()) != n_channels) {
    throw std::invalid_argument("pulse schedule: has " + std::to_string(n_controls()) +
                                " channels, system has " + std::to_string(n_channels));
  }
  if (!amplitudes.allFinite()) {
    throw std::invalid_argument("pulse schedule: non-finite amplitude");
  }
  if (bound && amplitudes.size() > 0 && amplitudes.cwiseAbs().maxCoeff() > *bound) {
    throw std::invalid_argument("pulse schedule: amplitude exceeds bound");
  }
}

DensityMatrix DensityMatrix::pure(const CVector& psi) {
  return {psi * psi.adjoint()};
}

bool DensityMatrix::is_valid(double tol, int probes, unsigned seed) const {
  if (!qla::is_hermitian(matrix, tol)) return false;
  if (std::abs(matrix.trace() - Complex(1.0, 0.0)) > tol) return false;
  std::mt19937 rng(seed);
  std::normal_distribution<double> normal;
  for (int p = 0; p < probes; ++p) {
    CVector v(dim());
    for (Eigen::Index k = 0; k < v.size(); ++k) v[k] = Complex(normal(rng), normal(rng));
    v.normalize();
    if ((v.adjoint() * matrix * v)(0, 0).real() < -tol) return false;
  }
  return true;
}

CMatrix commutator_superoperator(const CMatrix& h) {
  const CMatrix ident = qla::identity(h.rows());
  return -kI * (qla::kron(ident, h) - qla::kron(h.transpose(), ident));
}

CMatrix liouvillian(const CMatrix& h, std::span<const LindbladChannel> channels) {
  if (h.rows() != h.cols()) {
    throw std::invalid_argument("liouvillian: Hamiltonian is not square");
  }
  const Eigen::Index d = h.rows();
  const CMatrix ident = qla::identity(d);
  CMatrix g = commutator_superoperator(h);
  for (const auto& ch : channels) {
    if (ch.op.rows() != d || ch.op.cols() != d) {
      throw std::invalid_argument("liouvillian: Lindblad operator dimension mismatch");
    }
    if (ch.rate < 0.0) {
      throw std::invalid_argument("liouvillian: negative decay rate");
    }
    const CMatrix ldl = ch.op.adjoint() * ch.op;
    g += ch.rate * (qla::kron(ch.op.conjugate(), ch.op) - 0.5 * qla::kron(ident, ldl) -
                    0.5 * qla::kron(ldl.transpose(), ident));
  }
  return g;
}

std::vector<LindbladChannel> amplitude_damping_channels(int n_qubits, double gamma) {
  if (gamma < 0.0) {
    throw std::invalid_argument("amplitude damping: gamma must be non-negative");
  }
  if (n_qubits < 1) {
    throw std::invalid_argument("amplitude damping: need at least one qubit");
  }
  std::vector<LindbladChannel> out;
  for (int q = 0; q < n_qubits; ++q) {
    CMatrix op = q == 0 ? qla::sigma_minus() : qla::identity(2);
    for (int k = 1; k < n_qubits; ++k) {
      op = qla::kron(op, k == q ? qla::sigma_minus() : qla::identity(2));
    }
    out.push_back({std::move(op), gamma});
  }
  return out;
}

std::vector<LindbladChannel> with_uniform_rate(std::vector<LindbladChannel> channels,
                                               double gamma) {
  if (gamma < 0.0) {
    throw std::invalid_argument("decay rate must be non-negative");
  }
  for (auto& ch : channels) ch.rate = gamma;
  return channels;
}

namespace {

void check_schedule(const ControlledHamiltonian& ham, const PulseSchedule& schedule) {
  schedule.validate(ham.n_controls());
}

}  // namespace

std::vector<CVector> propagate_closed(const ControlledHamiltonian& ham,
                                      const PulseSchedule& schedule, const CVector& psi0) {
  check_schedule(ham, schedule);
  if (psi0.size() != ham.dim()) {
    throw std::invalid_argument("propagate_closed: state dimension mismatch");
  }
  const SegmentGenerator gen(ham, {}, DynamicsMode::kClosed);
  std::vector<CVector> states;
  states.reserve(schedule.segments());
  CVector psi = psi0;
  for (int k = 0; k < schedule.segments(); ++k) {
    psi = gen.propagator(schedule.segment(k), schedule.dt()) * psi;
    states.push_back(psi);
  }
  return states;
}

std::vector<DensityMatrix> propagate_open(const ControlledHamiltonian& ham,
                                          std::span<const LindbladChannel> channels,
                                          const PulseSchedule& schedule,
                                          const DensityMatrix& rho0) {
  check_schedule(ham, schedule);
  const Eigen::Index d = ham.dim();
  if (rho0.dim() != d) {
    throw std::invalid_argument("propagate_open: density matrix dimension mismatch");
  }
  const SegmentGenerator gen(ham, {channels.begin(), channels.end()}, DynamicsMode::kOpen);
  std::vector<DensityMatrix> states;
  states.reserve(schedule.segments());
  CVector r = qla::vec(rho0.matrix);
  for (int k = 0; k < schedule.segments(); ++k) {
    r = gen.propagator(schedule.segment(k), schedule.dt()) * r;
    states.push_back({qla::unvec(r, d)});
  }
  return states;
}

namespace {

double clamp_fidelity(double f) {
  constexpr double kSlack = 1e-9;
  if (f < 0.0 && f > -kSlack) return 0.0;
  if (f > 1.0 && f < 1.0 + kSlack) return 1.0;
  return f;
}

}  // namespace

double fidelity(const DensityMatrix& rho, const CVector& target) {
  if (rho.dim() != target.size()) {
    throw std::invalid_argument("fidelity: dimension mismatch");
  }
  return clamp_fidelity((target.adjoint() * rho.matrix * target)(0, 0).real());
}

double fidelity(const CVector& psi, const CVector& target) {
  if (psi.size() != target.size()) {
    throw std::invalid_argument("fidelity: dimension mismatch");
  }
  return clamp_fidelity(std::norm(target.dot(psi)));
}

SegmentGenerator::SegmentGenerator(const ControlledHamiltonian& ham,
                                   std::vector<LindbladChannel> channels, DynamicsMode mode)
    : mode_(mode), dim_(ham.dim()) {
  if (mode == DynamicsMode::kClosed) {
    base_ = -kI * ham.drift;
    for (const auto& c : ham.controls) control_generators_.push_back(-kI * c);
  } else {
    base_ = liouvillian(ham.drift, channels);
    for (const auto& c : ham.controls) {
      control_generators_.push_back(commutator_superoperator(c));
    }
  }
}

CMatrix SegmentGenerator::generator(std::span<const double> amplitudes) const {
  if (amplitudes.size() != control_generators_.size()) {
    throw std::invalid_argument("SegmentGenerator: amplitude count mismatch");
  }
  CMatrix g = base_;
  for (std::size_t j = 0; j < control_generators_.size(); ++j) {
    if (amplitudes[j] != 0.0) g += amplitudes[j] * control_generators_[j];
  }
  return g;
}

CMatrix SegmentGenerator::propagator(std::span<const double> amplitudes, double dt) const {
  return qla::matexp(generator(amplitudes) * dt);
}

}  // namespace mtqc
