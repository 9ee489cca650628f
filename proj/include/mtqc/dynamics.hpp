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

#include <optional>
#include <span>
#include <vector>

#include "mtqc/qla.hpp"

/// Piecewise-constant closed (Schrodinger) and open (Lindblad) evolution.
///
/// Density matrices are vectorized by column stacking, so for the generator
/// G returned by liouvillian() we have d vec(rho)/dt = G vec(rho) with
///
///   G = -i (I (x) H - H^T (x) I)
///       + sum_k rate_k ( conj(L_k) (x) L_k - 1/2 I (x) L_k^dag L_k
///                        - 1/2 (L_k^dag L_k)^T (x) I ).
namespace mtqc {

using qla::CMatrix;
using qla::CVector;

enum class DynamicsMode { kClosed, kOpen };

const char* to_string(DynamicsMode mode);
DynamicsMode parse_dynamics_mode(std::string_view text);

/// H(t) = drift + sum_j u_j(t) controls[j]. Energies in units with hbar = 1.
struct ControlledHamiltonian {
  CMatrix drift;
  std::vector<CMatrix> controls;

  Eigen::Index dim() const { return drift.rows(); }
  std::size_t n_controls() const { return controls.size(); }

  /// Hamiltonian for one segment with the given control amplitudes.
  CMatrix at(std::span<const double> amplitudes) const;

  /// Throws std::invalid_argument unless every operator is Hermitian and the
  /// dimensions agree.
  void validate() const;
};

/// Dissipator term rate * D[op]; the rate carries the sqrt(rate) that is
/// often folded into the jump operator.
struct LindbladChannel {
  CMatrix op;
  double rate = 0.0;
};

using AmplitudeMatrix = Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;

/// Amplitudes are stored segments x channels, row-major so one segment is a
/// contiguous span. Every segment lasts total_time / segments().
struct PulseSchedule {
  double total_time = 0.0;
  AmplitudeMatrix amplitudes;

  int segments() const { return static_cast<int>(amplitudes.rows()); }
  int n_controls() const { return static_cast<int>(amplitudes.cols()); }
  double dt() const { return total_time / segments(); }

  std::span<const double> segment(int k) const;

  /// Throws std::invalid_argument if T <= 0, N < 1, the channel count is
  /// not `n_controls`, or (when given) an amplitude exceeds `bound`.
  void validate(std::size_t n_controls, std::optional<double> bound = std::nullopt) const;
};

struct DensityMatrix {
  CMatrix matrix;

  static DensityMatrix pure(const CVector& psi);
  Eigen::Index dim() const { return matrix.rows(); }

  /// Hermitian, unit trace, and <v|rho|v> >= -tol on `probes` random vectors.
  bool is_valid(double tol, int probes = 8, unsigned seed = 7) const;
};

CMatrix liouvillian(const CMatrix& h, std::span<const LindbladChannel> channels);

/// -i (I (x) H - H^T (x) I): the commutator part of the generator.
CMatrix commutator_superoperator(const CMatrix& h);

/// Per-qubit amplitude damping: sigma_minus embedded on each qubit in turn,
/// all with the same rate. Throws std::invalid_argument for gamma < 0.
std::vector<LindbladChannel> amplitude_damping_channels(int n_qubits, double gamma);

/// Copy of `channels` with every rate replaced by `gamma`.
std::vector<LindbladChannel> with_uniform_rate(std::vector<LindbladChannel> channels, double gamma);

/// Returns the state after each of the N segments.
std::vector<CVector> propagate_closed(const ControlledHamiltonian& ham,
                                      const PulseSchedule& schedule, const CVector& psi0);

std::vector<DensityMatrix> propagate_open(const ControlledHamiltonian& ham,
                                          std::span<const LindbladChannel> channels,
                                          const PulseSchedule& schedule,
                                          const DensityMatrix& rho0);

/// <target|rho|target>, clamped into [0, 1] only when within 1e-9 of a bound.
double fidelity(const DensityMatrix& rho, const CVector& target);
/// |<target|psi>|^2.
double fidelity(const CVector& psi, const CVector& target);

/// Segment generators with the amplitude-independent pieces cached:
/// G(u) = G_0 + sum_j u_j G_j. Used wherever the same system is stepped
/// many times (environment, GRAPE, robustness sampling).
class SegmentGenerator {
 public:
  SegmentGenerator(const ControlledHamiltonian& ham, std::vector<LindbladChannel> channels,
                   DynamicsMode mode);

  DynamicsMode mode() const { return mode_; }
  Eigen::Index dim() const { return dim_; }
  std::size_t n_controls() const { return control_generators_.size(); }

  /// Closed mode: -i H(u). Open mode: the Liouvillian G(u).
  CMatrix generator(std::span<const double> amplitudes) const;
  /// d generator / d u_j (closed: -i H_j, open: commutator superoperator).
  const CMatrix& control_generator(std::size_t j) const { return control_generators_[j]; }

  /// exp(generator(u) * dt).
  CMatrix propagator(std::span<const double> amplitudes, double dt) const;

 private:
  DynamicsMode mode_;
  Eigen::Index dim_;
  CMatrix base_;
  std::vector<CMatrix> control_generators_;
};

}  // namespace mtqc
