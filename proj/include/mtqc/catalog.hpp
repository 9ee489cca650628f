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

#include <array>
#include <cstdint>
#include <map>
#include <string>
#include <string_view>
#include <vector>

#include "json.hpp"

#include "mtqc/dynamics.hpp"

namespace mtqc {

/// coeff * (Pauli letters), leftmost letter on qubit 1: {0.5, "ZI"}.
struct PauliTerm {
  double coeff = 1.0;
  std::string letters;
};

/// Six-number condition vector fed to the policy alongside the state.
struct SystemDescriptor {
  int system_size = 1;       // qubits
  int n_controls = 1;
  double static_strength = 0.0;
  bool has_x = false;
  bool has_y = false;
  bool has_z = false;

  std::array<double, 6> as_array() const;
  friend bool operator==(const SystemDescriptor&, const SystemDescriptor&) = default;
};

struct CatalogEntry {
  std::string id;
  int n_qubits = 1;
  std::vector<PauliTerm> drift_terms;
  std::vector<std::vector<PauliTerm>> control_terms;
  std::string initial_name;
  std::string target_name;

  ControlledHamiltonian ham;
  CVector initial;
  CVector target;
  SystemDescriptor descriptor;
  /// Multiplier on u_max for this system.
  double amplitude_scale = 1.0;

  Eigen::Index dim() const { return ham.dim(); }
  std::size_t n_controls() const { return ham.n_controls(); }
};

/// Normalized state for a name from the catalog notation: "0", "1", "+",
/// "-", "Phi+", "Phi-", "Psi+", "Psi-" (the Greek spellings are accepted as
/// aliases), "++", "+++", "D31", "GHZ", computational basis kets such as
/// "010", and the three phase/sign variants used by individual rows:
/// "1-0" = (|1>-|0>)/sqrt2, "10+11" = (|10>+|11>)/sqrt2, "-i010" = -i|010>.
/// `dim` must match the named state's dimension. Throws std::invalid_argument.
CVector named_state(std::string_view name, Eigen::Index dim);

CMatrix operator_from_terms(const std::vector<PauliTerm>& terms, int n_qubits);

/// c1 = qubits, c2 = controls, c3 = largest |coefficient| among drift terms
/// (0 for driftless systems), c4..c6 flag X/Y/Z anywhere in drift or controls.
SystemDescriptor descriptor_of(const CatalogEntry& entry);

/// The 51 systems SQ1-SQ21, TQ1-TQ26, ThQ1-ThQ4 in that order.
const std::vector<CatalogEntry>& build_catalog();

/// Catalog with per-id amplitude-scale overrides applied.
std::vector<CatalogEntry> build_catalog(const std::map<std::string, double>& scale_overrides);

/// The five-system base set used to seed progressive expansion.
std::vector<std::string> table1_ids();

const CatalogEntry& find_entry(const std::vector<CatalogEntry>& catalog, std::string_view id);

/// Resolves "all", "table1", "single", "two", "three" or a comma-separated
/// id list (the keywords may be mixed with ids). Unknown ids throw.
std::vector<std::string> resolve_system_ids(const std::vector<CatalogEntry>& catalog,
                                            std::string_view selector);

/// Machine-readable export: ids, operator matrices as nested [re, im]
/// arrays, states, descriptors and amplitude scales.
nlohmann::json catalog_to_json(const std::vector<CatalogEntry>& catalog);

/// FNV-1a over the compact JSON export. Identifies the catalog a checkpoint
/// was trained against.
std::uint64_t catalog_hash(const std::vector<CatalogEntry>& catalog);

}  // namespace mtqc
