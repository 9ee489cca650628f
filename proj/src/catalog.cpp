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

#include "mtqc/catalog.hpp"

#include <algorithm>
#include <cmath>
#include <set>
#include <sstream>
#include <stdexcept>

#include "mtqc/seeding.hpp"

namespace mtqc {

namespace {

using Terms = std::vector<PauliTerm>;

struct RowSpec {
  const char* id;
  int n_qubits;
  Terms drift;
  std::vector<Terms> controls;
  const char* initial;
  const char* target;
  double amplitude_scale = 1.0;
};

// Driftless multi-qubit systems need stronger drives than u_max = 1.
constexpr double kDriftlessMultiQubitScale = 2.0;

Terms single(const char* letters, double coeff = 1.0) { return {{coeff, letters}}; }

// One control per Pauli axis in `axes`, acting on `qubit` (1-based) of a
// two-qubit system.
std::vector<Terms> local_controls(int qubit, std::string_view axes) {
  std::vector<Terms> out;
  for (char a : axes) {
    std::string letters = "II";
    letters[qubit - 1] = a;
    out.push_back({{1.0, letters}});
  }
  return out;
}

std::vector<Terms> two_qubit_controls(std::string_view first, std::string_view second) {
  auto out = local_controls(1, first);
  auto rest = local_controls(2, second);
  out.insert(out.end(), rest.begin(), rest.end());
  return out;
}

Terms couplings(std::string_view axes) {
  Terms out;
  for (char a : axes) out.push_back({1.0, std::string(2, a)});
  return out;
}

Terms singles(std::string_view axes, double coeff) {
  Terms out;
  for (char a : axes) out.push_back({coeff, std::string(1, a)});
  return out;
}

std::vector<Terms> single_qubit_controls(std::string_view axes) {
  std::vector<Terms> out;
  for (char a : axes) out.push_back({{1.0, std::string(1, a)}});
  return out;
}

Terms collective(char axis) {
  Terms out;
  for (int q = 0; q < 3; ++q) {
    std::string letters = "III";
    letters[q] = axis;
    out.push_back({1.0, letters});
  }
  return out;
}

std::vector<RowSpec> catalog_rows() {
  std::vector<RowSpec> rows;

  // Single-qubit systems.
  rows.push_back({"SQ1", 1, {}, {{{1.0, "X"}, {1.0, "Z"}}}, "+", "0"});
  rows.push_back({"SQ2", 1, single("X"), single_qubit_controls("Z"), "0", "1"});
  rows.push_back({"SQ3", 1, single("Z"), single_qubit_controls("X"), "0", "1"});
  rows.push_back({"SQ4", 1, single("X"), {{{1.0, "X"}, {1.0, "Z"}}}, "+", "1"});
  rows.push_back({"SQ5", 1, {}, single_qubit_controls("YZ"), "0", "1"});
  rows.push_back({"SQ6", 1, {}, single_qubit_controls("XYZ"), "0", "+"});
  rows.push_back({"SQ7", 1, singles("X", 0.5), single_qubit_controls("XYZ"), "0", "1"});
  rows.push_back({"SQ8", 1, singles("Y", 0.5), single_qubit_controls("Z"), "1", "0"});
  rows.push_back({"SQ9", 1, singles("Y", 0.5), single_qubit_controls("XYZ"), "1", "+"});
  rows.push_back({"SQ10", 1, singles("Z", 0.5), single_qubit_controls("X"), "0", "1"});
  rows.push_back({"SQ11", 1, singles("Z", 0.5), single_qubit_controls("XZ"), "0", "1"});
  rows.push_back({"SQ12", 1, singles("Z", 0.5), single_qubit_controls("XYZ"), "0", "+"});
  rows.push_back({"SQ13", 1, singles("XY", 0.5), single_qubit_controls("XY"), "1", "-"});
  rows.push_back({"SQ14", 1, singles("XY", 0.5), single_qubit_controls("XYZ"), "0", "1-0"});
  rows.push_back({"SQ15", 1, singles("XZ", 0.5), single_qubit_controls("Z"), "0", "1"});
  rows.push_back({"SQ16", 1, singles("XZ", 0.5), single_qubit_controls("XZ"), "0", "+"});
  rows.push_back({"SQ17", 1, singles("XZ", 0.5), single_qubit_controls("XYZ"), "1", "0"});
  rows.push_back({"SQ18", 1, singles("YZ", 0.5), single_qubit_controls("X"), "0", "+"});
  rows.push_back({"SQ19", 1, singles("YZ", 0.5), single_qubit_controls("XYZ"), "1", "0"});
  rows.push_back({"SQ20", 1, singles("XYZ", 0.5), single_qubit_controls("XYZ"), "1", "+"});
  rows.push_back({"SQ21", 1, singles("XYZ", 1.0), single_qubit_controls("XYZ"), "0", "1"});

  // Two-qubit systems: u_a acts on qubit 1, v_a on qubit 2, u's listed first.
  rows.push_back({"TQ1", 2, couplings("X"), two_qubit_controls("X", "Z"), "00", "Phi+"});
  rows.push_back({"TQ2", 2, couplings("X"), two_qubit_controls("X", "XY"), "00", "Phi+"});
  rows.push_back({"TQ3", 2, couplings("X"), two_qubit_controls("Y", "XYZ"), "00", "Psi+"});
  rows.push_back({"TQ4", 2, couplings("X"), two_qubit_controls("XY", "XYZ"), "00", "Psi+"});
  rows.push_back({"TQ5", 2, couplings("X"), two_qubit_controls("YZ", "XYZ"), "01", "11"});
  rows.push_back({"TQ6", 2, couplings("X"), two_qubit_controls("XYZ", "XYZ"), "00", "Phi+"});
  rows.push_back({"TQ7", 2, couplings("Y"), two_qubit_controls("XZ", "XYZ"), "00", "Phi+"});
  rows.push_back({"TQ8", 2, couplings("Y"), two_qubit_controls("YZ", "XYZ"), "01", "10+11"});
  rows.push_back({"TQ9", 2, couplings("Y"), two_qubit_controls("XYZ", "XYZ"), "Psi+", "00"});
  rows.push_back({"TQ10", 2, couplings("Z"), two_qubit_controls("Y", "XYZ"), "Psi+", "Phi+"});
  rows.push_back({"TQ11", 2, couplings("Z"), two_qubit_controls("XY", "XYZ"), "00", "Phi+"});
  rows.push_back({"TQ12", 2, couplings("Z"), two_qubit_controls("XYZ", "XYZ"), "00", "Phi-"});
  rows.push_back({"TQ13", 2, couplings("XY"), two_qubit_controls("X", "Y"), "Phi+", "Psi-"});
  rows.push_back({"TQ14", 2, couplings("XY"), two_qubit_controls("XY", "XYZ"), "00", "Psi+"});
  rows.push_back({"TQ15", 2, couplings("XY"), two_qubit_controls("XYZ", "XYZ"), "11", "Phi-"});
  rows.push_back({"TQ16", 2, couplings("XZ"), two_qubit_controls("XZ", "XYZ"), "00", "Psi+"});
  rows.push_back({"TQ17", 2, couplings("XZ"), two_qubit_controls("XYZ", "XYZ"), "Phi-", "Psi+"});
  rows.push_back({"TQ18", 2, couplings("YZ"), two_qubit_controls("XZ", "XYZ"), "00", "Psi+"});
  rows.push_back({"TQ19", 2, couplings("YZ"), two_qubit_controls("XYZ", "XYZ"), "00", "Phi+"});
  rows.push_back({"TQ20", 2, couplings("XYZ"), two_qubit_controls("", "XYZ"), "Phi+", "Psi-"});
  rows.push_back({"TQ21", 2, couplings("XYZ"), two_qubit_controls("X", "YZ"), "00", "Psi-"});
  rows.push_back({"TQ22", 2, couplings("XYZ"), two_qubit_controls("YZ", "XYZ"), "Psi-", "Phi+"});
  rows.push_back({"TQ23", 2, couplings("XYZ"), two_qubit_controls("XYZ", "XZ"), "00", "Phi+"});
  rows.push_back({"TQ24", 2, couplings("XYZ"), two_qubit_controls("XYZ", "XYZ"), "11", "Phi+"});
  rows.push_back({"TQ25", 2,
                  {{-1.0, "ZZ"}, {-0.5, "ZI"}, {-0.5, "IZ"}},
                  {{{-0.5, "XI"}, {-0.5, "IX"}}},
                  "++", "00"});
  rows.push_back({"TQ26", 2,
                  {{0.5, "XX"}, {0.5, "YY"}, {0.5, "ZI"}, {0.5, "IZ"}},
                  {{{0.5, "XI"}}, {{0.5, "IX"}}},
                  "00", "Phi+"});

  // Three-qubit systems.
  rows.push_back({"ThQ1", 3, {},
                  {{{1.0, "ZXI"}}, {{1.0, "IXZ"}}, {{1.0, "IXI"}}, {{1.0, "IYI"}}},
                  "000", "-i010", kDriftlessMultiQubitScale});
  rows.push_back({"ThQ2", 3,
                  {{1.0, "ZZI"}, {1.0, "ZIZ"}, {1.0, "IZZ"}},
                  {collective('X'), collective('Y'), collective('Z')},
                  "000", "D31"});
  rows.push_back({"ThQ3", 3, {},
                  {{{1.0, "XXI"}, {1.0, "YYI"}}, {{1.0, "IXX"}, {1.0, "IYY"}}},
                  "100", "001", kDriftlessMultiQubitScale});
  rows.push_back({"ThQ4", 3, {},
                  {{{1.0, "ZZI"}, {1.0, "IZZ"}, {1.0, "ZIZ"}}, collective('X'), collective('Z')},
                  "+++", "GHZ", kDriftlessMultiQubitScale});
  return rows;
}

CatalogEntry make_entry(const RowSpec& row) {
  CatalogEntry e;
  e.id = row.id;
  e.n_qubits = row.n_qubits;
  e.drift_terms = row.drift;
  e.control_terms = row.controls;
  e.initial_name = row.initial;
  e.target_name = row.target;
  e.amplitude_scale = row.amplitude_scale;

  e.ham.drift = operator_from_terms(row.drift, row.n_qubits);
  for (const auto& terms : row.controls) {
    e.ham.controls.push_back(operator_from_terms(terms, row.n_qubits));
  }
  e.ham.validate();
  const Eigen::Index dim = Eigen::Index{1} << row.n_qubits;
  e.initial = named_state(row.initial, dim);
  e.target = named_state(row.target, dim);
  e.descriptor = descriptor_of(e);
  return e;
}

CVector basis_ket(std::string_view bits) {
  const Eigen::Index dim = Eigen::Index{1} << bits.size();
  Eigen::Index index = 0;
  for (char b : bits) index = 2 * index + (b == '1' ? 1 : 0);
  CVector v = CVector::Zero(dim);
  v[index] = 1.0;
  return v;
}

bool is_bit_string(std::string_view s) {
  return !s.empty() && s.size() <= 3 &&
         std::all_of(s.begin(), s.end(), [](char c) { return c == '0' || c == '1'; });
}

CVector superpose(std::initializer_list<std::pair<double, const char*>> parts) {
  CVector v;
  for (const auto& [coeff, bits] : parts) {
    CVector k = basis_ket(bits);
    if (v.size() == 0) v = CVector::Zero(k.size());
    v += coeff * k;
  }
  return v.normalized();
}

std::string canonical_state_name(std::string_view name) {
  if (name == "Φ+") return "Phi+";
  if (name == "Φ-" || name == "Φ−") return "Phi-";
  if (name == "Ψ+") return "Psi+";
  if (name == "Ψ-" || name == "Ψ−") return "Psi-";
  if (name == "−") return "-";
  return std::string(name);
}

}  // namespace

std::array<double, 6> SystemDescriptor::as_array() const {
  return {static_cast<double>(system_size), static_cast<double>(n_controls), static_strength,
          has_x ? 1.0 : 0.0, has_y ? 1.0 : 0.0, has_z ? 1.0 : 0.0};
}

CVector named_state(std::string_view raw_name, Eigen::Index dim) {
  const std::string name = canonical_state_name(raw_name);
  CVector v;
  if (is_bit_string(name)) {
    v = basis_ket(name);
  } else if (name == "+") {
    v = superpose({{1, "0"}, {1, "1"}});
  } else if (name == "-") {
    v = superpose({{1, "0"}, {-1, "1"}});
  } else if (name == "1-0") {
    v = superpose({{-1, "0"}, {1, "1"}});
  } else if (name == "Phi+") {
    v = superpose({{1, "00"}, {1, "11"}});
  } else if (name == "Phi-") {
    v = superpose({{1, "00"}, {-1, "11"}});
  } else if (name == "Psi+") {
    v = superpose({{1, "01"}, {1, "10"}});
  } else if (name == "Psi-") {
    v = superpose({{1, "01"}, {-1, "10"}});
  } else if (name == "++") {
    v = superpose({{1, "00"}, {1, "01"}, {1, "10"}, {1, "11"}});
  } else if (name == "10+11") {
    v = superpose({{1, "10"}, {1, "11"}});
  } else if (name == "D31") {
    v = superpose({{1, "100"}, {1, "010"}, {1, "001"}});
  } else if (name == "GHZ") {
    v = superpose({{1, "000"}, {1, "111"}});
  } else if (name == "+++") {
    v = CVector::Constant(8, 1.0 / std::sqrt(8.0));
  } else if (name == "-i010") {
    v = -qla::kI * basis_ket("010");
  } else {
    throw std::invalid_argument("unknown state name '" + std::string(raw_name) + "'");
  }
  if (v.size() != dim) {
    throw std::invalid_argument("state '" + std::string(raw_name) + "' has dimension " +
                                std::to_string(v.size()) + ", requested " + std::to_string(dim));
  }
  return v;
}

CMatrix operator_from_terms(const std::vector<PauliTerm>& terms, int n_qubits) {
  const Eigen::Index dim = Eigen::Index{1} << n_qubits;
  CMatrix out = CMatrix::Zero(dim, dim);
  for (const auto& t : terms) {
    if (static_cast<int>(t.letters.size()) != n_qubits) {
      throw std::invalid_argument("Pauli term '" + t.letters + "' does not span " +
                                  std::to_string(n_qubits) + " qubits");
    }
    out += t.coeff * qla::pauli_string(t.letters);
  }
  return out;
}

SystemDescriptor descriptor_of(const CatalogEntry& entry) {
  SystemDescriptor d;
  d.system_size = entry.n_qubits;
  d.n_controls = static_cast<int>(entry.control_terms.size());
  for (const auto& t : entry.drift_terms) {
    d.static_strength = std::max(d.static_strength, std::abs(t.coeff));
  }
  auto scan = [&d](const std::vector<PauliTerm>& terms) {
    for (const auto& t : terms) {
      for (char c : t.letters) {
        d.has_x |= c == 'X';
        d.has_y |= c == 'Y';
        d.has_z |= c == 'Z';
      }
    }
  };
  scan(entry.drift_terms);
  for (const auto& c : entry.control_terms) scan(c);
  return d;
}

const std::vector<CatalogEntry>& build_catalog() {
  static const std::vector<CatalogEntry> catalog = [] {
    std::vector<CatalogEntry> out;
    for (const auto& row : catalog_rows()) out.push_back(make_entry(row));
    return out;
  }();
  return catalog;
}

std::vector<CatalogEntry> build_catalog(const std::map<std::string, double>& scale_overrides) {
  std::vector<CatalogEntry> out = build_catalog();
  for (const auto& [id, scale] : scale_overrides) {
    if (!(scale > 0.0)) {
      throw std::invalid_argument("amplitude scale for " + id + " must be positive");
    }
    auto it = std::find_if(out.begin(), out.end(), [&](const auto& e) { return e.id == id; });
    if (it == out.end()) {
      throw std::invalid_argument("amplitude scale override for unknown system '" + id + "'");
    }
    it->amplitude_scale = scale;
  }
  return out;
}

std::vector<std::string> table1_ids() { return {"SQ3", "SQ4", "TQ25", "TQ26", "ThQ1"}; }

const CatalogEntry& find_entry(const std::vector<CatalogEntry>& catalog, std::string_view id) {
  for (const auto& e : catalog) {
    if (e.id == id) return e;
  }
  throw std::invalid_argument("unknown system id '" + std::string(id) + "'");
}

std::vector<std::string> resolve_system_ids(const std::vector<CatalogEntry>& catalog,
                                            std::string_view selector) {
  std::vector<std::string> out;
  std::set<std::string> seen;
  auto push = [&](const std::string& id) {
    find_entry(catalog, id);
    if (seen.insert(id).second) out.push_back(id);
  };
  auto push_prefix = [&](int qubits) {
    for (const auto& e : catalog) {
      if (e.n_qubits == qubits) push(e.id);
    }
  };
  std::stringstream ss{std::string(selector)};
  std::string token;
  while (std::getline(ss, token, ',')) {
    token.erase(0, token.find_first_not_of(" \t"));
    token.erase(token.find_last_not_of(" \t") + 1);
    if (token.empty()) continue;
    if (token == "all") {
      for (const auto& e : catalog) push(e.id);
    } else if (token == "table1") {
      for (const auto& id : table1_ids()) push(id);
    } else if (token == "single") {
      push_prefix(1);
    } else if (token == "two") {
      push_prefix(2);
    } else if (token == "three") {
      push_prefix(3);
    } else {
      push(token);
    }
  }
  if (out.empty()) {
    throw std::invalid_argument("system selector '" + std::string(selector) + "' is empty");
  }
  return out;
}

namespace {

nlohmann::json matrix_json(const CMatrix& m) {
  nlohmann::json rows = nlohmann::json::array();
  for (Eigen::Index i = 0; i < m.rows(); ++i) {
    nlohmann::json row = nlohmann::json::array();
    for (Eigen::Index j = 0; j < m.cols(); ++j) row.push_back({m(i, j).real(), m(i, j).imag()});
    rows.push_back(std::move(row));
  }
  return rows;
}

nlohmann::json vector_json(const CVector& v) {
  nlohmann::json out = nlohmann::json::array();
  for (Eigen::Index i = 0; i < v.size(); ++i) out.push_back({v[i].real(), v[i].imag()});
  return out;
}

nlohmann::json terms_json(const std::vector<PauliTerm>& terms) {
  nlohmann::json out = nlohmann::json::array();
  for (const auto& t : terms) out.push_back({{"coeff", t.coeff}, {"paulis", t.letters}});
  return out;
}

}  // namespace

nlohmann::json catalog_to_json(const std::vector<CatalogEntry>& catalog) {
  nlohmann::json systems = nlohmann::json::array();
  for (const auto& e : catalog) {
    nlohmann::json controls = nlohmann::json::array();
    nlohmann::json control_terms = nlohmann::json::array();
    for (std::size_t j = 0; j < e.n_controls(); ++j) {
      controls.push_back(matrix_json(e.ham.controls[j]));
      control_terms.push_back(terms_json(e.control_terms[j]));
    }
    const auto c = e.descriptor.as_array();
    systems.push_back({{"id", e.id},
                       {"n_qubits", e.n_qubits},
                       {"drift_terms", terms_json(e.drift_terms)},
                       {"control_terms", control_terms},
                       {"drift", matrix_json(e.ham.drift)},
                       {"controls", controls},
                       {"initial_state", e.initial_name},
                       {"target_state", e.target_name},
                       {"initial", vector_json(e.initial)},
                       {"target", vector_json(e.target)},
                       {"descriptor", std::vector<double>(c.begin(), c.end())},
                       {"amplitude_scale", e.amplitude_scale}});
  }
  return {{"format", "mtqc-catalog"}, {"version", 1}, {"systems", systems}};
}

std::uint64_t catalog_hash(const std::vector<CatalogEntry>& catalog) {
  return hash_string(catalog_to_json(catalog).dump());
}

}  // namespace mtqc
