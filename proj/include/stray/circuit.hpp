#pragma once

#include <cstddef>
#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include <json.hpp>

namespace stray {

struct ValidationError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct ParseError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct DimensionLimitError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

inline constexpr std::size_t kDefaultDimensionLimit = 20000;

struct QubitSpec {
  std::string label;
  double freq_ghz = 0.0;
  double anharm_mhz = 0.0;
  int levels = 5;
  bool operator==(const QubitSpec&) const = default;
};

struct CouplerSpec {
  std::string label;
  double freq_ghz = 0.0;
  int levels = 3;
  bool operator==(const CouplerSpec&) const = default;
};

struct QQCoupling {
  std::string a, b;
  double g_mhz = 0.0;
  bool operator==(const QQCoupling&) const = default;
};

struct QCCoupling {
  std::string qubit, coupler;
  double g_mhz = 0.0;
  bool operator==(const QCCoupling&) const = default;
};

struct CouplingGraph {
  std::vector<QQCoupling> qubit_qubit;
  std::vector<QCCoupling> qubit_coupler;
  bool operator==(const CouplingGraph&) const = default;
};

struct DriveSpec {
  std::string target;
  double amp_mhz = 0.0;
  double freq_ghz = 0.0;
  bool operator==(const DriveSpec&) const = default;
};

// Mode order is qubits first (declaration order), then couplers.
struct CircuitSpec {
  std::vector<QubitSpec> qubits;
  std::vector<CouplerSpec> couplers;
  CouplingGraph graph;
  std::optional<DriveSpec> drive;
  std::size_t dimension_limit = kDefaultDimensionLimit;

  bool operator==(const CircuitSpec&) const = default;

  std::size_t num_qubits() const { return qubits.size(); }
  std::size_t num_modes() const { return qubits.size() + couplers.size(); }
  std::size_t hilbert_dimension() const;
  std::vector<int> levels() const;

  int qubit_index(std::string_view label) const;    // -1 when absent
  int coupler_index(std::string_view label) const;  // -1 when absent

  // Strengths in MHz, zero when there is no edge.
  double g_qq(std::size_t i, std::size_t j) const;
  double g_qc(std::size_t q, std::size_t c) const;
};

// Throws ValidationError naming the violated invariant.
void validate(const CircuitSpec& spec);

CircuitSpec circuit_from_json(const nlohmann::json& j);
nlohmann::json to_json(const CircuitSpec& spec);
std::string serialize(const CircuitSpec& spec);

CircuitSpec load_circuit(const std::string& path);
void save_circuit(const CircuitSpec& spec, const std::string& path);

// Parameter keys shared by preset overrides and sweep axes:
//   w<n>    qubit Q<n> frequency, GHz      d<n>   qubit Q<n> anharmonicity, MHz
//   wc<x>   coupler C<x> frequency, GHz    g<n><m> direct coupling Q<n>-Q<m>, MHz
//   g<n>c<x> coupling Q<n>-C<x>, MHz       qlevels / clevels  truncation of every qubit / coupler
//   amp     drive amplitude, MHz           wd     drive frequency, GHz
// Unknown or non-existent keys throw ValidationError.
void set_parameter(CircuitSpec& spec, std::string_view key, double value);
double get_parameter(const CircuitSpec& spec, std::string_view key);

std::vector<std::string> preset_names();
CircuitSpec preset_circuit(std::string_view name,
                           const std::map<std::string, double>& overrides = {});

}  // namespace stray
