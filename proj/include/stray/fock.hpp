#pragma once

#include <cstddef>
#include <ostream>
#include <string>
#include <vector>

#include "stray/circuit.hpp"
#include "stray/linalg.hpp"

namespace stray {

// Mixed-radix product basis; the last mode varies fastest.
class Basis {
 public:
  Basis() = default;
  explicit Basis(std::vector<int> dims);

  std::size_t size() const { return size_; }
  std::size_t num_modes() const { return dims_.size(); }
  const std::vector<int>& dims() const { return dims_; }
  std::size_t stride(std::size_t mode) const { return strides_[mode]; }

  std::size_t index(const std::vector<int>& occupations) const;
  std::vector<int> occupations(std::size_t index) const;
  int occupation(std::size_t index, std::size_t mode) const {
    return static_cast<int>((index / strides_[mode]) % dims_[mode]);
  }
  int excitations(std::size_t index) const;
  std::string label(std::size_t index) const;  // e.g. "|1,0,1,0,0,0>"

  bool operator==(const Basis&) const = default;

 private:
  std::vector<int> dims_;
  std::vector<std::size_t> strides_;
  std::size_t size_ = 0;
};

Basis make_basis(const CircuitSpec& spec);

// Real symmetric: every operator in this model is real in the Fock basis,
// drive included, so complex storage would only double the memory.
struct HamiltonianMatrix {
  Basis basis;
  std::size_t num_qubits = 0;
  Mat entries;  // rad/ns
  std::size_t dimension() const { return basis.size(); }
};

enum class Form { full, rwa };
const char* to_string(Form f);
Form form_from_string(const std::string& s);

// (w n + d/2 n(n-1)) per mode, plus g(a'b + ab') for every edge; the full form
// adds the counter-rotating -g(ab + a'b').
HamiltonianMatrix build_full_hamiltonian(const CircuitSpec& spec);
HamiltonianMatrix build_rwa_hamiltonian(const CircuitSpec& spec);
HamiltonianMatrix build_hamiltonian(const CircuitSpec& spec, Form form);

// Total number operator on the basis, diagonal.
Vec number_operator_diagonal(const Basis& basis);

struct TruncationRow {
  std::string state;     // computational label, qubit bits
  double energy_ghz = 0; // at the base truncation
  double shift_khz = 0;  // enlarged minus base
};
std::vector<TruncationRow> truncation_report(const CircuitSpec& spec, int extra_levels,
                                             Form form = Form::full);

// (row, col, re, im) for the nonzero upper triangle; entries in GHz.
void dump_triplets(const HamiltonianMatrix& h, std::ostream& out);

}  // namespace stray
