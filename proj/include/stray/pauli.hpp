#pragma once

#include <cstddef>
#include <map>
#include <string>
#include <vector>

#include "stray/linalg.hpp"

namespace stray {

// Strengths in kHz keyed by Pauli string, qubit 0 leftmost. The effective
// Hamiltonian is sum_P alpha_P * P / 2^(number of Z letters), so the two-body
// entries are the alpha_ij of ZZ/4 and the three-body one the alpha of ZZZ/8;
// ZXI/2 and ZXZ/4 follow the same rule.
struct PauliCoefficients {
  std::map<std::string, double> khz;

  double at(const std::string& p) const;  // 0 when absent
  double& operator[](const std::string& p) { return khz[p]; }
  bool contains(const std::string& p) const { return khz.count(p) != 0; }
};

double pauli_normalization(const std::string& p);

// Bit convention: state index s has qubit q in bit (n-1-q); sigma_z|n> = (1-2n)|n>.
// Energies are in rad/ns. Returns every Z/I string, identity included.
PauliCoefficients pauli_from_energies(const std::vector<double>& energies, std::size_t n);
std::vector<double> energies_from_pauli(const PauliCoefficients& c, std::size_t n);

// Dense 2^n x 2^n Pauli matrix.
CMat pauli_matrix(const std::string& p);

// alpha_P = 2^(#Z) Tr(P B) / 2^n for every string over {I,X,Y,Z}. Throws if
// the block is not symmetric to 1e-9 of its norm.
PauliCoefficients pauli_decompose(const Mat& block, std::size_t n);

// Largest |alpha| over the Z-strings of weight two.
double max_two_body(const PauliCoefficients& c, std::size_t n);

std::vector<std::string> z_strings(std::size_t n, int weight);

}  // namespace stray
