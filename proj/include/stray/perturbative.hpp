#pragma once

#include <array>
#include <cstddef>
#include <map>
#include <stdexcept>
#include <string>
#include <tuple>
#include <vector>

#include "stray/circuit.hpp"
#include "stray/pauli.hpp"

namespace stray {

struct ResonanceError : std::runtime_error {
  explicit ResonanceError(std::vector<std::string> offending);
  std::vector<std::string> offending;
};

inline constexpr double kDefaultResonanceFloorMhz = 1.0;

// Dressed level energies E_q(n), GHz, relative to E_q(0) = 0, for n = 0..max_level.
// Throws ResonanceError when a coupler detuning Delta_{c q}(n-1) used by a
// requested level falls below the floor.
std::map<std::pair<std::size_t, int>, double> dressed_frequencies(
    const CircuitSpec& spec, int max_level = 2, double floor_mhz = kDefaultResonanceFloorMhz);

// Delta_{c q}(m) = w_c - w_q - m d_q, MHz.
double coupler_detuning_mhz(const CircuitSpec& spec, std::size_t coupler, std::size_t qubit, int m);

// J^{mn}_{ij}, MHz: direct coupling minus the exchange mediated by every
// coupler shared by i and j.
double effective_J(const CircuitSpec& spec, std::size_t i, std::size_t j, int m, int n,
                   double floor_mhz = kDefaultResonanceFloorMhz);

// Qubit-only couplings in rad/ns: level energies and level-resolved J. The
// formulas below read everything through this table so they can be fed either
// by the closed forms or by couplings extracted from an exact block.
struct CouplingTable {
  std::size_t num_qubits = 0;
  std::map<std::pair<std::size_t, int>, double> level;
  std::map<std::tuple<std::size_t, std::size_t, int, int>, double> J;  // i < j stored

  double transition(std::size_t q, int m) const;  // E(m+1) - E(m)
  double detuning(std::size_t i, std::size_t j, int m, int n) const {
    return transition(i, m) - transition(j, n);
  }
  double coupling(std::size_t i, std::size_t j, int m, int n) const;  // J^{mn}_{ij} = J^{nm}_{ji}
};

CouplingTable perturbative_table(const CircuitSpec& spec, double floor_mhz = kDefaultResonanceFloorMhz);

struct EffectiveCouplingTable {
  std::map<std::pair<std::size_t, int>, double> dressed_levels_ghz;
  std::map<std::tuple<std::size_t, std::size_t, int, int>, double> J_mhz;        // ordered pairs
  std::map<std::tuple<std::size_t, std::size_t, int, int>, double> delta_mhz;    // Delta^{mn}_{ij}
  std::map<std::tuple<std::size_t, std::size_t, int>, double> coupler_delta_mhz; // (c, q, m)
  std::map<std::pair<std::size_t, std::size_t>, double> beta;                    // ordered pairs sharing a coupler
};
EffectiveCouplingTable effective_coupling_table(const CircuitSpec& spec,
                                                double floor_mhz = kDefaultResonanceFloorMhz);

// beta_ij from bare detunings to the first coupler shared by i and j.
double beta_ij(const CircuitSpec& spec, std::size_t i, std::size_t j);

struct IdentityResiduals {
  double r1 = 0;      // J01 + J10 - J00 - J11, MHz
  double r2 = 0;      // J01 - beta J10 - (1 - beta) J00, MHz
  double max_abs_J = 0;
  double beta = 0;
  std::array<double, 4> J{};  // 00, 01, 10, 11 in MHz
};
IdentityResiduals identity_residuals(const std::array<double, 4>& J_mhz, double beta);
IdentityResiduals check_J_identities(const CircuitSpec& spec, std::size_t i, std::size_t j);

struct StrayCouplingBreakdown {
  std::map<std::pair<std::size_t, std::size_t>, double> zeta2;                    // kHz, i<j
  std::map<std::tuple<std::size_t, std::size_t, std::size_t>, double> zeta3;     // kHz, (i,j) pair, k spectator
  std::map<std::tuple<std::size_t, std::size_t, std::size_t, int>, double> K;    // kHz, triple i<j<k, n
  PauliCoefficients alpha;  // weight-2 and weight-3 Z strings
};

struct FormulaOptions {
  bool third_order = true;
  double floor_mhz = kDefaultResonanceFloorMhz;
};

// Individual terms, rad/ns. zeta_triple(i,j,k) is the three-body correction to
// the (i,j) ZZ coming from spectator k; K(n) is taken over the triple.
double zeta_pair(const CouplingTable& t, std::size_t i, std::size_t j);
double zeta_triple(const CouplingTable& t, std::size_t i, std::size_t j, std::size_t k);
double K_term(const CouplingTable& t, std::size_t i, std::size_t j, std::size_t k, int n);

StrayCouplingBreakdown stray_breakdown(const CouplingTable& t, const FormulaOptions& opt = {});
StrayCouplingBreakdown stray_breakdown(const CircuitSpec& spec, const FormulaOptions& opt = {});

// The same four coefficients written out term by term for three qubits; must
// agree with stray_breakdown wherever both are finite.
PauliCoefficients explicit_alphas(const CouplingTable& t);
PauliCoefficients explicit_alphas(const CircuitSpec& spec);

}  // namespace stray
