#pragma once

#include <cstddef>
#include <map>
#include <string>
#include <vector>

#include "stray/circuit.hpp"
#include "stray/fock.hpp"
#include "stray/pauli.hpp"

namespace stray {

// Static RWA Hamiltonian in a frame rotating at the drive frequency for every
// mode, -w_d per excitation, plus (Omega/2)(a + a') on the driven qubit.
HamiltonianMatrix driven_hamiltonian(const CircuitSpec& spec);

// Qubit roles for cross-resonance analysis. The control is the drive target;
// Pauli strings keep the circuit's qubit order.
struct CRRoles {
  std::size_t control = 0;
  std::size_t target = 1;
  std::size_t spectator = 2;
};
CRRoles cr_roles(const CircuitSpec& spec, std::size_t target = 1);

struct DrivenPauli {
  PauliCoefficients alpha;  // every string over {I,X,Y,Z}, kHz
  bool hybridized = false;
  double min_overlap = 1.0;
  double residual = 0.0;  // worst least-action residual over the blocks
};

// One least-action block per computational configuration of the non-target
// qubits, each spanning the target's |0> and |1>. The effective Hamiltonian
// is block-diagonal in every qubit but the target, so single-qubit X/Y on
// control and spectator vanish identically; Y on the target vanishes because
// H is real. Flags hybridization instead of throwing on rank deficiency.
DrivenPauli driven_pauli(const CircuitSpec& spec, std::size_t target = 1);

// Spectator frequency set to w_target + Delta_st for each detuning (MHz).
std::vector<DrivenPauli> driven_detuning_sweep(const CircuitSpec& spec, const std::vector<double>& delta_st_mhz,
                                               std::size_t target = 1);

// Power-law fits of driven coefficients against the drive amplitude, MHz in,
// kHz out. Exponents are free and found by a bounded 1-D search over the
// exponent with the linear coefficients solved exactly at every trial.
struct ScalingFit {
  double alpha0 = 0, eta2 = 0, eta_a = 0, a = 0, zz_residual = 0;  // ZZ: a0 + e2 W^2 + ea W^a
  double mu1 = 0, mu_b = 0, b = 0, zx_residual = 0;                // ZX: m1 W + mb W^b
  double zzz0 = 0, nu2 = 0, zzz_residual = 0;                      // ZZZ: z0 + n2 W^2
  std::vector<std::string> failures;  // families whose relative RMS exceeds the threshold
  double fit_residual() const;        // worst of the three
};

inline constexpr double kFitThreshold = 0.05;

struct PowerFit {
  std::vector<double> coeffs;  // in the order of the basis functions
  double exponent = 0;
  double residual = 0;  // relative RMS
};

// y ~ sum_k c_k x^{p_k} + c_free x^e, e searched in [lo, hi]. Fixed powers first.
PowerFit fit_free_power(const std::vector<double>& x, const std::vector<double>& y,
                        const std::vector<double>& fixed_powers, double lo, double hi);
// Linear least squares on fixed powers only.
PowerFit fit_fixed_powers(const std::vector<double>& x, const std::vector<double>& y,
                          const std::vector<double>& powers);

// Fits for synthetic or precomputed data.
ScalingFit fit_scaling(const std::vector<double>& omega_mhz, const std::vector<double>& zz_khz,
                       const std::vector<double>& zx_khz, const std::vector<double>& zzz_khz);

// Requires at least six amplitudes spanning a decade. ZZ is the control-target
// pair, ZX the control-target ZXI term.
ScalingFit scaling_fit(const CircuitSpec& spec, const std::vector<double>& omega_mhz, std::size_t target = 1);

enum class ResonanceKind { static_, cr_activated };
const char* to_string(ResonanceKind k);

// a_st D_st + a_ct D_ct + a_cs D_cs + a_1 d_1 + a_2 d_2 + a_3 d_3 = 0, with
// D_xy = w_x - w_y and d_i the anharmonicities in control, target, spectator order.
struct LinearCondition {
  double st = 0, ct = 0, cs = 0, d1 = 0, d2 = 0, d3 = 0;
};

struct ResonanceCondition {
  std::string state_pair;     // |control target spectator>, photon offsets for CR rows
  std::string condition;      // as written in the reference table
  LinearCondition relation;
  ResonanceKind kind = ResonanceKind::static_;
  double solved_detuning = 0;  // Delta_st, MHz
  double printed_detuning = 0; // reference table value, MHz
  double residual = 0;         // relation evaluated at the solution, MHz
  bool satisfiable = true;
  bool matches = false;        // |solved - printed| <= kTableTolerance
};

inline constexpr double kTableTolerance = 0.05;  // MHz, half the printed precision
inline constexpr double kResonanceWindow = 1000.0;  // |Delta_st| scanned, MHz

// The built-in three-qubit resonance table.
std::vector<ResonanceCondition> resonance_table();

// Solves every row for Delta_st from the circuit's control-target detuning and
// anharmonicities (bare values). CR rows only when a drive is present. Rows
// with no Delta_st dependence or a solution outside the window are kept with
// satisfiable = false.
std::vector<ResonanceCondition> resonance_catalog(const CircuitSpec& spec, std::size_t target = 1);

}  // namespace stray
