#pragma once

#include <cstddef>
#include <string>
#include <utility>
#include <vector>

#include "stray/circuit.hpp"
#include "stray/fock.hpp"
#include "stray/linalg.hpp"

namespace stray {

// exp(-i H t) on the full space, t in ns. Eigendecomposition per invariant block.
CMat propagator(const HamiltonianMatrix& h, double t_ns);

// Warning threshold on max |s_i^2 - 1| over the singular values of the projected map.
inline constexpr double kNonUnitarityWarning = 0.1;

struct GateFidelityResult {
  double coupler_frequency = 0;  // GHz, the swept coupler; 0 when not part of a sweep
  double gate_time = 0;          // ns
  double fidelity = 0;
  double max_fidelity_time = 0;  // ns, best time in the searched window
  double non_unitarity = 0;
  bool spectator_warning = false;
};

// Average gate fidelity of a (possibly leaky) 4x4 map M against CZ after the
// best local Z phases on both qubits: (Tr(M'M) + |Tr(CZ' D M)|^2) / 20. Equals
// the unitary formula (d + |Tr|^2)/(d(d+1)) when M is unitary. Index order
// |ab> = 00, 01, 10, 11.
double cz_average_fidelity(const CMat& m);
double non_unitarity(const CMat& m);

// Square-pulse evolution under the static Hamiltonian, restricted to the gated
// pair's computational states with every other qubit and coupler in vacuum.
// The invariant blocks holding those states are diagonalized once; the
// projected map at any t is then cheap.
class CZEvolution {
 public:
  CZEvolution(const HamiltonianMatrix& h, std::size_t qubit_a, std::size_t qubit_b);

  CMat projected(double t_ns) const;
  GateFidelityResult at(double t_ns) const;
  // Scan of [t_lo, t_hi] with `samples` points, then golden-section polishing
  // of the best sample.
  GateFidelityResult best(double t_lo, double t_hi, int samples = 4000) const;
  // E11 - E10 - E01 + E00 of the dressed pair states, rad/ns.
  double zz_rate() const { return zz_; }
  // Time of the first conditional pi phase, pi / |zz|.
  double cz_time() const;

 private:
  struct Part {
    Vec energies;
    Mat rows;  // 4 x k overlaps <pair state|eigenvector>
  };
  std::vector<Part> parts_;
  double zz_ = 0;
};

GateFidelityResult cz_fidelity(const CircuitSpec& spec, std::pair<std::size_t, std::size_t> pair, double t_ns,
                               Form form = Form::rwa);

struct FidelitySweep {
  std::string coupler_key;  // parameter key of the swept coupler, e.g. "wc23"
  std::vector<double> coupler_axis, time_axis;
  std::vector<GateFidelityResult> cells;  // coupler-major
  std::vector<GateFidelityResult> best;   // per coupler value, maximum over the time axis
  std::vector<double> zz_rate;            // per coupler value, rad/ns
};

FidelitySweep fidelity_sweep(const CircuitSpec& spec, std::pair<std::size_t, std::size_t> pair,
                             const std::string& coupler_key, const std::vector<double>& coupler_axis,
                             const std::vector<double>& time_axis, Form form = Form::rwa);

// Mean spacing of fidelity revivals, found with a hysteresis band around the
// midpoint of the curve's extremes. NaN when fewer than two complete revivals.
double revival_period(const std::vector<double>& t, const std::vector<double>& fidelity);

}  // namespace stray
