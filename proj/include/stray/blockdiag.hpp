#pragma once

#include <cstddef>
#include <map>
#include <optional>
#include <stdexcept>
#include <vector>

#include "stray/fock.hpp"
#include "stray/pauli.hpp"

namespace stray {

struct RankDeficiencyError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

inline constexpr double kHybridizationOverlap = 0.5;

// Eigenpairs are computed per invariant block of H (number sectors for the RWA
// form, parity sectors for the full form) and assigned to bare states by
// overlap: greedy on descending overlap, then optimal matching for every
// state whose best overlap is ambiguous or whose eigenvalue is degenerate.
struct DressedSpectrum {
  struct Sector {
    std::vector<std::size_t> states;  // basis indices
    Vec values;
    Mat vectors;                      // rows follow `states`
    std::vector<int> assigned_row;    // eigen column -> local row
  };
  Basis basis;
  std::vector<Sector> sectors;
  std::vector<int> sector_of;      // basis index -> sector, -1 if not diagonalized
  std::vector<int> column_of;      // basis index -> eigen column in its sector
  std::vector<double> overlap;     // |<bare|assigned dressed>|^2
  std::vector<char> hybridized;    // overlap <= 0.5

  bool solved(std::size_t state) const { return sector_of[state] >= 0; }
  double energy(std::size_t state) const;
  Vec eigenvector(std::size_t state) const;  // full length
  bool any_hybridized(const std::vector<std::size_t>& states) const;
};

// Restrict the eigensolve to sectors holding at least one of `only_states`
// (empty means all sectors).
DressedSpectrum exact_spectrum(const HamiltonianMatrix& h,
                               const std::vector<std::size_t>& only_states = {});

// Qubit bits in {0,1} with couplers in vacuum, ordered by pauli_from_energies' bit convention.
std::vector<std::size_t> computational_states(const Basis& basis, std::size_t num_qubits);

struct ComputationalEnergies {
  std::vector<double> energies;  // rad/ns
  std::vector<double> overlaps;
  bool hybridized = false;
};
ComputationalEnergies computational_energies(const HamiltonianMatrix& h);
ComputationalEnergies computational_energies(const DressedSpectrum& s, std::size_t num_qubits);

// Diagonal Pauli coefficients of the dressed computational energies.
struct ExactPauli {
  PauliCoefficients alpha;
  bool hybridized = false;
  double min_overlap = 1.0;
};
ExactPauli exact_pauli(const HamiltonianMatrix& h);
ExactPauli exact_pauli(const DressedSpectrum& s, std::size_t num_qubits);

struct EffectiveBlock {
  std::vector<std::size_t> states;  // basis indices, block order
  Mat block_matrix;                 // rad/ns
  Mat block_transform;              // W: dressed (assigned) -> block frame
  Mat frame;                        // dim x |B| columns U e_b for b in the block
  double residual = 0.0;            // ||H F - F B|| / ||H||
  double unitarity = 0.0;           // ||F^T F - I||
  double min_singular = 0.0;
  double min_overlap = 1.0;
  std::vector<double> eigenvalues;  // assigned exact eigenvalues
};

// Least-action block diagonalization: for every target block, the assigned
// eigenvectors are rotated back by the polar factor of their overlap with the
// block, which gives the transform closest to identity. All states outside
// the target blocks form the complement. Throws RankDeficiencyError when an
// overlap submatrix has a singular value below `min_singular`.
std::vector<EffectiveBlock> least_action_blockdiag(const HamiltonianMatrix& h,
                                                   const std::vector<std::vector<std::size_t>>& blocks,
                                                   double min_singular = 1e-2);
EffectiveBlock least_action_blockdiag(const HamiltonianMatrix& h, const std::vector<std::size_t>& block,
                                      double min_singular = 1e-2);
std::vector<EffectiveBlock> least_action_blockdiag(const DressedSpectrum& spec, const HamiltonianMatrix& h,
                                                   const std::vector<std::vector<std::size_t>>& blocks,
                                                   double min_singular = 1e-2);

// Full transform U = S blockdiag(W^T) as a dense matrix (O(dim^3)); test use.
Mat least_action_transform(const HamiltonianMatrix& h, const std::vector<std::vector<std::size_t>>& blocks);

// Qubit-only block after eliminating the couplers: qubit occupations with
// total excitation <= max_total, couplers in vacuum.
std::vector<std::size_t> qubit_block_states(const Basis& basis, std::size_t num_qubits, int max_total = 3);

// Level energies and exchange couplings read from the coupler-free block.
struct ExtractedCouplings {
  std::size_t num_qubits = 0;
  std::map<std::pair<std::size_t, int>, double> level;  // (qubit, n) -> energy rad/ns, relative to vacuum
  std::map<std::tuple<std::size_t, std::size_t, int, int>, double> J;  // (i,j,m,n) -> rad/ns
  std::vector<double> comp_diagonal;                     // block diagonal on computational states
  double min_overlap = 1.0;
  double min_singular = 1.0;
  bool hybridized = false;
};
ExtractedCouplings extract_couplings(const HamiltonianMatrix& h, int max_total = 3);
ExtractedCouplings extract_couplings(const DressedSpectrum& s, const HamiltonianMatrix& h, int max_total = 3);

// Two-stage reduction: couplers removed exactly by least action, then the
// third-order qubit formulas evaluated on the extracted levels and J, plus the
// Walsh transform of the block diagonal (its non-additive part carries the
// coupler-mediated ZZ that no exchange term describes).
struct TwoStageResult {
  PauliCoefficients alpha;
  ExtractedCouplings couplings;
};
TwoStageResult two_stage_alphas(const HamiltonianMatrix& h);
TwoStageResult two_stage_alphas(const DressedSpectrum& s, const HamiltonianMatrix& h);

// Exact and two-stage coefficients from one shared eigensolve.
struct StaticAnalysis {
  ExactPauli exact;
  TwoStageResult two_stage;
};
StaticAnalysis analyze_static(const HamiltonianMatrix& h);

}  // namespace stray
