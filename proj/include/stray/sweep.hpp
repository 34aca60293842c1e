#pragma once

#include <cstdint>
#include <map>
#include <ostream>
#include <string>
#include <utility>
#include <vector>

#include "stray/circuit.hpp"
#include "stray/fock.hpp"

namespace stray {

// perturbative: closed-form third-order formulas on bare parameters.
// exact: dressed computational energies of the full matrix.
// least_action: couplers removed by least action, then the qubit formulas.
enum class Solver { perturbative, exact, least_action };
const char* to_string(Solver s);
Solver solver_from_string(const std::string& s);

struct Axis {
  std::string key;  // parameter key, see set_parameter
  std::vector<double> values;
};

// "key=start:stop:count" (inclusive, count >= 1) or "key=v1,v2,...".
Axis parse_axis(const std::string& text);
std::vector<double> linspace(double start, double stop, std::size_t count);

struct SweepCell {
  std::map<std::string, double> values;  // kHz; Pauli strings of weight >= 2, and J<mn>_<ij> when requested
  std::string flag;                      // empty when the cell is valid; flagged cells carry no values
  bool valid() const { return flag.empty(); }
  double at(const std::string& name) const;  // throws when absent
};

struct SweepOptions {
  Solver solver = Solver::exact;
  Form form = Form::rwa;
  bool couplings = false;  // add level-resolved J (perturbative or extracted), kHz
};

struct SweepGrid {
  CircuitSpec base;
  std::vector<Axis> axes;  // one or two
  SweepOptions options;
  std::vector<SweepCell> cells;  // first axis major
  std::string circuit_hash;

  std::size_t rows() const { return axes.at(0).values.size(); }
  std::size_t cols() const { return axes.size() > 1 ? axes[1].values.size() : 1; }
  std::size_t index(std::size_t i, std::size_t j) const { return i * cols() + j; }
  CircuitSpec circuit_at(std::size_t i, std::size_t j) const;
};

// Coefficients at one parameter point; errors become flags.
SweepCell evaluate_cell(const CircuitSpec& spec, const SweepOptions& opt);

// Cells evaluated by a parallel map; per-cell failures are recorded as flags.
SweepGrid sweep(const CircuitSpec& spec, const std::vector<Axis>& axes, const SweepOptions& opt = {});

std::uint64_t circuit_hash(const CircuitSpec& spec);  // FNV-1a of the serialized circuit

inline constexpr double kDefaultZoneThresholdKhz = 50.0;

struct ZoneMask {
  std::string predicate;          // two_body_safe | all_safe
  std::vector<char> mask;         // per cell
  std::vector<int> region;        // per cell, connected-component label, -1 outside
  int region_count = 0;
  std::size_t area() const;       // cells in the mask
};

// Strays to the first qubit of a three-qubit grid: two_body_safe is
// max(|ZZI|, |ZIZ|) < threshold, all_safe adds |ZZZ|. Components are
// 4-connected on the grid.
std::vector<ZoneMask> zones(const SweepGrid& grid, double threshold_khz = kDefaultZoneThresholdKhz);

using Polyline = std::vector<std::pair<double, double>>;

struct SuperiorityMap {
  std::vector<double> ratio;   // |ZZZ| / max |ZZ|, NaN where masked
  std::vector<char> masked;    // flagged or max |ZZ| below 1 Hz
  std::vector<Polyline> contour;  // ratio = 1, axis coordinates
  std::size_t superior_cells() const;  // ratio > 1
};

SuperiorityMap superiority_map(const SweepGrid& grid);

// Level sets f = level of a scalar field on a rectilinear grid (first index
// along x). Cells touching a NaN are skipped. Segments are chained into
// polylines; closed loops repeat their first point.
std::vector<Polyline> marching_squares(const std::vector<double>& x, const std::vector<double>& y,
                                       const std::vector<double>& field, double level);

// Sign changes of one coefficient along a one-dimensional axis, each refined
// by bisection and classified: a zero when |alpha| shrinks as the bracket
// closes, a pole (resonance) when it grows.
struct SignChange {
  double lo = 0, hi = 0;  // refined bracket
  double location = 0;
  bool pole = false;
  double value_khz = 0;  // |alpha| at the refined location
};
std::vector<SignChange> sign_changes(const CircuitSpec& spec, const std::string& key, const std::vector<double>& axis,
                                     const std::string& coefficient, const SweepOptions& opt = {});

// Level-resolved J identities from the non-perturbative (least-action)
// couplings along one axis. Per pair "ij": r1 = |J01 + J10 - J00 - J11| and
// r2 = |J01 - beta J10 - (1 - beta) J00|, both over max|J^mn|, with beta from
// the bare detunings to the shared coupler.
struct IdentityPoint {
  double x = 0;
  std::string flag;  // "hybridized" or "error: ..."; residuals are NaN when set
  double min_overlap = 1.0;
  std::map<std::string, double> r1, r2;
  double max_r1() const;
  double max_r2() const;
};
std::vector<IdentityPoint> identity_sweep(const CircuitSpec& spec, const std::string& key,
                                          const std::vector<double>& axis, Form form = Form::rwa);

// Points at least `window` (axis units) away from every flagged point.
std::vector<char> outside_flag_windows(const std::vector<IdentityPoint>& points, double window);

void write_identity_csv(const std::string& key, const std::vector<IdentityPoint>& points, std::ostream& out);

// Triangle of three directly coupled qubits with equal J and anharmonicity,
// w3 - w2 = Delta and w3 - w1 = 1.2 Delta, for the ZZZ-superiority phase
// diagram in the dimensionless ratios |J/Delta|, |delta/Delta|.
CircuitSpec uniform_triangle(double j_over_delta, double anharm_over_delta, double delta_mhz = 200.0);

// Named configurations for the decoupling studies: the triangle preset with
// g12 and coupler frequencies set as below.
//   hard_weak   g12 = 4 MHz,  (wc12, wc23, wc13) = (6.66, 5.299, 6.141) GHz
//   hard_strong g12 = 13 MHz, (5.443, 5.472, 6.076) GHz
//   soft_weak   g12 = 4 MHz,  wc12 = 6.2 GHz
//   soft_strong g12 = 16 MHz, wc12 = 5.3 GHz
std::vector<std::string> configuration_names();
CircuitSpec configuration(const std::string& name);

// CSV writers. Numbers use fixed formats so identical inputs give identical bytes.
std::string format_number(double v);
void write_sweep_csv(const SweepGrid& grid, const std::vector<std::string>& coefficients, std::ostream& out);
void write_zone_csv(const SweepGrid& grid, const std::vector<ZoneMask>& masks, std::ostream& out);
void write_contour_csv(const std::vector<Polyline>& contour, std::ostream& out);

}  // namespace stray
