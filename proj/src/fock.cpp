#include "stray/fock.hpp"

#include <cmath>
#include <iomanip>
#include <sstream>
#include <stdexcept>

#include "stray/blockdiag.hpp"
#include "stray/units.hpp"

namespace stray {

Basis::Basis(std::vector<int> dims) : dims_(std::move(dims)), strides_(dims_.size()) {
  std::size_t s = 1;
  for (std::size_t k = dims_.size(); k-- > 0;) {
    strides_[k] = s;
    s *= static_cast<std::size_t>(dims_[k]);
  }
  size_ = s;
}

std::size_t Basis::index(const std::vector<int>& occ) const {
  if (occ.size() != dims_.size()) throw std::invalid_argument("occupation length mismatch");
  std::size_t idx = 0;
  for (std::size_t k = 0; k < dims_.size(); ++k) {
    if (occ[k] < 0 || occ[k] >= dims_[k]) throw std::out_of_range("occupation outside truncation");
    idx += static_cast<std::size_t>(occ[k]) * strides_[k];
  }
  return idx;
}

std::vector<int> Basis::occupations(std::size_t index) const {
  std::vector<int> occ(dims_.size());
  for (std::size_t k = 0; k < dims_.size(); ++k) occ[k] = occupation(index, k);
  return occ;
}

int Basis::excitations(std::size_t index) const {
  int n = 0;
  for (std::size_t k = 0; k < dims_.size(); ++k) n += occupation(index, k);
  return n;
}

std::string Basis::label(std::size_t index) const {
  std::string s = "|";
  for (std::size_t k = 0; k < dims_.size(); ++k) {
    if (k) s += ',';
    s += std::to_string(occupation(index, k));
  }
  return s + ">";
}

Basis make_basis(const CircuitSpec& spec) { return Basis(spec.levels()); }

const char* to_string(Form f) { return f == Form::full ? "full" : "rwa"; }

Form form_from_string(const std::string& s) {
  if (s == "full") return Form::full;
  if (s == "rwa") return Form::rwa;
  throw std::invalid_argument("unknown Hamiltonian form '" + s + "'");
}

namespace {

struct Edge {
  std::size_t a, b;
  double g;  // rad/ns
};

std::vector<Edge> edges(const CircuitSpec& spec) {
  std::vector<Edge> out;
  for (const auto& e : spec.graph.qubit_qubit)
    if (e.g_mhz != 0.0)
      out.push_back({static_cast<std::size_t>(spec.qubit_index(e.a)),
                     static_cast<std::size_t>(spec.qubit_index(e.b)), units::mhz(e.g_mhz)});
  for (const auto& e : spec.graph.qubit_coupler)
    if (e.g_mhz != 0.0)
      out.push_back({static_cast<std::size_t>(spec.qubit_index(e.qubit)),
                     spec.num_qubits() + static_cast<std::size_t>(spec.coupler_index(e.coupler)),
                     units::mhz(e.g_mhz)});
  return out;
}

HamiltonianMatrix build(const CircuitSpec& spec, bool counter_rotating) {
  validate(spec);
  HamiltonianMatrix h;
  h.basis = make_basis(spec);
  h.num_qubits = spec.num_qubits();
  const std::size_t dim = h.basis.size();
  h.entries = Mat::Zero(dim, dim);

  std::vector<double> w, d;
  for (const auto& q : spec.qubits) {
    w.push_back(units::ghz(q.freq_ghz));
    d.push_back(units::mhz(q.anharm_mhz));
  }
  for (const auto& c : spec.couplers) {
    w.push_back(units::ghz(c.freq_ghz));
    d.push_back(0.0);
  }
  const auto& dims = h.basis.dims();
  for (std::size_t i = 0; i < dim; ++i) {
    double e = 0.0;
    for (std::size_t k = 0; k < dims.size(); ++k) {
      const double n = h.basis.occupation(i, k);
      e += w[k] * n + 0.5 * d[k] * n * (n - 1.0);
    }
    h.entries(i, i) = e;
  }

  for (const auto& [a, b, g] : edges(spec)) {
    const std::size_t sa = h.basis.stride(a), sb = h.basis.stride(b);
    for (std::size_t i = 0; i < dim; ++i) {
      const int na = h.basis.occupation(i, a), nb = h.basis.occupation(i, b);
      // a'b: moves one quantum from b to a
      if (nb > 0 && na + 1 < dims[a]) {
        const std::size_t j = i + sa - sb;
        const double v = g * std::sqrt(double(na + 1) * nb);
        h.entries(j, i) += v;
        h.entries(i, j) += v;
      }
      if (counter_rotating && na + 1 < dims[a] && nb + 1 < dims[b]) {
        const std::size_t j = i + sa + sb;
        const double v = -g * std::sqrt(double(na + 1) * (nb + 1));
        h.entries(j, i) += v;
        h.entries(i, j) += v;
      }
    }
  }
  return h;
}

}  // namespace

HamiltonianMatrix build_full_hamiltonian(const CircuitSpec& spec) { return build(spec, true); }
HamiltonianMatrix build_rwa_hamiltonian(const CircuitSpec& spec) { return build(spec, false); }
HamiltonianMatrix build_hamiltonian(const CircuitSpec& spec, Form form) {
  return build(spec, form == Form::full);
}

Vec number_operator_diagonal(const Basis& basis) {
  Vec n(basis.size());
  for (std::size_t i = 0; i < basis.size(); ++i) n(i) = basis.excitations(i);
  return n;
}

std::vector<TruncationRow> truncation_report(const CircuitSpec& spec, int extra_levels, Form form) {
  if (extra_levels < 1) throw std::invalid_argument("extra_levels must be >= 1");
  CircuitSpec big = spec;
  for (auto& q : big.qubits) q.levels += extra_levels;
  for (auto& c : big.couplers) c.levels += extra_levels;
  const auto base = computational_energies(build_hamiltonian(spec, form));
  const auto wide = computational_energies(build_hamiltonian(big, form));
  std::vector<TruncationRow> rows;
  for (std::size_t s = 0; s < base.energies.size(); ++s) {
    std::string bits;
    for (std::size_t q = 0; q < spec.num_qubits(); ++q)
      bits += ((s >> (spec.num_qubits() - 1 - q)) & 1u) ? '1' : '0';
    rows.push_back({bits, units::to_ghz(base.energies[s]),
                    units::to_khz(wide.energies[s] - base.energies[s])});
  }
  return rows;
}

void dump_triplets(const HamiltonianMatrix& h, std::ostream& out) {
  out << "row,col,re,im\n" << std::setprecision(17);
  for (Eigen::Index j = 0; j < h.entries.cols(); ++j)
    for (Eigen::Index i = 0; i <= j; ++i)
      if (h.entries(i, j) != 0.0)
        out << i << ',' << j << ',' << units::to_ghz(h.entries(i, j)) << ",0\n";
}

}  // namespace stray
