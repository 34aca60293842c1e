#include <doctest.h>

#include <cmath>
#include <sstream>

#include "stray/blockdiag.hpp"
#include "stray/circuit.hpp"
#include "stray/fock.hpp"
#include "stray/units.hpp"

using namespace stray;

namespace {

CircuitSpec small_circuit() {
  CircuitSpec s;
  s.qubits = {{"Q1", 4.8, -330.0, 3}, {"Q2", 5.0, -300.0, 4}};
  s.couplers = {{"C", 6.0, 2}};
  s.graph.qubit_qubit = {{"Q1", "Q2", 4.0}};
  s.graph.qubit_coupler = {{"Q1", "C", 85.0}, {"Q2", "C", 102.0}};
  return s;
}

// Kronecker-product construction kept independent of the library builder.
Mat kron(const Mat& a, const Mat& b) {
  Mat k(a.rows() * b.rows(), a.cols() * b.cols());
  for (Eigen::Index i = 0; i < a.rows(); ++i)
    for (Eigen::Index j = 0; j < a.cols(); ++j) k.block(i * b.rows(), j * b.cols(), b.rows(), b.cols()) = a(i, j) * b;
  return k;
}

Mat annihilator(int d) {
  Mat a = Mat::Zero(d, d);
  for (int n = 1; n < d; ++n) a(n - 1, n) = std::sqrt(double(n));
  return a;
}

Mat embed(const std::vector<int>& dims, std::size_t mode, const Mat& op) {
  Mat out = Mat::Identity(1, 1);
  for (std::size_t k = 0; k < dims.size(); ++k) out = kron(out, k == mode ? op : Mat::Identity(dims[k], dims[k]));
  return out;
}

Mat oracle_hamiltonian(const CircuitSpec& s, bool full) {
  const auto dims = s.levels();
  Eigen::Index dim = 1;
  for (int d : dims) dim *= d;
  Mat h = Mat::Zero(dim, dim);
  std::vector<Mat> a;
  for (std::size_t k = 0; k < dims.size(); ++k) a.push_back(embed(dims, k, annihilator(dims[k])));
  for (std::size_t q = 0; q < s.qubits.size(); ++q) {
    const Mat n = a[q].transpose() * a[q];
    const Mat id = Mat::Identity(dim, dim);
    h += units::ghz(s.qubits[q].freq_ghz) * n + 0.5 * units::mhz(s.qubits[q].anharm_mhz) * n * (n - id);
  }
  for (std::size_t c = 0; c < s.couplers.size(); ++c) {
    const auto k = s.qubits.size() + c;
    h += units::ghz(s.couplers[c].freq_ghz) * a[k].transpose() * a[k];
  }
  auto edge = [&](std::size_t i, std::size_t j, double g_mhz) {
    const double g = units::mhz(g_mhz);
    if (full)
      h -= g * (a[i] - a[i].transpose()) * (a[j] - a[j].transpose());
    else
      h += g * (a[i].transpose() * a[j] + a[j].transpose() * a[i]);
  };
  for (const auto& e : s.graph.qubit_qubit) edge(s.qubit_index(e.a), s.qubit_index(e.b), e.g_mhz);
  for (const auto& e : s.graph.qubit_coupler)
    edge(s.qubit_index(e.qubit), s.qubits.size() + s.coupler_index(e.coupler), e.g_mhz);
  return h;
}

}  // namespace

TEST_CASE("basis indexing round trip, last mode fastest") {
  Basis b({3, 4, 2});
  CHECK(b.size() == 24);
  CHECK(b.stride(2) == 1);
  CHECK(b.stride(0) == 8);
  for (std::size_t i = 0; i < b.size(); ++i) CHECK(b.index(b.occupations(i)) == i);
  CHECK(b.index({1, 2, 1}) == 8 + 4 + 1);
  CHECK(b.label(13) == "|1,2,1>");
  CHECK(b.excitations(13) == 4);
}

TEST_CASE("builders match a Kronecker-product oracle") {
  const auto s = small_circuit();
  const auto full = build_full_hamiltonian(s);
  const auto rwa = build_rwa_hamiltonian(s);
  CHECK((full.entries - oracle_hamiltonian(s, true)).cwiseAbs().maxCoeff() < 1e-12);
  CHECK((rwa.entries - oracle_hamiltonian(s, false)).cwiseAbs().maxCoeff() < 1e-12);
}

TEST_CASE("single transmon ladder") {
  CircuitSpec s;
  s.qubits = {{"Q1", 4.8, -330.0, 3}};
  const auto h = build_full_hamiltonian(s);
  CHECK(h.entries(0, 0) == 0.0);
  CHECK(units::to_ghz(h.entries(1, 1)) == doctest::Approx(4.8).epsilon(1e-14));
  CHECK(units::to_ghz(h.entries(2, 2)) == doctest::Approx(9.27).epsilon(1e-14));
}

TEST_CASE("RWA form conserves the excitation number, full form only its parity") {
  const auto s = preset_circuit("chain");
  const auto rwa = build_rwa_hamiltonian(s);
  const auto full = build_full_hamiltonian(s);
  const Vec n = number_operator_diagonal(rwa.basis);
  for (Eigen::Index j = 0; j < rwa.entries.cols(); ++j)
    for (Eigen::Index i = 0; i < rwa.entries.rows(); ++i) {
      if (rwa.entries(i, j) != 0.0) REQUIRE(n(i) == n(j));
      if (full.entries(i, j) != 0.0) REQUIRE(std::fmod(std::abs(n(i) - n(j)), 2.0) == 0.0);
      // The two forms differ only on counter-rotating entries.
      if (n(i) == n(j)) REQUIRE(rwa.entries(i, j) == full.entries(i, j));
    }
}

TEST_CASE("builders are symmetric to machine precision") {
  for (auto form : {Form::full, Form::rwa}) {
    const auto h = build_hamiltonian(preset_circuit("triangle"), form);
    CHECK((h.entries - h.entries.transpose()).cwiseAbs().maxCoeff() == 0.0);
  }
}

TEST_CASE("form names") {
  CHECK(form_from_string("full") == Form::full);
  CHECK(form_from_string("rwa") == Form::rwa);
  CHECK(std::string(to_string(Form::rwa)) == "rwa");
  CHECK_THROWS(form_from_string("lab"));
}

TEST_CASE("triplet dump lists the upper triangle in GHz") {
  CircuitSpec s;
  s.qubits = {{"Q1", 5.0, -300.0, 2}, {"Q2", 4.0, -300.0, 2}};
  s.graph.qubit_qubit = {{"Q1", "Q2", 10.0}};
  std::ostringstream os;
  dump_triplets(build_rwa_hamiltonian(s), os);
  const auto text = os.str();
  CHECK(text.rfind("row,col,re,im\n", 0) == 0);
  CHECK(text.find("1,2,0.01") != std::string::npos);
  CHECK(text.find("2,1,") == std::string::npos);
}

TEST_CASE("truncation report shifts stay small at the default truncation") {
  CircuitSpec s = small_circuit();
  for (auto& q : s.qubits) q.levels = 4;
  s.couplers[0].levels = 3;
  const auto rows = truncation_report(s, 1, Form::rwa);
  REQUIRE(rows.size() == 4);
  CHECK(rows[0].state == "00");
  CHECK(rows[3].state == "11");
  for (const auto& r : rows) CHECK(std::abs(r.shift_khz) < 1.0);
  CHECK(rows[1].energy_ghz == doctest::Approx(5.0).epsilon(0.01));
}
