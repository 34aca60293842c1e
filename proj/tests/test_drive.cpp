#include <doctest.h>

#include <cmath>

#include "stray/blockdiag.hpp"
#include "stray/drive.hpp"
#include "stray/units.hpp"

using namespace stray;

namespace {

CircuitSpec cr_at(double amp) {
  auto s = preset_circuit("cr_device");
  s.drive->amp_mhz = amp;
  return s;
}

const ResonanceCondition& row_named(const std::vector<ResonanceCondition>& rows, const std::string& pair) {
  for (const auto& r : rows)
    if (r.state_pair == pair) return r;
  throw std::runtime_error("no row " + pair);
}

}  // namespace

TEST_CASE("undriven rotating frame only shifts the diagonal") {
  const auto s = cr_at(0.0);
  const auto h = driven_hamiltonian(s);
  const auto h0 = build_rwa_hamiltonian(s);
  const double wd = units::ghz(s.drive->freq_ghz);
  for (std::size_t i = 0; i < h.dimension(); ++i)
    for (std::size_t j = 0; j < h.dimension(); ++j) {
      const double shift = i == j ? wd * h.basis.excitations(i) : 0.0;
      REQUIRE(h.entries(i, j) == doctest::Approx(h0.entries(i, j) - shift).epsilon(1e-14));
    }
}

TEST_CASE("drive adds Omega/2 sqrt(n+1) on control ladder entries only") {
  const auto h0 = driven_hamiltonian(cr_at(0.0));
  const auto h = driven_hamiltonian(cr_at(18.0));
  const double half = 0.5 * units::mhz(18.0);
  const auto& b = h.basis;
  const std::size_t step = b.stride(0);
  const Mat diff = h.entries - h0.entries;
  std::size_t changed = 0;
  for (std::size_t i = 0; i < b.size(); ++i)
    for (std::size_t j = 0; j < b.size(); ++j) {
      if (diff(i, j) == 0.0) continue;
      ++changed;
      const std::size_t lo = std::min(i, j), hi = std::max(i, j);
      REQUIRE(hi - lo == step);
      const int n = b.occupation(lo, 0);
      REQUIRE(b.occupation(hi, 0) == n + 1);
      CHECK(diff(i, j) == doctest::Approx(half * std::sqrt(n + 1.0)).epsilon(1e-14));
    }
  CHECK(changed > 0);
  CHECK((h.entries - h.entries.transpose()).norm() == 0.0);
}

TEST_CASE("driven Hamiltonian requires a drive") {
  auto s = preset_circuit("triangle");
  CHECK_THROWS_AS(driven_hamiltonian(s), std::invalid_argument);
}

TEST_CASE("cross-resonance roles") {
  const auto r = cr_roles(cr_at(18.0));
  CHECK(r.control == 0);
  CHECK(r.target == 1);
  CHECK(r.spectator == 2);
  CHECK_THROWS(cr_roles(cr_at(18.0), 0));
}

TEST_CASE("undriven Pauli coefficients equal the static ones") {
  const auto s = cr_at(0.0);
  const auto d = driven_pauli(s);
  const auto st = exact_pauli(build_rwa_hamiltonian(s));
  CHECK(std::abs(d.alpha.at("ZXI")) < 1e-9);
  CHECK(std::abs(d.alpha.at("ZXZ")) < 1e-9);
  for (const char* p : {"ZZI", "IZZ", "ZIZ", "ZZZ"}) CHECK(d.alpha.at(p) == doctest::Approx(st.alpha.at(p)).epsilon(1e-9));
  CHECK_FALSE(d.hybridized);
}

TEST_CASE("driven coefficients: control and spectator stay diagonal") {
  const auto d = driven_pauli(cr_at(18.0));
  for (const char* p : {"XII", "YII", "IIX", "IIY", "XIX", "ZIX", "XZI", "IYI", "ZYI"}) CHECK(std::abs(d.alpha.at(p)) < 1e-9);
  CHECK(std::abs(d.alpha.at("ZXI")) > 10.0 * std::abs(d.alpha.at("ZXZ")));
  CHECK(std::abs(d.alpha.at("ZXZ")) > 1.0);
}

TEST_CASE("ZX is linear in the amplitude below 5 MHz") {
  const double slope = driven_pauli(cr_at(0.5)).alpha.at("ZXI") / 0.5;
  for (double w : {1.0, 2.5, 4.0, 5.0}) {
    const double ratio = driven_pauli(cr_at(w)).alpha.at("ZXI") / (slope * w);
    CHECK(std::abs(ratio - 1.0) < 0.05);
  }
}

TEST_CASE("small-amplitude limit approaches the static values quadratically") {
  const auto s0 = driven_pauli(cr_at(0.0));
  const double d1 = driven_pauli(cr_at(1.0)).alpha.at("ZZI") - s0.alpha.at("ZZI");
  const double d2 = driven_pauli(cr_at(2.0)).alpha.at("ZZI") - s0.alpha.at("ZZI");
  CHECK(d2 / d1 == doctest::Approx(4.0).epsilon(0.02));
}

TEST_CASE("fit: pure quadratic") {
  std::vector<double> w, y, zx, zzz;
  for (double x : {1.0, 2.0, 3.5, 5.0, 7.0, 10.0, 14.0}) {
    w.push_back(x);
    y.push_back(3.0 * x * x);
    zx.push_back(0.7 * x);
    zzz.push_back(-2.0 + 0.1 * x * x);
  }
  const auto f = fit_scaling(w, y, zx, zzz);
  CHECK(f.eta2 == doctest::Approx(3.0).epsilon(1e-8));
  CHECK(std::abs(f.eta_a * std::pow(14.0, f.a)) < 1e-6);
  CHECK(std::abs(f.mu1 - 0.7) < 1e-6);
  CHECK(f.zzz0 == doctest::Approx(-2.0).epsilon(1e-10));
  CHECK(f.nu2 == doctest::Approx(0.1).epsilon(1e-10));
  CHECK(f.failures.empty());
}

TEST_CASE("fit: free exponent is recovered") {
  std::vector<double> w, y;
  for (double x = 2.0; x <= 30.0; x *= 1.3) {
    w.push_back(x);
    y.push_back(50.0 + 0.2 * x * x + 3e-4 * std::pow(x, 4.5));
  }
  const auto f = fit_free_power(w, y, {0.0, 2.0}, 2.5, 8.0);
  CHECK(f.exponent == doctest::Approx(4.5).epsilon(1e-4));
  CHECK(f.coeffs[0] == doctest::Approx(50.0).epsilon(1e-5));
  CHECK(f.coeffs[2] == doctest::Approx(3e-4).epsilon(1e-3));
  CHECK(f.residual < 1e-8);
}

TEST_CASE("fit failures are reported with their residual") {
  std::vector<double> w, y, zzz;
  for (int k = 0; k < 8; ++k) {
    w.push_back(1.0 + k);
    y.push_back(k % 2 ? 10.0 : -10.0);
    zzz.push_back(k % 2 ? 1.0 : -1.0);
  }
  const auto f = fit_scaling(w, y, y, zzz);
  CHECK(f.failures.size() == 3);
  CHECK(f.fit_residual() > kFitThreshold);
  CHECK(f.failures[0].find("ZZ residual") == 0);
}

TEST_CASE("scaling fit preconditions") {
  const auto s = cr_at(18.0);
  CHECK_THROWS_AS(scaling_fit(s, {1, 2, 3, 4, 5}), std::invalid_argument);
  CHECK_THROWS_AS(scaling_fit(s, {1, 2, 3, 4, 5, 9}), std::invalid_argument);
}

TEST_CASE("resonance table: symmetric rows are exact") {
  auto s = cr_at(18.0);
  const auto rows = resonance_catalog(s);
  CHECK(rows.size() == 16);
  CHECK(row_named(rows, "|001>~|010>, |101>~|110>").solved_detuning == 0.0);
  s.qubits[2].anharm_mhz = s.qubits[1].anharm_mhz;
  CHECK(row_named(resonance_catalog(s), "|020>~|002>").solved_detuning == 0.0);
}

TEST_CASE("resonance table against the printed column") {
  const auto rows = resonance_catalog(cr_at(18.0));
  for (const auto& r : rows) {
    CAPTURE(r.state_pair);
    CHECK(std::abs(r.residual) < 1e-3);
    CHECK(r.satisfiable);
    if (r.state_pair == "|300>|n+1>~|202>|n>") {
      CHECK_FALSE(r.matches);
      CHECK(r.solved_detuning == doctest::Approx(-43.0));
    } else {
      CHECK(r.matches);
    }
  }
  CHECK(row_named(rows, "|011>~|200>").solved_detuning == doctest::Approx(56.0));
}

TEST_CASE("resonance catalog without a drive has static rows only") {
  auto s = cr_at(18.0);
  s.drive.reset();
  const auto rows = resonance_catalog(s);
  CHECK(rows.size() == 12);
  for (const auto& r : rows) CHECK(r.kind == ResonanceKind::static_);
}

TEST_CASE("target-spectator resonance is flagged by the driven solver") {
  auto s = cr_at(18.0);
  const auto res = driven_detuning_sweep(s, {-2.0, -1.0, 0.0, 1.0, 2.0});
  bool flagged = false;
  for (const auto& r : res) flagged = flagged || r.hybridized;
  CHECK(flagged);
  CHECK_FALSE(driven_detuning_sweep(s, {-150.0})[0].hybridized);
}
