#include "stray/drive.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include <boost/math/tools/minima.hpp>

#include "stray/blockdiag.hpp"
#include "stray/parallel.hpp"
#include "stray/units.hpp"

namespace stray {

HamiltonianMatrix driven_hamiltonian(const CircuitSpec& spec) {
  if (!spec.drive) throw std::invalid_argument("circuit has no drive");
  auto h = build_rwa_hamiltonian(spec);
  const double wd = units::ghz(spec.drive->freq_ghz);
  const double half = 0.5 * units::mhz(spec.drive->amp_mhz);
  const auto c = static_cast<std::size_t>(spec.qubit_index(spec.drive->target));
  const auto& b = h.basis;
  const std::size_t step = b.stride(c);
  const int top = b.dims()[c] - 1;
  for (std::size_t i = 0; i < b.size(); ++i) {
    h.entries(i, i) -= wd * b.excitations(i);
    const int n = b.occupation(i, c);
    if (n < top && half != 0.0) {
      const double v = half * std::sqrt(double(n + 1));
      h.entries(i + step, i) += v;
      h.entries(i, i + step) += v;
    }
  }
  return h;
}

CRRoles cr_roles(const CircuitSpec& spec, std::size_t target) {
  if (!spec.drive) throw std::invalid_argument("circuit has no drive");
  if (spec.num_qubits() != 3) throw std::invalid_argument("cross-resonance roles need exactly three qubits");
  CRRoles r;
  r.control = static_cast<std::size_t>(spec.qubit_index(spec.drive->target));
  r.target = target;
  if (r.target >= 3 || r.target == r.control) throw std::invalid_argument("target must be a qubit other than the control");
  r.spectator = 3 - r.control - r.target;
  return r;
}

DrivenPauli driven_pauli(const CircuitSpec& spec, std::size_t target) {
  const auto roles = cr_roles(spec, target);
  const auto h = driven_hamiltonian(spec);
  const std::size_t nq = spec.num_qubits();
  const auto comp = computational_states(h.basis, nq);
  const unsigned tbit = 1u << (nq - 1 - roles.target);

  std::vector<std::vector<std::size_t>> blocks;
  std::vector<std::vector<unsigned>> block_bits;
  for (unsigned s = 0; s < comp.size(); ++s)
    if (!(s & tbit)) {
      blocks.push_back({comp[s], comp[s | tbit]});
      block_bits.push_back({s, s | tbit});
    }

  const auto spectrum = exact_spectrum(h, comp);
  const auto eff = least_action_blockdiag(spectrum, h, blocks, 0.0);

  DrivenPauli out;
  const auto d = static_cast<Eigen::Index>(comp.size());
  Mat m = Mat::Zero(d, d);
  double min_sing = 1.0;
  for (std::size_t k = 0; k < eff.size(); ++k) {
    for (std::size_t r = 0; r < 2; ++r)
      for (std::size_t c = 0; c < 2; ++c) m(block_bits[k][r], block_bits[k][c]) = eff[k].block_matrix(r, c);
    out.min_overlap = std::min(out.min_overlap, eff[k].min_overlap);
    out.residual = std::max(out.residual, eff[k].residual);
    min_sing = std::min(min_sing, eff[k].min_singular);
  }
  out.hybridized = out.min_overlap <= kHybridizationOverlap || min_sing < 1e-2;
  out.alpha = pauli_decompose(m, nq);
  return out;
}

std::vector<DrivenPauli> driven_detuning_sweep(const CircuitSpec& spec, const std::vector<double>& delta_st_mhz,
                                               std::size_t target) {
  const auto roles = cr_roles(spec, target);
  return parallel_map(delta_st_mhz.size(), [&](std::size_t i) {
    CircuitSpec s = spec;
    s.qubits[roles.spectator].freq_ghz = s.qubits[roles.target].freq_ghz + 1e-3 * delta_st_mhz[i];
    return driven_pauli(s, target);
  });
}

namespace {

double rel_rms(const Vec& r, const Vec& y) {
  const double ny = std::sqrt(y.squaredNorm() / double(y.size()));
  const double nr = std::sqrt(r.squaredNorm() / double(r.size()));
  return ny > 0 ? nr / ny : nr;
}

// Least squares on columns x^p with x scaled to [0, 1] for conditioning.
PowerFit solve_powers(const std::vector<double>& x, const std::vector<double>& y, const std::vector<double>& p) {
  const auto n = static_cast<Eigen::Index>(x.size());
  const double xs = *std::max_element(x.begin(), x.end());
  Mat a(n, static_cast<Eigen::Index>(p.size()));
  Vec yy(n);
  for (Eigen::Index i = 0; i < n; ++i) {
    yy(i) = y[i];
    for (std::size_t k = 0; k < p.size(); ++k) a(i, k) = std::pow(x[i] / xs, p[k]);
  }
  const Vec c = a.colPivHouseholderQr().solve(yy);
  PowerFit f;
  for (std::size_t k = 0; k < p.size(); ++k) f.coeffs.push_back(c(k) / std::pow(xs, p[k]));
  f.residual = rel_rms(a * c - yy, yy);
  return f;
}

void check_samples(const std::vector<double>& x, const std::vector<double>& y) {
  if (x.size() != y.size() || x.empty()) throw std::invalid_argument("fit needs matching, non-empty samples");
  for (double v : x)
    if (!(v >= 0.0)) throw std::invalid_argument("fit abscissae must be non-negative");
}

}  // namespace

PowerFit fit_fixed_powers(const std::vector<double>& x, const std::vector<double>& y,
                          const std::vector<double>& powers) {
  check_samples(x, y);
  return solve_powers(x, y, powers);
}

PowerFit fit_free_power(const std::vector<double>& x, const std::vector<double>& y,
                        const std::vector<double>& fixed, double lo, double hi) {
  check_samples(x, y);
  auto cost = [&](double e) {
    auto p = fixed;
    p.push_back(e);
    return solve_powers(x, y, p).residual;
  };
  // Coarse scan so the bracketed search starts in the right basin.
  constexpr int kScan = 48;
  int best = 0;
  double best_cost = INFINITY;
  for (int k = 0; k <= kScan; ++k) {
    const double c = cost(lo + (hi - lo) * k / kScan);
    if (c < best_cost) best_cost = c, best = k;
  }
  const double a = lo + (hi - lo) * std::max(0, best - 1) / kScan;
  const double b = lo + (hi - lo) * std::min(kScan, best + 1) / kScan;
  const auto [e, r] = boost::math::tools::brent_find_minima(cost, a, b, 40);
  auto p = fixed;
  p.push_back(e);
  auto f = solve_powers(x, y, p);
  f.exponent = e;
  (void)r;
  return f;
}

double ScalingFit::fit_residual() const { return std::max({zz_residual, zx_residual, zzz_residual}); }

ScalingFit fit_scaling(const std::vector<double>& w, const std::vector<double>& zz, const std::vector<double>& zx,
                       const std::vector<double>& zzz) {
  ScalingFit s;
  const auto fz = fit_free_power(w, zz, {0.0, 2.0}, 2.5, 8.0);
  s.alpha0 = fz.coeffs[0];
  s.eta2 = fz.coeffs[1];
  s.eta_a = fz.coeffs[2];
  s.a = fz.exponent;
  s.zz_residual = fz.residual;
  const auto fx = fit_free_power(w, zx, {1.0}, 1.5, 6.0);
  s.mu1 = fx.coeffs[0];
  s.mu_b = fx.coeffs[1];
  s.b = fx.exponent;
  s.zx_residual = fx.residual;
  const auto f3 = fit_fixed_powers(w, zzz, {0.0, 2.0});
  s.zzz0 = f3.coeffs[0];
  s.nu2 = f3.coeffs[1];
  s.zzz_residual = f3.residual;
  if (s.zz_residual > kFitThreshold) s.failures.push_back("ZZ residual " + std::to_string(s.zz_residual));
  if (s.zx_residual > kFitThreshold) s.failures.push_back("ZX residual " + std::to_string(s.zx_residual));
  if (s.zzz_residual > kFitThreshold) s.failures.push_back("ZZZ residual " + std::to_string(s.zzz_residual));
  return s;
}

namespace {

std::string role_string(const CRRoles& r, char c, char t, char s) {
  std::string p(3, 'I');
  p[r.control] = c;
  p[r.target] = t;
  p[r.spectator] = s;
  return p;
}

}  // namespace

ScalingFit scaling_fit(const CircuitSpec& spec, const std::vector<double>& omega, std::size_t target) {
  const auto roles = cr_roles(spec, target);
  if (omega.size() < 6) throw std::invalid_argument("scaling fit needs at least six amplitudes");
  const auto [mn, mx] = std::minmax_element(omega.begin(), omega.end());
  if (!(*mn > 0.0) || *mx < 10.0 * *mn) throw std::invalid_argument("amplitudes must span a decade");
  const auto res = parallel_map(omega.size(), [&](std::size_t i) {
    CircuitSpec s = spec;
    s.drive->amp_mhz = omega[i];
    return driven_pauli(s, target);
  });
  std::vector<double> zz, zx, zzz;
  for (const auto& r : res) {
    zz.push_back(r.alpha.at(role_string(roles, 'Z', 'Z', 'I')));
    zx.push_back(r.alpha.at(role_string(roles, 'Z', 'X', 'I')));
    zzz.push_back(r.alpha.at("ZZZ"));
  }
  return fit_scaling(omega, zz, zx, zzz);
}

const char* to_string(ResonanceKind k) { return k == ResonanceKind::static_ ? "static" : "cr_activated"; }

std::vector<ResonanceCondition> resonance_table() {
  using K = ResonanceKind;
  auto row = [](std::string states, std::string cond, LinearCondition rel, K kind, double printed) {
    ResonanceCondition r;
    r.state_pair = std::move(states);
    r.condition = std::move(cond);
    r.relation = rel;
    r.kind = kind;
    r.printed_detuning = printed;
    return r;
  };
  // Conditions rearranged to "= 0"; e.g. D_st = d2 becomes D_st - d2 = 0.
  return {
      row("|001>~|010>, |101>~|110>", "D_st = 0", {.st = 1}, K::static_, 0.0),
      row("|001>~|100>, |011>~|110>", "D_cs = 0", {.cs = 1}, K::static_, 137.0),
      row("|011>~|020>, |111>~|120>", "D_st = d2", {.st = 1, .d2 = -1}, K::static_, -218.0),
      row("|011>~|002>, |111>~|102>", "D_st = -d3", {.st = 1, .d3 = 1}, K::static_, 213.0),
      // Printed as D_cs + D_cs; the level bookkeeping of |011> vs |200> and the
      // printed value both need D_cs + D_ct.
      row("|011>~|200>", "D_cs + D_ct = -d1", {.ct = 1, .cs = 1, .d1 = 1}, K::static_, 56.0),
      row("|101>~|200>, |111>~|210>", "D_cs = -d1", {.cs = 1, .d1 = 1}, K::static_, -81.0),
      row("|101>~|002>, |111>~|012>", "D_cs = d3", {.cs = 1, .d3 = -1}, K::static_, 350.0),
      row("|101>~|020>", "D_ct + D_st = d2", {.st = 1, .ct = 1, .d2 = -1}, K::static_, -355.0),
      row("|110>~|002>", "D_cs - D_st = d3", {.st = -1, .cs = 1, .d3 = -1}, K::static_, 175.0),
      row("|020>~|002>", "2 D_st = d2 - d3", {.st = 2, .d2 = -1, .d3 = 1}, K::static_, -2.5),
      row("|200>~|002>", "2 D_st - 2 D_ct = d1 - d3", {.st = 2, .ct = -2, .d1 = -1, .d3 = 1}, K::static_, 134.5),
      row("|012>~|120>", "2 D_st = D_ct + d2 - d3", {.st = 2, .ct = -1, .d2 = -1, .d3 = 1}, K::static_, 66.0),
      row("|000>|n+2>~|002>|n>", "2 D_st = -d3", {.st = 2, .d3 = 1}, K::cr_activated, 106.5),
      row("|000>|n+2>~|101>|n>", "D_st = -D_ct", {.st = 1, .ct = 1}, K::cr_activated, -137.0),
      row("|300>|n+1>~|202>|n>", "2 D_st = D_ct + 2 d1 - d3", {.st = 2, .ct = -1, .d1 = -2, .d3 = 1},
          K::cr_activated, -180.0),
      row("|003>|n+1>~|400>|n>", "3 D_st = 4 D_ct + 6 d1 - 3 d3", {.st = 3, .ct = -4, .d1 = -6, .d3 = 3},
          K::cr_activated, -40.3),
  };
}

std::vector<ResonanceCondition> resonance_catalog(const CircuitSpec& spec, std::size_t target) {
  if (spec.num_qubits() != 3) throw std::invalid_argument("resonance catalog needs exactly three qubits");
  CRRoles r;
  if (spec.drive) {
    r = cr_roles(spec, target);
  } else {
    r.target = target;
    r.control = target == 0 ? 1 : 0;
    r.spectator = 3 - r.control - r.target;
  }
  const double dct = 1e3 * (spec.qubits[r.control].freq_ghz - spec.qubits[r.target].freq_ghz);
  const double d1 = spec.qubits[r.control].anharm_mhz, d2 = spec.qubits[r.target].anharm_mhz,
               d3 = spec.qubits[r.spectator].anharm_mhz;
  std::vector<ResonanceCondition> out;
  for (auto row : resonance_table()) {
    if (row.kind == ResonanceKind::cr_activated && !spec.drive) continue;
    const auto& c = row.relation;
    // D_cs = D_ct - D_st.
    const double slope = c.st - c.cs;
    const double rest = (c.ct + c.cs) * dct + c.d1 * d1 + c.d2 * d2 + c.d3 * d3;
    if (std::abs(slope) < 1e-12) {
      row.satisfiable = false;
      row.solved_detuning = NAN;
      row.residual = rest;
    } else {
      const double st = -rest / slope;
      row.solved_detuning = st;
      row.residual = c.st * st + c.ct * dct + c.cs * (dct - st) + c.d1 * d1 + c.d2 * d2 + c.d3 * d3;
      row.satisfiable = std::abs(st) <= kResonanceWindow;
      row.matches = std::abs(st - row.printed_detuning) <= kTableTolerance;
    }
    out.push_back(std::move(row));
  }
  return out;
}

}  // namespace stray
