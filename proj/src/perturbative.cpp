#include "stray/perturbative.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "stray/units.hpp"

namespace stray {

namespace {

std::string join(const std::vector<std::string>& v) {
  std::string s = "resonance: ";
  for (std::size_t i = 0; i < v.size(); ++i) s += (i ? ", " : "") + v[i];
  return s;
}

std::string delta_name(std::size_t i, std::size_t j, int m, int n) {
  std::ostringstream o;
  o << "Delta^" << m << n << "_" << i + 1 << j + 1;
  return o.str();
}

// Collects every denominator below the floor before throwing once.
struct Guard {
  double floor;  // rad/ns
  std::vector<std::string> bad;
  double div(double num, double den, const std::string& what) {
    if (std::abs(den) < floor) {
      if (std::find(bad.begin(), bad.end(), what) == bad.end()) bad.push_back(what);
      return 0.0;
    }
    return num / den;
  }
  void check() const {
    if (!bad.empty()) throw ResonanceError(bad);
  }
};

}  // namespace

ResonanceError::ResonanceError(std::vector<std::string> v)
    : std::runtime_error(join(v)), offending(std::move(v)) {}

double coupler_detuning_mhz(const CircuitSpec& spec, std::size_t c, std::size_t q, int m) {
  return 1e3 * (spec.couplers.at(c).freq_ghz - spec.qubits.at(q).freq_ghz) - m * spec.qubits.at(q).anharm_mhz;
}

std::map<std::pair<std::size_t, int>, double> dressed_frequencies(const CircuitSpec& spec, int max_level,
                                                                   double floor_mhz) {
  std::map<std::pair<std::size_t, int>, double> out;
  std::vector<std::string> bad;
  for (std::size_t q = 0; q < spec.num_qubits(); ++q) {
    const auto& qs = spec.qubits[q];
    for (int n = 0; n <= max_level; ++n) {
      double e = (qs.freq_ghz * 1e3 + 0.5 * (n - 1) * qs.anharm_mhz) * n;  // MHz
      for (std::size_t c = 0; c < spec.couplers.size() && n > 0; ++c) {
        const double g = spec.g_qc(q, c);
        if (g == 0.0) continue;
        const double d = coupler_detuning_mhz(spec, c, q, n - 1);
        if (std::abs(d) < floor_mhz) {
          bad.push_back("Delta_" + spec.couplers[c].label + "," + qs.label + "(" + std::to_string(n - 1) + ")");
          continue;
        }
        e -= g * g * n / d;
      }
      out[{q, n}] = e * 1e-3;
    }
  }
  if (!bad.empty()) throw ResonanceError(bad);
  return out;
}

double effective_J(const CircuitSpec& spec, std::size_t i, std::size_t j, int m, int n, double floor_mhz) {
  if (i == j) throw std::invalid_argument("effective_J needs two distinct qubits");
  double J = spec.g_qq(i, j);
  std::vector<std::string> bad;
  for (std::size_t c = 0; c < spec.couplers.size(); ++c) {
    const double gi = spec.g_qc(i, c), gj = spec.g_qc(j, c);
    if (gi == 0.0 || gj == 0.0) continue;
    const double di = coupler_detuning_mhz(spec, c, i, m), dj = coupler_detuning_mhz(spec, c, j, n);
    if (std::abs(di) < floor_mhz) bad.push_back("Delta_" + spec.couplers[c].label + "," + spec.qubits[i].label);
    if (std::abs(dj) < floor_mhz) bad.push_back("Delta_" + spec.couplers[c].label + "," + spec.qubits[j].label);
    if (std::abs(di) < floor_mhz || std::abs(dj) < floor_mhz) continue;
    J -= 0.5 * gi * gj * (1.0 / di + 1.0 / dj);
  }
  if (!bad.empty()) throw ResonanceError(bad);
  return J;
}

double CouplingTable::transition(std::size_t q, int m) const {
  return level.at({q, m + 1}) - level.at({q, m});
}

double CouplingTable::coupling(std::size_t i, std::size_t j, int m, int n) const {
  if (i < j) return J.at({i, j, m, n});
  return J.at({j, i, n, m});
}

CouplingTable perturbative_table(const CircuitSpec& spec, double floor_mhz) {
  CouplingTable t;
  t.num_qubits = spec.num_qubits();
  for (const auto& [k, e] : dressed_frequencies(spec, 2, floor_mhz)) t.level[k] = units::ghz(e);
  for (std::size_t i = 0; i < t.num_qubits; ++i)
    for (std::size_t j = i + 1; j < t.num_qubits; ++j)
      for (int m = 0; m <= 1; ++m)
        for (int n = 0; n <= 1; ++n) t.J[{i, j, m, n}] = units::mhz(effective_J(spec, i, j, m, n, floor_mhz));
  return t;
}

double beta_ij(const CircuitSpec& spec, std::size_t i, std::size_t j) {
  for (std::size_t c = 0; c < spec.couplers.size(); ++c) {
    if (spec.g_qc(i, c) == 0.0 || spec.g_qc(j, c) == 0.0) continue;
    const double di = spec.qubits[i].anharm_mhz, dj = spec.qubits[j].anharm_mhz;
    return (dj / di) * (coupler_detuning_mhz(spec, c, i, 0) / coupler_detuning_mhz(spec, c, j, 0)) *
           (coupler_detuning_mhz(spec, c, i, 1) / coupler_detuning_mhz(spec, c, j, 1));
  }
  throw std::invalid_argument("qubits " + spec.qubits[i].label + " and " + spec.qubits[j].label +
                              " share no coupler");
}

EffectiveCouplingTable effective_coupling_table(const CircuitSpec& spec, double floor_mhz) {
  EffectiveCouplingTable out;
  out.dressed_levels_ghz = dressed_frequencies(spec, 2, floor_mhz);
  const auto t = perturbative_table(spec, floor_mhz);
  const std::size_t nq = spec.num_qubits();
  for (std::size_t i = 0; i < nq; ++i)
    for (std::size_t j = 0; j < nq; ++j) {
      if (i == j) continue;
      for (int m = 0; m <= 1; ++m)
        for (int n = 0; n <= 1; ++n) {
          out.J_mhz[{i, j, m, n}] = units::to_mhz(t.coupling(i, j, m, n));
          out.delta_mhz[{i, j, m, n}] = units::to_mhz(t.detuning(i, j, m, n));
        }
      bool shared = false;
      for (std::size_t c = 0; c < spec.couplers.size(); ++c)
        shared |= spec.g_qc(i, c) != 0.0 && spec.g_qc(j, c) != 0.0;
      if (shared) out.beta[{i, j}] = beta_ij(spec, i, j);
    }
  for (std::size_t c = 0; c < spec.couplers.size(); ++c)
    for (std::size_t q = 0; q < nq; ++q)
      if (spec.g_qc(q, c) != 0.0)
        for (int m = 0; m <= 2; ++m) out.coupler_delta_mhz[{c, q, m}] = coupler_detuning_mhz(spec, c, q, m);
  return out;
}

IdentityResiduals identity_residuals(const std::array<double, 4>& J, double beta) {
  IdentityResiduals r;
  r.J = J;
  r.beta = beta;
  r.r1 = J[1] + J[2] - J[0] - J[3];
  r.r2 = J[1] - beta * J[2] - (1.0 - beta) * J[0];
  for (double x : J) r.max_abs_J = std::max(r.max_abs_J, std::abs(x));
  return r;
}

IdentityResiduals check_J_identities(const CircuitSpec& spec, std::size_t i, std::size_t j) {
  std::array<double, 4> J{effective_J(spec, i, j, 0, 0), effective_J(spec, i, j, 0, 1),
                          effective_J(spec, i, j, 1, 0), effective_J(spec, i, j, 1, 1)};
  return identity_residuals(J, beta_ij(spec, i, j));
}

namespace {

double zeta_pair_g(const CouplingTable& t, std::size_t i, std::size_t j, Guard& g) {
  const double j01 = t.coupling(i, j, 0, 1), j10 = t.coupling(i, j, 1, 0);
  return 2.0 * (g.div(j01 * j01, t.detuning(i, j, 0, 1), delta_name(i, j, 0, 1)) -
                g.div(j10 * j10, t.detuning(i, j, 1, 0), delta_name(i, j, 1, 0)));
}

double term(const CouplingTable& t, Guard& g, double num, std::size_t a, std::size_t b, int ma, int mb,
            std::size_t c, std::size_t d, int mc, int md) {
  const double d1 = t.detuning(a, b, ma, mb), d2 = t.detuning(c, d, mc, md);
  if (std::abs(d1) < g.floor) g.div(0, d1, delta_name(a, b, ma, mb));
  if (std::abs(d2) < g.floor) g.div(0, d2, delta_name(c, d, mc, md));
  if (std::abs(d1) < g.floor || std::abs(d2) < g.floor) return 0.0;
  return num / (d1 * d2);
}

double K_g(const CouplingTable& t, std::size_t i, std::size_t j, std::size_t k, int n, Guard& g) {
  std::array<std::size_t, 3> s{i, j, k};
  std::sort(s.begin(), s.end());
  const std::array<std::array<std::size_t, 3>, 3> orders{{{s[0], s[1], s[2]}, {s[0], s[2], s[1]}, {s[1], s[2], s[0]}}};
  const int m = 1 - n;
  double acc = 0.0;
  for (const auto& [a, b, c] : orders)
    acc += term(t, g, t.coupling(a, b, n, n) * t.coupling(a, c, n, m) * t.coupling(b, c, n, m), a, c, n, m, b, c, n, m);
  return -acc;
}

double zeta_triple_g(const CouplingTable& t, std::size_t i, std::size_t j, std::size_t k, Guard& g) {
  // Same term order for (i, j) and (j, i), so the symmetry is bitwise.
  if (i > j) std::swap(i, j);
  auto J = [&](std::size_t a, std::size_t b, int m, int n) { return t.coupling(a, b, m, n); };
  double s = term(t, g, J(i, j, 0, 0) * J(i, k, 0, 0) * J(j, k, 0, 0), i, k, 0, 0, j, k, 0, 0);
  s += term(t, g, J(i, j, 0, 0) * J(i, k, 0, 1) * J(j, k, 0, 1), i, k, 0, 1, j, k, 0, 1);
  s -= term(t, g, J(i, j, 0, 1) * J(i, k, 0, 0) * J(j, k, 1, 0), i, k, 0, 0, j, k, 1, 0);
  s -= term(t, g, J(i, j, 1, 0) * J(i, k, 1, 0) * J(j, k, 0, 0), i, k, 1, 0, j, k, 0, 0);
  s -= K_g(t, i, j, k, 1, g);
  return 4.0 * s;
}

std::string zz_name(std::size_t n, std::size_t i, std::size_t j) {
  std::string s(n, 'I');
  s[i] = s[j] = 'Z';
  return s;
}

}  // namespace

double zeta_pair(const CouplingTable& t, std::size_t i, std::size_t j) {
  Guard g{0.0, {}};
  return zeta_pair_g(t, i, j, g);
}

double zeta_triple(const CouplingTable& t, std::size_t i, std::size_t j, std::size_t k) {
  Guard g{0.0, {}};
  return zeta_triple_g(t, i, j, k, g);
}

double K_term(const CouplingTable& t, std::size_t i, std::size_t j, std::size_t k, int n) {
  Guard g{0.0, {}};
  return K_g(t, i, j, k, n, g);
}

StrayCouplingBreakdown stray_breakdown(const CouplingTable& t, const FormulaOptions& opt) {
  Guard g{units::mhz(opt.floor_mhz), {}};
  StrayCouplingBreakdown out;
  const std::size_t nq = t.num_qubits;
  for (std::size_t i = 0; i < nq; ++i)
    for (std::size_t j = i + 1; j < nq; ++j) {
      const double z2 = zeta_pair_g(t, i, j, g);
      out.zeta2[{i, j}] = units::to_khz(z2);
      double total = z2;
      for (std::size_t k = 0; k < nq; ++k) {
        if (k == i || k == j) continue;
        const double z3 = opt.third_order ? zeta_triple_g(t, i, j, k, g) : 0.0;
        out.zeta3[{i, j, k}] = units::to_khz(z3);
        total += z3;
      }
      out.alpha[zz_name(nq, i, j)] = units::to_khz(total);
    }
  for (std::size_t i = 0; i < nq; ++i)
    for (std::size_t j = i + 1; j < nq; ++j)
      for (std::size_t k = j + 1; k < nq; ++k) {
        double k0 = 0.0, k1 = 0.0;
        if (opt.third_order) {
          k0 = K_g(t, i, j, k, 0, g);
          k1 = K_g(t, i, j, k, 1, g);
        }
        out.K[{i, j, k, 0}] = units::to_khz(k0);
        out.K[{i, j, k, 1}] = units::to_khz(k1);
        std::string s(nq, 'I');
        s[i] = s[j] = s[k] = 'Z';
        out.alpha[s] = units::to_khz(8.0 * (k0 + k1));
      }
  g.check();
  return out;
}

StrayCouplingBreakdown stray_breakdown(const CircuitSpec& spec, const FormulaOptions& opt) {
  return stray_breakdown(perturbative_table(spec, opt.floor_mhz), opt);
}

PauliCoefficients explicit_alphas(const CouplingTable& t) {
  if (t.num_qubits != 3) throw std::invalid_argument("explicit formulas need exactly three qubits");
  auto J = [&](int a, int b, int m, int n) { return t.coupling(a - 1, b - 1, m, n); };
  auto D = [&](int a, int b, int m, int n) { return t.detuning(a - 1, b - 1, m, n); };
  auto sq = [](double x) { return x * x; };

  std::vector<std::string> bad;
  for (int i = 1; i <= 3; ++i)
    for (int j = i + 1; j <= 3; ++j)
      for (int m = 0; m <= 1; ++m)
        for (int n = 0; n <= 1; ++n)
          if (std::abs(D(i, j, m, n)) < units::mhz(kDefaultResonanceFloorMhz))
            bad.push_back(delta_name(i - 1, j - 1, m, n));
  if (!bad.empty()) throw ResonanceError(bad);

  // Triple products shared by all four coefficients.
  const double a = J(1, 3, 1, 1) * J(2, 3, 0, 1) * J(1, 2, 1, 0) / (D(2, 3, 0, 1) * D(1, 2, 1, 0));
  const double b = J(2, 3, 1, 1) * J(1, 2, 0, 1) * J(1, 3, 0, 1) / (D(1, 2, 0, 1) * D(1, 3, 0, 1));
  const double c = J(1, 2, 1, 1) * J(1, 3, 1, 0) * J(2, 3, 1, 0) / (D(1, 3, 1, 0) * D(2, 3, 1, 0));

  PauliCoefficients out;
  const double zzi =
      2 * sq(J(1, 2, 0, 1)) / D(1, 2, 0, 1) - 2 * sq(J(1, 2, 1, 0)) / D(1, 2, 1, 0) +
      4 * J(1, 2, 0, 0) * J(2, 3, 0, 0) * J(1, 3, 0, 0) / (D(2, 3, 0, 0) * D(1, 3, 0, 0)) +
      4 * (J(1, 2, 0, 0) * J(2, 3, 0, 1) * J(1, 3, 0, 1) / (D(2, 3, 0, 1) * D(1, 3, 0, 1)) -
           J(1, 3, 0, 0) * J(1, 2, 0, 1) * J(2, 3, 1, 0) / (D(2, 3, 1, 0) * D(1, 3, 0, 0)) -
           J(2, 3, 0, 0) * J(1, 3, 1, 0) * J(1, 2, 1, 0) / (D(1, 3, 1, 0) * D(2, 3, 0, 0)) - a + b + c);
  // The leading three-body term enters with a minus sign here, as third-order
  // perturbation theory on the qubit-only model gives.
  const double ziz =
      2 * sq(J(1, 3, 0, 1)) / D(1, 3, 0, 1) - 2 * sq(J(1, 3, 1, 0)) / D(1, 3, 1, 0) -
      4 * J(1, 3, 0, 0) * J(2, 3, 0, 0) * J(1, 2, 0, 0) / (D(2, 3, 0, 0) * D(1, 2, 0, 0)) +
      4 * (-J(1, 3, 0, 0) * J(1, 2, 0, 1) * J(2, 3, 1, 0) / (D(1, 2, 0, 1) * D(2, 3, 1, 0)) +
           J(1, 2, 0, 0) * J(2, 3, 0, 1) * J(1, 3, 0, 1) / (D(1, 2, 0, 0) * D(2, 3, 0, 1)) +
           J(2, 3, 0, 0) * J(1, 3, 1, 0) * J(1, 2, 1, 0) / (D(2, 3, 0, 0) * D(1, 2, 1, 0)) - a + b + c);
  // Last term of the first bracket: the 1-2 detuning is taken at levels (0,1).
  const double izz =
      2 * sq(J(2, 3, 0, 1)) / D(2, 3, 0, 1) - 2 * sq(J(2, 3, 1, 0)) / D(2, 3, 1, 0) +
      4 * J(2, 3, 0, 0) * J(1, 3, 0, 0) * J(1, 2, 0, 0) / (D(1, 3, 0, 0) * D(1, 2, 0, 0)) +
      4 * (J(2, 3, 0, 0) * J(1, 2, 1, 0) * J(1, 3, 1, 0) / (D(1, 2, 1, 0) * D(1, 3, 1, 0)) -
           J(1, 2, 0, 0) * J(2, 3, 0, 1) * J(1, 3, 0, 1) / (D(1, 2, 0, 0) * D(1, 3, 0, 1)) -
           J(1, 3, 0, 0) * J(2, 3, 1, 0) * J(1, 2, 0, 1) / (D(1, 3, 0, 0) * D(1, 2, 0, 1)) - a + b + c);
  const double zzz =
      8 * (J(1, 3, 0, 0) * J(2, 3, 1, 0) * J(1, 2, 0, 1) / (D(2, 3, 1, 0) * D(1, 2, 0, 1)) -
           J(1, 2, 0, 0) * J(1, 3, 0, 1) * J(2, 3, 0, 1) / (D(2, 3, 0, 1) * D(1, 3, 0, 1)) -
           J(2, 3, 0, 0) * J(1, 2, 1, 0) * J(1, 3, 1, 0) / (D(1, 2, 1, 0) * D(1, 3, 1, 0)) + a - b - c);
  out["ZZI"] = units::to_khz(zzi);
  out["ZIZ"] = units::to_khz(ziz);
  out["IZZ"] = units::to_khz(izz);
  out["ZZZ"] = units::to_khz(zzz);
  return out;
}

PauliCoefficients explicit_alphas(const CircuitSpec& spec) { return explicit_alphas(perturbative_table(spec)); }

}  // namespace stray
