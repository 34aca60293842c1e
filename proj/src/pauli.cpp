#include "stray/pauli.hpp"

#include <bit>
#include <cmath>
#include <stdexcept>

#include "stray/units.hpp"

namespace stray {

double PauliCoefficients::at(const std::string& p) const {
  auto it = khz.find(p);
  return it == khz.end() ? 0.0 : it->second;
}

double pauli_normalization(const std::string& p) {
  int z = 0;
  for (char c : p) z += (c == 'Z');
  return std::ldexp(1.0, z);
}

namespace {

std::string z_string(unsigned mask, std::size_t n) {
  std::string s(n, 'I');
  for (std::size_t q = 0; q < n; ++q)
    if (mask >> (n - 1 - q) & 1u) s[q] = 'Z';
  return s;
}

}  // namespace

PauliCoefficients pauli_from_energies(const std::vector<double>& e, std::size_t n) {
  const std::size_t d = std::size_t{1} << n;
  if (e.size() != d) throw std::invalid_argument("need 2^n computational energies");
  PauliCoefficients out;
  for (unsigned mask = 0; mask < d; ++mask) {
    double acc = 0.0;
    for (unsigned s = 0; s < d; ++s) {
      if (!std::isfinite(e[s])) throw std::invalid_argument("missing computational energy");
      acc += (std::popcount(mask & s) & 1 ? -1.0 : 1.0) * e[s];
    }
    const auto name = z_string(mask, n);
    out.khz[name] = units::to_khz(pauli_normalization(name) * acc / double(d));
  }
  return out;
}

std::vector<double> energies_from_pauli(const PauliCoefficients& c, std::size_t n) {
  const std::size_t d = std::size_t{1} << n;
  std::vector<double> e(d, 0.0);
  for (unsigned mask = 0; mask < d; ++mask) {
    const auto name = z_string(mask, n);
    const double a = units::mhz(c.at(name) * 1e-3) / pauli_normalization(name);
    for (unsigned s = 0; s < d; ++s) e[s] += (std::popcount(mask & s) & 1 ? -a : a);
  }
  return e;
}

CMat pauli_matrix(const std::string& p) {
  CMat m = CMat::Identity(1, 1);
  for (char c : p) {
    CMat s(2, 2);
    switch (c) {
      case 'I': s << 1, 0, 0, 1; break;
      case 'X': s << 0, 1, 1, 0; break;
      case 'Y': s << 0, cplx(0, -1), cplx(0, 1), 0; break;
      case 'Z': s << 1, 0, 0, -1; break;
      default: throw std::invalid_argument("bad Pauli letter in '" + p + "'");
    }
    CMat k(m.rows() * 2, m.cols() * 2);
    for (Eigen::Index i = 0; i < m.rows(); ++i)
      for (Eigen::Index j = 0; j < m.cols(); ++j) k.block(2 * i, 2 * j, 2, 2) = m(i, j) * s;
    m = std::move(k);
  }
  return m;
}

PauliCoefficients pauli_decompose(const Mat& b, std::size_t n) {
  const Eigen::Index d = Eigen::Index{1} << n;
  if (b.rows() != d || b.cols() != d) throw std::invalid_argument("block must be 2^n square");
  const double scale = std::max(b.norm(), 1e-300);
  if ((b - b.transpose()).norm() > 1e-9 * scale)
    throw std::domain_error("non-Hermitian block");
  PauliCoefficients out;
  const char letters[] = {'I', 'X', 'Y', 'Z'};
  std::size_t total = std::size_t{1} << (2 * n);
  for (std::size_t code = 0; code < total; ++code) {
    std::string p(n, 'I');
    for (std::size_t q = 0; q < n; ++q) p[q] = letters[(code >> (2 * (n - 1 - q))) & 3u];
    const CMat pm = pauli_matrix(p);
    const cplx tr = (pm * b.cast<cplx>()).trace();
    if (std::abs(tr.imag()) > 1e-9 * scale * d) throw std::domain_error("non-Hermitian block");
    out.khz[p] = units::to_khz(pauli_normalization(p) * tr.real() / double(d));
  }
  return out;
}

double max_two_body(const PauliCoefficients& c, std::size_t n) {
  double m = 0.0;
  for (const auto& s : z_strings(n, 2)) m = std::max(m, std::abs(c.at(s)));
  return m;
}

std::vector<std::string> z_strings(std::size_t n, int weight) {
  std::vector<std::string> out;
  for (unsigned mask = 0; mask < (1u << n); ++mask)
    if (std::popcount(mask) == weight) out.push_back(z_string(mask, n));
  return out;
}

}  // namespace stray
