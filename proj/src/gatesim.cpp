#include "stray/gatesim.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>

#include <boost/math/tools/minima.hpp>

#include "stray/parallel.hpp"

namespace stray {

namespace {

Mat submatrix(const Mat& a, const std::vector<int>& idx) {
  const auto n = static_cast<Eigen::Index>(idx.size());
  Mat s(n, n);
  for (Eigen::Index j = 0; j < n; ++j)
    for (Eigen::Index i = 0; i < n; ++i) s(i, j) = a(idx[i], idx[j]);
  return s;
}

CMat phases(const Vec& e, double t) {
  CMat d = CMat::Zero(e.size(), e.size());
  for (Eigen::Index k = 0; k < e.size(); ++k) d(k, k) = std::polar(1.0, -e(k) * t);
  return d;
}

}  // namespace

CMat propagator(const HamiltonianMatrix& h, double t) {
  const auto n = static_cast<Eigen::Index>(h.dimension());
  CMat u = CMat::Zero(n, n);
  for (const auto& blk : block_structure(h.entries)) {
    const auto e = symmetric_eigen(submatrix(h.entries, blk));
    const CMat v = e.vectors.cast<cplx>();
    const CMat ub = v * phases(e.values, t) * v.transpose();
    for (std::size_t j = 0; j < blk.size(); ++j)
      for (std::size_t i = 0; i < blk.size(); ++i) u(blk[i], blk[j]) = ub(i, j);
  }
  return u;
}

double cz_average_fidelity(const CMat& m) {
  if (m.rows() != 4 || m.cols() != 4) throw std::invalid_argument("CZ fidelity needs a 4x4 map");
  const cplx u00 = m(0, 0), u01 = m(1, 1), u10 = m(2, 2), u11 = m(3, 3);
  // The phase on b is optimal in closed form for a fixed phase on a.
  auto overlap = [&](double pa) {
    const cplx z = std::polar(1.0, pa);
    return std::abs(u00 + z * u10) + std::abs(u01 - z * u11);
  };
  constexpr int kScan = 720;
  const double step = 2.0 * std::numbers::pi / kScan;
  int best = 0;
  double best_val = -1;
  for (int k = 0; k < kScan; ++k) {
    const double v = overlap(k * step);
    if (v > best_val) best_val = v, best = k;
  }
  const auto r = boost::math::tools::brent_find_minima([&](double p) { return -overlap(p); }, (best - 1) * step,
                                                       (best + 1) * step, 50);
  const double tr = std::max(best_val, -r.second);
  const double norm = (m.adjoint() * m).trace().real();
  return (norm + tr * tr) / 20.0;
}

double non_unitarity(const CMat& m) {
  Eigen::JacobiSVD<CMat> svd(m);
  double dev = 0;
  for (Eigen::Index i = 0; i < svd.singularValues().size(); ++i) {
    const double s = svd.singularValues()(i);
    dev = std::max(dev, std::abs(s * s - 1.0));
  }
  return dev;
}

CZEvolution::CZEvolution(const HamiltonianMatrix& h, std::size_t qa, std::size_t qb) {
  if (qa == qb || qa >= h.num_qubits || qb >= h.num_qubits) throw std::invalid_argument("invalid gated pair");
  const auto& b = h.basis;
  std::vector<std::size_t> states;
  for (int s = 0; s < 4; ++s) {
    std::vector<int> occ(b.num_modes(), 0);
    occ[qa] = s >> 1;
    occ[qb] = s & 1;
    states.push_back(b.index(occ));
  }
  std::vector<double> energy(4, 0.0), weight(4, -1.0);
  for (const auto& blk : block_structure(h.entries)) {
    std::vector<int> local(4, -1);
    bool any = false;
    for (std::size_t r = 0; r < blk.size(); ++r)
      for (int s = 0; s < 4; ++s)
        if (static_cast<std::size_t>(blk[r]) == states[s]) local[s] = static_cast<int>(r), any = true;
    if (!any) continue;
    const auto e = symmetric_eigen(submatrix(h.entries, blk));
    Part p;
    p.energies = e.values;
    p.rows = Mat::Zero(4, e.values.size());
    for (int s = 0; s < 4; ++s) {
      if (local[s] < 0) continue;
      p.rows.row(s) = e.vectors.row(local[s]);
      for (Eigen::Index k = 0; k < e.values.size(); ++k) {
        const double w = p.rows(s, k) * p.rows(s, k);
        if (w > weight[s]) weight[s] = w, energy[s] = e.values(k);
      }
    }
    parts_.push_back(std::move(p));
  }
  zz_ = energy[3] - energy[2] - energy[1] + energy[0];
}

CMat CZEvolution::projected(double t) const {
  CMat m = CMat::Zero(4, 4);
  for (const auto& p : parts_) {
    const CMat r = p.rows.cast<cplx>();
    m += r * phases(p.energies, t) * r.transpose();
  }
  return m;
}

double CZEvolution::cz_time() const { return std::numbers::pi / std::abs(zz_); }

GateFidelityResult CZEvolution::at(double t) const {
  const CMat m = projected(t);
  GateFidelityResult r;
  r.gate_time = t;
  r.max_fidelity_time = t;
  r.fidelity = cz_average_fidelity(m);
  r.non_unitarity = non_unitarity(m);
  r.spectator_warning = r.non_unitarity > kNonUnitarityWarning;
  return r;
}

GateFidelityResult CZEvolution::best(double lo, double hi, int samples) const {
  if (!(hi > lo) || samples < 2) throw std::invalid_argument("empty time window");
  const double dt = (hi - lo) / (samples - 1);
  int k_best = 0;
  double f_best = -1;
  for (int k = 0; k < samples; ++k) {
    const double f = cz_average_fidelity(projected(lo + k * dt));
    if (f > f_best) f_best = f, k_best = k;
  }
  const double a = std::max(lo, lo + (k_best - 1) * dt), b = std::min(hi, lo + (k_best + 1) * dt);
  const auto r = boost::math::tools::brent_find_minima(
      [&](double t) { return -cz_average_fidelity(projected(t)); }, a, b, 40);
  const double t = -r.second > f_best ? r.first : lo + k_best * dt;
  return at(t);
}

GateFidelityResult cz_fidelity(const CircuitSpec& spec, std::pair<std::size_t, std::size_t> pair, double t,
                               Form form) {
  return CZEvolution(build_hamiltonian(spec, form), pair.first, pair.second).at(t);
}

FidelitySweep fidelity_sweep(const CircuitSpec& spec, std::pair<std::size_t, std::size_t> pair,
                             const std::string& key, const std::vector<double>& coupler_axis,
                             const std::vector<double>& time_axis, Form form) {
  if (coupler_axis.empty() || time_axis.empty()) throw std::invalid_argument("fidelity sweep needs non-empty axes");
  FidelitySweep out;
  out.coupler_key = key;
  out.coupler_axis = coupler_axis;
  out.time_axis = time_axis;
  struct Row {
    std::vector<GateFidelityResult> cells;
    double zz;
  };
  const auto rows = parallel_map(coupler_axis.size(), [&](std::size_t i) {
    CircuitSpec s = spec;
    set_parameter(s, key, coupler_axis[i]);
    const CZEvolution evo(build_hamiltonian(s, form), pair.first, pair.second);
    Row row;
    row.zz = evo.zz_rate();
    for (double t : time_axis) {
      auto c = evo.at(t);
      c.coupler_frequency = coupler_axis[i];
      row.cells.push_back(c);
    }
    return row;
  });
  for (const auto& row : rows) {
    auto best = *std::max_element(row.cells.begin(), row.cells.end(),
                                  [](const auto& a, const auto& b) { return a.fidelity < b.fidelity; });
    best.max_fidelity_time = best.gate_time;
    out.best.push_back(best);
    out.zz_rate.push_back(row.zz);
    for (auto c : row.cells) {
      c.max_fidelity_time = best.gate_time;
      out.cells.push_back(c);
    }
  }
  return out;
}

double revival_period(const std::vector<double>& t, const std::vector<double>& f) {
  if (t.size() != f.size() || t.size() < 3) throw std::invalid_argument("revival period needs matching samples");
  const auto [lo, hi] = std::minmax_element(f.begin(), f.end());
  const double mid = 0.5 * (*lo + *hi), band = 0.25 * (*hi - *lo);
  // A revival starts above mid + band and ends below mid - band, so ripple on
  // the slopes does not split it. Its time is the centroid of f - mid.
  std::vector<double> peaks;
  bool high = false, clipped = true;
  double w = 0, wt = 0;
  for (std::size_t i = 0; i < f.size(); ++i) {
    if (!high && f[i] > mid + band) {
      high = true;
      w = wt = 0;
    } else if (high && f[i] < mid - band) {
      high = false;
      // The first episode may be cut off by the start of the window.
      if (!clipped && w > 0) peaks.push_back(wt / w);
    }
    if (!high && f[i] < mid - band) clipped = false;
    if (high && f[i] > mid) {
      w += f[i] - mid;
      wt += (f[i] - mid) * t[i];
    }
  }
  if (peaks.size() < 2) return NAN;
  return (peaks.back() - peaks.front()) / double(peaks.size() - 1);
}

}  // namespace stray
