#include "stray/blockdiag.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <set>
#include <tuple>

#include "stray/perturbative.hpp"
#include "stray/units.hpp"

namespace stray {

double DressedSpectrum::energy(std::size_t state) const {
  if (sector_of[state] < 0) return std::numeric_limits<double>::quiet_NaN();
  return sectors[sector_of[state]].values(column_of[state]);
}

Vec DressedSpectrum::eigenvector(std::size_t state) const {
  Vec v = Vec::Zero(basis.size());
  if (sector_of[state] < 0) return v;
  const auto& s = sectors[sector_of[state]];
  for (std::size_t r = 0; r < s.states.size(); ++r) v(s.states[r]) = s.vectors(r, column_of[state]);
  return v;
}

bool DressedSpectrum::any_hybridized(const std::vector<std::size_t>& states) const {
  for (auto s : states)
    if (sector_of[s] < 0 || hybridized[s]) return true;
  return false;
}

namespace {

// Returns row -> column for one sector.
std::vector<int> assign_sector(const Mat& overlap, const Vec& values) {
  const int n = static_cast<int>(overlap.rows());
  std::vector<int> row_col(n, -1), col_row(n, -1);

  struct Entry {
    double o;
    int r, c;
  };
  std::vector<Entry> entries;
  const double floor = std::min(1e-3, 0.5 / n);
  for (int c = 0; c < n; ++c)
    for (int r = 0; r < n; ++r)
      if (overlap(r, c) > floor) entries.push_back({overlap(r, c), r, c});
  std::sort(entries.begin(), entries.end(), [](const Entry& a, const Entry& b) {
    return std::tie(b.o, a.r, a.c) < std::tie(a.o, b.r, b.c);
  });
  for (const auto& e : entries)
    if (row_col[e.r] < 0 && col_row[e.c] < 0) {
      row_col[e.r] = e.c;
      col_row[e.c] = e.r;
    }

  auto match = [&](std::vector<int> rows, std::vector<int> cols) {
    Mat w(rows.size(), cols.size());
    for (std::size_t i = 0; i < rows.size(); ++i)
      for (std::size_t j = 0; j < cols.size(); ++j) w(i, j) = overlap(rows[i], cols[j]);
    auto pick = max_weight_assignment(w);
    for (std::size_t i = 0; i < rows.size(); ++i) {
      row_col[rows[i]] = cols[pick[i]];
      col_row[cols[pick[i]]] = rows[i];
    }
  };

  std::vector<int> free_rows, free_cols;
  for (int r = 0; r < n; ++r)
    if (row_col[r] < 0) free_rows.push_back(r);
  for (int c = 0; c < n; ++c)
    if (col_row[c] < 0) free_cols.push_back(c);
  if (!free_rows.empty()) match(free_rows, free_cols);

  // Ambiguous rows and degenerate columns: close the set under ownership and
  // re-solve it as an optimal matching.
  std::set<int> rows, cols;
  for (int r = 0; r < n; ++r)
    if (overlap(r, row_col[r]) <= kHybridizationOverlap) {
      rows.insert(r);
      int best = 0;
      overlap.row(r).maxCoeff(&best);
      cols.insert(best);
    }
  for (int c = 0; c + 1 < n; ++c)
    if (std::abs(values(c + 1) - values(c)) < 1e-9 * std::max(1.0, std::abs(values(c)))) {
      cols.insert(c);
      cols.insert(c + 1);
    }
  if (rows.empty() && cols.empty()) return row_col;
  bool grew = true;
  while (grew) {
    grew = false;
    for (int r : std::vector<int>(rows.begin(), rows.end()))
      grew |= cols.insert(row_col[r]).second;
    for (int c : std::vector<int>(cols.begin(), cols.end()))
      grew |= rows.insert(col_row[c]).second;
  }
  match({rows.begin(), rows.end()}, {cols.begin(), cols.end()});
  return row_col;
}

}  // namespace

namespace {

// Large sectors (the parity sectors of the full form) are solved only up to a
// margin above the highest requested bare energy; states beyond it stay unsolved.
constexpr Eigen::Index kWindowMinSector = 256;
constexpr double kWindowMarginGhz = 3.0;

}  // namespace

DressedSpectrum exact_spectrum(const HamiltonianMatrix& h, const std::vector<std::size_t>& only_states) {
  DressedSpectrum out;
  out.basis = h.basis;
  const std::size_t dim = h.dimension();
  out.sector_of.assign(dim, -1);
  out.column_of.assign(dim, -1);
  out.overlap.assign(dim, 0.0);
  out.hybridized.assign(dim, 0);

  std::vector<char> wanted(dim, only_states.empty() ? 1 : 0);
  for (auto s : only_states) wanted[s] = 1;

  for (auto blk : block_structure(h.entries)) {
    if (std::none_of(blk.begin(), blk.end(), [&](int i) { return wanted[i]; })) continue;
    // Ascending bare energy, so a window keeps a leading run of rows.
    std::stable_sort(blk.begin(), blk.end(), [&](int a, int b) { return h.entries(a, a) < h.entries(b, b); });
    const Eigen::Index n = static_cast<Eigen::Index>(blk.size());
    Eigen::Index k = n;
    if (!only_states.empty() && n > kWindowMinSector) {
      double top = -std::numeric_limits<double>::infinity();
      for (int i : blk)
        if (wanted[i]) top = std::max(top, h.entries(i, i));
      const double cut = top + units::ghz(kWindowMarginGhz);
      k = std::count_if(blk.begin(), blk.end(), [&](int i) { return h.entries(i, i) <= cut; });
    }
    DressedSpectrum::Sector sec;
    sec.states.assign(blk.begin(), blk.end());
    Mat sub(n, n);
    for (Eigen::Index j = 0; j < n; ++j)
      for (Eigen::Index i = 0; i < n; ++i) sub(i, j) = h.entries(blk[i], blk[j]);
    auto eig = k < n ? symmetric_eigen_lowest(sub, static_cast<int>(k)) : symmetric_eigen(sub);
    sec.values = std::move(eig.values);
    sec.vectors = std::move(eig.vectors);
    const Mat ov = sec.vectors.topRows(k).cwiseAbs2();
    auto row_col = assign_sector(ov, sec.values);
    sec.assigned_row.assign(k, -1);
    const int id = static_cast<int>(out.sectors.size());
    for (Eigen::Index r = 0; r < k; ++r) {
      const std::size_t st = blk[r];
      out.sector_of[st] = id;
      out.column_of[st] = row_col[r];
      out.overlap[st] = ov(r, row_col[r]);
      out.hybridized[st] = out.overlap[st] <= kHybridizationOverlap;
      sec.assigned_row[row_col[r]] = static_cast<int>(r);
    }
    out.sectors.push_back(std::move(sec));
  }
  return out;
}

std::vector<std::size_t> computational_states(const Basis& basis, std::size_t nq) {
  std::vector<std::size_t> out;
  for (std::size_t s = 0; s < (std::size_t{1} << nq); ++s) {
    std::vector<int> occ(basis.num_modes(), 0);
    for (std::size_t q = 0; q < nq; ++q) occ[q] = (s >> (nq - 1 - q)) & 1u;
    out.push_back(basis.index(occ));
  }
  return out;
}

ComputationalEnergies computational_energies(const DressedSpectrum& s, std::size_t nq) {
  ComputationalEnergies out;
  for (auto st : computational_states(s.basis, nq)) {
    out.energies.push_back(s.energy(st));
    out.overlaps.push_back(s.overlap[st]);
    out.hybridized |= (s.sector_of[st] < 0) || s.hybridized[st];
  }
  return out;
}

ComputationalEnergies computational_energies(const HamiltonianMatrix& h) {
  auto states = computational_states(h.basis, h.num_qubits);
  return computational_energies(exact_spectrum(h, states), h.num_qubits);
}

ExactPauli exact_pauli(const HamiltonianMatrix& h) {
  return exact_pauli(exact_spectrum(h, computational_states(h.basis, h.num_qubits)), h.num_qubits);
}

ExactPauli exact_pauli(const DressedSpectrum& s, std::size_t nq) {
  auto ce = computational_energies(s, nq);
  ExactPauli out;
  out.alpha = pauli_from_energies(ce.energies, nq);
  out.hybridized = ce.hybridized;
  out.min_overlap = *std::min_element(ce.overlaps.begin(), ce.overlaps.end());
  return out;
}

std::vector<EffectiveBlock> least_action_blockdiag(const DressedSpectrum& spec, const HamiltonianMatrix& h,
                                                   const std::vector<std::vector<std::size_t>>& blocks,
                                                   double min_singular) {
  std::vector<EffectiveBlock> out;
  const Eigen::Index dim = static_cast<Eigen::Index>(h.dimension());
  for (const auto& b : blocks) {
    const Eigen::Index m = static_cast<Eigen::Index>(b.size());
    EffectiveBlock eb;
    eb.states = b;
    // Assigned eigenvectors, restricted to the rows of the sectors they live in.
    std::vector<std::size_t> rows;
    {
      std::set<int> secs;
      for (auto s : b) {
        if (!spec.solved(s)) throw std::invalid_argument("block state outside the solved sectors");
        secs.insert(spec.sector_of[s]);
      }
      for (int sc : secs) rows.insert(rows.end(), spec.sectors[sc].states.begin(), spec.sectors[sc].states.end());
      std::sort(rows.begin(), rows.end());
    }
    std::vector<Eigen::Index> pos(dim, -1);
    for (std::size_t r = 0; r < rows.size(); ++r) pos[rows[r]] = static_cast<Eigen::Index>(r);
    Mat y0 = Mat::Zero(rows.size(), m);
    Vec lam(m);
    for (Eigen::Index k = 0; k < m; ++k) {
      const auto& sec = spec.sectors[spec.sector_of[b[k]]];
      const int col = spec.column_of[b[k]];
      for (std::size_t r = 0; r < sec.states.size(); ++r) y0(pos[sec.states[r]], k) = sec.vectors(r, col);
      lam(k) = sec.values(col);
      eb.min_overlap = std::min(eb.min_overlap, spec.overlap[b[k]]);
      eb.eigenvalues.push_back(lam(k));
    }
    Mat x(m, m);
    for (Eigen::Index r = 0; r < m; ++r) x.row(r) = y0.row(pos[b[r]]);
    auto polar = polar_factor(x);
    eb.min_singular = polar.min_singular;
    if (polar.min_singular < min_singular)
      throw RankDeficiencyError("overlap submatrix is rank deficient (sigma_min=" +
                                std::to_string(polar.min_singular) + ")");
    eb.block_transform = polar.unitary;
    eb.block_matrix = polar.unitary * lam.asDiagonal() * polar.unitary.transpose();
    eb.block_matrix = 0.5 * (eb.block_matrix + eb.block_matrix.transpose()).eval();

    const Mat f_rows = y0 * polar.unitary.transpose();
    eb.frame = Mat::Zero(dim, m);
    for (std::size_t r = 0; r < rows.size(); ++r) eb.frame.row(rows[r]) = f_rows.row(r);

    Mat h_cols(dim, rows.size());
    for (std::size_t r = 0; r < rows.size(); ++r) h_cols.col(r) = h.entries.col(rows[r]);
    const double hn = std::max(h.entries.norm(), 1e-300);
    eb.residual = (h_cols * f_rows - eb.frame * eb.block_matrix).norm() / hn;
    eb.unitarity = (f_rows.transpose() * f_rows - Mat::Identity(m, m)).norm();
    out.push_back(std::move(eb));
  }
  return out;
}

std::vector<EffectiveBlock> least_action_blockdiag(const HamiltonianMatrix& h,
                                                   const std::vector<std::vector<std::size_t>>& blocks,
                                                   double min_singular) {
  std::vector<std::size_t> all;
  for (const auto& b : blocks) all.insert(all.end(), b.begin(), b.end());
  return least_action_blockdiag(exact_spectrum(h, all), h, blocks, min_singular);
}

EffectiveBlock least_action_blockdiag(const HamiltonianMatrix& h, const std::vector<std::size_t>& block,
                                      double min_singular) {
  return least_action_blockdiag(h, std::vector<std::vector<std::size_t>>{block}, min_singular).front();
}

Mat least_action_transform(const HamiltonianMatrix& h, const std::vector<std::vector<std::size_t>>& blocks) {
  const std::size_t dim = h.dimension();
  std::vector<char> used(dim, 0);
  auto all_blocks = blocks;
  for (const auto& b : blocks)
    for (auto s : b) used[s] = 1;
  std::vector<std::size_t> rest;
  for (std::size_t s = 0; s < dim; ++s)
    if (!used[s]) rest.push_back(s);
  if (!rest.empty()) all_blocks.push_back(rest);
  auto spec = exact_spectrum(h);
  auto eff = least_action_blockdiag(spec, h, all_blocks, 0.0);
  Mat u = Mat::Zero(dim, dim);
  for (const auto& e : eff)
    for (std::size_t k = 0; k < e.states.size(); ++k) u.col(e.states[k]) = e.frame.col(k);
  return u;
}

std::vector<std::size_t> qubit_block_states(const Basis& basis, std::size_t nq, int max_total) {
  std::vector<std::size_t> out;
  for (std::size_t i = 0; i < basis.size(); ++i) {
    int tot = 0;
    bool vac = true;
    for (std::size_t k = 0; k < basis.num_modes(); ++k) {
      const int n = basis.occupation(i, k);
      if (k < nq)
        tot += n;
      else if (n)
        vac = false;
    }
    if (vac && tot <= max_total) out.push_back(i);
  }
  return out;
}

ExtractedCouplings extract_couplings(const HamiltonianMatrix& h, int max_total) {
  return extract_couplings(exact_spectrum(h, qubit_block_states(h.basis, h.num_qubits, max_total)), h, max_total);
}

ExtractedCouplings extract_couplings(const DressedSpectrum& spec, const HamiltonianMatrix& h, int max_total) {
  const std::size_t nq = h.num_qubits;
  const auto& basis = h.basis;
  auto states = qubit_block_states(basis, nq, max_total);
  auto eb = least_action_blockdiag(spec, h, {states}, 1e-2).front();
  std::vector<Eigen::Index> pos(basis.size(), -1);
  for (std::size_t k = 0; k < states.size(); ++k) pos[states[k]] = static_cast<Eigen::Index>(k);

  ExtractedCouplings out;
  out.num_qubits = nq;
  out.min_overlap = eb.min_overlap;
  out.min_singular = eb.min_singular;
  out.hybridized = eb.min_overlap <= kHybridizationOverlap;

  auto idx = [&](const std::vector<int>& q) {
    std::vector<int> occ(basis.num_modes(), 0);
    std::copy(q.begin(), q.end(), occ.begin());
    return pos[basis.index(occ)];
  };
  const std::vector<int> zero(nq, 0);
  const double e0 = eb.block_matrix(idx(zero), idx(zero));
  for (std::size_t q = 0; q < nq; ++q)
    for (int n = 0; n <= std::min(max_total, basis.dims()[q] - 1); ++n) {
      auto occ = zero;
      occ[q] = n;
      out.level[{q, n}] = eb.block_matrix(idx(occ), idx(occ)) - e0;
    }
  for (std::size_t i = 0; i < nq; ++i)
    for (std::size_t j = 0; j < nq; ++j) {
      if (i == j) continue;
      for (int m = 0; m + 1 < basis.dims()[i]; ++m)
        for (int n = 0; n + 1 < basis.dims()[j]; ++n) {
          if (m + n + 1 > max_total) continue;
          auto a = zero, b = zero;
          a[i] = m + 1;
          a[j] = n;
          b[i] = m;
          b[j] = n + 1;
          out.J[{i, j, m, n}] = eb.block_matrix(idx(b), idx(a)) / std::sqrt(double((m + 1) * (n + 1)));
        }
    }
  for (auto s : computational_states(basis, nq)) out.comp_diagonal.push_back(eb.block_matrix(pos[s], pos[s]));
  return out;
}

TwoStageResult two_stage_alphas(const HamiltonianMatrix& h) {
  return two_stage_alphas(exact_spectrum(h, qubit_block_states(h.basis, h.num_qubits)), h);
}

TwoStageResult two_stage_alphas(const DressedSpectrum& spec, const HamiltonianMatrix& h) {
  TwoStageResult out;
  out.couplings = extract_couplings(spec, h);
  const auto& ex = out.couplings;
  CouplingTable t;
  t.num_qubits = ex.num_qubits;
  t.level = ex.level;
  for (const auto& [k, v] : ex.J) {
    const auto [i, j, m, n] = k;
    if (i < j && m <= 1 && n <= 1) t.J[k] = v;
  }
  out.alpha = stray_breakdown(t).alpha;
  const auto diag = pauli_from_energies(ex.comp_diagonal, ex.num_qubits);
  for (auto& [p, v] : out.alpha.khz) v += diag.at(p);
  return out;
}

StaticAnalysis analyze_static(const HamiltonianMatrix& h) {
  // The qubit block contains every computational state.
  const auto spec = exact_spectrum(h, qubit_block_states(h.basis, h.num_qubits));
  return {exact_pauli(spec, h.num_qubits), two_stage_alphas(spec, h)};
}

}  // namespace stray
