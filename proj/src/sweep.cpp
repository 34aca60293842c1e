#include "stray/sweep.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <deque>
#include <sstream>
#include <stdexcept>

#include "stray/blockdiag.hpp"
#include "stray/parallel.hpp"
#include "stray/perturbative.hpp"
#include "stray/units.hpp"

namespace stray {

const char* to_string(Solver s) {
  switch (s) {
    case Solver::perturbative: return "perturbative";
    case Solver::exact: return "exact";
    case Solver::least_action: return "least_action";
  }
  return "?";
}

Solver solver_from_string(const std::string& s) {
  if (s == "perturbative") return Solver::perturbative;
  if (s == "exact") return Solver::exact;
  if (s == "least_action") return Solver::least_action;
  throw ValidationError("unknown solver '" + s + "' (perturbative, exact, least_action)");
}

std::vector<double> linspace(double a, double b, std::size_t n) {
  if (n == 0) throw ValidationError("axis needs at least one point");
  if (n == 1) return {a};
  std::vector<double> v(n);
  for (std::size_t i = 0; i < n; ++i) v[i] = a + (b - a) * double(i) / double(n - 1);
  return v;
}

namespace {

double parse_double(const std::string& s, const std::string& ctx) {
  std::size_t used = 0;
  double v = 0;
  try {
    v = std::stod(s, &used);
  } catch (const std::exception&) {
    used = 0;
  }
  if (used == 0 || used != s.size()) throw ValidationError("bad number '" + s + "' in axis '" + ctx + "'");
  return v;
}

std::vector<std::string> split(const std::string& s, char sep) {
  std::vector<std::string> out;
  std::string cur;
  std::istringstream in(s);
  while (std::getline(in, cur, sep)) out.push_back(cur);
  return out;
}

}  // namespace

Axis parse_axis(const std::string& text) {
  const auto eq = text.find('=');
  if (eq == std::string::npos || eq == 0 || eq + 1 == text.size())
    throw ValidationError("axis '" + text + "' must look like key=start:stop:count or key=v1,v2");
  Axis a;
  a.key = text.substr(0, eq);
  const std::string spec = text.substr(eq + 1);
  if (spec.find(':') != std::string::npos) {
    const auto p = split(spec, ':');
    if (p.size() != 3) throw ValidationError("axis '" + text + "' needs start:stop:count");
    const double n = parse_double(p[2], text);
    if (n < 1 || n != std::floor(n)) throw ValidationError("axis '" + text + "' count must be a positive integer");
    a.values = linspace(parse_double(p[0], text), parse_double(p[1], text), static_cast<std::size_t>(n));
  } else {
    for (const auto& v : split(spec, ',')) a.values.push_back(parse_double(v, text));
  }
  if (a.values.empty()) throw ValidationError("axis '" + text + "' is empty");
  return a;
}

double SweepCell::at(const std::string& name) const {
  const auto it = values.find(name);
  if (it == values.end()) throw std::out_of_range("cell has no value '" + name + "'" + (flag.empty() ? "" : " (" + flag + ")"));
  return it->second;
}

namespace {

bool multi_body_z(const std::string& p) {
  return std::count(p.begin(), p.end(), 'Z') >= 2 && p.find_first_not_of("IZ") == std::string::npos;
}

std::string j_name(std::size_t i, std::size_t j, int m, int n) {
  return "J" + std::to_string(m) + std::to_string(n) + "_" + std::to_string(i + 1) + std::to_string(j + 1);
}

void keep_multi_body(const PauliCoefficients& a, SweepCell& c) {
  for (const auto& [p, v] : a.khz)
    if (multi_body_z(p)) c.values[p] = v;
}

}  // namespace

SweepCell evaluate_cell(const CircuitSpec& spec, const SweepOptions& opt) {
  SweepCell c;
  try {
    const std::size_t nq = spec.num_qubits();
    if (opt.solver == Solver::perturbative) {
      keep_multi_body(stray_breakdown(spec).alpha, c);
      if (opt.couplings)
        for (std::size_t i = 0; i < nq; ++i)
          for (std::size_t j = i + 1; j < nq; ++j)
            for (int m = 0; m < 2; ++m)
              for (int n = 0; n < 2; ++n) c.values[j_name(i, j, m, n)] = 1e3 * effective_J(spec, i, j, m, n);
    } else {
      const auto h = build_hamiltonian(spec, opt.form);
      bool hybrid = false;
      if (opt.solver == Solver::exact && !opt.couplings) {
        const auto e = exact_pauli(h);
        hybrid = e.hybridized;
        keep_multi_body(e.alpha, c);
      } else {
        const auto a = analyze_static(h);
        hybrid = opt.solver == Solver::exact ? a.exact.hybridized : a.two_stage.couplings.hybridized;
        keep_multi_body(opt.solver == Solver::exact ? a.exact.alpha : a.two_stage.alpha, c);
        if (opt.couplings)
          for (const auto& [key, v] : a.two_stage.couplings.J) {
            const auto [i, j, m, n] = key;
            if (m <= 1 && n <= 1) c.values[j_name(i, j, m, n)] = units::to_khz(v);
          }
      }
      if (hybrid) c.flag = "hybridized";
    }
    if (c.flag.empty())
      for (const auto& [k, v] : c.values)
        if (!std::isfinite(v)) c.flag = "divergent";
  } catch (const ResonanceError&) {
    c.flag = "resonance";
  } catch (const RankDeficiencyError&) {
    c.flag = "hybridized";
  } catch (const std::exception& e) {
    c.flag = std::string("error: ") + e.what();
  }
  if (!c.flag.empty()) c.values.clear();
  return c;
}

CircuitSpec SweepGrid::circuit_at(std::size_t i, std::size_t j) const {
  CircuitSpec s = base;
  set_parameter(s, axes.at(0).key, axes[0].values.at(i));
  if (axes.size() > 1) set_parameter(s, axes[1].key, axes[1].values.at(j));
  return s;
}

std::uint64_t circuit_hash(const CircuitSpec& spec) {
  std::uint64_t h = 1469598103934665603ull;
  for (unsigned char ch : serialize(spec)) {
    h ^= ch;
    h *= 1099511628211ull;
  }
  return h;
}

SweepGrid sweep(const CircuitSpec& spec, const std::vector<Axis>& axes, const SweepOptions& opt) {
  if (axes.empty() || axes.size() > 2) throw ValidationError("a sweep takes one or two axes");
  SweepGrid g;
  g.base = spec;
  g.axes = axes;
  g.options = opt;
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(circuit_hash(spec)));
  g.circuit_hash = buf;
  for (const auto& a : axes) {
    if (a.values.empty()) throw ValidationError("axis '" + a.key + "' is empty");
    CircuitSpec probe = spec;
    set_parameter(probe, a.key, a.values.front());  // rejects unknown keys up front
  }
  const std::size_t rows = g.rows(), cols = g.cols();
  g.cells = parallel_map(rows * cols, [&](std::size_t k) {
    try {
      return evaluate_cell(g.circuit_at(k / cols, k % cols), opt);
    } catch (const std::exception& e) {
      SweepCell c;
      c.flag = std::string("error: ") + e.what();
      return c;
    }
  });
  return g;
}

std::size_t ZoneMask::area() const { return static_cast<std::size_t>(std::count(mask.begin(), mask.end(), 1)); }

namespace {

int label_components(const std::vector<char>& mask, std::size_t rows, std::size_t cols, std::vector<int>& label) {
  label.assign(mask.size(), -1);
  int next = 0;
  for (std::size_t s = 0; s < mask.size(); ++s) {
    if (!mask[s] || label[s] >= 0) continue;
    std::deque<std::size_t> q{s};
    label[s] = next;
    while (!q.empty()) {
      const std::size_t k = q.front();
      q.pop_front();
      const std::size_t i = k / cols, j = k % cols;
      auto visit = [&](std::size_t ii, std::size_t jj) {
        const std::size_t n = ii * cols + jj;
        if (mask[n] && label[n] < 0) label[n] = next, q.push_back(n);
      };
      if (i > 0) visit(i - 1, j);
      if (i + 1 < rows) visit(i + 1, j);
      if (j > 0) visit(i, j - 1);
      if (j + 1 < cols) visit(i, j + 1);
    }
    ++next;
  }
  return next;
}

}  // namespace

std::vector<ZoneMask> zones(const SweepGrid& grid, double threshold) {
  if (grid.base.num_qubits() != 3) throw ValidationError("zones need a three-qubit grid");
  std::vector<ZoneMask> out(2);
  out[0].predicate = "two_body_safe";
  out[1].predicate = "all_safe";
  for (auto& z : out) z.mask.assign(grid.cells.size(), 0);
  for (std::size_t k = 0; k < grid.cells.size(); ++k) {
    const auto& c = grid.cells[k];
    if (!c.valid()) continue;
    const double two = std::max(std::abs(c.at("ZZI")), std::abs(c.at("ZIZ")));
    out[0].mask[k] = two < threshold;
    out[1].mask[k] = two < threshold && std::abs(c.at("ZZZ")) < threshold;
  }
  for (auto& z : out) z.region_count = label_components(z.mask, grid.rows(), grid.cols(), z.region);
  return out;
}

std::size_t SuperiorityMap::superior_cells() const {
  return static_cast<std::size_t>(std::count_if(ratio.begin(), ratio.end(), [](double r) { return r > 1.0; }));
}

namespace {

struct EdgeKey {
  int dir, i, j;  // dir 0: (i,j)-(i+1,j), dir 1: (i,j)-(i,j+1)
  bool operator<(const EdgeKey& o) const { return std::tie(dir, i, j) < std::tie(o.dir, o.i, o.j); }
  bool operator==(const EdgeKey& o) const { return dir == o.dir && i == o.i && j == o.j; }
};

}  // namespace

std::vector<Polyline> marching_squares(const std::vector<double>& x, const std::vector<double>& y,
                                       const std::vector<double>& f, double level) {
  const int nx = static_cast<int>(x.size()), ny = static_cast<int>(y.size());
  if (f.size() != x.size() * y.size()) throw std::invalid_argument("field size does not match the grid");
  auto val = [&](int i, int j) { return f[static_cast<std::size_t>(i) * ny + j]; };
  auto point = [&](const EdgeKey& e) {
    const int i2 = e.dir == 0 ? e.i + 1 : e.i, j2 = e.dir == 1 ? e.j + 1 : e.j;
    const double a = val(e.i, e.j), b = val(i2, j2), t = (level - a) / (b - a);
    return std::make_pair(x[e.i] + t * (x[i2] - x[e.i]), y[e.j] + t * (y[j2] - y[e.j]));
  };
  std::vector<std::pair<EdgeKey, EdgeKey>> segs;
  for (int i = 0; i + 1 < nx; ++i)
    for (int j = 0; j + 1 < ny; ++j) {
      const double f00 = val(i, j), f10 = val(i + 1, j), f11 = val(i + 1, j + 1), f01 = val(i, j + 1);
      if (std::isnan(f00) || std::isnan(f10) || std::isnan(f11) || std::isnan(f01)) continue;
      const bool a00 = f00 > level, a10 = f10 > level, a11 = f11 > level, a01 = f01 > level;
      const EdgeKey bottom{0, i, j}, right{1, i + 1, j}, top{0, i, j + 1}, left{1, i, j};
      std::vector<EdgeKey> cut;
      if (a00 != a10) cut.push_back(bottom);
      if (a10 != a11) cut.push_back(right);
      if (a11 != a01) cut.push_back(top);
      if (a01 != a00) cut.push_back(left);
      if (cut.size() == 2) {
        segs.emplace_back(cut[0], cut[1]);
      } else if (cut.size() == 4) {
        const bool centre = 0.25 * (f00 + f10 + f11 + f01) > level;
        if (centre == a00) {
          segs.emplace_back(bottom, right);
          segs.emplace_back(top, left);
        } else {
          segs.emplace_back(bottom, left);
          segs.emplace_back(right, top);
        }
      }
    }
  // Chain segments through shared edges.
  std::map<EdgeKey, std::vector<std::size_t>> at;
  for (std::size_t s = 0; s < segs.size(); ++s) {
    at[segs[s].first].push_back(s);
    at[segs[s].second].push_back(s);
  }
  std::vector<char> used(segs.size(), 0);
  auto other = [&](std::size_t s, const EdgeKey& e) { return segs[s].first == e ? segs[s].second : segs[s].first; };
  auto extend = [&](std::vector<EdgeKey>& path) {
    while (true) {
      const auto& cand = at[path.back()];
      std::size_t nxt = segs.size();
      for (auto s : cand)
        if (!used[s]) nxt = s;
      if (nxt == segs.size()) return;
      used[nxt] = 1;
      path.push_back(other(nxt, path.back()));
    }
  };
  std::vector<Polyline> out;
  // Open paths start at edges used once so they come out whole.
  auto start_from = [&](std::size_t s) {
    used[s] = 1;
    std::vector<EdgeKey> path{segs[s].first, segs[s].second};
    extend(path);
    std::reverse(path.begin(), path.end());
    extend(path);
    Polyline pl;
    for (const auto& e : path) pl.push_back(point(e));
    out.push_back(std::move(pl));
  };
  for (const auto& [e, list] : at)
    if (list.size() == 1 && !used[list[0]]) start_from(list[0]);
  for (std::size_t s = 0; s < segs.size(); ++s)
    if (!used[s]) start_from(s);
  return out;
}

SuperiorityMap superiority_map(const SweepGrid& grid) {
  if (grid.base.num_qubits() != 3) throw ValidationError("superiority map needs a three-qubit grid");
  SuperiorityMap m;
  m.ratio.assign(grid.cells.size(), NAN);
  m.masked.assign(grid.cells.size(), 1);
  std::vector<double> logr(grid.cells.size(), NAN);
  for (std::size_t k = 0; k < grid.cells.size(); ++k) {
    const auto& c = grid.cells[k];
    if (!c.valid()) continue;
    const double zz = std::max({std::abs(c.at("ZZI")), std::abs(c.at("ZIZ")), std::abs(c.at("IZZ"))});
    if (zz < 1e-3) continue;  // below 1 Hz
    m.masked[k] = 0;
    m.ratio[k] = std::abs(c.at("ZZZ")) / zz;
    // A ZZZ of exactly zero gives -inf; a large negative keeps the cell usable.
    logr[k] = m.ratio[k] > 0 ? std::log(m.ratio[k]) : -1e3;
  }
  if (grid.axes.size() == 2) m.contour = marching_squares(grid.axes[0].values, grid.axes[1].values, logr, 0.0);
  return m;
}

std::vector<SignChange> sign_changes(const CircuitSpec& spec, const std::string& key, const std::vector<double>& axis,
                                     const std::string& coefficient, const SweepOptions& opt) {
  auto eval = [&](double v) {
    CircuitSpec s = spec;
    set_parameter(s, key, v);
    const auto c = evaluate_cell(s, opt);
    return c.valid() ? c.at(coefficient) : NAN;
  };
  const auto values = parallel_map(axis.size(), [&](std::size_t i) { return eval(axis[i]); });
  std::vector<std::pair<std::size_t, std::size_t>> brackets;
  std::size_t last = axis.size();
  for (std::size_t i = 0; i < axis.size(); ++i) {
    if (std::isnan(values[i]) || values[i] == 0.0) continue;
    if (last < axis.size() && (values[last] > 0) != (values[i] > 0)) brackets.emplace_back(last, i);
    last = i;
  }
  constexpr int kBisections = 24;
  return parallel_map(brackets.size(), [&](std::size_t b) {
    auto [ia, ib] = brackets[b];
    double lo = axis[ia], hi = axis[ib], flo = values[ia], fhi = values[ib];
    const double start = std::min(std::abs(flo), std::abs(fhi));
    SignChange sc;
    for (int it = 0; it < kBisections; ++it) {
      const double mid = 0.5 * (lo + hi), fm = eval(mid);
      if (std::isnan(fm)) {
        sc.pole = true;  // the solver flags the midpoint itself
        lo = hi = mid;
        break;
      }
      if ((fm > 0) == (flo > 0))
        lo = mid, flo = fm;
      else
        hi = mid, fhi = fm;
    }
    sc.lo = lo;
    sc.hi = hi;
    sc.location = 0.5 * (lo + hi);
    if (!sc.pole) {
      sc.value_khz = std::max(std::abs(flo), std::abs(fhi));
      sc.pole = sc.value_khz > start;
    } else {
      sc.value_khz = NAN;
    }
    return sc;
  });
}

CircuitSpec uniform_triangle(double jr, double dr, double delta_mhz) {
  CircuitSpec s;
  const double w3 = 5.0, d = 1e-3 * delta_mhz;
  const double anharm = -std::abs(dr) * delta_mhz, g = std::abs(jr) * delta_mhz;
  s.qubits = {{"Q1", w3 - 1.2 * d, anharm, 5}, {"Q2", w3 - d, anharm, 5}, {"Q3", w3, anharm, 5}};
  s.graph.qubit_qubit = {{"Q1", "Q2", g}, {"Q2", "Q3", g}, {"Q1", "Q3", g}};
  validate(s);
  return s;
}

std::vector<std::string> configuration_names() { return {"hard_weak", "hard_strong", "soft_weak", "soft_strong"}; }

CircuitSpec configuration(const std::string& name) {
  if (name == "hard_weak") return preset_circuit("triangle", {{"g12", 4}, {"wc12", 6.66}, {"wc23", 5.299}, {"wc13", 6.141}});
  if (name == "hard_strong")
    return preset_circuit("triangle", {{"g12", 13}, {"wc12", 5.443}, {"wc23", 5.472}, {"wc13", 6.076}});
  if (name == "soft_weak") return preset_circuit("triangle", {{"g12", 4}, {"wc12", 6.2}});
  if (name == "soft_strong") return preset_circuit("triangle", {{"g12", 16}, {"wc12", 5.3}});
  throw ValidationError("unknown configuration '" + name + "'");
}

std::string format_number(double v) {
  if (std::isnan(v)) return "";
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.6f", v == 0.0 ? 0.0 : v);  // no negative zero
  return buf;
}

namespace {

std::string csv_field(const std::string& s) {
  if (s.find_first_of(",\"\n") == std::string::npos) return s;
  std::string q = "\"";
  for (char c : s) q += c == '"' ? std::string("\"\"") : std::string(1, c);
  return q + "\"";
}

}  // namespace

void write_sweep_csv(const SweepGrid& g, const std::vector<std::string>& coeffs, std::ostream& out) {
  out << "axis1,axis2,coeff_name,value_khz,flag\n";
  for (std::size_t i = 0; i < g.rows(); ++i)
    for (std::size_t j = 0; j < g.cols(); ++j) {
      const auto& c = g.cells[g.index(i, j)];
      const std::string a1 = format_number(g.axes[0].values[i]);
      const std::string a2 = g.axes.size() > 1 ? format_number(g.axes[1].values[j]) : "";
      for (const auto& name : coeffs) {
        std::string value, flag = c.flag;
        if (c.valid()) {
          const auto it = c.values.find(name);
          if (it == c.values.end())
            flag = "missing";
          else
            value = format_number(it->second);
        }
        out << a1 << ',' << a2 << ',' << name << ',' << value << ',' << csv_field(flag) << '\n';
      }
    }
}

void write_zone_csv(const SweepGrid& g, const std::vector<ZoneMask>& masks, std::ostream& out) {
  out << "axis1,axis2,zone_name,in_zone\n";
  for (std::size_t i = 0; i < g.rows(); ++i)
    for (std::size_t j = 0; j < g.cols(); ++j)
      for (const auto& m : masks)
        out << format_number(g.axes[0].values[i]) << ',' << (g.axes.size() > 1 ? format_number(g.axes[1].values[j]) : "")
            << ',' << m.predicate << ',' << int(m.mask[g.index(i, j)]) << '\n';
}

void write_contour_csv(const std::vector<Polyline>& contour, std::ostream& out) {
  out << "path,axis1,axis2\n";
  for (std::size_t p = 0; p < contour.size(); ++p)
    for (const auto& [x, y] : contour[p]) out << p << ',' << format_number(x) << ',' << format_number(y) << '\n';
}

double IdentityPoint::max_r1() const {
  double m = flag.empty() ? 0.0 : NAN;
  for (const auto& [k, v] : r1) m = std::max(m, v);
  return m;
}

double IdentityPoint::max_r2() const {
  double m = flag.empty() ? 0.0 : NAN;
  for (const auto& [k, v] : r2) m = std::max(m, v);
  return m;
}

std::vector<IdentityPoint> identity_sweep(const CircuitSpec& spec, const std::string& key,
                                          const std::vector<double>& axis, Form form) {
  if (axis.empty()) throw ValidationError("identity sweep needs a nonempty axis");
  {
    auto probe = spec;
    set_parameter(probe, key, axis.front());
  }
  const std::size_t nq = spec.num_qubits();
  return parallel_map(axis.size(), [&](std::size_t k) {
    IdentityPoint p;
    p.x = axis[k];
    auto s = spec;
    try {
      set_parameter(s, key, axis[k]);
      const auto c = extract_couplings(build_hamiltonian(s, form));
      p.min_overlap = c.min_overlap;
      if (c.hybridized) {
        p.flag = "hybridized";
        return p;
      }
      for (std::size_t i = 0; i < nq; ++i)
        for (std::size_t j = i + 1; j < nq; ++j) {
          std::array<double, 4> J{};
          for (int mn = 0; mn < 4; ++mn) J[mn] = units::to_mhz(c.J.at({i, j, mn >> 1, mn & 1}));
          const std::string name = std::to_string(i + 1) + std::to_string(j + 1);
          bool shared = false;
          for (std::size_t c = 0; c < s.couplers.size(); ++c) shared |= s.g_qc(i, c) != 0.0 && s.g_qc(j, c) != 0.0;
          const auto r = identity_residuals(J, shared ? beta_ij(s, i, j) : 0.0);
          if (r.max_abs_J == 0.0) continue;
          p.r1[name] = std::abs(r.r1) / r.max_abs_J;
          if (shared) p.r2[name] = std::abs(r.r2) / r.max_abs_J;
        }
    } catch (const std::exception& e) {
      p.flag = std::string("error: ") + e.what();
      p.r1.clear();
      p.r2.clear();
    }
    return p;
  });
}

std::vector<char> outside_flag_windows(const std::vector<IdentityPoint>& points, double window) {
  std::vector<char> keep(points.size(), 1);
  for (const auto& f : points) {
    if (f.flag.empty()) continue;
    for (std::size_t k = 0; k < points.size(); ++k)
      if (std::abs(points[k].x - f.x) <= window) keep[k] = 0;
  }
  return keep;
}

void write_identity_csv(const std::string& key, const std::vector<IdentityPoint>& points, std::ostream& out) {
  out << key << ",pair,r1,r2,min_overlap,flag\n";
  for (const auto& p : points) {
    if (!p.flag.empty()) {
      out << format_number(p.x) << ",,,," << format_number(p.min_overlap) << ',' << p.flag << '\n';
      continue;
    }
    for (const auto& [pair, r1] : p.r1) {
      const auto r2 = p.r2.find(pair);
      out << format_number(p.x) << ',' << pair << ',' << format_number(r1) << ','
          << format_number(r2 == p.r2.end() ? NAN : r2->second) << ',' << format_number(p.min_overlap) << ",\n";
    }
  }
}

}  // namespace stray
