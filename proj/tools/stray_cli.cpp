// Command-line front end: one subcommand per study, CSV data plus a JSON
// sidecar (<out>.json) describing the run.

#include <CLI11.hpp>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <json.hpp>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "stray/blockdiag.hpp"
#include "stray/drive.hpp"
#include "stray/gatesim.hpp"
#include "stray/parallel.hpp"
#include "stray/perturbative.hpp"
#include "stray/sweep.hpp"
#include "stray/units.hpp"

#ifndef STRAY_VERSION
#define STRAY_VERSION "0.0.0"
#endif

using namespace stray;
using nlohmann::json;

namespace {

struct Common {
  std::string preset;
  std::string circuit_file;
  std::string configuration;
  std::vector<std::string> sets;
  std::string form = "rwa";
  std::string solver = "exact";
  std::string out;
  std::vector<std::string> axes;
};

void add_circuit_options(CLI::App* app, Common& c, const std::string& default_preset) {
  c.preset = default_preset;
  app->add_option("--preset", c.preset, "built-in circuit (triangle, chain, shared, cr_device)")
      ->capture_default_str();
  app->add_option("--circuit", c.circuit_file, "circuit JSON file");
  app->add_option("--configuration", c.configuration,
                  "named decoupling configuration (hard_weak, hard_strong, soft_weak, soft_strong)");
  app->add_option("--set", c.sets, "override a parameter, key=value (repeatable)");
  app->add_option("--form", c.form, "Hamiltonian form: rwa or full")->capture_default_str();
}

void add_output(CLI::App* app, Common& c, const std::string& name) {
  c.out = name + ".csv";
  app->add_option("-o,--out", c.out, "CSV output path; the sidecar is <out>.json")->capture_default_str();
}

double parse_double(const std::string& text, const std::string& what) {
  std::size_t used = 0;
  double v = 0;
  try {
    v = std::stod(text, &used);
  } catch (const std::exception&) {
    used = 0;
  }
  if (used != text.size() || text.empty()) throw ValidationError("bad number '" + text + "' in " + what);
  return v;
}

CircuitSpec resolve_circuit(const Common& c, bool preset_given) {
  const int sources = int(!c.circuit_file.empty()) + int(!c.configuration.empty());
  if (sources > 1 || (sources == 1 && preset_given))
    throw ValidationError("choose one of --preset, --circuit, --configuration");
  CircuitSpec s = !c.circuit_file.empty()    ? load_circuit(c.circuit_file)
                  : !c.configuration.empty() ? configuration(c.configuration)
                                             : preset_circuit(c.preset);
  for (const auto& kv : c.sets) {
    const auto eq = kv.find('=');
    if (eq == std::string::npos || eq == 0) throw ValidationError("--set expects key=value, got '" + kv + "'");
    set_parameter(s, kv.substr(0, eq), parse_double(kv.substr(eq + 1), "--set " + kv));
  }
  validate(s);
  return s;
}

std::ofstream open_out(const std::string& path) {
  std::ofstream f(path);
  if (!f) throw ValidationError("cannot write '" + path + "'");
  return f;
}

json truncation(const CircuitSpec& s) {
  json t = json::object();
  for (const auto& q : s.qubits) t[q.label] = q.levels;
  for (const auto& c : s.couplers) t[c.label] = c.levels;
  return t;
}

void write_sidecar(const std::string& out, const std::string& command, const CircuitSpec& spec, json extra) {
  json meta = {{"tool", "stray_cli"},
               {"version", STRAY_VERSION},
               {"command", command},
               {"circuit", to_json(spec)},
               {"circuit_hash", [&] {
                  char buf[17];
                  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(circuit_hash(spec)));
                  return std::string(buf);
                }()},
               {"truncation", truncation(spec)},
               {"hilbert_dimension", spec.hilbert_dimension()},
               {"workers", worker_count()},
               {"outputs", json::array({out})}};
  for (auto& [k, v] : extra.items()) meta[k] = v;
  auto f = open_out(out + ".json");
  f << meta.dump(2) << '\n';
}

std::vector<Axis> parse_axes(const std::vector<std::string>& texts, std::size_t lo, std::size_t hi) {
  if (texts.size() < lo || texts.size() > hi)
    throw ValidationError("expected " + std::to_string(lo) + (lo == hi ? "" : "-" + std::to_string(hi)) +
                          " --axis options, got " + std::to_string(texts.size()));
  std::vector<Axis> a;
  for (const auto& t : texts) a.push_back(parse_axis(t));
  return a;
}

json axes_json(const std::vector<Axis>& axes) {
  json a = json::array();
  for (const auto& x : axes)
    a.push_back(json{{"key", x.key}, {"count", x.values.size()}, {"first", x.values.front()}, {"last", x.values.back()}});
  return a;
}

std::size_t flagged_cells(const SweepGrid& g) {
  std::size_t n = 0;
  for (const auto& c : g.cells) n += !c.valid();
  return n;
}

std::size_t qubit_by_label(const CircuitSpec& s, const std::string& label) {
  const int i = s.qubit_index(label);
  if (i < 0) throw ValidationError("no qubit labelled '" + label + "'");
  return static_cast<std::size_t>(i);
}

std::string cell_text(double v) { return std::isnan(v) ? std::string("-") : format_number(v); }

// ---- subcommands -----------------------------------------------------------

void run_strays(const Common& c, bool preset_given) {
  const auto s = resolve_circuit(c, preset_given);
  const Form form = form_from_string(c.form);
  const std::size_t nq = s.num_qubits();
  std::vector<std::string> names = z_strings(nq, 2);
  for (int w = 3; w <= int(nq); ++w)
    for (const auto& p : z_strings(nq, w)) names.push_back(p);

  std::string pert_flag;
  PauliCoefficients pert;
  try {
    pert = stray_breakdown(s).alpha;
  } catch (const ResonanceError& e) {
    pert_flag = e.what();
  }
  const auto st = analyze_static(build_hamiltonian(s, form));

  auto f = open_out(c.out);
  f << "coeff_name,perturbative_khz,exact_khz,least_action_khz\n";
  std::printf("%-8s %16s %16s %16s\n", "coeff", "perturbative", "exact", "least_action");
  for (const auto& p : names) {
    const double a = pert_flag.empty() ? pert.at(p) : NAN;
    const double b = st.exact.hybridized ? NAN : st.exact.alpha.at(p);
    const double l = st.two_stage.couplings.hybridized ? NAN : st.two_stage.alpha.at(p);
    f << p << ',' << format_number(a) << ',' << format_number(b) << ',' << format_number(l) << '\n';
    std::printf("%-8s %16s %16s %16s\n", p.c_str(), cell_text(a).c_str(), cell_text(b).c_str(), cell_text(l).c_str());
  }
  std::printf("(kHz, %s form)\n", to_string(form));
  if (!pert_flag.empty()) std::printf("perturbative: %s\n", pert_flag.c_str());
  if (st.exact.hybridized) std::printf("exact: hybridized (min overlap %.3f)\n", st.exact.min_overlap);
  write_sidecar(c.out, "strays", s,
                {{"form", to_string(form)},
                 {"solvers", {"perturbative", "exact", "least_action"}},
                 {"perturbative_flag", pert_flag},
                 {"exact_min_overlap", st.exact.min_overlap}});
}

SweepOptions sweep_options(const Common& c) {
  SweepOptions o;
  o.solver = solver_from_string(c.solver);
  o.form = form_from_string(c.form);
  return o;
}

void run_sweep(const Common& c, bool preset_given, std::vector<std::string> coeffs, bool couplings) {
  const auto s = resolve_circuit(c, preset_given);
  const auto axes = parse_axes(c.axes, 1, 2);
  auto o = sweep_options(c);
  o.couplings = couplings;
  if (coeffs.empty()) coeffs = {"ZZZ"};
  if (couplings)
    for (std::size_t i = 0; i < s.num_qubits(); ++i)
      for (std::size_t j = i + 1; j < s.num_qubits(); ++j)
        for (const char* mn : {"00", "01", "10", "11"}) coeffs.push_back("J" + std::string(mn) + "_" + std::to_string(i + 1) + std::to_string(j + 1));
  const auto g = sweep(s, axes, o);
  auto f = open_out(c.out);
  write_sweep_csv(g, coeffs, f);
  std::printf("%zu cells, %zu flagged -> %s\n", g.cells.size(), flagged_cells(g), c.out.c_str());
  write_sidecar(c.out, "sweep", s,
                {{"solver", to_string(o.solver)},
                 {"form", to_string(o.form)},
                 {"axes", axes_json(axes)},
                 {"coefficients", coeffs},
                 {"couplings", couplings},
                 {"flagged_cells", flagged_cells(g)}});
}

void run_zones(const Common& c, bool preset_given, double threshold) {
  if (!(threshold > 0)) throw ValidationError("--threshold must be positive");
  const auto s = resolve_circuit(c, preset_given);
  const auto axes = parse_axes(c.axes, 1, 2);
  const auto o = sweep_options(c);
  const auto g = sweep(s, axes, o);
  const auto z = zones(g, threshold);
  auto f = open_out(c.out);
  write_zone_csv(g, z, f);
  json summary = json::object();
  for (const auto& m : z) {
    std::printf("%-14s %6zu cells in %d regions\n", m.predicate.c_str(), m.area(), m.region_count);
    summary[m.predicate] = {{"cells", m.area()}, {"regions", m.region_count}};
  }
  write_sidecar(c.out, "zones", s,
                {{"solver", to_string(o.solver)},
                 {"form", to_string(o.form)},
                 {"axes", axes_json(axes)},
                 {"threshold_khz", threshold},
                 {"zones", summary},
                 {"flagged_cells", flagged_cells(g)}});
}

void run_superiority(const Common& c, bool preset_given, std::string contour_path) {
  const auto s = resolve_circuit(c, preset_given);
  const auto axes = parse_axes(c.axes, 2, 2);
  const auto o = sweep_options(c);
  const auto g = sweep(s, axes, o);
  const auto m = superiority_map(g);
  auto f = open_out(c.out);
  f << "axis1,axis2,ratio,flag\n";
  for (std::size_t i = 0; i < g.rows(); ++i)
    for (std::size_t j = 0; j < g.cols(); ++j) {
      const auto k = g.index(i, j);
      const std::string flag = !g.cells[k].valid() ? g.cells[k].flag : m.masked[k] ? "masked" : "";
      f << format_number(axes[0].values[i]) << ',' << format_number(axes[1].values[j]) << ','
        << format_number(m.ratio[k]) << ',' << flag << '\n';
    }
  if (contour_path.empty()) {
    contour_path = c.out;
    if (contour_path.size() > 4 && contour_path.ends_with(".csv")) contour_path.resize(contour_path.size() - 4);
    contour_path += "_contour.csv";
  }
  auto fc = open_out(contour_path);
  write_contour_csv(m.contour, fc);
  std::printf("%zu superior cells, %zu contour paths -> %s, %s\n", m.superior_cells(), m.contour.size(),
              c.out.c_str(), contour_path.c_str());
  write_sidecar(c.out, "superiority", s,
                {{"solver", to_string(o.solver)},
                 {"form", to_string(o.form)},
                 {"axes", axes_json(axes)},
                 {"superior_cells", m.superior_cells()},
                 {"contour", contour_path},
                 {"flagged_cells", flagged_cells(g)}});
}

std::vector<std::string> cr_default_coefficients(const CircuitSpec& s, const CRRoles& r) {
  std::vector<std::string> names = z_strings(s.num_qubits(), 2);
  for (const auto& p : z_strings(s.num_qubits(), 3)) names.push_back(p);
  for (const char* c : {"I", "Z"})
    for (const char* sp : {"I", "Z"}) {
      std::string p(s.num_qubits(), 'I');
      p[r.control] = c[0];
      p[r.spectator] = sp[0];
      p[r.target] = 'X';
      names.push_back(p);
    }
  return names;
}

void run_cr(const Common& c, bool preset_given, const std::string& detuning, const std::string& amplitude,
            const std::string& target_label, std::vector<std::string> coeffs, bool fit) {
  if (detuning.empty() == amplitude.empty()) throw ValidationError("give exactly one of --detuning, --amplitude");
  const auto s = resolve_circuit(c, preset_given);
  if (form_from_string(c.form) != Form::rwa) throw ValidationError("driven analysis uses the RWA form only");
  const std::size_t target = qubit_by_label(s, target_label);
  const auto roles = cr_roles(s, target);
  const bool by_detuning = !detuning.empty();
  const auto values = parse_axis((by_detuning ? "dst=" : "amp=") + (by_detuning ? detuning : amplitude)).values;

  std::vector<DrivenPauli> res;
  if (by_detuning) {
    res = driven_detuning_sweep(s, values, target);
  } else {
    res = parallel_map(values.size(), [&](std::size_t k) {
      auto p = s;
      set_parameter(p, "amp", values[k]);
      return driven_pauli(p, target);
    });
  }
  if (coeffs.empty()) coeffs = cr_default_coefficients(s, roles);
  auto f = open_out(c.out);
  f << "axis1,axis2,coeff_name,value_khz,flag\n";
  for (std::size_t k = 0; k < values.size(); ++k)
    for (const auto& p : coeffs) {
      const bool hyb = res[k].hybridized;
      f << format_number(values[k]) << ",," << p << ',' << (hyb ? "" : format_number(res[k].alpha.at(p))) << ','
        << (hyb ? "hybridized" : "") << '\n';
    }
  json extra = {{"form", "rwa"},
                {"solver", "least_action"},
                {"axis", by_detuning ? "delta_st_mhz" : "amp_mhz"},
                {"values", values},
                {"roles", {{"control", s.qubits[roles.control].label},
                           {"target", s.qubits[roles.target].label},
                           {"spectator", s.qubits[roles.spectator].label}}},
                {"coefficients", coeffs}};
  if (fit) {
    if (by_detuning) throw ValidationError("--fit needs an --amplitude axis");
    const auto r = scaling_fit(s, values, target);
    std::printf("ZZ  ~ %.4g + %.4g W^2 + %.4g W^%.3f   (rel. rms %.2e)\n", r.alpha0, r.eta2, r.eta_a, r.a,
                r.zz_residual);
    std::printf("ZX  ~ %.4g W + %.4g W^%.3f          (rel. rms %.2e)\n", r.mu1, r.mu_b, r.b, r.zx_residual);
    std::printf("ZZZ ~ %.4g + %.4g W^2             (rel. rms %.2e)\n", r.zzz0, r.nu2, r.zzz_residual);
    for (const auto& e : r.failures) std::printf("fit failed: %s\n", e.c_str());
    extra["fit"] = {{"a", r.a}, {"b", r.b}, {"zz_residual", r.zz_residual}, {"zx_residual", r.zx_residual},
                    {"zzz_residual", r.zzz_residual}, {"failures", r.failures}};
  }
  std::printf("%zu points -> %s\n", values.size(), c.out.c_str());
  write_sidecar(c.out, "cr", s, extra);
}

void run_fidelity(const Common& c, bool preset_given, const std::string& pair_text, const std::string& coupler,
                  const std::string& times) {
  const auto s = resolve_circuit(c, preset_given);
  const auto comma = pair_text.find(',');
  if (comma == std::string::npos) throw ValidationError("--pair expects two labels, e.g. Q1,Q2");
  const std::pair<std::size_t, std::size_t> pair{qubit_by_label(s, pair_text.substr(0, comma)),
                                                 qubit_by_label(s, pair_text.substr(comma + 1))};
  if (pair.first == pair.second) throw ValidationError("--pair needs two distinct qubits");
  const auto ca = parse_axis(coupler);
  const auto ta = parse_axis("t=" + times);
  for (double t : ta.values)
    if (t < 0) throw ValidationError("gate times must be non-negative");
  const Form form = form_from_string(c.form);
  const auto sw = fidelity_sweep(s, pair, ca.key, ca.values, ta.values, form);
  auto f = open_out(c.out);
  f << "axis1,axis2,fidelity,non_unitarity,spectator_warning\n";
  for (std::size_t i = 0; i < ca.values.size(); ++i)
    for (std::size_t j = 0; j < ta.values.size(); ++j) {
      const auto& r = sw.cells[i * ta.values.size() + j];
      f << format_number(ca.values[i]) << ',' << format_number(ta.values[j]) << ',' << format_number(r.fidelity)
        << ',' << format_number(r.non_unitarity) << ',' << int(r.spectator_warning) << '\n';
    }
  std::size_t arg = 0;
  for (std::size_t i = 1; i < sw.best.size(); ++i)
    if (sw.best[i].fidelity > sw.best[arg].fidelity) arg = i;
  const auto& b = sw.best[arg];
  std::printf("max fidelity %.6f at %s = %.4f GHz, t = %.2f ns (non-unitarity %.3g)\n", b.fidelity, ca.key.c_str(),
              ca.values[arg], b.max_fidelity_time, b.non_unitarity);
  json best = json::array();
  for (std::size_t i = 0; i < sw.best.size(); ++i)
    best.push_back(json{{"coupler", ca.values[i]},
                    {"fidelity", sw.best[i].fidelity},
                    {"time_ns", sw.best[i].max_fidelity_time},
                    {"zz_khz", units::to_khz(sw.zz_rate[i])}});
  write_sidecar(c.out, "fidelity", s,
                {{"form", to_string(form)},
                 {"pair", {s.qubits[pair.first].label, s.qubits[pair.second].label}},
                 {"pulse", "square: qubits resonant in the bare frame, couplers and spectators in vacuum"},
                 {"coupler_axis", axes_json({ca})},
                 {"time_axis", axes_json({ta})},
                 {"best", best}});
}

void run_resonances(const Common& c, bool preset_given, const std::string& target_label) {
  const auto s = resolve_circuit(c, preset_given);
  const auto rows = resonance_catalog(s, qubit_by_label(s, target_label));
  auto f = open_out(c.out);
  f << "state_pair,condition,kind,solved_mhz,printed_mhz,residual_mhz,satisfiable,matches\n";
  std::size_t mismatches = 0;
  for (const auto& r : rows) {
    f << '"' << r.state_pair << "\",\"" << r.condition << "\"," << to_string(r.kind) << ','
      << format_number(r.solved_detuning) << ',' << format_number(r.printed_detuning) << ','
      << format_number(r.residual) << ',' << int(r.satisfiable) << ',' << int(r.matches) << '\n';
    if (!r.matches) {
      ++mismatches;
      std::printf("discrepancy: %-24s %-28s solved %9.3f MHz, printed %9.3f MHz\n", r.state_pair.c_str(),
                  r.condition.c_str(), r.solved_detuning, r.printed_detuning);
    }
  }
  std::printf("%zu rows, %zu discrepancies -> %s\n", rows.size(), mismatches, c.out.c_str());
  write_sidecar(c.out, "resonances", s,
                {{"tolerance_mhz", kTableTolerance}, {"rows", rows.size()}, {"discrepancies", mismatches}});
}

void run_identities(const Common& c, bool preset_given, double window) {
  const auto s = resolve_circuit(c, preset_given);
  const auto axes = parse_axes(c.axes, 1, 1);
  const Form form = form_from_string(c.form);
  const auto pts = identity_sweep(s, axes[0].key, axes[0].values, form);
  const auto keep = outside_flag_windows(pts, window);
  auto f = open_out(c.out);
  write_identity_csv(axes[0].key, pts, f);
  double r1 = 0, r2 = 0;
  std::size_t kept = 0, flagged = 0;
  for (std::size_t k = 0; k < pts.size(); ++k) {
    flagged += !pts[k].flag.empty();
    if (!keep[k]) continue;
    ++kept;
    r1 = std::max(r1, pts[k].max_r1());
    r2 = std::max(r2, pts[k].max_r2());
  }
  std::printf("%zu points, %zu flagged, %zu outside +-%.3f windows: max r1 %.3e, max r2 %.3e -> %s\n", pts.size(),
              flagged, kept, window, r1, r2, c.out.c_str());
  write_sidecar(c.out, "identities", s,
                {{"form", to_string(form)},
                 {"solver", "least_action"},
                 {"axes", axes_json(axes)},
                 {"window", window},
                 {"flagged_points", flagged},
                 {"max_r1_outside_windows", r1},
                 {"max_r2_outside_windows", r2}});
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Stray-coupling analysis of small transmon circuits"};
  app.set_version_flag("--version", std::string(STRAY_VERSION));
  app.require_subcommand(1);

  std::map<const CLI::App*, Common> options;  // one set per subcommand, so defaults do not leak
  std::vector<std::string> coeffs;
  bool couplings = false, fit = false;
  double threshold = kDefaultZoneThresholdKhz, window = 0.030;
  std::string contour, detuning, amplitude, target = "Q3", pair = "Q2,Q3", coupler_axis, times = "0:4000:4001";

  auto* strays = app.add_subcommand("strays", "ZZ/ZZZ coefficients from every solver, printed as a table");
  add_circuit_options(strays, options[strays], "triangle");
  add_output(strays, options[strays], "strays");

  auto grid_options = [&](CLI::App* sub, const std::string& name, std::size_t axes_min) {
    Common& c = options[sub];
    add_circuit_options(sub, c, "triangle");
    add_output(sub, c, name);
    sub->add_option("--solver", c.solver, "perturbative, exact or least_action")->capture_default_str();
    auto* a = sub->add_option("--axis", c.axes, "key=start:stop:count or key=v1,v2,... (repeatable)");
    if (axes_min > 0) a->required();
  };

  auto* sw = app.add_subcommand("sweep", "coefficient grid over one or two parameters (CSV)");
  grid_options(sw, "sweep", 1);
  sw->add_option("--coeff", coeffs, "coefficient to write (repeatable; default ZZZ)");
  sw->add_flag("--couplings", couplings, "also compute level-resolved J columns (J<mn>_<ij>)");

  auto* zn = app.add_subcommand("zones", "stray-safe zone masks (CSV)");
  grid_options(zn, "zones", 1);
  zn->add_option("--threshold", threshold, "zone threshold, kHz")->capture_default_str();

  auto* sup = app.add_subcommand("superiority", "|ZZZ| / max|ZZ| ratio grid and its unit contour (CSV)");
  grid_options(sup, "superiority", 2);
  sup->add_option("--contour", contour, "contour CSV path (default <out stem>_contour.csv)");

  auto* cr = app.add_subcommand("cr", "driven Pauli coefficients against spectator detuning or drive amplitude");
  add_circuit_options(cr, options[cr], "cr_device");
  add_output(cr, options[cr], "cr");
  cr->add_option("--detuning", detuning, "spectator detuning axis, MHz: start:stop:count or v1,v2,...");
  cr->add_option("--amplitude", amplitude, "drive amplitude axis, MHz");
  cr->add_option("--target", target, "target qubit label")->capture_default_str();
  cr->add_option("--coeff", coeffs, "coefficient to write (repeatable)");
  cr->add_flag("--fit", fit, "fit the amplitude scaling laws");

  auto* fid = app.add_subcommand("fidelity", "square-pulse CZ fidelity over coupler frequency and gate time");
  add_circuit_options(fid, options[fid], "triangle");
  add_output(fid, options[fid], "fidelity");
  fid->add_option("--pair", pair, "qubit labels, e.g. Q1,Q2")->capture_default_str();
  fid->add_option("--coupler-axis", coupler_axis, "coupler axis, e.g. wc23=5.2:5.8:61")->required();
  fid->add_option("--time", times, "gate times, ns: start:stop:count")->capture_default_str();

  auto* rs = app.add_subcommand("resonances", "resonance table solved on the circuit, with discrepancies");
  add_circuit_options(rs, options[rs], "cr_device");
  add_output(rs, options[rs], "resonances");
  rs->add_option("--target", target, "target qubit label")->capture_default_str();

  auto* id = app.add_subcommand("identities", "J-identity residuals along one axis (CSV)");
  add_circuit_options(id, options[id], "triangle");
  add_output(id, options[id], "identities");
  id->add_option("--axis", options[id].axes, "key=start:stop:count")->required();
  id->add_option("--window", window, "exclusion half-width around flagged points, axis units")->capture_default_str();

  try {
    app.parse(argc, argv);
    CLI::App* sub = app.get_subcommands().front();
    const Common& c = options.at(sub);
    const bool preset_given = sub->count("--preset") > 0;
    if (sub == strays) run_strays(c, preset_given);
    if (sub == sw) run_sweep(c, preset_given, coeffs, couplings);
    if (sub == zn) run_zones(c, preset_given, threshold);
    if (sub == sup) run_superiority(c, preset_given, contour);
    if (sub == cr) run_cr(c, preset_given, detuning, amplitude, target, coeffs, fit);
    if (sub == fid) run_fidelity(c, preset_given, pair, coupler_axis, times);
    if (sub == rs) run_resonances(c, preset_given, target);
    if (sub == id) run_identities(c, preset_given, window);
  } catch (const CLI::ParseError& e) {
    return app.exit(e);
  } catch (const std::exception& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 2;
  }
  return 0;
}
