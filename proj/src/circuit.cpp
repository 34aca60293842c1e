#include "stray/circuit.hpp"

#include <cmath>
#include <fstream>
#include <set>
#include <sstream>

namespace stray {

using nlohmann::json;

std::size_t CircuitSpec::hilbert_dimension() const {
  std::size_t d = 1;
  for (const auto& q : qubits) d *= static_cast<std::size_t>(q.levels);
  for (const auto& c : couplers) d *= static_cast<std::size_t>(c.levels);
  return d;
}

std::vector<int> CircuitSpec::levels() const {
  std::vector<int> out;
  for (const auto& q : qubits) out.push_back(q.levels);
  for (const auto& c : couplers) out.push_back(c.levels);
  return out;
}

int CircuitSpec::qubit_index(std::string_view label) const {
  for (std::size_t i = 0; i < qubits.size(); ++i)
    if (qubits[i].label == label) return static_cast<int>(i);
  return -1;
}

int CircuitSpec::coupler_index(std::string_view label) const {
  for (std::size_t i = 0; i < couplers.size(); ++i)
    if (couplers[i].label == label) return static_cast<int>(i);
  return -1;
}

double CircuitSpec::g_qq(std::size_t i, std::size_t j) const {
  const auto& a = qubits.at(i).label;
  const auto& b = qubits.at(j).label;
  for (const auto& e : graph.qubit_qubit)
    if ((e.a == a && e.b == b) || (e.a == b && e.b == a)) return e.g_mhz;
  return 0.0;
}

double CircuitSpec::g_qc(std::size_t q, std::size_t c) const {
  const auto& a = qubits.at(q).label;
  const auto& b = couplers.at(c).label;
  for (const auto& e : graph.qubit_coupler)
    if (e.qubit == a && e.coupler == b) return e.g_mhz;
  return 0.0;
}

void validate(const CircuitSpec& spec) {
  std::set<std::string> labels;
  auto fresh = [&](const std::string& l) {
    if (l.empty()) throw ValidationError("empty label");
    if (!labels.insert(l).second) throw ValidationError("duplicate label '" + l + "'");
  };
  for (const auto& q : spec.qubits) {
    fresh(q.label);
    if (!(q.freq_ghz > 0.0) || !std::isfinite(q.freq_ghz))
      throw ValidationError("qubit '" + q.label + "': bare frequency must be positive");
    if (q.levels < 2) throw ValidationError("qubit '" + q.label + "': levels must be >= 2");
    if (!std::isfinite(q.anharm_mhz))
      throw ValidationError("qubit '" + q.label + "': anharmonicity must be finite");
  }
  for (const auto& c : spec.couplers) {
    fresh(c.label);
    if (!(c.freq_ghz > 0.0) || !std::isfinite(c.freq_ghz))
      throw ValidationError("coupler '" + c.label + "': frequency must be positive");
    if (c.levels < 2) throw ValidationError("coupler '" + c.label + "': levels must be >= 2");
  }

  std::map<std::pair<std::string, std::string>, double> seen;
  for (const auto& e : spec.graph.qubit_qubit) {
    if (e.a == e.b) throw ValidationError("self coupling on '" + e.a + "'");
    if (spec.qubit_index(e.a) < 0 || spec.qubit_index(e.b) < 0)
      throw ValidationError("coupling references unknown qubit '" +
                            (spec.qubit_index(e.a) < 0 ? e.a : e.b) + "'");
    if (!std::isfinite(e.g_mhz)) throw ValidationError("non-finite coupling");
    auto key = std::minmax(e.a, e.b);
    auto [it, inserted] = seen.emplace(std::pair{key.first, key.second}, e.g_mhz);
    if (!inserted && it->second != e.g_mhz)
      throw ValidationError("asymmetric coupling between '" + e.a + "' and '" + e.b + "'");
  }
  std::set<std::pair<std::string, std::string>> qc_seen;
  for (const auto& e : spec.graph.qubit_coupler) {
    if (spec.qubit_index(e.qubit) < 0)
      throw ValidationError("coupling references unknown qubit '" + e.qubit + "'");
    if (spec.coupler_index(e.coupler) < 0)
      throw ValidationError("coupling references unknown coupler '" + e.coupler + "'");
    if (!std::isfinite(e.g_mhz)) throw ValidationError("non-finite coupling");
    if (!qc_seen.insert({e.qubit, e.coupler}).second)
      throw ValidationError("duplicate coupling '" + e.qubit + "'-'" + e.coupler + "'");
  }
  if (spec.drive) {
    if (spec.qubit_index(spec.drive->target) < 0)
      throw ValidationError("drive target '" + spec.drive->target + "' does not exist");
    if (!(spec.drive->amp_mhz >= 0.0)) throw ValidationError("drive amplitude must be >= 0");
    if (!(spec.drive->freq_ghz > 0.0)) throw ValidationError("drive frequency must be positive");
  }
  if (spec.hilbert_dimension() > spec.dimension_limit)
    throw DimensionLimitError("Hilbert dimension " + std::to_string(spec.hilbert_dimension()) +
                              " exceeds limit " + std::to_string(spec.dimension_limit));
}

namespace {

template <class T>
T field(const json& j, const char* key) {
  if (!j.contains(key)) throw ParseError(std::string("missing field '") + key + "'");
  try {
    return j.at(key).get<T>();
  } catch (const json::exception& e) {
    throw ParseError(std::string("field '") + key + "': " + e.what());
  }
}

// Mirror entries (b,a) duplicating (a,b) with the same strength are folded.
void fold_symmetric(CouplingGraph& g) {
  std::vector<QQCoupling> out;
  for (const auto& e : g.qubit_qubit) {
    bool dup = false;
    for (const auto& o : out)
      if (o.a == e.b && o.b == e.a && o.g_mhz == e.g_mhz) dup = true;
    if (!dup) out.push_back(e);
  }
  g.qubit_qubit = std::move(out);
}

}  // namespace

CircuitSpec circuit_from_json(const json& j) {
  if (!j.is_object()) throw ParseError("circuit must be a JSON object");
  CircuitSpec s;
  for (const auto& q : j.value("qubits", json::array()))
    s.qubits.push_back({field<std::string>(q, "label"), field<double>(q, "freq_ghz"),
                        field<double>(q, "anharm_mhz"), q.value("levels", 5)});
  for (const auto& c : j.value("couplers", json::array()))
    s.couplers.push_back(
        {field<std::string>(c, "label"), field<double>(c, "freq_ghz"), c.value("levels", 3)});
  for (const auto& e : j.value("qq_couplings", json::array()))
    s.graph.qubit_qubit.push_back(
        {field<std::string>(e, "a"), field<std::string>(e, "b"), field<double>(e, "g_mhz")});
  for (const auto& e : j.value("qc_couplings", json::array()))
    s.graph.qubit_coupler.push_back({field<std::string>(e, "qubit"),
                                     field<std::string>(e, "coupler"), field<double>(e, "g_mhz")});
  if (j.contains("drive") && !j.at("drive").is_null()) {
    const auto& d = j.at("drive");
    s.drive = DriveSpec{field<std::string>(d, "target"), field<double>(d, "amp_mhz"),
                        field<double>(d, "freq_ghz")};
  }
  if (j.contains("dimension_limit")) s.dimension_limit = field<std::size_t>(j, "dimension_limit");
  validate(s);
  fold_symmetric(s.graph);
  return s;
}

json to_json(const CircuitSpec& s) {
  json j;
  j["qubits"] = json::array();
  for (const auto& q : s.qubits)
    j["qubits"].push_back(
        {{"label", q.label}, {"freq_ghz", q.freq_ghz}, {"anharm_mhz", q.anharm_mhz}, {"levels", q.levels}});
  j["couplers"] = json::array();
  for (const auto& c : s.couplers)
    j["couplers"].push_back({{"label", c.label}, {"freq_ghz", c.freq_ghz}, {"levels", c.levels}});
  j["qq_couplings"] = json::array();
  for (const auto& e : s.graph.qubit_qubit)
    j["qq_couplings"].push_back({{"a", e.a}, {"b", e.b}, {"g_mhz", e.g_mhz}});
  j["qc_couplings"] = json::array();
  for (const auto& e : s.graph.qubit_coupler)
    j["qc_couplings"].push_back({{"qubit", e.qubit}, {"coupler", e.coupler}, {"g_mhz", e.g_mhz}});
  if (s.drive)
    j["drive"] = {{"target", s.drive->target}, {"amp_mhz", s.drive->amp_mhz}, {"freq_ghz", s.drive->freq_ghz}};
  if (s.dimension_limit != kDefaultDimensionLimit) j["dimension_limit"] = s.dimension_limit;
  return j;
}

std::string serialize(const CircuitSpec& spec) { return to_json(spec).dump(2); }

CircuitSpec load_circuit(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ParseError("cannot open '" + path + "'");
  json j;
  try {
    in >> j;
  } catch (const json::parse_error& e) {
    throw ParseError("'" + path + "': " + e.what());
  }
  return circuit_from_json(j);
}

void save_circuit(const CircuitSpec& spec, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write '" + path + "'");
  out << serialize(spec) << '\n';
}

namespace {

QubitSpec& qubit_by_suffix(CircuitSpec& s, std::string_view key, std::string_view suffix) {
  int i = s.qubit_index("Q" + std::string(suffix));
  if (i < 0) throw ValidationError("unknown parameter '" + std::string(key) + "'");
  return s.qubits[i];
}

double* locate(CircuitSpec& s, std::string_view key) {
  auto bad = [&]() -> double* { throw ValidationError("unknown parameter '" + std::string(key) + "'"); };
  if (key == "amp" || key == "wd") {
    if (!s.drive) bad();
    return key == "amp" ? &s.drive->amp_mhz : &s.drive->freq_ghz;
  }
  if (key.starts_with("wc")) {
    int c = s.coupler_index("C" + std::string(key.substr(2)));
    if (c < 0) bad();
    return &s.couplers[c].freq_ghz;
  }
  if (key.starts_with("w")) return &qubit_by_suffix(s, key, key.substr(1)).freq_ghz;
  if (key.starts_with("d")) return &qubit_by_suffix(s, key, key.substr(1)).anharm_mhz;
  if (key.starts_with("g")) {
    auto rest = key.substr(1);
    if (auto pos = rest.find('c'); pos != std::string_view::npos) {
      std::string q = "Q" + std::string(rest.substr(0, pos));
      std::string c = "C" + std::string(rest.substr(pos + 1));
      for (auto& e : s.graph.qubit_coupler)
        if (e.qubit == q && e.coupler == c) return &e.g_mhz;
      bad();
    }
    // Direct coupling: split the digits between the two qubit labels present.
    for (std::size_t cut = 1; cut < rest.size(); ++cut) {
      std::string a = "Q" + std::string(rest.substr(0, cut));
      std::string b = "Q" + std::string(rest.substr(cut));
      for (auto& e : s.graph.qubit_qubit)
        if ((e.a == a && e.b == b) || (e.a == b && e.b == a)) return &e.g_mhz;
    }
  }
  return bad();
}

}  // namespace

void set_parameter(CircuitSpec& spec, std::string_view key, double value) {
  if (key == "qlevels" || key == "clevels") {
    int l = static_cast<int>(std::lround(value));
    if (key == "qlevels")
      for (auto& q : spec.qubits) q.levels = l;
    else
      for (auto& c : spec.couplers) c.levels = l;
    return;
  }
  *locate(spec, key) = value;
}

double get_parameter(const CircuitSpec& spec, std::string_view key) {
  if (key == "qlevels") return spec.qubits.empty() ? 0 : spec.qubits.front().levels;
  if (key == "clevels") return spec.couplers.empty() ? 0 : spec.couplers.front().levels;
  CircuitSpec copy = spec;
  return *locate(copy, key);
}

namespace {

CircuitSpec triangle() {
  CircuitSpec s;
  s.qubits = {{"Q1", 4.8, -330.0, 5}, {"Q2", 5.0, -330.0, 5}, {"Q3", 5.1, -330.0, 5}};
  s.couplers = {{"C12", 5.8, 3}, {"C23", 6.1, 3}, {"C13", 5.7, 3}};
  s.graph.qubit_qubit = {{"Q1", "Q2", 4.0}, {"Q2", "Q3", 4.0}, {"Q1", "Q3", 6.0}};
  s.graph.qubit_coupler = {{"Q1", "C12", 85.0}, {"Q2", "C12", 85.0}, {"Q2", "C23", 102.0},
                           {"Q3", "C23", 102.0}, {"Q1", "C13", 85.0}, {"Q3", "C13", 85.0}};
  return s;
}

CircuitSpec chain() {
  CircuitSpec s = triangle();
  s.couplers.pop_back();
  std::erase_if(s.graph.qubit_coupler, [](const QCCoupling& e) { return e.coupler == "C13"; });
  for (auto& e : s.graph.qubit_qubit)
    if (e.a == "Q1" && e.b == "Q3") e.g_mhz = 0.0;
  return s;
}

// One harmonic coupler "C" shared by all three qubits. Q1 takes the 85 MHz
// strength and Q2, Q3 the 102 MHz strength of the shared-coupler figure.
CircuitSpec shared() {
  CircuitSpec s;
  s.qubits = {{"Q1", 4.8, -330.0, 5}, {"Q2", 5.0, -330.0, 5}, {"Q3", 5.1, -330.0, 5}};
  s.couplers = {{"C", 6.0, 3}};
  s.graph.qubit_qubit = {{"Q1", "Q2", 4.0}, {"Q2", "Q3", 4.0}, {"Q1", "Q3", 0.0}};
  s.graph.qubit_coupler = {{"Q1", "C", 85.0}, {"Q2", "C", 102.0}, {"Q3", "C", 102.0}};
  return s;
}

// Control Q2, target Q3, spectator Q4 of a fixed-frequency chain with
// couplers C23 and C34 and a parasitic direct Q2-Q4 capacitance.
CircuitSpec cr_device() {
  CircuitSpec s;
  const double wt = 5.0;
  s.qubits = {{"Q2", wt + 0.137, -218.0, 4}, {"Q3", wt, -218.0, 4}, {"Q4", wt - 0.150, -213.0, 4}};
  s.couplers = {{"C23", 6.3, 3}, {"C34", 6.3, 3}};
  s.graph.qubit_qubit = {{"Q2", "Q3", 0.0}, {"Q3", "Q4", 0.0}, {"Q2", "Q4", 4.5}};
  s.graph.qubit_coupler = {{"Q2", "C23", 85.0}, {"Q3", "C23", 85.0},
                           {"Q3", "C34", 85.0}, {"Q4", "C34", 85.0}};
  s.drive = DriveSpec{"Q2", 18.0, wt};
  return s;
}

}  // namespace

std::vector<std::string> preset_names() {
  return {"triangle_three_coupler", "shared_coupler", "chain_two_coupler", "cr_device"};
}

CircuitSpec preset_circuit(std::string_view name, const std::map<std::string, double>& overrides) {
  CircuitSpec s;
  if (name == "triangle_three_coupler" || name == "triangle")
    s = triangle();
  else if (name == "shared_coupler" || name == "shared")
    s = shared();
  else if (name == "chain_two_coupler" || name == "chain")
    s = chain();
  else if (name == "cr_device" || name == "cr")
    s = cr_device();
  else
    throw ValidationError("unknown preset '" + std::string(name) + "'");
  for (const auto& [k, v] : overrides) set_parameter(s, k, v);
  validate(s);
  return s;
}

}  // namespace stray
