#include <doctest.h>

#include <cstdio>
#include <filesystem>

#include "stray/circuit.hpp"

using namespace stray;

TEST_CASE("presets validate and have the documented dimensions") {
  for (const auto& name : preset_names()) {
    CAPTURE(name);
    auto s = preset_circuit(name);
    CHECK_NOTHROW(validate(s));
  }
  CHECK(preset_circuit("triangle").hilbert_dimension() == 125 * 27);
  CHECK(preset_circuit("chain").hilbert_dimension() == 125 * 9);
  CHECK(preset_circuit("shared").hilbert_dimension() == 125 * 3);
  CHECK(preset_circuit("cr").hilbert_dimension() == 64 * 9);
}

TEST_CASE("chain preset keeps the 1-3 edge at zero strength") {
  auto s = preset_circuit("chain");
  CHECK(s.couplers.size() == 2);
  CHECK(s.coupler_index("C13") == -1);
  CHECK(s.g_qq(0, 2) == 0.0);
  CHECK(s.g_qq(0, 1) == 4.0);
  CHECK(s.g_qc(0, 0) == 85.0);
}

TEST_CASE("JSON round trip is exact") {
  auto s = preset_circuit("cr", {{"wd", 5.01}, {"amp", 3.5}});
  auto back = circuit_from_json(nlohmann::json::parse(serialize(s)));
  CHECK(back == s);

  const auto path = (std::filesystem::temp_directory_path() / "stray_circuit_rt.json").string();
  save_circuit(s, path);
  CHECK(load_circuit(path) == s);
  std::remove(path.c_str());
}

TEST_CASE("symmetric duplicate couplings fold into one edge") {
  auto j = to_json(preset_circuit("triangle"));
  j["qq_couplings"].push_back({{"a", "Q2"}, {"b", "Q1"}, {"g_mhz", 4.0}});
  auto s = circuit_from_json(j);
  CHECK(s.graph.qubit_qubit.size() == 3);
  CHECK(s.g_qq(1, 0) == 4.0);
}

TEST_CASE("validation names the violated invariant") {
  auto base = preset_circuit("triangle");

  auto dup = base;
  dup.couplers[0].label = "Q1";
  CHECK_THROWS_WITH_AS(validate(dup), doctest::Contains("duplicate label"), ValidationError);

  auto self = base;
  self.graph.qubit_qubit.push_back({"Q2", "Q2", 1.0});
  CHECK_THROWS_WITH_AS(validate(self), doctest::Contains("self coupling"), ValidationError);

  auto asym = base;
  asym.graph.qubit_qubit.push_back({"Q2", "Q1", 5.0});
  CHECK_THROWS_WITH_AS(validate(asym), doctest::Contains("asymmetric"), ValidationError);

  auto unknown = base;
  unknown.graph.qubit_coupler.push_back({"Q1", "C99", 10.0});
  CHECK_THROWS_AS(validate(unknown), ValidationError);

  auto freq = base;
  freq.qubits[1].freq_ghz = -1.0;
  CHECK_THROWS_AS(validate(freq), ValidationError);

  auto drive = base;
  drive.drive = DriveSpec{"Q7", 1.0, 5.0};
  CHECK_THROWS_WITH_AS(validate(drive), doctest::Contains("drive target"), ValidationError);
}

TEST_CASE("dimension limit is enforced before any allocation") {
  auto s = preset_circuit("triangle");
  s.dimension_limit = 1000;
  CHECK_THROWS_AS(validate(s), DimensionLimitError);
  CHECK_THROWS_AS(preset_circuit("triangle", {{"qlevels", 8}, {"clevels", 5}}), DimensionLimitError);
}

TEST_CASE("malformed JSON is a parse error") {
  CHECK_THROWS_AS(circuit_from_json(nlohmann::json::array()), ParseError);
  auto j = to_json(preset_circuit("triangle"));
  j["qubits"][0].erase("freq_ghz");
  CHECK_THROWS_WITH_AS(circuit_from_json(j), doctest::Contains("freq_ghz"), ParseError);
  j = to_json(preset_circuit("triangle"));
  j["qubits"][0]["freq_ghz"] = "fast";
  CHECK_THROWS_AS(circuit_from_json(j), ParseError);
}

TEST_CASE("parameter keys") {
  auto s = preset_circuit("triangle");
  set_parameter(s, "w2", 4.9);
  set_parameter(s, "wc23", 5.5);
  set_parameter(s, "g13", 7.0);
  set_parameter(s, "g2c23", 90.0);
  set_parameter(s, "d3", -300.0);
  CHECK(get_parameter(s, "w2") == 4.9);
  CHECK(s.qubits[1].freq_ghz == 4.9);
  CHECK(s.couplers[1].freq_ghz == 5.5);
  CHECK(s.g_qq(2, 0) == 7.0);
  CHECK(s.g_qc(1, 1) == 90.0);
  CHECK(s.qubits[2].anharm_mhz == -300.0);
  CHECK_THROWS_AS(set_parameter(s, "w9", 1.0), ValidationError);
  CHECK_THROWS_AS(set_parameter(s, "bogus", 1.0), ValidationError);
  CHECK_THROWS_AS(set_parameter(s, "amp", 1.0), ValidationError);  // no drive on this preset
  CHECK_THROWS_AS(preset_circuit("pentagon"), ValidationError);
}
