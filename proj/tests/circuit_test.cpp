#include <doctest.h>

#include <stdexcept>
#include <string>

#include "cliffmem/circuit.hpp"

using namespace cliffmem;

namespace {

bool mentions(const std::vector<std::string>& violations, const std::string& needle) {
  for (const std::string& v : violations) {
    if (v.find(needle) != std::string::npos) {
      return true;
    }
  }
  return false;
}

}  // namespace

TEST_CASE("well-formed circuit validates cleanly") {
  Circuit c;
  c.num_qubits = 2;
  c.noise.gamma = 0.1;
  Layer layer;
  layer.gates.push_back(Gate{GateKind::kCnot, {0, 1}, std::nullopt});
  layer.resets.push_back(ResetSpec::zero_state(0));
  c.layers.push_back(layer);
  CHECK(validate(c).empty());
}

TEST_CASE("validation reports overlapping gates with the layer index") {
  Circuit c;
  c.num_qubits = 2;
  c.noise.gamma = 0.0;
  Layer layer;
  layer.gates.push_back(Gate{GateKind::kCnot, {0, 1}, std::nullopt});
  layer.gates.push_back(Gate{GateKind::kH, {1}, std::nullopt});
  c.layers.push_back(layer);
  const auto violations = validate(c);
  REQUIRE(violations.size() == 1);
  CHECK(mentions(violations, "layer 0"));
  CHECK(mentions(violations, "overlapping"));
}

TEST_CASE("validation catches bad reset states, ranges, duplicates, gamma") {
  Circuit c;
  c.num_qubits = 2;
  c.noise.gamma = 1.5;
  Layer layer;
  ResetSpec fat = ResetSpec::zero_state(0);
  fat.bloch[2] = BlochComponent(1.2);
  layer.resets.push_back(fat);
  layer.resets.push_back(ResetSpec::plus_state(0));
  layer.resets.push_back(ResetSpec::zero_state(7));
  c.layers.push_back(Layer{});
  c.layers.push_back(layer);
  const auto violations = validate(c);
  CHECK(mentions(violations, "gamma"));
  CHECK(mentions(violations, "invalid reset state"));
  CHECK(mentions(violations, "duplicate reset"));
  CHECK(mentions(violations, "out of range"));
  CHECK(mentions(violations, "layer 1"));
}

TEST_CASE("validation catches malformed gates") {
  Circuit c;
  c.num_qubits = 2;
  c.noise.gamma = 0.0;
  Layer layer;
  layer.gates.push_back(Gate{GateKind::kCnot, {0, 0}, std::nullopt});
  layer.gates.push_back(Gate{GateKind::kH, {4}, std::nullopt});
  c.layers.push_back(layer);
  const auto violations = validate(c);
  CHECK(mentions(violations, "repeated qubit"));
  CHECK(mentions(violations, "out of range"));
}

TEST_CASE("error config bits") {
  ErrorConfig cfg(3, 70);
  CHECK(cfg.fired_count() == 0);
  cfg.set_fired(1, 69, true);
  cfg.set_fired(2, 0, true);
  CHECK(cfg.fired(1, 69));
  CHECK_FALSE(cfg.fired(0, 69));
  CHECK(cfg.fired_count() == 2);
  cfg.set_fired(1, 69, false);
  CHECK(cfg.fired_count() == 1);
}

TEST_CASE("error config from index enumerates sites layer-major") {
  // Sites: (0,0) bit 0, (0,1) bit 1, (1,0) bit 2, (1,1) bit 3.
  ErrorConfig cfg = ErrorConfig::from_index(2, 2, 0b0110);
  CHECK_FALSE(cfg.fired(0, 0));
  CHECK(cfg.fired(0, 1));
  CHECK(cfg.fired(1, 0));
  CHECK_FALSE(cfg.fired(1, 1));
  CHECK_THROWS_AS(ErrorConfig::from_index(8, 8, 0), std::invalid_argument);
}

TEST_CASE("sampling extremes of gamma") {
  Rng rng(1);
  Circuit all = gen_idle(4, 3, 1.0);
  CHECK(sample_error_config(all, rng).fired_count() == 12);
  Circuit none = gen_idle(4, 3, 0.0);
  CHECK(sample_error_config(none, rng).fired_count() == 0);
}

TEST_CASE("sampled fire count matches the binomial expectation") {
  // 10,000 sites at gamma = 0.1: mean 1000, sigma = sqrt(900) = 30;
  // 1000 +- 100 is a 3.3 sigma band.
  Circuit c = gen_idle(100, 100, 0.1);
  Rng rng(20240817);
  const auto cfg = sample_error_config(c, rng);
  CHECK(cfg.fired_count() >= 900);
  CHECK(cfg.fired_count() <= 1100);
}

TEST_CASE("brickwork generator shape and determinism") {
  const auto state = ResetSpec::zero_state(0).bloch;
  Rng rng_a(7);
  Circuit a = gen_brickwork(6, 5, 0.1, 0.3, state, rng_a);
  CHECK(a.num_qubits == 6);
  CHECK(a.depth() == 5);
  CHECK(validate(a).empty());
  // Even layers pair (0,1)(2,3)(4,5); odd layers pair (1,2)(3,4).
  CHECK(a.layers[0].gates.size() == 3);
  CHECK(a.layers[1].gates.size() == 2);
  CHECK(a.layers[1].gates[0].qubits[0] == 1);
  for (const Layer& layer : a.layers) {
    for (const Gate& g : layer.gates) {
      CHECK(g.kind == GateKind::kTableau);
    }
  }

  Rng rng_b(7);
  Circuit b = gen_brickwork(6, 5, 0.1, 0.3, state, rng_b);
  CHECK(a == b);
  CHECK(serialize_circuit(a) == serialize_circuit(b));

  Rng rng_c(8);
  Circuit c = gen_brickwork(6, 5, 0.1, 0.3, state, rng_c);
  CHECK_FALSE(a == c);

  Rng rng_d(7);
  Circuit no_resets = gen_brickwork(6, 5, 0.1, 0.0, state, rng_d);
  for (const Layer& layer : no_resets.layers) {
    CHECK(layer.resets.empty());
  }

  Rng rng_e(7);
  CHECK(gen_brickwork(6, 0, 0.1, 0.3, state, rng_e).depth() == 0);
  CHECK_THROWS_AS(gen_brickwork(1, 1, 0.1, 0.3, state, rng_e), std::invalid_argument);
}

TEST_CASE("repetition refresh generator") {
  Circuit c = gen_repetition_refresh(3, 1, 0.2);
  REQUIRE(c.depth() == 3);
  CHECK(c.layers[0].gates.size() == 1);
  CHECK(c.layers[0].gates[0].kind == GateKind::kCnot);
  CHECK(c.layers[0].gates[0].qubits == std::vector<std::uint32_t>{0, 1});
  CHECK(c.layers[1].gates[0].qubits == std::vector<std::uint32_t>{2, 1});
  CHECK(c.layers[2].gates.empty());
  REQUIRE(c.layers[2].resets.size() == 1);
  CHECK(c.layers[2].resets[0].qubit == 1);
  CHECK(c.layers[2].resets[0].bloch[2].value == 1.0);
  CHECK(validate(c).empty());

  CHECK(gen_repetition_refresh(3, 0, 0.2).depth() == 0);
  CHECK(gen_repetition_refresh(7, 2, 0.1).depth() == 6);
  CHECK(validate(gen_repetition_refresh(7, 2, 0.1)).empty());
  CHECK_THROWS_AS(gen_repetition_refresh(4, 1, 0.1), std::invalid_argument);
}

TEST_CASE("idle generator") {
  Circuit c = gen_idle(3, 4, 0.25);
  CHECK(c.depth() == 4);
  CHECK(c.num_qubits == 3);
  for (const Layer& layer : c.layers) {
    CHECK(layer.gates.empty());
    CHECK(layer.resets.empty());
  }
  CHECK(validate(c).empty());
}

TEST_CASE("serialize and parse round trip exactly") {
  Rng rng(3);
  Circuit c = gen_brickwork(4, 3, 0.1, 0.5, ResetSpec::magic_state(0).bloch, rng);
  const std::string text = serialize_circuit(c);
  const Circuit back = parse_circuit(text);
  CHECK(back == c);
  CHECK(serialize_circuit(back) == text);

  // Exact-zero flags survive the trip.
  for (const Layer& layer : back.layers) {
    for (const ResetSpec& r : layer.resets) {
      CHECK_FALSE(r.bloch[0].exactly_zero);
      CHECK(r.bloch[1].exactly_zero);
      CHECK_FALSE(r.bloch[2].exactly_zero);
    }
  }
}

TEST_CASE("parsing hand-written json") {
  const std::string text = R"({
    "n": 2,
    "gamma": 0.25,
    "layers": [
      {"gates": [{"kind": "CNOT", "qubits": [0, 1]}],
       "resets": [{"qubit": 1, "bloch": [0, 0, 1]}]},
      {"gates": [], "resets": []}
    ]
  })";
  const Circuit c = parse_circuit(text);
  CHECK(c.num_qubits == 2);
  CHECK(c.noise.gamma == 0.25);
  REQUIRE(c.depth() == 2);
  CHECK(c.layers[0].gates[0].kind == GateKind::kCnot);
  CHECK(c.layers[0].resets[0].bloch[0].exactly_zero);
  CHECK(c.layers[0].resets[0].bloch[2].value == 1.0);
  CHECK(validate(c).empty());
}

TEST_CASE("parse rejects malformed input") {
  CHECK_THROWS_AS(parse_circuit("not json at all"), std::runtime_error);
  CHECK_THROWS_AS(parse_circuit(R"({"n": 1, "gamma": 0})"), std::runtime_error);
  CHECK_THROWS_AS(
      parse_circuit(
          R"({"n": 1, "gamma": 0, "layers": [{"gates": [{"kind": "T", "qubits": [0]}]}]})"),
      std::runtime_error);
  CHECK_THROWS_AS(
      parse_circuit(
          R"({"n": 1, "gamma": 0, "layers": [{"gates": [{"kind": "H", "qubits": [0], "tableau": [[1,0],[0,1]]}]}]})"),
      std::runtime_error);
  CHECK_THROWS_AS(
      parse_circuit(
          R"({"n": 1, "gamma": 0, "layers": [{"resets": [{"qubit": 0, "bloch": [0, 0]}]}]})"),
      std::runtime_error);
  CHECK_THROWS_AS(parse_circuit(R"({"n": -3, "gamma": 0, "layers": []})"),
                  std::runtime_error);
}

TEST_CASE("tableau gates survive the json round trip") {
  Rng rng(11);
  Circuit c;
  c.num_qubits = 3;
  c.noise.gamma = 0.5;
  Layer layer;
  Gate g;
  g.kind = GateKind::kTableau;
  g.qubits = {2, 0};
  g.tableau = random_two_qubit_clifford(rng);
  layer.gates.push_back(g);
  c.layers.push_back(layer);
  REQUIRE(validate(c).empty());

  const Circuit back = parse_circuit(serialize_circuit(c));
  CHECK(back == c);
  REQUIRE(back.layers[0].gates[0].tableau.has_value());
  CHECK(back.layers[0].gates[0].tableau->is_symplectic());
}
