#include "cliffmem/circuit.hpp"

#include <json.hpp>

#include <bit>
#include <limits>
#include <set>
#include <stdexcept>

namespace cliffmem {

using nlohmann::json;

bool operator==(const Gate& a, const Gate& b) {
  if (a.kind != b.kind || a.qubits != b.qubits) {
    return false;
  }
  if (a.tableau.has_value() != b.tableau.has_value()) {
    return false;
  }
  return !a.tableau || *a.tableau == *b.tableau;
}

bool operator==(const ResetSpec& a, const ResetSpec& b) {
  if (a.qubit != b.qubit) {
    return false;
  }
  for (int i = 0; i < 3; ++i) {
    if (a.bloch[i].value != b.bloch[i].value ||
        a.bloch[i].exactly_zero != b.bloch[i].exactly_zero) {
      return false;
    }
  }
  return true;
}

bool operator==(const Layer& a, const Layer& b) {
  return a.gates == b.gates && a.resets == b.resets;
}

bool operator==(const Circuit& a, const Circuit& b) {
  return a.num_qubits == b.num_qubits && a.noise.gamma == b.noise.gamma &&
         a.layers == b.layers;
}

std::vector<std::string> validate(const Circuit& c) {
  std::vector<std::string> out;
  if (!(c.noise.gamma >= 0.0 && c.noise.gamma <= 1.0)) {
    out.push_back("gamma must lie in [0, 1]");
  }
  for (std::size_t i = 0; i < c.layers.size(); ++i) {
    const std::string where = "layer " + std::to_string(i) + ": ";
    const Layer& layer = c.layers[i];
    std::set<std::uint32_t> gate_qubits;
    for (const Gate& g : layer.gates) {
      std::string defect = gate_defect(g, c.num_qubits);
      if (!defect.empty()) {
        out.push_back(where + defect);
        continue;
      }
      for (std::uint32_t q : g.qubits) {
        if (!gate_qubits.insert(q).second) {
          out.push_back(where + "overlapping gates on qubit " + std::to_string(q));
        }
      }
    }
    std::set<std::uint32_t> reset_qubits;
    for (const ResetSpec& r : layer.resets) {
      if (r.qubit >= c.num_qubits) {
        out.push_back(where + "reset qubit " + std::to_string(r.qubit) +
                      " out of range");
        continue;
      }
      if (!reset_qubits.insert(r.qubit).second) {
        out.push_back(where + "duplicate reset on qubit " + std::to_string(r.qubit));
      }
      if (!reset_state_valid(r)) {
        out.push_back(where + "invalid reset state on qubit " +
                      std::to_string(r.qubit) + " (bloch norm " +
                      std::to_string(r.bloch_norm()) + " > 1)");
      }
    }
  }
  return out;
}

ErrorConfig::ErrorConfig(std::size_t depth, std::size_t num_qubits)
    : depth_(depth),
      num_qubits_(num_qubits),
      words_per_layer_(num_qubits == 0 ? 1 : (num_qubits + 63) / 64),
      bits_(depth * words_per_layer_, 0) {}

ErrorConfig ErrorConfig::from_index(std::size_t depth, std::size_t num_qubits,
                                    std::uint64_t index) {
  if (depth * num_qubits > 63) {
    throw std::invalid_argument("from_index supports at most 63 noise sites");
  }
  ErrorConfig cfg(depth, num_qubits);
  for (std::size_t layer = 0; layer < depth; ++layer) {
    for (std::size_t q = 0; q < num_qubits; ++q) {
      cfg.set_fired(layer, q, (index >> (layer * num_qubits + q)) & 1ULL);
    }
  }
  return cfg;
}

bool ErrorConfig::fired(std::size_t layer, std::size_t qubit) const {
  return (bits_[layer * words_per_layer_ + (qubit >> 6)] >> (qubit & 63)) & 1ULL;
}

void ErrorConfig::set_fired(std::size_t layer, std::size_t qubit, bool value) {
  std::uint64_t& word = bits_[layer * words_per_layer_ + (qubit >> 6)];
  const std::uint64_t mask = 1ULL << (qubit & 63);
  word = value ? (word | mask) : (word & ~mask);
}

std::size_t ErrorConfig::fired_count() const {
  std::size_t count = 0;
  for (std::uint64_t w : bits_) {
    count += static_cast<std::size_t>(std::popcount(w));
  }
  return count;
}

ErrorConfig sample_error_config(const Circuit& c, Rng& rng) {
  ErrorConfig cfg(c.depth(), c.num_qubits);
  for (std::size_t layer = 0; layer < c.depth(); ++layer) {
    for (std::size_t q = 0; q < c.num_qubits; ++q) {
      if (rng.bernoulli(c.noise.gamma)) {
        cfg.set_fired(layer, q, true);
      }
    }
  }
  return cfg;
}

Circuit gen_brickwork(std::size_t n, std::size_t depth, double gamma,
                      double reset_rate, const std::array<BlochComponent, 3>& reset_state,
                      Rng& rng) {
  if (n < 2) {
    throw std::invalid_argument("brickwork needs at least 2 qubits");
  }
  Circuit c;
  c.num_qubits = n;
  c.noise.gamma = gamma;
  c.layers.reserve(depth);
  for (std::size_t t = 0; t < depth; ++t) {
    Layer layer;
    for (std::size_t q = (t % 2 == 0) ? 0 : 1; q + 1 < n; q += 2) {
      Gate g;
      g.kind = GateKind::kTableau;
      g.qubits = {static_cast<std::uint32_t>(q), static_cast<std::uint32_t>(q + 1)};
      g.tableau = random_two_qubit_clifford(rng);
      layer.gates.push_back(std::move(g));
    }
    for (std::size_t q = 0; q < n; ++q) {
      if (rng.bernoulli(reset_rate)) {
        ResetSpec r;
        r.qubit = static_cast<std::uint32_t>(q);
        r.bloch = reset_state;
        layer.resets.push_back(r);
      }
    }
    c.layers.push_back(std::move(layer));
  }
  return c;
}

Circuit gen_repetition_refresh(std::size_t n, std::size_t rounds, double gamma) {
  if (n < 3 || n % 2 == 0) {
    throw std::invalid_argument("repetition refresh needs odd n >= 3");
  }
  Circuit c;
  c.num_qubits = n;
  c.noise.gamma = gamma;
  c.layers.reserve(3 * rounds);
  for (std::size_t round = 0; round < rounds; ++round) {
    Layer copy_left;
    for (std::size_t q = 0; q + 1 < n; q += 2) {
      copy_left.gates.push_back(
          Gate{GateKind::kCnot,
               {static_cast<std::uint32_t>(q), static_cast<std::uint32_t>(q + 1)},
               std::nullopt});
    }
    Layer copy_right;
    for (std::size_t q = 2; q < n; q += 2) {
      copy_right.gates.push_back(
          Gate{GateKind::kCnot,
               {static_cast<std::uint32_t>(q), static_cast<std::uint32_t>(q - 1)},
               std::nullopt});
    }
    Layer refresh;
    for (std::size_t q = 1; q < n; q += 2) {
      refresh.resets.push_back(ResetSpec::zero_state(static_cast<std::uint32_t>(q)));
    }
    c.layers.push_back(std::move(copy_left));
    c.layers.push_back(std::move(copy_right));
    c.layers.push_back(std::move(refresh));
  }
  return c;
}

Circuit gen_idle(std::size_t n, std::size_t depth, double gamma) {
  Circuit c;
  c.num_qubits = n;
  c.noise.gamma = gamma;
  c.layers.assign(depth, Layer{});
  return c;
}

namespace {

std::uint32_t as_index(const json& v, const char* what) {
  if (!v.is_number_integer() && !v.is_number_unsigned()) {
    throw std::runtime_error(std::string(what) + " must be an integer");
  }
  const auto raw = v.get<std::int64_t>();
  if (raw < 0 || raw > std::numeric_limits<std::uint32_t>::max()) {
    throw std::runtime_error(std::string(what) + " out of range");
  }
  return static_cast<std::uint32_t>(raw);
}

json gate_to_json(const Gate& g) {
  json j;
  j["kind"] = std::string(gate_kind_name(g.kind));
  j["qubits"] = g.qubits;
  if (g.kind == GateKind::kTableau && g.tableau) {
    j["tableau"] = tableau_rows(*g.tableau);
  }
  return j;
}

}  // namespace

std::string serialize_circuit(const Circuit& c) {
  json j;
  j["n"] = c.num_qubits;
  j["gamma"] = c.noise.gamma;
  j["layers"] = json::array();
  for (const Layer& layer : c.layers) {
    json jl;
    jl["gates"] = json::array();
    for (const Gate& g : layer.gates) {
      jl["gates"].push_back(gate_to_json(g));
    }
    jl["resets"] = json::array();
    for (const ResetSpec& r : layer.resets) {
      json jr;
      jr["qubit"] = r.qubit;
      jr["bloch"] = {r.bloch[0].value, r.bloch[1].value, r.bloch[2].value};
      jl["resets"].push_back(jr);
    }
    j["layers"].push_back(jl);
  }
  return j.dump(2) + "\n";
}

Circuit parse_circuit(const std::string& text) {
  json j;
  try {
    j = json::parse(text);
  } catch (const json::parse_error& e) {
    throw std::runtime_error(std::string("circuit JSON malformed: ") + e.what());
  }
  try {
    Circuit c;
    c.num_qubits = as_index(j.at("n"), "n");
    c.noise.gamma = j.at("gamma").get<double>();
    for (const json& jl : j.at("layers")) {
      Layer layer;
      if (jl.contains("gates")) {
        for (const json& jg : jl.at("gates")) {
          Gate g;
          const std::string kind_name = jg.at("kind").get<std::string>();
          const auto kind = gate_kind_from_name(kind_name);
          if (!kind) {
            throw std::runtime_error("unknown gate kind: " + kind_name);
          }
          g.kind = *kind;
          for (const json& q : jg.at("qubits")) {
            g.qubits.push_back(as_index(q, "gate qubit"));
          }
          if (jg.contains("tableau")) {
            if (g.kind != GateKind::kTableau) {
              throw std::runtime_error("tableau rows on a named gate");
            }
            g.tableau =
                tableau_from_rows(jg.at("tableau").get<std::vector<std::vector<int>>>());
          }
          layer.gates.push_back(std::move(g));
        }
      }
      if (jl.contains("resets")) {
        for (const json& jr : jl.at("resets")) {
          ResetSpec r;
          r.qubit = as_index(jr.at("qubit"), "reset qubit");
          const json& arr = jr.at("bloch");
          if (!arr.is_array() || arr.size() != 3) {
            throw std::runtime_error("reset bloch must be a 3-vector");
          }
          for (int i = 0; i < 3; ++i) {
            r.bloch[i] = BlochComponent(arr[i].get<double>());
          }
          layer.resets.push_back(r);
        }
      }
      c.layers.push_back(std::move(layer));
    }
    return c;
  } catch (const json::exception& e) {
    throw std::runtime_error(std::string("circuit JSON invalid: ") + e.what());
  } catch (const std::invalid_argument& e) {
    throw std::runtime_error(std::string("circuit JSON invalid: ") + e.what());
  }
}

}  // namespace cliffmem
