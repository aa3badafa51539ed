#pragma once

#include <array>
#include <cstddef>
#include <cstdint>
#include <string>
#include <vector>

#include "cliffmem/channels.hpp"
#include "cliffmem/rng.hpp"
#include "cliffmem/tableau.hpp"

namespace cliffmem {

// One circuit layer. Execution order within a layer is fixed: gates first,
// then resets, then one round of per-qubit depolarizing noise (applied to
// every qubit, including idle and freshly reset ones).
struct Layer {
  std::vector<Gate> gates;
  std::vector<ResetSpec> resets;
};

struct Circuit {
  std::size_t num_qubits = 0;
  NoiseModel noise;
  std::vector<Layer> layers;

  std::size_t depth() const { return layers.size(); }
  // Total number of potential noise sites, depth() * num_qubits.
  std::size_t noise_site_count() const { return depth() * num_qubits; }
};

bool operator==(const Layer& a, const Layer& b);
bool operator==(const Circuit& a, const Circuit& b);
bool operator==(const Gate& a, const Gate& b);
bool operator==(const ResetSpec& a, const ResetSpec& b);

// Structural validation. Returns one human-readable string per violation,
// each prefixed with the offending layer where applicable; empty means valid.
std::vector<std::string> validate(const Circuit& c);

// Which depolarizing sites fired: one bit per (layer, qubit).
class ErrorConfig {
 public:
  ErrorConfig(std::size_t depth, std::size_t num_qubits);

  // Builds the config whose site bits are the binary digits of `index`,
  // with site (layer, qubit) at bit position layer * num_qubits + qubit.
  // Used to enumerate all configurations of a small circuit.
  static ErrorConfig from_index(std::size_t depth, std::size_t num_qubits,
                                std::uint64_t index);

  std::size_t depth() const { return depth_; }
  std::size_t num_qubits() const { return num_qubits_; }
  bool fired(std::size_t layer, std::size_t qubit) const;
  void set_fired(std::size_t layer, std::size_t qubit, bool value);
  std::size_t fired_count() const;

 private:
  std::size_t depth_ = 0;
  std::size_t num_qubits_ = 0;
  std::size_t words_per_layer_ = 0;
  std::vector<std::uint64_t> bits_;
};

// Independent Bernoulli(gamma) per site. Draw order is fixed — layers in
// order, qubits in order within a layer — so a seeded stream reproduces the
// same configuration everywhere.
ErrorConfig sample_error_config(const Circuit& c, Rng& rng);

// Alternating even/odd nearest-neighbor brickwork of uniformly random
// two-qubit symplectic gates; each qubit is independently reset to
// `reset_state` with probability reset_rate after the gates of every layer.
// Draw order per layer: gates on increasing pair positions, then one reset
// coin per qubit in increasing order.
Circuit gen_brickwork(std::size_t n, std::size_t depth, double gamma,
                      double reset_rate, const std::array<BlochComponent, 3>& reset_state,
                      Rng& rng);

// Repetition-code-style refresh circuit on n = 2m+1 qubits (data on even
// indices, ancillas on odd). Each round appends two CNOT layers copying
// neighboring-data parities onto the ancillas and one layer resetting every
// ancilla to |0>. There is no decoding step: the construction is a purely
// Clifford "error correcting" memory attempt.
Circuit gen_repetition_refresh(std::size_t n, std::size_t rounds, double gamma);

// Gate- and reset-free circuit: depth layers of bare per-qubit noise.
Circuit gen_idle(std::size_t n, std::size_t depth, double gamma);

// Canonical UTF-8 JSON serialization. Keys are emitted in sorted order and
// doubles round-trip exactly, so serialize(parse(serialize(c))) is
// byte-identical. Bloch components written as the literal 0 parse back with
// the exact-zero flag set.
std::string serialize_circuit(const Circuit& c);

// Parses the JSON circuit format. Throws std::runtime_error with a
// description on malformed input (structural validation beyond the schema is
// validate()'s job).
Circuit parse_circuit(const std::string& text);

}  // namespace cliffmem
