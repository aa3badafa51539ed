#pragma once

#include <cstddef>
#include <string>
#include <vector>

#include "cliffmem/circuit.hpp"
#include "cliffmem/rng.hpp"

namespace cliffmem {

// Knobs for randomized verification instances. Defaults produce the mixed
// population used by the oracle-equivalence suite: every named gate kind,
// raw two-qubit tableau gates, and reset states covering zero, one, two and
// three structurally-zero Bloch components.
struct RandomCircuitOptions {
  std::size_t min_qubits = 1;
  std::size_t max_qubits = 6;
  std::size_t min_depth = 0;
  std::size_t max_depth = 6;
  std::vector<double> gammas = {0.0, 0.1, 0.5, 1.0};
  bool allow_tableau_gates = true;
  // Per-qubit chance of receiving a reset in each layer.
  double reset_probability = 0.3;
};

Circuit random_circuit(Rng& rng, const RandomCircuitOptions& opts = {});

// The reset-state pool random_circuit draws from; exposed so tests can
// assert coverage of all structural classes.
std::vector<std::array<BlochComponent, 3>> reset_state_pool();

// Outcome of one verification suite: per-instance failures are described,
// and the suite passes iff `failures` is empty.
struct SuiteReport {
  std::size_t instances = 0;
  std::vector<std::string> failures;
  bool passed() const { return failures.empty(); }
};

// Fast-path vs brute-force agreement of the survivor decision on random
// instances (existence answers must match bit-for-bit).
SuiteReport check_oracle_equivalence(std::size_t instances, std::uint64_t seed);

// Survival-vs-trace-distance inequality on random small circuits with dense
// evolution on both sides: trace_distance(evolved rho, evolved sigma) must
// not exceed twice the survival probability; additionally the single-qubit
// idle family must achieve equality to 1e-10.
SuiteReport check_memory_bound(std::size_t instances, std::uint64_t seed);

// Weight-decay bound: on constructed circuits with known minimum propagated
// weight w, the sampled probability that a Pauli survives all noise rounds
// is at most (1-gamma)^(w*d) plus 3 binomial sigma; on bare idle chains it
// must match the bound to within 3 sigma.
SuiteReport check_weight_decay(std::size_t samples_per_cell, std::uint64_t seed);

// Adjoint-consistency of every channel in scope against dense transfer
// matrices: transpose identity, inner-product identity, and agreement of
// the sparse propagation with the dense adjoint on random circuits.
SuiteReport check_adjoint_consistency(std::uint64_t seed);

// Mixture identity: averaging dense evolution over every error
// configuration with binomial weights must reproduce the exact noisy
// channel, entrywise.
SuiteReport check_noise_mixture(std::size_t instances, std::uint64_t seed);

}  // namespace cliffmem
