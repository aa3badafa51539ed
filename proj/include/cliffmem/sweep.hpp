#pragma once
// Experiment orchestration: seeded survival sweeps over circuit-family
// grids, with CSV interchange and resume-by-key semantics.

#include <array>
#include <cstdint>
#include <string>
#include <vector>

#include "cliffmem/channels.hpp"
#include "cliffmem/circuit.hpp"

namespace cliffmem {

// One sweep: a circuit family crossed with n, gamma and depth grids. For
// the repetition-refresh family "depth" counts refresh rounds (each round
// is three circuit layers); for the other families it is the layer count.
struct SweepConfig {
  std::string family;  // "idle" | "brickwork" | "repetition-refresh"
  std::vector<std::size_t> n_values;
  std::vector<double> gamma_values;
  double reset_rate = 0.0;                   // brickwork only
  std::array<BlochComponent, 3> reset_state  // brickwork only
      {BlochComponent(0.0), BlochComponent(0.0), BlochComponent(1.0)};
  std::vector<std::size_t> depths;
  std::uint64_t trials = 0;
  std::uint64_t seed = 0;
  double confidence = 0.99;
};

// One human-readable string per violation; empty means valid.
std::vector<std::string> validate(const SweepConfig& cfg);

// JSON round trip, same conventions as the circuit format (sorted keys,
// literal 0 keeps the exact-zero flag on reset_state components).
SweepConfig parse_sweep_config(const std::string& text);
std::string serialize_sweep_config(const SweepConfig& cfg);

// One measured grid point. `seed` is the derived per-point master seed that
// reproduces the row in isolation.
struct SweepRow {
  std::string family;
  std::size_t n = 0;
  double gamma = 0.0;
  std::size_t depth = 0;
  std::uint64_t trials = 0;
  std::uint64_t survivors = 0;
  double p_hat = 0.0;
  double ci_lo = 0.0;
  double ci_hi = 0.0;
  std::uint64_t seed = 0;
};

bool operator==(const SweepRow& a, const SweepRow& b);

// The key by which resume matching and canonical sorting happen.
bool same_grid_point(const SweepRow& a, const SweepRow& b);

// The family circuit measured at one grid point. Circuits of the same
// (family, n, gamma) at increasing depth are nested: deeper ones extend
// shallower ones layer for layer, so p_hat is monotone along a depth grid
// up to sampling noise.
Circuit sweep_point_circuit(const SweepConfig& cfg, std::size_t n, double gamma,
                            std::size_t depth);

// Runs every grid point not already present in `existing` (matched by
// family/n/gamma/depth) and returns the merged table in canonical order:
// family, then n, then gamma, then depth. Deterministic for a fixed config
// at any thread count. Throws std::invalid_argument on invalid config and
// CapExceeded if the survival engine overflows its basis cap.
std::vector<SweepRow> run_sweep(const SweepConfig& cfg,
                                const std::vector<SweepRow>& existing = {},
                                unsigned num_threads = 1);

// CSV with mandatory header "family,n,gamma,depth,trials,survivors,p_hat,
// ci_lo,ci_hi,seed", LF line endings, doubles at full round-trip precision.
std::string write_sweep_csv(const std::vector<SweepRow>& rows);
std::vector<SweepRow> parse_sweep_csv(const std::string& text);

}  // namespace cliffmem
