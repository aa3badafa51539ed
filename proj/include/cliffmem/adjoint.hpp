#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <stdexcept>
#include <utility>
#include <vector>

#include "cliffmem/circuit.hpp"
#include "cliffmem/pauli.hpp"
#include "cliffmem/rng.hpp"

namespace cliffmem {

// Thrown when a computation would exceed an enforced resource cap
// (brute-force qubit cap, exact-enumeration site cap, basis-count cap).
struct CapExceeded : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Weight history of one Pauli string propagated backward through the
// adjoint circuit. Adjoint step j undoes forward layer depth-1-j; within a
// step the order is noise adjoints, then reset adjoints, then gate
// conjugations. Weights of an annihilated string are 0 from the point of
// death on, so min_weight is 0 exactly when the string died.
struct PropagationTrace {
  std::size_t initial_weight = 0;
  // Weight after each full adjoint step (depth entries).
  std::vector<std::size_t> layer_weights;
  // Diagnostic: weight after each sub-round, 3 entries per step in the
  // order noise / resets / gates.
  std::vector<std::size_t> subround_weights;
  std::size_t min_weight = 0;
  // Adjoint step index at which the string was structurally annihilated.
  std::optional<std::size_t> annihilated_at;
};

// Diagnostic weight-batch schedule [n, ceil(n/4), ..., 1]: the geometric
// weight classes along which survival bounds tighten. Batch j covers
// weights w with schedule[j] >= w > schedule[j+1].
std::vector<std::size_t> weight_batch_schedule(std::size_t n);

// Applies the full adjoint channel of the circuit under error configuration
// b to the string s. Returns the final string (masks exact; coefficient
// magnitude exact, sign best-effort) together with its weight trace.
std::pair<PauliString, PropagationTrace> propagate_pauli(const Circuit& c,
                                                         const ErrorConfig& b,
                                                         const PauliString& s);

// A basis for one subgroup of input Paulis that are still structurally alive
// at the current propagation frontier. `source` lives at the adjoint input
// (the circuit's output side); `image` is its propagated mask at the
// frontier. The map source -> image is GF(2)-linear on the span, so kernel
// restrictions implement the many-to-one channel adjoints exactly.
struct SurvivorBasis {
  struct Generator {
    PauliString source;
    PauliString image;
  };
  std::vector<Generator> gens;

  // The full Pauli group basis X_0..X_{n-1}, Z_0..Z_{n-1} with images equal
  // to sources (nothing propagated yet).
  static SurvivorBasis full(std::size_t n);

  std::size_t rank() const { return gens.size(); }

  // Linear functional on images: f(p) = (use_x ? x_q(p) : 0) ^ (use_z ? z_q(p) : 0).
  bool functional_trivial(std::size_t qubit, bool use_x, bool use_z) const;

  // Restricts the basis to the kernel of the functional: pivots on the
  // lowest-index generator outside the kernel, folds it into the other
  // offenders, and drops it. No-op when the functional already vanishes.
  void restrict_to_kernel(std::size_t qubit, bool use_x, bool use_z);

  // Clears qubit `qubit` in every image (the mask action of a surviving
  // reset adjoint).
  void clear_image_qubit(std::size_t qubit);

  bool any_non_identity_image() const;
  bool all_images_identity() const;
};

struct EngineLimits {
  // Planar reset states (exactly one structurally-zero Bloch component)
  // split a basis into two; this caps the total number of live bases.
  std::size_t max_bases = std::size_t(1) << 16;
  // Dropping bases whose images are all identity is answer-preserving but
  // shrinks the tracked alive set; tests disable it to compare the full
  // alive set against brute force.
  bool prune_trivial_bases = true;
};

// Precompiled adjoint form of a circuit for the hot propagation loops:
// per-layer adjoint gate actions as local-mask lookup tables plus
// classified reset actions. Built once, shared read-only across trials.
class CompiledCircuit {
 public:
  struct CompiledGate {
    std::vector<std::uint32_t> qubits;
    // Lookup table over packed local masks (bit 2j = x of local qubit j,
    // bit 2j+1 = z); size 4^k. Used when k <= 4.
    std::vector<std::uint32_t> lut;
    // Fallback for wider raw-tableau gates: the adjoint tableau itself.
    std::optional<CliffordTableau> wide;
  };

  enum class ResetAction {
    kKillNonIdentity,  // all three components zero: only identity survives
    kAxis,             // one live axis: a single kernel restriction, then clear
    kPlanar,           // one dead axis: union of two kernels, may branch
    kFree,             // no zero components: everything survives, just clear
  };

  struct CompiledReset {
    std::uint32_t qubit = 0;
    ResetAction action = ResetAction::kFree;
    // Functional selectors (use_x, use_z); one entry for kAxis, two for
    // kPlanar, unused otherwise.
    std::pair<bool, bool> func[2] = {{false, false}, {false, false}};
  };

  struct CompiledLayer {
    std::vector<CompiledGate> gates;
    std::vector<CompiledReset> resets;
  };

  // Throws std::invalid_argument when the circuit fails validate().
  explicit CompiledCircuit(const Circuit& c);

  std::size_t num_qubits() const { return num_qubits_; }
  std::size_t depth() const { return layers_.size(); }
  double gamma() const { return gamma_; }
  // Layers in forward order; the engine walks them back to front.
  const std::vector<CompiledLayer>& layers() const { return layers_; }

 private:
  std::size_t num_qubits_ = 0;
  double gamma_ = 0.0;
  std::vector<CompiledLayer> layers_;
};

// Runs the subgroup engine to the adjoint output and returns the surviving
// bases (the union of their source spans is the set of structurally alive
// input Paulis, up to pruned all-identity-image bases when enabled).
std::vector<SurvivorBasis> run_survivor_bases(const CompiledCircuit& cc,
                                              const ErrorConfig& b,
                                              const EngineLimits& limits = {});

// True iff some non-identity input Pauli propagates through the adjoint
// channel to a structurally nonzero, non-identity Pauli. Final operators
// proportional to the identity do not count: they carry no distinguishing
// information between input states.
bool any_survivor_fast(const CompiledCircuit& cc, const ErrorConfig& b,
                       const EngineLimits& limits = {});
bool any_survivor_fast(const Circuit& c, const ErrorConfig& b,
                       const EngineLimits& limits = {});

// Oracle implementation of the same predicate by enumerating all 4^n - 1
// non-identity inputs. Throws CapExceeded above max_qubits.
bool any_survivor_bruteforce(const Circuit& c, const ErrorConfig& b,
                             std::size_t max_qubits = 8);

struct SurvivalEstimate {
  std::uint64_t trials = 0;
  std::uint64_t survivors = 0;
  double p_hat = 0.0;
  double ci_lo = 0.0;
  double ci_hi = 0.0;
  double confidence = 0.0;
  std::uint64_t master_seed = 0;
};

// Monte Carlo estimate of Pr_b(some non-identity Pauli survives the adjoint
// channel) with a Wilson score interval. Trial i draws its error
// configuration from an independent stream derived from (master_seed, i),
// so the result is bit-identical for any worker count.
SurvivalEstimate survival_probability(const Circuit& c, std::uint64_t trials,
                                      std::uint64_t master_seed,
                                      double confidence = 0.99,
                                      unsigned num_threads = 1,
                                      const EngineLimits& limits = {});

// Exact survival probability by enumerating every error configuration.
// Throws CapExceeded when the circuit has more than max_sites noise sites.
double survival_probability_exact(const Circuit& c, std::size_t max_sites = 20);

}  // namespace cliffmem
