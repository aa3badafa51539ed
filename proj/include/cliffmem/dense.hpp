#pragma once
// Dense density-matrix oracle: exact channel evolution on a handful of
// qubits.  Everything here is exponential in n and exists to cross-check the
// bitset propagation path — the caps are enforced, not advisory.

#include <Eigen/Dense>

#include <array>
#include <complex>
#include <cstddef>
#include <string>
#include <vector>

#include "cliffmem/adjoint.hpp"
#include "cliffmem/channels.hpp"
#include "cliffmem/circuit.hpp"
#include "cliffmem/pauli.hpp"
#include "cliffmem/rng.hpp"
#include "cliffmem/tableau.hpp"

namespace cliffmem {

using ComplexMatrix = Eigen::MatrixXcd;

// Largest qubit count the dense path will touch (2^7 = 128-dim matrices).
inline constexpr std::size_t kDenseQubitCap = 7;

// A validated density matrix.  Construction checks Hermiticity, unit trace
// (1e-12) and positive semidefiniteness (min eigenvalue >= -1e-10).
class DensityMatrix {
 public:
  // Computational basis state |bits><bits|; bits[q] is the value of qubit q.
  static DensityMatrix basis_state(const std::string& bits);
  // Product state with the given bloch vector per qubit, (I + aX + bY + cZ)/2.
  static DensityMatrix product_bloch(
      const std::vector<std::array<double, 3>>& bloch);
  // Mixture of `terms` Haar-random pure states with random simplex weights.
  // Deterministic given the rng state; exercises non-stabilizer inputs.
  static DensityMatrix haar_mixture(std::size_t n, std::size_t terms, Rng& rng);
  // Wraps an explicit matrix, enforcing the invariants.
  static DensityMatrix from_matrix(ComplexMatrix m);

  std::size_t num_qubits() const { return n_; }
  const ComplexMatrix& entries() const { return entries_; }

 private:
  DensityMatrix(std::size_t n, ComplexMatrix m)
      : n_(n), entries_(std::move(m)) {}
  std::size_t n_ = 0;
  ComplexMatrix entries_;
};

// Dense matrix of a phaseless Pauli string's canonical Hermitian
// representative (tensor of I/X/Y/Z); the string's coefficient is ignored.
// Basis convention: bit q of a computational index is the value of qubit q.
ComplexMatrix pauli_matrix(const PauliString& s);

// Full 2^n x 2^n unitary of one gate.  Raw-tableau gates are synthesized as
// short words over named generators realizing the same symplectic action;
// the result can differ from the "true" gate by a Pauli frame, which no
// phaseless quantity in this codebase can observe.  Tableau synthesis is
// limited to 2 qubits.
ComplexMatrix gate_unitary(const Gate& g, std::size_t n);

// Exact noisy evolution: per layer applies gates, resets, then the
// depolarizing channel at every qubit.
DensityMatrix evolve(const Circuit& c, const DensityMatrix& rho,
                     std::size_t cap = kDenseQubitCap);

// Same, but with the noise outcome pinned: sites where b fired apply the
// full trace-out-and-replace error, all other sites apply the identity.
DensityMatrix evolve_config(const Circuit& c, const ErrorConfig& b,
                            const DensityMatrix& rho,
                            std::size_t cap = kDenseQubitCap);

// Trace norm ||rho - sigma||_1 (sum of absolute eigenvalues of the
// Hermitian difference); range [0, 2].
double trace_distance(const DensityMatrix& rho, const DensityMatrix& sigma);

// Heisenberg-picture evolution of an observable through the adjoint of the
// whole circuit, either with the noise outcome pinned to b or averaged over
// it.  This is the dense shadow of propagate_pauli.
ComplexMatrix dense_apply_adjoint(const Circuit& c, const ErrorConfig& b,
                                  const ComplexMatrix& observable,
                                  std::size_t cap = kDenseQubitCap);
ComplexMatrix dense_apply_adjoint(const Circuit& c,
                                  const ComplexMatrix& observable,
                                  std::size_t cap = kDenseQubitCap);

// One verdict of the output-distinguishability bound: the trace distance
// between the two evolved states must not exceed twice the probability that
// some input Pauli survives the adjoint channel.
struct MemoryBoundReport {
  double lhs = 0.0;  // trace_distance(evolve(c, rho), evolve(c, sigma))
  double rhs = 0.0;  // 2 x survival probability (exact or upper CI)
  bool holds = false;
  std::string method;  // "exact" when survival was enumerated, else "mc"
};

struct MemoryBoundOptions {
  std::size_t exact_site_cap = 20;  // enumerate when noise sites <= this
  std::uint64_t mc_trials = 20000;  // fallback Monte Carlo sample size
  std::uint64_t mc_seed = 1;
  double mc_confidence = 0.99;
};

MemoryBoundReport memory_bound_report(const Circuit& c, const DensityMatrix& rho,
                                      const DensityMatrix& sigma,
                                      const MemoryBoundOptions& options = {});

// Max deviation between the adjoint channel built analytically and the
// transpose of the forward channel's Pauli transfer matrix, together with
// the inner-product identity <X, N(Y)> = <N'(X), Y> over the Pauli basis.
double adjoint_deviation_depolarize(double gamma);
double adjoint_deviation_reset(const ResetSpec& reset);
double adjoint_deviation_gate(const Gate& g);

}  // namespace cliffmem
