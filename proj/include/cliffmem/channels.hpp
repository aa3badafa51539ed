#pragma once

#include <array>
#include <cstddef>
#include <cstdint>
#include <string>
#include <utility>
#include <vector>

#include "cliffmem/pauli.hpp"
#include "cliffmem/rng.hpp"

namespace cliffmem {

// One component of a Bloch vector. `exactly_zero` records that the component
// is structurally zero (written as a literal 0 in the circuit file), which is
// what decides whether the adjoint reset annihilates a Pauli term. It is never
// inferred from a small floating-point value.
struct BlochComponent {
  double value = 0.0;
  bool exactly_zero = true;

  BlochComponent() = default;
  explicit BlochComponent(double v) : value(v), exactly_zero(v == 0.0) {}
};

// Mid-circuit reset of one qubit to the single-qubit state with Bloch vector
// (bloch[0], bloch[1], bloch[2]) = (a, b, c), i.e. rho = (I + aX + bY + cZ)/2.
struct ResetSpec {
  std::uint32_t qubit = 0;
  std::array<BlochComponent, 3> bloch{};

  static ResetSpec zero_state(std::uint32_t q);        // |0>
  static ResetSpec plus_state(std::uint32_t q);        // |+>
  static ResetSpec plus_i_state(std::uint32_t q);      // |+i>
  static ResetSpec magic_state(std::uint32_t q);       // (X+Z)/sqrt(2) axis
  static ResetSpec maximally_mixed(std::uint32_t q);   // I/2

  // Euclidean norm of the Bloch vector; valid states have norm <= 1.
  double bloch_norm() const;
  // Number of structurally-zero components (0..3).
  int zero_component_count() const;
};

// Per-qubit single-qubit depolarizing noise applied after every layer: each
// qubit is independently replaced by the maximally mixed state with
// probability gamma.
struct NoiseModel {
  double gamma = 0.0;
};

// Adjoint of the full depolarizing channel acting on one qubit of a Pauli
// term: identity is fixed, X/Y/Z on that qubit annihilate the term.
void depolarize_error_adjoint(PauliString& p, std::size_t qubit);

// Adjoint of a reset channel acting on one qubit of a Pauli term. For the
// reset target rho = (I + aX + bY + cZ)/2:
//   I -> I (term unchanged),  X -> a I,  Y -> b I,  Z -> c I,
// where a structurally-zero component annihilates the term. In all surviving
// cases the reset qubit is cleared to identity.
void reset_adjoint(PauliString& p, const ResetSpec& reset);

// Forward transfer-matrix row of a reset channel for a single-qubit input
// Pauli. The input is identified by its (x, z) bits. Returns the list of
// structurally nonzero output entries as (pauli code, coefficient) pairs,
// with pauli codes 0=I, 1=X, 2=Z, 3=Y matching PauliString::pauli_code.
// A reset maps I to 2 rho = I + aX + bY + cZ and X/Y/Z to zero.
std::vector<std::pair<int, double>> reset_forward_ptm_row(const ResetSpec& reset,
                                                          bool x_bit, bool z_bit);

// True when the reset state's Bloch vector is admissible (norm at most one,
// up to floating-point representation slack).
bool reset_state_valid(const ResetSpec& reset);

}  // namespace cliffmem
