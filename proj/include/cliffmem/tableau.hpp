#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "cliffmem/pauli.hpp"
#include "cliffmem/rng.hpp"

namespace cliffmem {

class Rng;

// Symplectic action of a Clifford layer on Pauli generators: row q of
// image_x / image_z is the conjugated image of X_q / Z_q. Row coefficients
// are restricted to +-1; they are carried along but nothing downstream of
// the survival logic depends on them (the representation is phaseless).
struct CliffordTableau {
  std::size_t num_qubits = 0;
  std::vector<PauliString> image_x;
  std::vector<PauliString> image_z;

  static CliffordTableau identity(std::size_t n);
  friend bool operator==(const CliffordTableau& a, const CliffordTableau& b);

  // Phaseless conjugated image of p. Coefficient magnitude is preserved.
  PauliString conjugate(const PauliString& p) const;

  // Mask-level inverse (row signs normalized to +1).
  CliffordTableau inverse() const;

  // True iff the 2n rows preserve all pairwise commutation relations.
  bool is_symplectic() const;
};

// 1 iff P and Q anticommute (parity of overlapping, differing non-identity
// components).
int symplectic_product(const PauliString& p, const PauliString& q);

enum class GateKind { kH, kS, kSdg, kX, kY, kZ, kCnot, kCz, kSwap, kTableau };

struct Gate {
  GateKind kind;
  std::vector<std::uint32_t> qubits;
  // Local tableau over qubits.size() qubits, present iff kind == kTableau.
  std::optional<CliffordTableau> tableau;
};

std::string_view gate_kind_name(GateKind kind);
std::optional<GateKind> gate_kind_from_name(std::string_view name);
std::size_t gate_arity(GateKind kind);  // 0 for kTableau (variable)

// Empty string when well formed, else a description of the defect.
std::string gate_defect(const Gate& g, std::size_t num_qubits);

// In-place conjugation of p by the gate. Masks follow the symplectic
// rules; sign flips are applied where the phaseless convention defines
// them exactly.
void apply_gate_conjugation(const Gate& g, PauliString& p);

// Gate whose conjugation action inverts g's (S <-> SDG, tableaux inverted,
// everything else is an involution).
Gate adjoint_gate(const Gate& g);

// Composed tableau of one layer of pairwise-disjoint gates. Throws
// std::invalid_argument on overlap, bad arity, or out-of-range qubits.
CliffordTableau tableau_from_layer(std::size_t n, const std::vector<Gate>& gates);

// Local tableau rows as GF(2) bit vectors, for the raw-tableau circuit
// format. Row order [X_0 .. X_{k-1}, Z_0 .. Z_{k-1}]; bit order within a
// row [x_0 .. x_{k-1}, z_0 .. z_{k-1}].
std::vector<std::vector<int>> tableau_rows(const CliffordTableau& t);
CliffordTableau tableau_from_rows(const std::vector<std::vector<int>>& rows);

// Uniform draw from Sp(2k, GF(2)) via the recursive symplectic-basis
// construction: pick the image of X_0 uniformly among nonzero vectors, the
// image of Z_0 uniformly among its symplectic partners, then recurse on
// the symplectic complement. Rows are returned in the layout of
// tableau_rows.
std::vector<std::uint32_t> random_symplectic_rows(Rng& rng, std::size_t k);

// Uniform two-qubit Clifford modulo Pauli frame: uniform Sp(4, GF(2))
// element with row signs normalized to +1 (signs are irrelevant to weight
// dynamics and cannot be expressed in circuit files).
CliffordTableau random_two_qubit_clifford(Rng& rng);

}  // namespace cliffmem
