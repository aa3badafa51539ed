#include "cliffmem/channels.hpp"

#include <cmath>

namespace cliffmem {

ResetSpec ResetSpec::zero_state(std::uint32_t q) {
  ResetSpec r;
  r.qubit = q;
  r.bloch = {BlochComponent(0.0), BlochComponent(0.0), BlochComponent(1.0)};
  return r;
}

ResetSpec ResetSpec::plus_state(std::uint32_t q) {
  ResetSpec r;
  r.qubit = q;
  r.bloch = {BlochComponent(1.0), BlochComponent(0.0), BlochComponent(0.0)};
  return r;
}

ResetSpec ResetSpec::plus_i_state(std::uint32_t q) {
  ResetSpec r;
  r.qubit = q;
  r.bloch = {BlochComponent(0.0), BlochComponent(1.0), BlochComponent(0.0)};
  return r;
}

ResetSpec ResetSpec::magic_state(std::uint32_t q) {
  ResetSpec r;
  r.qubit = q;
  const double inv_sqrt2 = 1.0 / std::sqrt(2.0);
  r.bloch = {BlochComponent(inv_sqrt2), BlochComponent(0.0), BlochComponent(inv_sqrt2)};
  return r;
}

ResetSpec ResetSpec::maximally_mixed(std::uint32_t q) {
  ResetSpec r;
  r.qubit = q;
  r.bloch = {BlochComponent(0.0), BlochComponent(0.0), BlochComponent(0.0)};
  return r;
}

double ResetSpec::bloch_norm() const {
  return std::sqrt(bloch[0].value * bloch[0].value + bloch[1].value * bloch[1].value +
                   bloch[2].value * bloch[2].value);
}

int ResetSpec::zero_component_count() const {
  int count = 0;
  for (const BlochComponent& c : bloch) {
    if (c.exactly_zero) {
      ++count;
    }
  }
  return count;
}

bool reset_state_valid(const ResetSpec& reset) {
  // Allow a hair of representation slack: e.g. the (X+Z)/sqrt(2) axis state
  // has a computed norm of 1 + ~2e-16 in doubles.
  return reset.bloch_norm() <= 1.0 + 1e-9;
}

void depolarize_error_adjoint(PauliString& p, std::size_t qubit) {
  if (!p.alive()) {
    return;
  }
  if (p.non_identity_at(qubit)) {
    p.annihilate();
  }
}

void reset_adjoint(PauliString& p, const ResetSpec& reset) {
  if (!p.alive()) {
    return;
  }
  const std::size_t q = reset.qubit;
  const bool x = p.x_bit(q), z = p.z_bit(q);
  if (!x && !z) {
    return;  // identity on the reset qubit passes through untouched
  }
  // pauli_code order on (x, z): X = (1,0), Z = (0,1), Y = (1,1); the Bloch
  // array is stored (a, b, c) = (X, Y, Z) coefficients.
  const int bloch_index = x ? (z ? 1 : 0) : 2;
  const BlochComponent& comp = reset.bloch[bloch_index];
  if (comp.exactly_zero) {
    p.annihilate();
    return;
  }
  p.scale(comp.value);
  p.clear_qubit(q);
}

std::vector<std::pair<int, double>> reset_forward_ptm_row(const ResetSpec& reset,
                                                          bool x_bit, bool z_bit) {
  std::vector<std::pair<int, double>> out;
  if (x_bit || z_bit) {
    return out;  // traceless inputs are erased by the reset
  }
  out.emplace_back(0, 1.0);  // I -> I + aX + bY + cZ
  // pauli codes: X=1 (x=1,z=0), Z=2 (x=0,z=1), Y=3 (x=1,z=1)
  static constexpr int kCodeForAxis[3] = {1, 3, 2};
  for (int axis = 0; axis < 3; ++axis) {
    if (!reset.bloch[axis].exactly_zero) {
      out.emplace_back(kCodeForAxis[axis], reset.bloch[axis].value);
    }
  }
  return out;
}

}  // namespace cliffmem
