#include "cliffmem/pauli.hpp"

#include <stdexcept>

namespace cliffmem {

PauliString PauliString::from_label(std::string_view label, double coeff) {
  PauliString p(label.size());
  for (std::size_t q = 0; q < label.size(); ++q) {
    switch (label[q]) {
      case 'I':
        break;
      case 'X':
        p.set_pauli(q, true, false);
        break;
      case 'Z':
        p.set_pauli(q, false, true);
        break;
      case 'Y':
        p.set_pauli(q, true, true);
        break;
      default:
        throw std::invalid_argument("unknown Pauli label character");
    }
  }
  p.set_coeff(coeff);
  return p;
}

PauliString PauliString::x_generator(std::size_t num_qubits, std::size_t q) {
  PauliString p(num_qubits);
  p.set_pauli(q, true, false);
  return p;
}

PauliString PauliString::z_generator(std::size_t num_qubits, std::size_t q) {
  PauliString p(num_qubits);
  p.set_pauli(q, false, true);
  return p;
}

void PauliString::multiply_inplace(const PauliString& other) {
  if (num_qubits_ != other.num_qubits_) {
    throw std::invalid_argument("PauliString size mismatch in multiply");
  }
  for (std::size_t i = 0; i < x_.size(); ++i) {
    x_[i] ^= other.x_[i];
    z_[i] ^= other.z_[i];
  }
  coeff_ *= other.coeff_;
  if (!other.alive_) {
    annihilate();
  }
}

std::string PauliString::label() const {
  static constexpr char kChars[4] = {'I', 'X', 'Z', 'Y'};
  std::string s(num_qubits_, 'I');
  for (std::size_t q = 0; q < num_qubits_; ++q) {
    s[q] = kChars[pauli_code(q)];
  }
  return s;
}

std::size_t weight(const PauliString& p) { return p.weight(); }

PauliString multiply(const PauliString& p, const PauliString& q) {
  PauliString out = p;
  out.multiply_inplace(q);
  return out;
}

}  // namespace cliffmem
