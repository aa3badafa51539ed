#pragma once

#include <bit>
#include <cstddef>
#include <cstdint>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace cliffmem {

// Phaseless n-qubit Pauli string over paired X/Z bitsets with a real scalar
// coefficient. Qubit q carries I iff (x_q, z_q) = (0,0), X iff (1,0),
// Z iff (0,1), Y iff (1,1). Global phase and +-1 signs are not modeled;
// the coefficient's magnitude is what the channels in scope shrink.
//
// Annihilation (the string having been mapped to zero) is a structural
// event tracked by an explicit flag, never by comparing the coefficient
// against an epsilon. An annihilated string compares equal to any other
// annihilated string regardless of masks.
class PauliString {
 public:
  explicit PauliString(std::size_t num_qubits)
      : num_qubits_(num_qubits),
        x_(word_count(num_qubits), 0),
        z_(word_count(num_qubits), 0) {}

  static PauliString annihilated(std::size_t num_qubits) {
    PauliString p(num_qubits);
    p.annihilate();
    return p;
  }

  // Parses e.g. "XIZY" where character i is the Pauli on qubit i.
  static PauliString from_label(std::string_view label, double coeff = 1.0);

  // Single-qubit X_q / Z_q generators.
  static PauliString x_generator(std::size_t num_qubits, std::size_t q);
  static PauliString z_generator(std::size_t num_qubits, std::size_t q);

  std::size_t num_qubits() const { return num_qubits_; }

  bool x_bit(std::size_t q) const { return (x_[q >> 6] >> (q & 63)) & 1; }
  bool z_bit(std::size_t q) const { return (z_[q >> 6] >> (q & 63)) & 1; }

  // 0 = I, 1 = X, 2 = Z, 3 = Y (bit 0 from x, bit 1 from z).
  unsigned pauli_code(std::size_t q) const {
    return static_cast<unsigned>(x_bit(q)) | (static_cast<unsigned>(z_bit(q)) << 1);
  }

  void set_pauli(std::size_t q, bool x, bool z) {
    const std::uint64_t m = 1ULL << (q & 63);
    x_[q >> 6] = (x_[q >> 6] & ~m) | (x ? m : 0);
    z_[q >> 6] = (z_[q >> 6] & ~m) | (z ? m : 0);
  }

  void clear_qubit(std::size_t q) { set_pauli(q, false, false); }

  // Number of non-identity qubits; 0 for annihilated strings by convention.
  std::size_t weight() const {
    if (!alive_) {
      return 0;
    }
    std::size_t w = 0;
    for (std::size_t i = 0; i < x_.size(); ++i) {
      w += static_cast<std::size_t>(std::popcount(x_[i] | z_[i]));
    }
    return w;
  }

  bool identity_masks() const {
    for (std::size_t i = 0; i < x_.size(); ++i) {
      if ((x_[i] | z_[i]) != 0) {
        return false;
      }
    }
    return true;
  }

  bool non_identity_at(std::size_t q) const { return x_bit(q) || z_bit(q); }

  bool alive() const { return alive_; }
  double coeff() const { return alive_ ? coeff_ : 0.0; }

  void scale(double factor) { coeff_ *= factor; }
  void set_coeff(double c) { coeff_ = c; }

  void annihilate() {
    alive_ = false;
    coeff_ = 0.0;
  }

  // Mask XOR with coefficient product; phaseless, so no i/-1 bookkeeping.
  void multiply_inplace(const PauliString& other);

  bool same_masks(const PauliString& other) const {
    return x_ == other.x_ && z_ == other.z_;
  }

  friend bool operator==(const PauliString& a, const PauliString& b) {
    if (!a.alive_ && !b.alive_) {
      return true;
    }
    return a.alive_ == b.alive_ && a.num_qubits_ == b.num_qubits_ &&
           a.same_masks(b) && a.coeff_ == b.coeff_;
  }

  std::string label() const;

  std::span<const std::uint64_t> x_words() const { return x_; }
  std::span<const std::uint64_t> z_words() const { return z_; }
  std::span<std::uint64_t> x_words() { return x_; }
  std::span<std::uint64_t> z_words() { return z_; }

  static std::size_t word_count(std::size_t num_qubits) {
    return (num_qubits + 63) / 64;
  }

 private:
  std::size_t num_qubits_;
  std::vector<std::uint64_t> x_;
  std::vector<std::uint64_t> z_;
  double coeff_ = 1.0;
  bool alive_ = true;
};

std::size_t weight(const PauliString& p);
PauliString multiply(const PauliString& p, const PauliString& q);

}  // namespace cliffmem
