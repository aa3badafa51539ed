#include <doctest.h>

#include <cmath>
#include <complex>
#include <stdexcept>
#include <vector>

#include "cliffmem/adjoint.hpp"
#include "cliffmem/checks.hpp"
#include "cliffmem/circuit.hpp"
#include "cliffmem/dense.hpp"
#include "cliffmem/rng.hpp"

using namespace cliffmem;

namespace {

ErrorConfig no_errors_d(const Circuit& c) {
  return ErrorConfig(c.depth(), c.num_qubits);
}

PauliString pauli_from_index(std::size_t n, std::uint64_t idx) {
  PauliString s(n);
  for (std::size_t q = 0; q < n; ++q) {
    s.set_pauli(q, (idx >> (2 * q)) & 1, (idx >> (2 * q + 1)) & 1);
  }
  return s;
}

double max_abs(const ComplexMatrix& m) { return m.cwiseAbs().maxCoeff(); }

}  // namespace

TEST_CASE("density matrix constructors and validation") {
  const DensityMatrix zero = DensityMatrix::basis_state("0");
  CHECK(zero.num_qubits() == 1);
  CHECK(zero.entries()(0, 0) == std::complex<double>{1.0});
  CHECK(zero.entries()(1, 1) == std::complex<double>{0.0});

  // Qubit q is bit q of the index: "01" puts qubit 1 in |1>, index 2.
  const DensityMatrix ten = DensityMatrix::basis_state("01");
  CHECK(ten.entries()(2, 2) == std::complex<double>{1.0});

  CHECK_THROWS_AS(DensityMatrix::basis_state("012"), std::invalid_argument);
  CHECK_THROWS_AS(DensityMatrix::basis_state("00000000"), CapExceeded);

  const DensityMatrix plus = DensityMatrix::product_bloch({{1.0, 0.0, 0.0}});
  CHECK(plus.entries()(0, 1).real() == doctest::Approx(0.5));
  CHECK_THROWS_AS(DensityMatrix::product_bloch({{1.0, 1.0, 0.0}}),
                  std::invalid_argument);

  // from_matrix rejects each invariant violation.
  ComplexMatrix bad = ComplexMatrix::Zero(2, 2);
  bad(0, 1) = 1.0;  // not Hermitian
  CHECK_THROWS_AS(DensityMatrix::from_matrix(bad), std::invalid_argument);
  ComplexMatrix off_trace = ComplexMatrix::Identity(2, 2);
  CHECK_THROWS_AS(DensityMatrix::from_matrix(off_trace), std::invalid_argument);
  ComplexMatrix indefinite(2, 2);
  indefinite << 1.5, 0.0, 0.0, -0.5;
  CHECK_THROWS_AS(DensityMatrix::from_matrix(indefinite), std::invalid_argument);
}

TEST_CASE("haar mixtures are valid states and seed-deterministic") {
  Rng rng_a(99), rng_b(99), rng_c(100);
  const DensityMatrix a = DensityMatrix::haar_mixture(3, 4, rng_a);
  const DensityMatrix b = DensityMatrix::haar_mixture(3, 4, rng_b);
  const DensityMatrix c = DensityMatrix::haar_mixture(3, 4, rng_c);
  CHECK(max_abs(a.entries() - b.entries()) == 0.0);
  CHECK(max_abs(a.entries() - c.entries()) > 1e-6);
  CHECK(std::abs(a.entries().trace() - std::complex<double>{1.0}) < 1e-12);
  // Mixtures of several Haar states are full of non-stabilizer structure;
  // a quick sanity check that it is not accidentally diagonal.
  CHECK(max_abs(a.entries() - a.entries().diagonal().asDiagonal().toDenseMatrix()) > 1e-6);
}

TEST_CASE("pauli matrices multiply like paulis") {
  const PauliString y = PauliString::from_label("Y");
  const ComplexMatrix ym = pauli_matrix(y);
  CHECK(max_abs(ym * ym - ComplexMatrix::Identity(2, 2)) < 1e-15);
  const ComplexMatrix xz =
      pauli_matrix(PauliString::from_label("X")) * pauli_matrix(PauliString::from_label("Z"));
  // XZ = -iY.
  CHECK(max_abs(xz - std::complex<double>{0, -1} * ym) < 1e-15);

  const ComplexMatrix two = pauli_matrix(PauliString::from_label("XZ"));
  CHECK(two.rows() == 4);
  // Entry convention: qubit 0 carries the X factor.
  CHECK(two(1, 0).real() == doctest::Approx(1.0));
}

TEST_CASE("tableau gates synthesize to matching unitaries") {
  // Every named gate, expressed as a raw tableau, must reproduce its own
  // conjugation action on all Paulis (up to sign: the synthesized word can
  // differ by a Pauli frame).
  for (GateKind kind : {GateKind::kH, GateKind::kS, GateKind::kSdg,
                        GateKind::kCnot, GateKind::kCz, GateKind::kSwap}) {
    const std::size_t k = gate_arity(kind);
    std::vector<std::uint32_t> qubits;
    for (std::uint32_t q = 0; q < k; ++q) {
      qubits.push_back(q);
    }
    const Gate named{kind, qubits, std::nullopt};
    CliffordTableau t = CliffordTableau::identity(k);
    for (PauliString& row : t.image_x) {
      apply_gate_conjugation(named, row);
    }
    for (PauliString& row : t.image_z) {
      apply_gate_conjugation(named, row);
    }
    const Gate raw{GateKind::kTableau, qubits, t};
    const ComplexMatrix u = gate_unitary(raw, k);
    CHECK(max_abs(u * u.adjoint() - ComplexMatrix::Identity(u.rows(), u.cols())) < 1e-12);
    for (std::uint64_t idx = 1; idx < (std::uint64_t(1) << (2 * k)); ++idx) {
      const PauliString s = pauli_from_index(k, idx);
      PauliString conj = s;
      apply_gate_conjugation(named, conj);
      const ComplexMatrix dense_image = u * pauli_matrix(s) * u.adjoint();
      const ComplexMatrix expected = pauli_matrix(conj);
      const bool plus = max_abs(dense_image - expected) < 1e-12;
      const bool minus = max_abs(dense_image + expected) < 1e-12;
      CHECK((plus || minus));
    }
  }

  // Random two-qubit tableaus synthesize and act correctly on masks.
  Rng rng(31337);
  for (int i = 0; i < 25; ++i) {
    const CliffordTableau t = random_two_qubit_clifford(rng);
    const Gate raw{GateKind::kTableau, {0, 1}, t};
    const ComplexMatrix u = gate_unitary(raw, 2);
    for (std::uint64_t idx = 1; idx < 16; ++idx) {
      const PauliString s = pauli_from_index(2, idx);
      const PauliString expected = t.conjugate(s);
      const ComplexMatrix dense_image = u * pauli_matrix(s) * u.adjoint();
      const ComplexMatrix target = pauli_matrix(expected);
      const bool plus = max_abs(dense_image - target) < 1e-12;
      const bool minus = max_abs(dense_image + target) < 1e-12;
      CHECK((plus || minus));
    }
  }

  CliffordTableau wide = CliffordTableau::identity(3);
  CHECK_THROWS_AS(gate_unitary(Gate{GateKind::kTableau, {0, 1, 2}, wide}, 3),
                  CapExceeded);
}

TEST_CASE("evolve closed forms") {
  // Empty circuit: input unchanged.
  Circuit empty;
  empty.num_qubits = 2;
  Rng rng(5);
  const DensityMatrix rho = DensityMatrix::haar_mixture(2, 2, rng);
  CHECK(max_abs(evolve(empty, rho).entries() - rho.entries()) == 0.0);

  // Reset to |0> with gamma 0 maps |1><1| to |0><0|.
  Circuit reset_c;
  reset_c.num_qubits = 1;
  Layer reset_layer;
  reset_layer.resets.push_back(ResetSpec::zero_state(0));
  reset_c.layers.push_back(reset_layer);
  const DensityMatrix one = DensityMatrix::basis_state("1");
  const DensityMatrix out = evolve(reset_c, one);
  CHECK(out.entries()(0, 0).real() == doctest::Approx(1.0));
  CHECK(out.entries()(1, 1).real() == doctest::Approx(0.0));

  // d noisy idle layers: diag((1+(1-g)^d)/2, (1-(1-g)^d)/2).
  const double gamma = 0.35;
  for (std::size_t d : {1u, 3u, 6u}) {
    const Circuit idle = gen_idle(1, d, gamma);
    const DensityMatrix evolved = evolve(idle, DensityMatrix::basis_state("0"));
    const double shrink = std::pow(1.0 - gamma, double(d));
    CHECK(evolved.entries()(0, 0).real() ==
          doctest::Approx((1 + shrink) / 2).epsilon(1e-12));
    CHECK(evolved.entries()(1, 1).real() ==
          doctest::Approx((1 - shrink) / 2).epsilon(1e-12));
  }

  Circuit too_wide = gen_idle(8, 1, 0.1);
  Rng wide_rng(6);
  CHECK_THROWS_AS(
      evolve(too_wide, DensityMatrix::basis_state("0"), 3), CapExceeded);
}

TEST_CASE("evolve_config pins noise outcomes") {
  // All-false config: gamma is irrelevant, matches the noiseless channel.
  Rng rng(77);
  RandomCircuitOptions opts;
  opts.max_qubits = 3;
  opts.max_depth = 3;
  Circuit c = random_circuit(rng, opts);
  c.noise.gamma = 0.7;
  Circuit quiet = c;
  quiet.noise.gamma = 0.0;
  Rng state_rng(78);
  const DensityMatrix rho =
      DensityMatrix::haar_mixture(c.num_qubits, 2, state_rng);
  CHECK(max_abs(evolve_config(c, no_errors_d(c), rho).entries() -
                evolve(quiet, rho).entries()) < 1e-12);

  // Firing the only site of a 1-qubit idle layer fully depolarizes.
  Circuit idle = gen_idle(1, 1, 0.2);
  ErrorConfig fired(1, 1);
  fired.set_fired(0, 0, true);
  Rng in_rng(79);
  const DensityMatrix any = DensityMatrix::haar_mixture(1, 2, in_rng);
  const DensityMatrix depolarized = evolve_config(idle, fired, any);
  CHECK(max_abs(depolarized.entries() - 0.5 * ComplexMatrix::Identity(2, 2)) <
        1e-12);
}

TEST_CASE("binomially weighted configs average to the noisy channel") {
  Rng rng(424);
  RandomCircuitOptions opts;
  opts.max_qubits = 2;
  opts.min_depth = 1;
  opts.max_depth = 2;
  opts.gammas = {0.3};
  for (int instance = 0; instance < 3; ++instance) {
    const Circuit c = random_circuit(rng, opts);
    const std::size_t sites = c.noise_site_count();
    REQUIRE(sites <= 12);
    Rng state_rng(500 + instance);
    const DensityMatrix rho =
        DensityMatrix::haar_mixture(c.num_qubits, 2, state_rng);
    const std::uint64_t dim = std::uint64_t(1) << c.num_qubits;
    ComplexMatrix mean = ComplexMatrix::Zero(dim, dim);
    for (std::uint64_t idx = 0; idx < (std::uint64_t(1) << sites); ++idx) {
      const ErrorConfig b = ErrorConfig::from_index(c.depth(), c.num_qubits, idx);
      const double prob = std::pow(c.noise.gamma, double(b.fired_count())) *
                          std::pow(1.0 - c.noise.gamma,
                                   double(sites - b.fired_count()));
      mean += prob * evolve_config(c, b, rho).entries();
    }
    CHECK(max_abs(mean - evolve(c, rho).entries()) < 1e-10);
  }
}

TEST_CASE("trace distance closed forms") {
  const DensityMatrix zero = DensityMatrix::basis_state("0");
  const DensityMatrix one = DensityMatrix::basis_state("1");
  CHECK(trace_distance(zero, zero) == 0.0);
  CHECK(trace_distance(zero, one) == doctest::Approx(2.0).epsilon(1e-12));

  const double gamma = 0.25;
  for (std::size_t d : {1u, 2u, 5u}) {
    const Circuit idle = gen_idle(1, d, gamma);
    const double dist = trace_distance(evolve(idle, zero), evolve(idle, one));
    CHECK(dist == doctest::Approx(2.0 * std::pow(1.0 - gamma, double(d)))
                      .epsilon(1e-12));
  }

  CHECK_THROWS_AS(trace_distance(zero, DensityMatrix::basis_state("00")),
                  std::invalid_argument);
}

TEST_CASE("channel adjoint deviations are numerically zero") {
  for (double gamma : {0.0, 0.1, 0.5, 1.0}) {
    CHECK(adjoint_deviation_depolarize(gamma) < 1e-12);
  }
  for (const ResetSpec& reset :
       {ResetSpec::zero_state(0), ResetSpec::plus_state(0),
        ResetSpec::magic_state(0), ResetSpec::maximally_mixed(0)}) {
    CHECK(adjoint_deviation_reset(reset) < 1e-12);
  }
  for (GateKind kind : {GateKind::kH, GateKind::kS, GateKind::kSdg,
                        GateKind::kX, GateKind::kY, GateKind::kZ,
                        GateKind::kCnot, GateKind::kCz, GateKind::kSwap}) {
    std::vector<std::uint32_t> qubits(gate_arity(kind));
    for (std::uint32_t q = 0; q < qubits.size(); ++q) {
      qubits[q] = q;
    }
    CHECK(adjoint_deviation_gate(Gate{kind, qubits, std::nullopt}) < 1e-12);
  }
  Rng rng(8);
  for (int i = 0; i < 5; ++i) {
    const Gate raw{GateKind::kTableau, {0, 1}, random_two_qubit_clifford(rng)};
    CHECK(adjoint_deviation_gate(raw) < 1e-12);
  }
}

TEST_CASE("dense adjoint shadows the bitset propagation") {
  Rng rng(20240815);
  RandomCircuitOptions opts;
  opts.max_qubits = 3;
  opts.max_depth = 3;
  int alive_seen = 0;
  for (int instance = 0; instance < 25; ++instance) {
    const Circuit c = random_circuit(rng, opts);
    Rng brng = Rng::derive(111, std::uint64_t(instance));
    const ErrorConfig b = sample_error_config(c, brng);
    const std::size_t n = c.num_qubits;
    bool named_only = true;
    for (const Layer& layer : c.layers) {
      for (const Gate& g : layer.gates) {
        named_only = named_only && g.kind != GateKind::kTableau;
      }
    }
    for (std::uint64_t idx = 1; idx < (std::uint64_t(1) << (2 * n)); ++idx) {
      const PauliString s = pauli_from_index(n, idx);
      const auto [ref, trace] = propagate_pauli(c, b, s);
      const ComplexMatrix dense = dense_apply_adjoint(c, b, pauli_matrix(s));
      if (!ref.alive()) {
        CHECK(max_abs(dense) < 1e-10);
        continue;
      }
      ++alive_seen;
      // Project the dense image onto the reported mask; the residual must
      // vanish and the coefficient magnitudes must agree.  Sign agreement is
      // only promised when every gate is named (raw-tableau conjugation is
      // phaseless by construction).
      const ComplexMatrix target = pauli_matrix(ref);
      const std::complex<double> proj =
          (target * dense).trace() / double(std::uint64_t(1) << n);
      CHECK(max_abs(dense - proj * target) < 1e-10);
      CHECK(std::abs(proj.imag()) < 1e-10);
      CHECK(std::abs(std::abs(proj.real()) - std::abs(ref.coeff())) < 1e-10);
      if (named_only) {
        CHECK(std::abs(proj.real() - ref.coeff()) < 1e-10);
      }
    }
  }
  CHECK(alive_seen > 50);  // the comparison actually exercised live paths
}

TEST_CASE("forward and adjoint averaged channels are trace duals") {
  Rng rng(616);
  RandomCircuitOptions opts;
  opts.max_qubits = 3;
  opts.max_depth = 3;
  for (int instance = 0; instance < 8; ++instance) {
    const Circuit c = random_circuit(rng, opts);
    Rng state_rng = Rng::derive(717, std::uint64_t(instance));
    const DensityMatrix rho =
        DensityMatrix::haar_mixture(c.num_qubits, 2, state_rng);
    const ComplexMatrix forward = evolve(c, rho).entries();
    for (std::uint64_t idx = 0; idx < (std::uint64_t(1) << (2 * c.num_qubits));
         ++idx) {
      const PauliString s = pauli_from_index(c.num_qubits, idx);
      const ComplexMatrix obs = pauli_matrix(s);
      const std::complex<double> lhs = (forward * obs).trace();
      const std::complex<double> rhs =
          (rho.entries() * dense_apply_adjoint(c, obs)).trace();
      CHECK(std::abs(lhs - rhs) < 1e-10);
    }
  }
}

TEST_CASE("memory bound on closed-form families") {
  // Reset-to-zero circuit: both sides are exactly zero.
  Circuit reset_c;
  reset_c.num_qubits = 1;
  Layer layer;
  layer.resets.push_back(ResetSpec::zero_state(0));
  reset_c.layers.push_back(layer);
  const MemoryBoundReport both_zero = memory_bound_report(
      reset_c, DensityMatrix::basis_state("0"), DensityMatrix::basis_state("1"));
  CHECK(both_zero.method == "exact");
  CHECK(both_zero.lhs < 1e-12);
  CHECK(both_zero.rhs < 1e-12);
  CHECK(both_zero.holds);

  // Idle family: equality case, lhs = rhs = 2(1-gamma)^d to 1e-10.
  for (double gamma : {0.1, 0.4}) {
    for (std::size_t d : {1u, 3u}) {
      const Circuit idle = gen_idle(1, d, gamma);
      const MemoryBoundReport report =
          memory_bound_report(idle, DensityMatrix::basis_state("0"),
                              DensityMatrix::basis_state("1"));
      CHECK(report.method == "exact");
      const double expected = 2.0 * std::pow(1.0 - gamma, double(d));
      CHECK(report.lhs == doctest::Approx(expected).epsilon(1e-10));
      CHECK(report.rhs == doctest::Approx(expected).epsilon(1e-10));
      CHECK(report.holds);
    }
  }
}

TEST_CASE("memory bound monte carlo fallback engages past the site cap") {
  Rng rng(2024);
  Circuit c = gen_brickwork(3, 8, 0.15, 0.2,
                            ResetSpec::zero_state(0).bloch, rng);
  REQUIRE(c.noise_site_count() > 20);
  Rng state_rng(2025);
  const DensityMatrix rho = DensityMatrix::haar_mixture(3, 2, state_rng);
  const DensityMatrix sigma = DensityMatrix::haar_mixture(3, 2, state_rng);
  MemoryBoundOptions options;
  options.mc_trials = 4000;
  const MemoryBoundReport report = memory_bound_report(c, rho, sigma, options);
  CHECK(report.method == "mc");
  CHECK(report.holds);
}
