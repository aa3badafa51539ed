#include "cliffmem/checks.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "cliffmem/adjoint.hpp"
#include "cliffmem/dense.hpp"
#include "cliffmem/tableau.hpp"

namespace cliffmem {

std::vector<std::array<BlochComponent, 3>> reset_state_pool() {
  return {
      ResetSpec::zero_state(0).bloch,
      ResetSpec::plus_state(0).bloch,
      ResetSpec::plus_i_state(0).bloch,
      ResetSpec::magic_state(0).bloch,        // planar: dead Y axis
      ResetSpec::maximally_mixed(0).bloch,
      {BlochComponent(0.3), BlochComponent(-0.4), BlochComponent(0.5)},  // generic
      {BlochComponent(0.6), BlochComponent(0.8), BlochComponent(0.0)},   // planar: dead Z
      {BlochComponent(0.0), BlochComponent(0.6), BlochComponent(0.8)},   // planar: dead X
  };
}

Circuit random_circuit(Rng& rng, const RandomCircuitOptions& opts) {
  const std::size_t n =
      opts.min_qubits + rng.uniform_below(opts.max_qubits - opts.min_qubits + 1);
  const std::size_t depth =
      opts.min_depth + rng.uniform_below(opts.max_depth - opts.min_depth + 1);
  Circuit c;
  c.num_qubits = n;
  c.noise.gamma = opts.gammas[rng.uniform_below(opts.gammas.size())];
  const auto states = reset_state_pool();

  static constexpr GateKind kOneQubit[] = {GateKind::kH, GateKind::kS,
                                           GateKind::kSdg, GateKind::kX,
                                           GateKind::kY, GateKind::kZ};
  static constexpr GateKind kTwoQubit[] = {GateKind::kCnot, GateKind::kCz,
                                           GateKind::kSwap};

  for (std::size_t t = 0; t < depth; ++t) {
    Layer layer;
    std::vector<std::uint32_t> free;
    for (std::size_t q = 0; q < n; ++q) {
      free.push_back(static_cast<std::uint32_t>(q));
    }
    while (!free.empty()) {
      const std::uint32_t q = free.front();
      free.erase(free.begin());
      const double action = rng.uniform();
      if (action < 0.3) {
        continue;  // idle qubit
      }
      if (action < 0.65 || free.empty()) {
        Gate g;
        g.kind = kOneQubit[rng.uniform_below(std::size(kOneQubit))];
        g.qubits = {q};
        layer.gates.push_back(std::move(g));
        continue;
      }
      const std::size_t pick = rng.uniform_below(free.size());
      const std::uint32_t partner = free[pick];
      free.erase(free.begin() + static_cast<std::ptrdiff_t>(pick));
      Gate g;
      const bool flip = rng.bernoulli(0.5);
      g.qubits = flip ? std::vector<std::uint32_t>{partner, q}
                      : std::vector<std::uint32_t>{q, partner};
      if (opts.allow_tableau_gates && rng.bernoulli(0.4)) {
        g.kind = GateKind::kTableau;
        g.tableau = random_two_qubit_clifford(rng);
      } else {
        g.kind = kTwoQubit[rng.uniform_below(std::size(kTwoQubit))];
      }
      layer.gates.push_back(std::move(g));
    }
    for (std::size_t q = 0; q < n; ++q) {
      if (rng.bernoulli(opts.reset_probability)) {
        ResetSpec r;
        r.qubit = static_cast<std::uint32_t>(q);
        r.bloch = states[rng.uniform_below(states.size())];
        layer.resets.push_back(r);
      }
    }
    c.layers.push_back(std::move(layer));
  }
  return c;
}

namespace {

// Forward Heisenberg walk of a Pauli through a reset-free circuit: gates
// conjugate the string, then the layer's noise round kills it iff a fired
// site lands on its support. Returns survival for the given configuration.
bool forward_survives(const Circuit& c, const ErrorConfig& b, PauliString s) {
  for (std::size_t j = 0; j < c.depth(); ++j) {
    for (const Gate& g : c.layers[j].gates) {
      apply_gate_conjugation(g, s);
    }
    for (std::size_t q = 0; q < c.num_qubits; ++q) {
      if (b.fired(j, q) && s.non_identity_at(q)) {
        return false;
      }
    }
  }
  return true;
}

// Minimum weight the string exposes to any noise round of the circuit.
std::size_t forward_min_weight(const Circuit& c, PauliString s) {
  std::size_t min_weight = s.num_qubits() + 1;
  for (const Layer& layer : c.layers) {
    for (const Gate& g : layer.gates) {
      apply_gate_conjugation(g, s);
    }
    min_weight = std::min(min_weight, s.weight());
  }
  return min_weight;
}

// Brickwork of SWAPs: every layer swaps all adjacent pairs at alternating
// offsets, so any Pauli's weight is exactly preserved while its support
// wanders. n = 2w qubits carry a weight-w string losslessly.
Circuit gen_swap_ladder(std::size_t n, std::size_t depth, double gamma) {
  Circuit c;
  c.num_qubits = n;
  c.noise.gamma = gamma;
  for (std::size_t t = 0; t < depth; ++t) {
    Layer layer;
    for (std::size_t q = t % 2; q + 1 < n; q += 2) {
      layer.gates.push_back(Gate{GateKind::kSwap,
                                 {std::uint32_t(q), std::uint32_t(q + 1)},
                                 std::nullopt});
    }
    c.layers.push_back(std::move(layer));
  }
  return c;
}

// n = 2 circuit whose layers repeat CNOT(0,1). X_0 alternates between
// weight 1 and weight 2, so its survival falls strictly below the
// minimum-weight bound.
Circuit gen_cnot_pump(std::size_t depth, double gamma) {
  Circuit c;
  c.num_qubits = 2;
  c.noise.gamma = gamma;
  for (std::size_t t = 0; t < depth; ++t) {
    Layer layer;
    layer.gates.push_back(Gate{GateKind::kCnot, {0, 1}, std::nullopt});
    c.layers.push_back(std::move(layer));
  }
  return c;
}

std::string format_cell(std::string_view family, std::size_t w, std::size_t d,
                        double gamma) {
  std::ostringstream out;
  out << family << " w=" << w << " d=" << d << " gamma=" << gamma;
  return out.str();
}

}  // namespace

SuiteReport check_oracle_equivalence(std::size_t instances, std::uint64_t seed) {
  SuiteReport report;
  Rng rng(seed);
  RandomCircuitOptions opts;  // defaults: n in 1..6, d in 0..6, mixed resets
  for (std::size_t i = 0; i < instances; ++i) {
    const Circuit c = random_circuit(rng, opts);
    Rng brng = Rng::derive(seed, i);
    const ErrorConfig b = sample_error_config(c, brng);
    const bool fast = any_survivor_fast(c, b);
    const bool brute = any_survivor_bruteforce(c, b);
    ++report.instances;
    if (fast != brute) {
      std::ostringstream msg;
      msg << "instance " << i << " (n=" << c.num_qubits << ", d=" << c.depth()
          << ", gamma=" << c.noise.gamma << "): fast=" << fast
          << " brute=" << brute;
      report.failures.push_back(msg.str());
    }
  }
  return report;
}

SuiteReport check_memory_bound(std::size_t instances, std::uint64_t seed) {
  SuiteReport report;

  // Equality family: single noisy idle qubit distinguishing |0> from |1>.
  // Both sides have the closed form 2(1-gamma)^d.
  for (double gamma : {0.1, 0.3, 0.6}) {
    for (std::size_t d : {1u, 2u, 4u}) {
      const Circuit idle = gen_idle(1, d, gamma);
      const MemoryBoundReport verdict =
          memory_bound_report(idle, DensityMatrix::basis_state("0"),
                              DensityMatrix::basis_state("1"));
      ++report.instances;
      const double expected = 2.0 * std::pow(1.0 - gamma, double(d));
      if (verdict.method != "exact" ||
          std::abs(verdict.lhs - expected) > 1e-10 ||
          std::abs(verdict.rhs - expected) > 1e-10 || !verdict.holds) {
        std::ostringstream msg;
        msg << "idle equality d=" << d << " gamma=" << gamma
            << ": lhs=" << verdict.lhs << " rhs=" << verdict.rhs
            << " expected=" << expected;
        report.failures.push_back(msg.str());
      }
    }
  }

  // Random instances with arbitrary (non-stabilizer) input states.
  Rng rng(seed);
  RandomCircuitOptions opts;
  opts.max_qubits = 4;
  opts.max_depth = 4;
  for (std::size_t i = 0; i < instances; ++i) {
    const Circuit c = random_circuit(rng, opts);
    Rng state_rng = Rng::derive(seed, 2 * i + 1);
    const DensityMatrix rho =
        DensityMatrix::haar_mixture(c.num_qubits, 2, state_rng);
    const DensityMatrix sigma =
        DensityMatrix::haar_mixture(c.num_qubits, 2, state_rng);
    const MemoryBoundReport verdict = memory_bound_report(c, rho, sigma);
    ++report.instances;
    if (!verdict.holds) {
      std::ostringstream msg;
      msg << "instance " << i << " (n=" << c.num_qubits << ", d=" << c.depth()
          << ", gamma=" << c.noise.gamma << ", " << verdict.method
          << "): lhs=" << verdict.lhs << " > rhs=" << verdict.rhs;
      report.failures.push_back(msg.str());
    }
  }
  return report;
}

SuiteReport check_weight_decay(std::size_t samples_per_cell, std::uint64_t seed) {
  SuiteReport report;
  std::size_t cell_index = 0;

  auto run_cell = [&](const Circuit& c, const PauliString& s, std::size_t w,
                      std::size_t d, double gamma, std::string_view family,
                      bool expect_equality, bool expect_strictly_below) {
    ++report.instances;
    // The family constructions promise a minimum propagated weight; verify
    // it instead of trusting the constructor.
    const std::size_t observed_w = forward_min_weight(c, s);
    if (observed_w != w) {
      report.failures.push_back(format_cell(family, w, d, gamma) +
                                ": constructed min weight " +
                                std::to_string(observed_w) + ", wanted " +
                                std::to_string(w));
      return;
    }
    Rng rng = Rng::derive(seed, cell_index++);
    std::uint64_t survivors = 0;
    for (std::size_t trial = 0; trial < samples_per_cell; ++trial) {
      const ErrorConfig b = sample_error_config(c, rng);
      if (forward_survives(c, b, s)) {
        ++survivors;
      }
    }
    const double p_hat = double(survivors) / double(samples_per_cell);
    const double bound = std::pow(1.0 - gamma, double(w) * double(d));
    const double sigma =
        std::sqrt(bound * (1.0 - bound) / double(samples_per_cell));
    if (p_hat > bound + 3.0 * sigma) {
      std::ostringstream msg;
      msg << format_cell(family, w, d, gamma) << ": p_hat=" << p_hat
          << " exceeds bound " << bound << " + 3 sigma (" << 3.0 * sigma << ")";
      report.failures.push_back(msg.str());
    }
    if (expect_equality && std::abs(p_hat - bound) > 3.0 * sigma) {
      std::ostringstream msg;
      msg << format_cell(family, w, d, gamma) << ": p_hat=" << p_hat
          << " misses the equality value " << bound << " by more than 3 sigma";
      report.failures.push_back(msg.str());
    }
    if (expect_strictly_below && p_hat > bound - 3.0 * sigma) {
      std::ostringstream msg;
      msg << format_cell(family, w, d, gamma) << ": p_hat=" << p_hat
          << " is not strictly below the weight-" << w << " bound " << bound;
      report.failures.push_back(msg.str());
    }
  };

  for (double gamma : {0.1, 0.3}) {
    for (std::size_t d : {1u, 5u, 10u}) {
      for (std::size_t w : {1u, 2u, 3u}) {
        // Idle chain: the string Z^w never moves, weight exactly w at every
        // round, so survival equals the bound.
        {
          const Circuit c = gen_idle(w, d, gamma);
          PauliString s(w);
          for (std::size_t q = 0; q < w; ++q) {
            s.set_pauli(q, false, true);
          }
          run_cell(c, s, w, d, gamma, "idle", true, false);
        }
        // SWAP ladder: same weight, wandering support.
        {
          const Circuit c = gen_swap_ladder(2 * w, d, gamma);
          PauliString s(2 * w);
          for (std::size_t q = 0; q < w; ++q) {
            s.set_pauli(2 * q, false, true);
          }
          run_cell(c, s, w, d, gamma, "swap-ladder", true, false);
        }
      }
      // CNOT pump: min weight 1 but every other round exposes weight 2, so
      // survival sits strictly below the w = 1 bound once d >= 2.
      if (d >= 2) {
        const Circuit c = gen_cnot_pump(d, gamma);
        run_cell(c, PauliString::from_label("XI"), 1, d, gamma, "cnot-pump",
                 false, true);
      }
    }
  }
  return report;
}

SuiteReport check_adjoint_consistency(std::uint64_t seed) {
  SuiteReport report;
  constexpr double kDeviationTol = 1e-12;

  auto record = [&](double deviation, const std::string& what) {
    ++report.instances;
    if (!(deviation < kDeviationTol)) {
      std::ostringstream msg;
      msg << what << ": transfer-matrix deviation " << deviation;
      report.failures.push_back(msg.str());
    }
  };

  for (double gamma : {0.0, 0.1, 0.5, 1.0}) {
    record(adjoint_deviation_depolarize(gamma),
           "depolarize gamma=" + std::to_string(gamma));
  }
  const std::pair<ResetSpec, const char*> resets[] = {
      {ResetSpec::zero_state(0), "reset |0>"},
      {ResetSpec::plus_state(0), "reset |+>"},
      {ResetSpec::magic_state(0), "reset magic"},
      {ResetSpec::maximally_mixed(0), "reset maximally mixed"},
  };
  for (const auto& [reset, name] : resets) {
    record(adjoint_deviation_reset(reset), name);
  }
  for (GateKind kind : {GateKind::kH, GateKind::kS, GateKind::kSdg,
                        GateKind::kX, GateKind::kY, GateKind::kZ,
                        GateKind::kCnot, GateKind::kCz, GateKind::kSwap}) {
    std::vector<std::uint32_t> qubits(gate_arity(kind));
    for (std::uint32_t q = 0; q < qubits.size(); ++q) {
      qubits[q] = q;
    }
    record(adjoint_deviation_gate(Gate{kind, qubits, std::nullopt}),
           std::string("gate ") + std::string(gate_kind_name(kind)));
  }
  Rng trng(seed);
  for (int i = 0; i < 3; ++i) {
    record(adjoint_deviation_gate(
               Gate{GateKind::kTableau, {0, 1}, random_two_qubit_clifford(trng)}),
           "random tableau gate " + std::to_string(i));
  }

  // Sparse propagation against the dense adjoint on whole circuits.
  Rng rng = Rng::derive(seed, 1);
  RandomCircuitOptions opts;
  opts.max_qubits = 3;
  opts.max_depth = 3;
  for (int instance = 0; instance < 5; ++instance) {
    const Circuit c = random_circuit(rng, opts);
    Rng brng = Rng::derive(seed, 100 + std::uint64_t(instance));
    const ErrorConfig b = sample_error_config(c, brng);
    const std::size_t n = c.num_qubits;
    double worst = 0.0;
    for (std::uint64_t idx = 1; idx < (std::uint64_t(1) << (2 * n)); ++idx) {
      PauliString s(n);
      for (std::size_t q = 0; q < n; ++q) {
        s.set_pauli(q, (idx >> (2 * q)) & 1, (idx >> (2 * q + 1)) & 1);
      }
      const auto [ref, trace] = propagate_pauli(c, b, s);
      const ComplexMatrix dense = dense_apply_adjoint(c, b, pauli_matrix(s));
      if (!ref.alive()) {
        worst = std::max(worst, dense.cwiseAbs().maxCoeff());
        continue;
      }
      const ComplexMatrix target = pauli_matrix(ref);
      const std::complex<double> proj =
          (target * dense).trace() / double(std::uint64_t(1) << n);
      worst = std::max(worst, (dense - proj * target).cwiseAbs().maxCoeff());
      worst = std::max(worst, std::abs(std::abs(proj) - std::abs(ref.coeff())));
    }
    ++report.instances;
    if (worst > 1e-10) {
      std::ostringstream msg;
      msg << "sparse/dense propagation mismatch on instance " << instance
          << " (n=" << n << ", d=" << c.depth() << "): max deviation " << worst;
      report.failures.push_back(msg.str());
    }
  }
  return report;
}

SuiteReport check_noise_mixture(std::size_t instances, std::uint64_t seed) {
  SuiteReport report;
  Rng rng(seed);
  RandomCircuitOptions opts;
  opts.max_qubits = 3;
  opts.max_depth = 4;  // at most 12 noise sites, enumerable
  for (std::size_t i = 0; i < instances; ++i) {
    const Circuit c = random_circuit(rng, opts);
    const std::size_t sites = c.noise_site_count();
    Rng state_rng = Rng::derive(seed, i);
    const DensityMatrix rho =
        DensityMatrix::haar_mixture(c.num_qubits, 2, state_rng);
    const std::uint64_t dim = std::uint64_t(1) << c.num_qubits;
    ComplexMatrix mean = ComplexMatrix::Zero(dim, dim);
    for (std::uint64_t idx = 0; idx < (std::uint64_t(1) << sites); ++idx) {
      const ErrorConfig b =
          ErrorConfig::from_index(c.depth(), c.num_qubits, idx);
      const double prob =
          std::pow(c.noise.gamma, double(b.fired_count())) *
          std::pow(1.0 - c.noise.gamma, double(sites - b.fired_count()));
      if (prob == 0.0) {
        continue;
      }
      mean += prob * evolve_config(c, b, rho).entries();
    }
    const double deviation =
        (mean - evolve(c, rho).entries()).cwiseAbs().maxCoeff();
    ++report.instances;
    if (deviation > 1e-10) {
      std::ostringstream msg;
      msg << "instance " << i << " (n=" << c.num_qubits << ", d=" << c.depth()
          << ", gamma=" << c.noise.gamma << "): entrywise deviation "
          << deviation;
      report.failures.push_back(msg.str());
    }
  }
  return report;
}

}  // namespace cliffmem
