#include "cliffmem/adjoint.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <numeric>
#include <thread>

#include "cliffmem/stats.hpp"

namespace cliffmem {

std::vector<std::size_t> weight_batch_schedule(std::size_t n) {
  std::vector<std::size_t> schedule;
  if (n == 0) {
    return schedule;
  }
  std::size_t w = n;
  schedule.push_back(w);
  while (w > 1) {
    w = (w + 3) / 4;
    schedule.push_back(w);
  }
  return schedule;
}

std::pair<PauliString, PropagationTrace> propagate_pauli(const Circuit& c,
                                                         const ErrorConfig& b,
                                                         const PauliString& s) {
  if (s.num_qubits() != c.num_qubits) {
    throw std::invalid_argument("pauli/circuit size mismatch");
  }
  if (b.depth() != c.depth() || b.num_qubits() != c.num_qubits) {
    throw std::invalid_argument("error config does not match circuit dimensions");
  }
  const std::size_t d = c.depth();
  PauliString p = s;
  PropagationTrace trace;
  trace.initial_weight = p.weight();
  trace.min_weight = trace.initial_weight;
  trace.layer_weights.reserve(d);
  trace.subround_weights.reserve(3 * d);
  for (std::size_t step = 0; step < d; ++step) {
    const std::size_t t = d - 1 - step;  // forward layer being undone
    if (p.alive()) {
      for (std::size_t q = 0; q < c.num_qubits && p.alive(); ++q) {
        if (b.fired(t, q)) {
          depolarize_error_adjoint(p, q);
        }
      }
    }
    trace.subround_weights.push_back(p.weight());
    for (const ResetSpec& r : c.layers[t].resets) {
      reset_adjoint(p, r);
    }
    trace.subround_weights.push_back(p.weight());
    if (p.alive()) {
      for (const Gate& g : c.layers[t].gates) {
        apply_gate_conjugation(adjoint_gate(g), p);
      }
    }
    trace.subround_weights.push_back(p.weight());
    trace.layer_weights.push_back(p.weight());
    trace.min_weight = std::min(trace.min_weight, p.weight());
    if (!p.alive() && !trace.annihilated_at) {
      trace.annihilated_at = step;
    }
  }
  return {std::move(p), std::move(trace)};
}

SurvivorBasis SurvivorBasis::full(std::size_t n) {
  SurvivorBasis basis;
  basis.gens.reserve(2 * n);
  for (std::size_t q = 0; q < n; ++q) {
    const PauliString x = PauliString::x_generator(n, q);
    basis.gens.push_back({x, x});
  }
  for (std::size_t q = 0; q < n; ++q) {
    const PauliString z = PauliString::z_generator(n, q);
    basis.gens.push_back({z, z});
  }
  return basis;
}

namespace {

inline bool eval_functional(const PauliString& p, std::size_t q, bool use_x,
                            bool use_z) {
  return (use_x && p.x_bit(q)) != (use_z && p.z_bit(q));
}

}  // namespace

bool SurvivorBasis::functional_trivial(std::size_t qubit, bool use_x,
                                       bool use_z) const {
  for (const Generator& g : gens) {
    if (eval_functional(g.image, qubit, use_x, use_z)) {
      return false;
    }
  }
  return true;
}

void SurvivorBasis::restrict_to_kernel(std::size_t qubit, bool use_x, bool use_z) {
  std::size_t pivot = gens.size();
  for (std::size_t i = 0; i < gens.size(); ++i) {
    if (eval_functional(gens[i].image, qubit, use_x, use_z)) {
      pivot = i;
      break;
    }
  }
  if (pivot == gens.size()) {
    return;  // functional already vanishes on the span
  }
  for (std::size_t i = pivot + 1; i < gens.size(); ++i) {
    if (eval_functional(gens[i].image, qubit, use_x, use_z)) {
      gens[i].source.multiply_inplace(gens[pivot].source);
      gens[i].image.multiply_inplace(gens[pivot].image);
    }
  }
  gens.erase(gens.begin() + static_cast<std::ptrdiff_t>(pivot));
}

void SurvivorBasis::clear_image_qubit(std::size_t qubit) {
  for (Generator& g : gens) {
    g.image.clear_qubit(qubit);
  }
}

bool SurvivorBasis::any_non_identity_image() const {
  for (const Generator& g : gens) {
    if (!g.image.identity_masks()) {
      return true;
    }
  }
  return false;
}

bool SurvivorBasis::all_images_identity() const { return !any_non_identity_image(); }

CompiledCircuit::CompiledCircuit(const Circuit& c)
    : num_qubits_(c.num_qubits), gamma_(c.noise.gamma) {
  const auto violations = validate(c);
  if (!violations.empty()) {
    throw std::invalid_argument("cannot compile invalid circuit: " + violations.front());
  }
  layers_.reserve(c.depth());
  for (const Layer& layer : c.layers) {
    CompiledLayer cl;
    cl.gates.reserve(layer.gates.size());
    for (const Gate& g : layer.gates) {
      CompiledGate cg;
      cg.qubits = g.qubits;
      const std::size_t k = g.qubits.size();
      Gate local = adjoint_gate(g);
      local.qubits.resize(k);
      std::iota(local.qubits.begin(), local.qubits.end(), 0);
      if (k <= 4) {
        cg.lut.resize(std::size_t(1) << (2 * k));
        for (std::uint32_t m = 0; m < cg.lut.size(); ++m) {
          PauliString lp(k);
          for (std::size_t j = 0; j < k; ++j) {
            lp.set_pauli(j, (m >> (2 * j)) & 1, (m >> (2 * j + 1)) & 1);
          }
          apply_gate_conjugation(local, lp);
          std::uint32_t out = 0;
          for (std::size_t j = 0; j < k; ++j) {
            out |= (lp.x_bit(j) ? 1u : 0u) << (2 * j);
            out |= (lp.z_bit(j) ? 1u : 0u) << (2 * j + 1);
          }
          cg.lut[m] = out;
        }
      } else {
        cg.wide = *local.tableau;
      }
      cl.gates.push_back(std::move(cg));
    }
    cl.resets.reserve(layer.resets.size());
    for (const ResetSpec& r : layer.resets) {
      CompiledReset cr;
      cr.qubit = r.qubit;
      const bool dead_x = r.bloch[0].exactly_zero;
      const bool dead_y = r.bloch[1].exactly_zero;
      const bool dead_z = r.bloch[2].exactly_zero;
      const int zeros = int(dead_x) + int(dead_y) + int(dead_z);
      // Functionals on (x_q, z_q) image bits whose kernels are {I, X},
      // {I, Y}, {I, Z} respectively: z, x^z, x.
      constexpr std::pair<bool, bool> kKeepX{false, true};
      constexpr std::pair<bool, bool> kKeepY{true, true};
      constexpr std::pair<bool, bool> kKeepZ{true, false};
      switch (zeros) {
        case 3:
          cr.action = ResetAction::kKillNonIdentity;
          break;
        case 2:
          cr.action = ResetAction::kAxis;
          cr.func[0] = !dead_x ? kKeepX : (!dead_y ? kKeepY : kKeepZ);
          break;
        case 1:
          cr.action = ResetAction::kPlanar;
          if (dead_x) {  // alive {I, Y, Z}
            cr.func[0] = kKeepY;
            cr.func[1] = kKeepZ;
          } else if (dead_y) {  // alive {I, X, Z}
            cr.func[0] = kKeepX;
            cr.func[1] = kKeepZ;
          } else {  // alive {I, X, Y}
            cr.func[0] = kKeepX;
            cr.func[1] = kKeepY;
          }
          break;
        default:
          cr.action = ResetAction::kFree;
          break;
      }
      cl.resets.push_back(cr);
    }
    layers_.push_back(std::move(cl));
  }
}

namespace {

void apply_compiled_gate(const CompiledCircuit::CompiledGate& cg, PauliString& p) {
  const std::size_t k = cg.qubits.size();
  if (cg.wide) {
    PauliString local(k);
    for (std::size_t j = 0; j < k; ++j) {
      local.set_pauli(j, p.x_bit(cg.qubits[j]), p.z_bit(cg.qubits[j]));
    }
    if (local.identity_masks()) {
      return;
    }
    const PauliString mapped = cg.wide->conjugate(local);
    for (std::size_t j = 0; j < k; ++j) {
      p.set_pauli(cg.qubits[j], mapped.x_bit(j), mapped.z_bit(j));
    }
    return;
  }
  std::uint32_t m = 0;
  for (std::size_t j = 0; j < k; ++j) {
    m |= (p.x_bit(cg.qubits[j]) ? 1u : 0u) << (2 * j);
    m |= (p.z_bit(cg.qubits[j]) ? 1u : 0u) << (2 * j + 1);
  }
  if (m == 0) {
    return;  // identity on the gate's support; conjugation is a no-op
  }
  const std::uint32_t out = cg.lut[m];
  for (std::size_t j = 0; j < k; ++j) {
    p.set_pauli(cg.qubits[j], (out >> (2 * j)) & 1, (out >> (2 * j + 1)) & 1);
  }
}

void prune_bases(std::vector<SurvivorBasis>& bases, bool prune_trivial) {
  std::erase_if(bases, [prune_trivial](const SurvivorBasis& basis) {
    return basis.rank() == 0 || (prune_trivial && basis.all_images_identity());
  });
}

}  // namespace

std::vector<SurvivorBasis> run_survivor_bases(const CompiledCircuit& cc,
                                              const ErrorConfig& b,
                                              const EngineLimits& limits) {
  if (b.depth() != cc.depth() || b.num_qubits() != cc.num_qubits()) {
    throw std::invalid_argument("error config does not match circuit dimensions");
  }
  const std::size_t n = cc.num_qubits();
  const std::size_t d = cc.depth();
  std::vector<SurvivorBasis> bases;
  bases.push_back(SurvivorBasis::full(n));
  using ResetAction = CompiledCircuit::ResetAction;

  for (std::size_t step = 0; step < d && !bases.empty(); ++step) {
    const std::size_t t = d - 1 - step;
    const CompiledCircuit::CompiledLayer& layer = cc.layers()[t];

    // Noise adjoints: a fired site keeps only images with identity there.
    for (std::size_t q = 0; q < n; ++q) {
      if (!b.fired(t, q)) {
        continue;
      }
      for (SurvivorBasis& basis : bases) {
        basis.restrict_to_kernel(q, true, false);
        basis.restrict_to_kernel(q, false, true);
      }
    }
    prune_bases(bases, limits.prune_trivial_bases);

    // Reset adjoints, in stored (disjoint-qubit) order.
    for (const CompiledCircuit::CompiledReset& cr : layer.resets) {
      const std::size_t count = bases.size();
      for (std::size_t i = 0; i < count; ++i) {
        SurvivorBasis& basis = bases[i];
        switch (cr.action) {
          case ResetAction::kKillNonIdentity:
            basis.restrict_to_kernel(cr.qubit, true, false);
            basis.restrict_to_kernel(cr.qubit, false, true);
            break;
          case ResetAction::kAxis:
            basis.restrict_to_kernel(cr.qubit, cr.func[0].first, cr.func[0].second);
            basis.clear_image_qubit(cr.qubit);
            break;
          case ResetAction::kFree:
            basis.clear_image_qubit(cr.qubit);
            break;
          case ResetAction::kPlanar: {
            const bool t0 = basis.functional_trivial(cr.qubit, cr.func[0].first,
                                                     cr.func[0].second);
            const bool t1 = basis.functional_trivial(cr.qubit, cr.func[1].first,
                                                     cr.func[1].second);
            if (t0 || t1) {
              // One kernel is the whole span: the union is the whole span.
              basis.clear_image_qubit(cr.qubit);
              break;
            }
            if (basis.functional_trivial(cr.qubit,
                                         cr.func[0].first != cr.func[1].first,
                                         cr.func[0].second != cr.func[1].second)) {
              // The two functionals agree on the span: one restriction.
              basis.restrict_to_kernel(cr.qubit, cr.func[0].first, cr.func[0].second);
              basis.clear_image_qubit(cr.qubit);
              break;
            }
            // Genuine union of two distinct kernels: branch the basis.
            if (bases.size() >= limits.max_bases) {
              throw CapExceeded("survivor basis count cap exceeded");
            }
            SurvivorBasis branch = basis;  // copy before restricting
            bases[i].restrict_to_kernel(cr.qubit, cr.func[0].first, cr.func[0].second);
            bases[i].clear_image_qubit(cr.qubit);
            branch.restrict_to_kernel(cr.qubit, cr.func[1].first, cr.func[1].second);
            branch.clear_image_qubit(cr.qubit);
            bases.push_back(std::move(branch));
            break;
          }
        }
      }
      prune_bases(bases, limits.prune_trivial_bases);
    }

    // Gate adjoints: disjoint supports, mapped image-wise.
    for (const CompiledCircuit::CompiledGate& cg : layer.gates) {
      for (SurvivorBasis& basis : bases) {
        for (SurvivorBasis::Generator& gen : basis.gens) {
          apply_compiled_gate(cg, gen.image);
        }
      }
    }
  }
  return bases;
}

bool any_survivor_fast(const CompiledCircuit& cc, const ErrorConfig& b,
                       const EngineLimits& limits) {
  const auto bases = run_survivor_bases(cc, b, limits);
  for (const SurvivorBasis& basis : bases) {
    if (basis.any_non_identity_image()) {
      return true;
    }
  }
  return false;
}

bool any_survivor_fast(const Circuit& c, const ErrorConfig& b,
                       const EngineLimits& limits) {
  return any_survivor_fast(CompiledCircuit(c), b, limits);
}

bool any_survivor_bruteforce(const Circuit& c, const ErrorConfig& b,
                             std::size_t max_qubits) {
  const std::size_t n = c.num_qubits;
  if (n > max_qubits) {
    throw CapExceeded("brute-force survivor search capped at " +
                      std::to_string(max_qubits) + " qubits");
  }
  const std::uint64_t total = std::uint64_t(1) << (2 * n);
  for (std::uint64_t idx = 1; idx < total; ++idx) {
    PauliString s(n);
    for (std::size_t q = 0; q < n; ++q) {
      s.set_pauli(q, (idx >> (2 * q)) & 1, (idx >> (2 * q + 1)) & 1);
    }
    auto [final_pauli, trace] = propagate_pauli(c, b, s);
    if (final_pauli.alive() && !final_pauli.identity_masks()) {
      return true;
    }
  }
  return false;
}

SurvivalEstimate survival_probability(const Circuit& c, std::uint64_t trials,
                                      std::uint64_t master_seed, double confidence,
                                      unsigned num_threads,
                                      const EngineLimits& limits) {
  if (trials < 1) {
    throw std::invalid_argument("survival_probability needs at least one trial");
  }
  const CompiledCircuit cc(c);
  if (num_threads == 0) {
    num_threads = 1;
  }
  num_threads = static_cast<unsigned>(
      std::min<std::uint64_t>(num_threads, trials));

  auto count_range = [&](std::uint64_t begin, std::uint64_t end) {
    std::uint64_t survivors = 0;
    for (std::uint64_t i = begin; i < end; ++i) {
      Rng rng = Rng::derive(master_seed, i);
      const ErrorConfig b = sample_error_config(c, rng);
      if (any_survivor_fast(cc, b, limits)) {
        ++survivors;
      }
    }
    return survivors;
  };

  std::uint64_t survivors = 0;
  if (num_threads == 1) {
    survivors = count_range(0, trials);
  } else {
    std::vector<std::uint64_t> partial(num_threads, 0);
    std::vector<std::exception_ptr> errors(num_threads);
    std::vector<std::thread> workers;
    workers.reserve(num_threads);
    const std::uint64_t chunk = (trials + num_threads - 1) / num_threads;
    for (unsigned w = 0; w < num_threads; ++w) {
      workers.emplace_back([&, w] {
        try {
          const std::uint64_t begin = std::min<std::uint64_t>(w * chunk, trials);
          const std::uint64_t end = std::min<std::uint64_t>(begin + chunk, trials);
          partial[w] = count_range(begin, end);
        } catch (...) {
          errors[w] = std::current_exception();
        }
      });
    }
    for (std::thread& worker : workers) {
      worker.join();
    }
    for (const std::exception_ptr& err : errors) {
      if (err) {
        std::rethrow_exception(err);
      }
    }
    for (std::uint64_t p : partial) {
      survivors += p;
    }
  }

  SurvivalEstimate est;
  est.trials = trials;
  est.survivors = survivors;
  est.p_hat = static_cast<double>(survivors) / static_cast<double>(trials);
  const auto [lo, hi] = wilson_interval(survivors, trials, confidence);
  est.ci_lo = lo;
  est.ci_hi = hi;
  est.confidence = confidence;
  est.master_seed = master_seed;
  return est;
}

double survival_probability_exact(const Circuit& c, std::size_t max_sites) {
  const std::size_t sites = c.noise_site_count();
  if (sites > max_sites) {
    throw CapExceeded("exact survival enumeration capped at " +
                      std::to_string(max_sites) + " noise sites");
  }
  const CompiledCircuit cc(c);
  const double gamma = c.noise.gamma;
  double total = 0.0;
  const std::uint64_t configs = std::uint64_t(1) << sites;
  for (std::uint64_t idx = 0; idx < configs; ++idx) {
    const int fired = std::popcount(idx);
    const double prob = std::pow(gamma, fired) *
                        std::pow(1.0 - gamma, static_cast<double>(sites - fired));
    if (prob == 0.0) {
      continue;
    }
    const ErrorConfig b = ErrorConfig::from_index(c.depth(), c.num_qubits, idx);
    if (any_survivor_fast(cc, b)) {
      total += prob;
    }
  }
  return total;
}

}  // namespace cliffmem
