#include "cliffmem/dense.hpp"

#include <Eigen/Eigenvalues>

#include <cmath>
#include <map>
#include <numbers>
#include <stdexcept>
#include <utility>

namespace cliffmem {
namespace {

using Complex = std::complex<double>;

constexpr Complex kI{0.0, 1.0};

ComplexMatrix mat2(Complex a, Complex b, Complex c, Complex d) {
  ComplexMatrix m(2, 2);
  m << a, b, c, d;
  return m;
}

const ComplexMatrix& pauli_i() {
  static const ComplexMatrix m = mat2(1, 0, 0, 1);
  return m;
}
const ComplexMatrix& pauli_x() {
  static const ComplexMatrix m = mat2(0, 1, 1, 0);
  return m;
}
const ComplexMatrix& pauli_y() {
  static const ComplexMatrix m = mat2(0, -kI, kI, 0);
  return m;
}
const ComplexMatrix& pauli_z() {
  static const ComplexMatrix m = mat2(1, 0, 0, -1);
  return m;
}

// 2x2 density matrix of the reset target (I + aX + bY + cZ)/2.
ComplexMatrix reset_state_matrix(const ResetSpec& reset) {
  const double a = reset.bloch[0].value;
  const double b = reset.bloch[1].value;
  const double c = reset.bloch[2].value;
  return mat2({(1 + c) / 2, 0}, {a / 2, -b / 2}, {a / 2, b / 2}, {(1 - c) / 2, 0});
}

// Standard Kronecker product; the left factor lands on the high index bits,
// so folding with the higher qubit on the left keeps bit q = qubit q.
ComplexMatrix kron(const ComplexMatrix& a, const ComplexMatrix& b) {
  ComplexMatrix out(a.rows() * b.rows(), a.cols() * b.cols());
  for (Eigen::Index i = 0; i < a.rows(); ++i) {
    for (Eigen::Index j = 0; j < a.cols(); ++j) {
      out.block(i * b.rows(), j * b.cols(), b.rows(), b.cols()) = a(i, j) * b;
    }
  }
  return out;
}

// Embeds a local unitary acting on the listed qubits (local index bit t is
// the value of qubits[t]) into the full 2^n space.
ComplexMatrix embed(const ComplexMatrix& local,
                    const std::vector<std::uint32_t>& qubits, std::size_t n) {
  const std::size_t k = qubits.size();
  const std::uint64_t dim = std::uint64_t(1) << n;
  const std::uint64_t local_dim = std::uint64_t(1) << k;
  std::uint64_t site_mask = 0;
  for (std::uint32_t q : qubits) {
    site_mask |= std::uint64_t(1) << q;
  }
  auto scatter = [&](std::uint64_t local_idx, std::uint64_t rest) {
    std::uint64_t idx = rest;
    for (std::size_t t = 0; t < k; ++t) {
      if ((local_idx >> t) & 1) {
        idx |= std::uint64_t(1) << qubits[t];
      }
    }
    return idx;
  };
  ComplexMatrix out = ComplexMatrix::Zero(dim, dim);
  for (std::uint64_t col = 0; col < dim; ++col) {
    std::uint64_t local_col = 0;
    for (std::size_t t = 0; t < k; ++t) {
      if ((col >> qubits[t]) & 1) {
        local_col |= std::uint64_t(1) << t;
      }
    }
    const std::uint64_t rest = col & ~site_mask;
    for (std::uint64_t local_row = 0; local_row < local_dim; ++local_row) {
      const Complex v = local(local_row, local_col);
      if (v != Complex{}) {
        out(scatter(local_row, rest), col) = v;
      }
    }
  }
  return out;
}

// Local matrix of a named gate with local index bit t = qubits[t].
ComplexMatrix named_gate_local(GateKind kind) {
  const double s = 1.0 / std::numbers::sqrt2;
  switch (kind) {
    case GateKind::kH:
      return mat2(s, s, s, -s);
    case GateKind::kS:
      return mat2(1, 0, 0, kI);
    case GateKind::kSdg:
      return mat2(1, 0, 0, -kI);
    case GateKind::kX:
      return pauli_x();
    case GateKind::kY:
      return pauli_y();
    case GateKind::kZ:
      return pauli_z();
    case GateKind::kCnot: {
      // Control is local bit 0, target local bit 1.
      ComplexMatrix m = ComplexMatrix::Zero(4, 4);
      m(0, 0) = m(2, 2) = 1;
      m(3, 1) = m(1, 3) = 1;
      return m;
    }
    case GateKind::kCz: {
      ComplexMatrix m = ComplexMatrix::Identity(4, 4);
      m(3, 3) = -1;
      return m;
    }
    case GateKind::kSwap: {
      ComplexMatrix m = ComplexMatrix::Zero(4, 4);
      m(0, 0) = m(3, 3) = 1;
      m(2, 1) = m(1, 2) = 1;
      return m;
    }
    case GateKind::kTableau:
      break;
  }
  throw std::logic_error("named_gate_local called with kTableau");
}

// Packs the mask content of a local tableau into an integer key (k <= 2:
// at most 16 bits). Signs are outside the phaseless state space.
std::uint32_t tableau_key(const CliffordTableau& t) {
  const std::size_t k = t.num_qubits;
  std::uint32_t key = 0;
  std::size_t pos = 0;
  auto pack_row = [&](const PauliString& row) {
    for (std::size_t q = 0; q < k; ++q) {
      key |= std::uint32_t(row.x_bit(q)) << pos++;
      key |= std::uint32_t(row.z_bit(q)) << pos++;
    }
  };
  for (std::size_t i = 0; i < k; ++i) {
    pack_row(t.image_x[i]);
  }
  for (std::size_t i = 0; i < k; ++i) {
    pack_row(t.image_z[i]);
  }
  return key;
}

struct SynthesisStep {
  GateKind kind;
  std::vector<std::uint32_t> qubits;  // local qubit ids
};

// Breadth-first table from every symplectic action on k qubits to a word of
// named gates realizing it (up to a Pauli frame, which nothing phaseless
// can observe). 6 elements for k = 1, 720 for k = 2.
const std::map<std::uint32_t, std::vector<SynthesisStep>>& synthesis_table(
    std::size_t k) {
  static const auto build = [](std::size_t kk) {
    std::vector<SynthesisStep> generators;
    for (std::uint32_t q = 0; q < kk; ++q) {
      generators.push_back({GateKind::kH, {q}});
      generators.push_back({GateKind::kS, {q}});
    }
    if (kk == 2) {
      generators.push_back({GateKind::kCnot, {0, 1}});
      generators.push_back({GateKind::kCnot, {1, 0}});
    }
    std::map<std::uint32_t, std::vector<SynthesisStep>> table;
    std::vector<CliffordTableau> frontier{CliffordTableau::identity(kk)};
    table[tableau_key(frontier.front())] = {};
    while (!frontier.empty()) {
      std::vector<CliffordTableau> next;
      for (const CliffordTableau& cur : frontier) {
        const auto& word = table.at(tableau_key(cur));
        for (const SynthesisStep& step : generators) {
          CliffordTableau t = cur;
          const Gate gate{step.kind, step.qubits, std::nullopt};
          for (PauliString& row : t.image_x) {
            apply_gate_conjugation(gate, row);
          }
          for (PauliString& row : t.image_z) {
            apply_gate_conjugation(gate, row);
          }
          const std::uint32_t key = tableau_key(t);
          if (!table.contains(key)) {
            auto extended = word;
            extended.push_back(step);
            table[key] = std::move(extended);
            next.push_back(std::move(t));
          }
        }
      }
      frontier = std::move(next);
    }
    return table;
  };
  static const std::map<std::uint32_t, std::vector<SynthesisStep>> table1 = build(1);
  static const std::map<std::uint32_t, std::vector<SynthesisStep>> table2 = build(2);
  return k == 1 ? table1 : table2;
}

// Local unitary of a raw-tableau gate via the synthesis table.
ComplexMatrix tableau_local_unitary(const CliffordTableau& t) {
  const std::size_t k = t.num_qubits;
  if (k < 1 || k > 2) {
    throw CapExceeded("dense tableau-gate synthesis capped at 2 qubits");
  }
  const auto& table = synthesis_table(k);
  const auto it = table.find(tableau_key(t));
  if (it == table.end()) {
    // tableau_from_rows and validate() both enforce symplecticity, so every
    // reachable key is in the table.
    throw std::logic_error("tableau not found in synthesis table");
  }
  const std::uint64_t dim = std::uint64_t(1) << k;
  ComplexMatrix u = ComplexMatrix::Identity(dim, dim);
  for (const SynthesisStep& step : it->second) {
    u = embed(named_gate_local(step.kind), step.qubits, k) * u;
  }
  return u;
}

// Forward reset: rho_q (x) Tr_q(m).
ComplexMatrix apply_reset_forward(const ComplexMatrix& m, const ResetSpec& reset) {
  const ComplexMatrix r = reset_state_matrix(reset);
  const std::uint64_t dim = m.rows();
  const std::uint64_t qm = std::uint64_t(1) << reset.qubit;
  ComplexMatrix out = ComplexMatrix::Zero(dim, dim);
  for (std::uint64_t row = 0; row < dim; ++row) {
    for (std::uint64_t col = 0; col < dim; ++col) {
      const Complex traced = m(row & ~qm, col & ~qm) + m(row | qm, col | qm);
      out(row, col) = r((row & qm) ? 1 : 0, (col & qm) ? 1 : 0) * traced;
    }
  }
  return out;
}

// Adjoint reset: I_q (x) Tr_q[(rho_q (x) I) m].
ComplexMatrix apply_reset_adjoint(const ComplexMatrix& m, const ResetSpec& reset) {
  const ComplexMatrix r = reset_state_matrix(reset);
  const std::uint64_t dim = m.rows();
  const std::uint64_t qm = std::uint64_t(1) << reset.qubit;
  ComplexMatrix out = ComplexMatrix::Zero(dim, dim);
  for (std::uint64_t row = 0; row < dim; ++row) {
    if (row & qm) {
      continue;
    }
    for (std::uint64_t col = 0; col < dim; ++col) {
      if (col & qm) {
        continue;
      }
      Complex k{};
      for (int u = 0; u < 2; ++u) {
        for (int w = 0; w < 2; ++w) {
          k += r(u, w) * m(w ? (row | qm) : row, u ? (col | qm) : col);
        }
      }
      out(row, col) = k;
      out(row | qm, col | qm) = k;
    }
  }
  return out;
}

// Fired depolarizing error: (I_q / 2) (x) Tr_q(m). Self-adjoint as a map.
ComplexMatrix apply_depolarize_error(const ComplexMatrix& m, std::size_t qubit) {
  const std::uint64_t dim = m.rows();
  const std::uint64_t qm = std::uint64_t(1) << qubit;
  ComplexMatrix out = ComplexMatrix::Zero(dim, dim);
  for (std::uint64_t row = 0; row < dim; ++row) {
    for (std::uint64_t col = 0; col < dim; ++col) {
      if ((row & qm) == (col & qm)) {
        out(row, col) = 0.5 * (m(row & ~qm, col & ~qm) + m(row | qm, col | qm));
      }
    }
  }
  return out;
}

ComplexMatrix apply_depolarize_channel(const ComplexMatrix& m, std::size_t qubit,
                                       double gamma) {
  if (gamma == 0.0) {
    return m;
  }
  return (1.0 - gamma) * m + gamma * apply_depolarize_error(m, qubit);
}

void require_valid_circuit(const Circuit& c, std::size_t cap) {
  const auto violations = validate(c);
  if (!violations.empty()) {
    throw std::invalid_argument("invalid circuit: " + violations.front());
  }
  if (c.num_qubits > cap) {
    throw CapExceeded("dense evolution capped at " + std::to_string(cap) +
                      " qubits");
  }
}

// Validation core shared by the constructors; returns the defect or "".
std::string density_defect(const ComplexMatrix& m) {
  if (m.rows() != m.cols() || m.rows() < 1) {
    return "matrix is not square";
  }
  if ((m.rows() & (m.rows() - 1)) != 0) {
    return "dimension is not a power of two";
  }
  if ((m - m.adjoint()).cwiseAbs().maxCoeff() > 1e-12) {
    return "matrix is not Hermitian";
  }
  if (std::abs(m.trace() - Complex{1.0}) > 1e-12) {
    return "trace differs from one";
  }
  Eigen::SelfAdjointEigenSolver<ComplexMatrix> es(m, Eigen::EigenvaluesOnly);
  if (es.eigenvalues().minCoeff() < -1e-10) {
    return "matrix has a negative eigenvalue";
  }
  return "";
}

}  // namespace

DensityMatrix DensityMatrix::basis_state(const std::string& bits) {
  const std::size_t n = bits.size();
  if (n == 0 || n > kDenseQubitCap) {
    throw CapExceeded("dense states support 1.." +
                      std::to_string(kDenseQubitCap) + " qubits");
  }
  std::uint64_t index = 0;
  for (std::size_t q = 0; q < n; ++q) {
    if (bits[q] == '1') {
      index |= std::uint64_t(1) << q;
    } else if (bits[q] != '0') {
      throw std::invalid_argument("basis_state wants a string of 0s and 1s");
    }
  }
  const std::uint64_t dim = std::uint64_t(1) << n;
  ComplexMatrix m = ComplexMatrix::Zero(dim, dim);
  m(index, index) = 1.0;
  return DensityMatrix(n, std::move(m));
}

DensityMatrix DensityMatrix::product_bloch(
    const std::vector<std::array<double, 3>>& bloch) {
  const std::size_t n = bloch.size();
  if (n == 0 || n > kDenseQubitCap) {
    throw CapExceeded("dense states support 1.." +
                      std::to_string(kDenseQubitCap) + " qubits");
  }
  auto single = [](const std::array<double, 3>& v) {
    const double norm = std::sqrt(v[0] * v[0] + v[1] * v[1] + v[2] * v[2]);
    if (norm > 1.0 + 1e-9) {
      throw std::invalid_argument("bloch vector norm exceeds one");
    }
    return mat2({(1 + v[2]) / 2, 0}, {v[0] / 2, -v[1] / 2}, {v[0] / 2, v[1] / 2},
                {(1 - v[2]) / 2, 0});
  };
  ComplexMatrix m = single(bloch[0]);
  for (std::size_t q = 1; q < n; ++q) {
    m = kron(single(bloch[q]), m);
  }
  return DensityMatrix(n, std::move(m));
}

DensityMatrix DensityMatrix::haar_mixture(std::size_t n, std::size_t terms,
                                          Rng& rng) {
  if (n == 0 || n > kDenseQubitCap) {
    throw CapExceeded("dense states support 1.." +
                      std::to_string(kDenseQubitCap) + " qubits");
  }
  if (terms == 0) {
    throw std::invalid_argument("haar_mixture needs at least one term");
  }
  const std::uint64_t dim = std::uint64_t(1) << n;
  // Exponential draws normalize to a uniform point on the simplex.
  std::vector<double> weights(terms);
  double total = 0.0;
  for (double& w : weights) {
    w = -std::log1p(-rng.uniform());
    total += w;
  }
  ComplexMatrix m = ComplexMatrix::Zero(dim, dim);
  for (std::size_t t = 0; t < terms; ++t) {
    // A normalized vector of iid complex Gaussians is Haar on the sphere.
    Eigen::VectorXcd psi(dim);
    for (std::uint64_t i = 0; i < dim; ++i) {
      const double r = std::sqrt(-2.0 * std::log1p(-rng.uniform()));
      const double theta = 2.0 * std::numbers::pi * rng.uniform();
      psi(i) = Complex{r * std::cos(theta), r * std::sin(theta)};
    }
    psi.normalize();
    m += (weights[t] / total) * (psi * psi.adjoint());
  }
  m = ((m + m.adjoint()) / 2.0).eval();  // scrub rounding asymmetry
  return DensityMatrix(n, std::move(m));
}

DensityMatrix DensityMatrix::from_matrix(ComplexMatrix m) {
  const std::string defect = density_defect(m);
  if (!defect.empty()) {
    throw std::invalid_argument("not a density matrix: " + defect);
  }
  std::size_t n = 0;
  while ((Eigen::Index(1) << n) < m.rows()) {
    ++n;
  }
  if (n > kDenseQubitCap) {
    throw CapExceeded("dense states support 1.." +
                      std::to_string(kDenseQubitCap) + " qubits");
  }
  return DensityMatrix(n, std::move(m));
}

ComplexMatrix pauli_matrix(const PauliString& s) {
  const ComplexMatrix* singles[4] = {&pauli_i(), &pauli_x(), &pauli_z(),
                                     &pauli_y()};
  const std::size_t n = s.num_qubits();
  ComplexMatrix m = *singles[s.pauli_code(0)];
  for (std::size_t q = 1; q < n; ++q) {
    m = kron(*singles[s.pauli_code(q)], m);
  }
  return m;
}

ComplexMatrix gate_unitary(const Gate& g, std::size_t n) {
  if (g.kind == GateKind::kTableau) {
    return embed(tableau_local_unitary(*g.tableau), g.qubits, n);
  }
  return embed(named_gate_local(g.kind), g.qubits, n);
}

DensityMatrix evolve(const Circuit& c, const DensityMatrix& rho,
                     std::size_t cap) {
  require_valid_circuit(c, cap);
  if (rho.num_qubits() != c.num_qubits) {
    throw std::invalid_argument("state and circuit qubit counts differ");
  }
  ComplexMatrix m = rho.entries();
  for (const Layer& layer : c.layers) {
    for (const Gate& g : layer.gates) {
      const ComplexMatrix u = gate_unitary(g, c.num_qubits);
      m = u * m * u.adjoint();
    }
    for (const ResetSpec& reset : layer.resets) {
      m = apply_reset_forward(m, reset);
    }
    for (std::size_t q = 0; q < c.num_qubits; ++q) {
      m = apply_depolarize_channel(m, q, c.noise.gamma);
    }
  }
  try {
    return DensityMatrix::from_matrix(std::move(m));
  } catch (const std::invalid_argument& e) {
    throw std::logic_error(std::string("internal: evolve output ") + e.what());
  }
}

DensityMatrix evolve_config(const Circuit& c, const ErrorConfig& b,
                            const DensityMatrix& rho, std::size_t cap) {
  require_valid_circuit(c, cap);
  if (rho.num_qubits() != c.num_qubits) {
    throw std::invalid_argument("state and circuit qubit counts differ");
  }
  if (b.depth() != c.depth() || b.num_qubits() != c.num_qubits) {
    throw std::invalid_argument("error config dimensions do not match circuit");
  }
  ComplexMatrix m = rho.entries();
  for (std::size_t layer_idx = 0; layer_idx < c.depth(); ++layer_idx) {
    const Layer& layer = c.layers[layer_idx];
    for (const Gate& g : layer.gates) {
      const ComplexMatrix u = gate_unitary(g, c.num_qubits);
      m = u * m * u.adjoint();
    }
    for (const ResetSpec& reset : layer.resets) {
      m = apply_reset_forward(m, reset);
    }
    for (std::size_t q = 0; q < c.num_qubits; ++q) {
      if (b.fired(layer_idx, q)) {
        m = apply_depolarize_error(m, q);
      }
    }
  }
  try {
    return DensityMatrix::from_matrix(std::move(m));
  } catch (const std::invalid_argument& e) {
    throw std::logic_error(std::string("internal: evolve_config output ") +
                           e.what());
  }
}

double trace_distance(const DensityMatrix& rho, const DensityMatrix& sigma) {
  if (rho.num_qubits() != sigma.num_qubits()) {
    throw std::invalid_argument("trace_distance dimensions differ");
  }
  Eigen::SelfAdjointEigenSolver<ComplexMatrix> es(
      rho.entries() - sigma.entries(), Eigen::EigenvaluesOnly);
  return es.eigenvalues().cwiseAbs().sum();
}

ComplexMatrix dense_apply_adjoint(const Circuit& c, const ErrorConfig& b,
                                  const ComplexMatrix& observable,
                                  std::size_t cap) {
  require_valid_circuit(c, cap);
  if (b.depth() != c.depth() || b.num_qubits() != c.num_qubits) {
    throw std::invalid_argument("error config dimensions do not match circuit");
  }
  if (observable.rows() != Eigen::Index(1) << c.num_qubits) {
    throw std::invalid_argument("observable dimension does not match circuit");
  }
  ComplexMatrix m = observable;
  for (std::size_t j = c.depth(); j-- > 0;) {
    const Layer& layer = c.layers[j];
    for (std::size_t q = 0; q < c.num_qubits; ++q) {
      if (b.fired(j, q)) {
        m = apply_depolarize_error(m, q);
      }
    }
    for (auto it = layer.resets.rbegin(); it != layer.resets.rend(); ++it) {
      m = apply_reset_adjoint(m, *it);
    }
    for (auto it = layer.gates.rbegin(); it != layer.gates.rend(); ++it) {
      const ComplexMatrix u = gate_unitary(*it, c.num_qubits);
      m = (u.adjoint() * m * u).eval();
    }
  }
  return m;
}

ComplexMatrix dense_apply_adjoint(const Circuit& c,
                                  const ComplexMatrix& observable,
                                  std::size_t cap) {
  require_valid_circuit(c, cap);
  if (observable.rows() != Eigen::Index(1) << c.num_qubits) {
    throw std::invalid_argument("observable dimension does not match circuit");
  }
  ComplexMatrix m = observable;
  for (std::size_t j = c.depth(); j-- > 0;) {
    const Layer& layer = c.layers[j];
    for (std::size_t q = 0; q < c.num_qubits; ++q) {
      m = apply_depolarize_channel(m, q, c.noise.gamma);
    }
    for (auto it = layer.resets.rbegin(); it != layer.resets.rend(); ++it) {
      m = apply_reset_adjoint(m, *it);
    }
    for (auto it = layer.gates.rbegin(); it != layer.gates.rend(); ++it) {
      const ComplexMatrix u = gate_unitary(*it, c.num_qubits);
      m = (u.adjoint() * m * u).eval();
    }
  }
  return m;
}

MemoryBoundReport memory_bound_report(const Circuit& c, const DensityMatrix& rho,
                                      const DensityMatrix& sigma,
                                      const MemoryBoundOptions& options) {
  MemoryBoundReport report;
  report.lhs = trace_distance(evolve(c, rho), evolve(c, sigma));
  if (c.noise_site_count() <= options.exact_site_cap) {
    report.rhs = 2.0 * survival_probability_exact(c, options.exact_site_cap);
    report.method = "exact";
  } else {
    const SurvivalEstimate est =
        survival_probability(c, options.mc_trials, options.mc_seed,
                             options.mc_confidence);
    report.rhs = 2.0 * est.ci_hi;
    report.method = "mc";
  }
  report.holds = report.lhs <= report.rhs + 1e-9;
  return report;
}

namespace {

// Max deviation between T(adjoint) and T(forward)^T plus the inner-product
// identity, over the full k-qubit Pauli basis.
template <typename Fwd, typename Adj>
double ptm_transpose_deviation(std::size_t k, Fwd&& forward, Adj&& adjoint) {
  const std::uint64_t dim = std::uint64_t(1) << k;
  const std::uint64_t basis_size = std::uint64_t(1) << (2 * k);
  std::vector<ComplexMatrix> paulis, fwd_of, adj_of;
  for (std::uint64_t idx = 0; idx < basis_size; ++idx) {
    PauliString s(k);
    for (std::size_t q = 0; q < k; ++q) {
      s.set_pauli(q, (idx >> (2 * q)) & 1, (idx >> (2 * q + 1)) & 1);
    }
    ComplexMatrix p = pauli_matrix(s);
    fwd_of.push_back(forward(p));
    adj_of.push_back(adjoint(p));
    paulis.push_back(std::move(p));
  }
  double deviation = 0.0;
  for (std::uint64_t i = 0; i < basis_size; ++i) {
    for (std::uint64_t j = 0; j < basis_size; ++j) {
      const Complex t_fwd = (paulis[i] * fwd_of[j]).trace() / double(dim);
      const Complex t_adj = (paulis[j] * adj_of[i]).trace() / double(dim);
      deviation = std::max(deviation, std::abs(t_adj - t_fwd));
      // <P_i, N(P_j)> vs <N'(P_i), P_j> with the Hilbert-Schmidt pairing.
      const Complex lhs = (paulis[i].adjoint() * fwd_of[j]).trace();
      const Complex rhs = (adj_of[i].adjoint() * paulis[j]).trace();
      deviation = std::max(deviation, std::abs(lhs - rhs));
    }
  }
  return deviation;
}

}  // namespace

double adjoint_deviation_depolarize(double gamma) {
  if (gamma < 0.0 || gamma > 1.0) {
    throw std::invalid_argument("gamma must lie in [0, 1]");
  }
  auto apply = [gamma](const ComplexMatrix& m) {
    return apply_depolarize_channel(m, 0, gamma);
  };
  return ptm_transpose_deviation(1, apply, apply);
}

double adjoint_deviation_reset(const ResetSpec& reset) {
  ResetSpec local = reset;
  local.qubit = 0;
  if (!reset_state_valid(local)) {
    throw std::invalid_argument("invalid reset state");
  }
  return ptm_transpose_deviation(
      1,
      [&](const ComplexMatrix& m) { return apply_reset_forward(m, local); },
      [&](const ComplexMatrix& m) { return apply_reset_adjoint(m, local); });
}

double adjoint_deviation_gate(const Gate& g) {
  const std::size_t k =
      g.kind == GateKind::kTableau ? g.tableau->num_qubits : gate_arity(g.kind);
  Gate local = g;
  local.qubits.clear();
  for (std::uint32_t q = 0; q < k; ++q) {
    local.qubits.push_back(q);
  }
  const std::string defect = gate_defect(local, k);
  if (!defect.empty()) {
    throw std::invalid_argument("invalid gate: " + defect);
  }
  const ComplexMatrix u = gate_unitary(local, k);
  return ptm_transpose_deviation(
      k, [&](const ComplexMatrix& m) { return (u * m * u.adjoint()).eval(); },
      [&](const ComplexMatrix& m) { return (u.adjoint() * m * u).eval(); });
}

}  // namespace cliffmem
