#include "cliffmem/tableau.hpp"

#include <algorithm>
#include <bit>
#include <set>
#include <stdexcept>

namespace cliffmem {

CliffordTableau CliffordTableau::identity(std::size_t n) {
  CliffordTableau t;
  t.num_qubits = n;
  t.image_x.reserve(n);
  t.image_z.reserve(n);
  for (std::size_t q = 0; q < n; ++q) {
    t.image_x.push_back(PauliString::x_generator(n, q));
    t.image_z.push_back(PauliString::z_generator(n, q));
  }
  return t;
}

PauliString CliffordTableau::conjugate(const PauliString& p) const {
  if (p.num_qubits() != num_qubits) {
    throw std::invalid_argument("tableau/pauli size mismatch in conjugate");
  }
  if (!p.alive()) {
    return PauliString::annihilated(num_qubits);
  }
  PauliString out(num_qubits);
  out.set_coeff(p.coeff());
  for (std::size_t q = 0; q < num_qubits; ++q) {
    if (p.x_bit(q)) {
      out.multiply_inplace(image_x[q]);
    }
    if (p.z_bit(q)) {
      out.multiply_inplace(image_z[q]);
    }
  }
  return out;
}

bool operator==(const CliffordTableau& a, const CliffordTableau& b) {
  return a.num_qubits == b.num_qubits && a.image_x == b.image_x &&
         a.image_z == b.image_z;
}

int symplectic_product(const PauliString& p, const PauliString& q) {
  auto px = p.x_words();
  auto pz = p.z_words();
  auto qx = q.x_words();
  auto qz = q.z_words();
  std::uint64_t acc = 0;
  for (std::size_t i = 0; i < px.size(); ++i) {
    acc ^= std::popcount(px[i] & qz[i]) ^ std::popcount(pz[i] & qx[i]);
  }
  return static_cast<int>(acc & 1);
}

bool CliffordTableau::is_symplectic() const {
  for (std::size_t i = 0; i < num_qubits; ++i) {
    for (std::size_t j = 0; j < num_qubits; ++j) {
      if (symplectic_product(image_x[i], image_x[j]) != 0 ||
          symplectic_product(image_z[i], image_z[j]) != 0 ||
          symplectic_product(image_x[i], image_z[j]) != (i == j ? 1 : 0)) {
        return false;
      }
    }
  }
  return true;
}

namespace {

// Rows of the 2n x 2n GF(2) matrix of the tableau, one word-packed row per
// generator, bit layout [x-block | z-block].
std::vector<std::vector<std::uint64_t>> tableau_bit_rows(const CliffordTableau& t) {
  const std::size_t n = t.num_qubits;
  const std::size_t words = PauliString::word_count(2 * n);
  std::vector<std::vector<std::uint64_t>> rows(2 * n, std::vector<std::uint64_t>(words, 0));
  auto fill = [&](std::size_t row, const PauliString& p) {
    for (std::size_t q = 0; q < n; ++q) {
      if (p.x_bit(q)) {
        rows[row][q >> 6] |= 1ULL << (q & 63);
      }
      if (p.z_bit(q)) {
        rows[row][(n + q) >> 6] |= 1ULL << ((n + q) & 63);
      }
    }
  };
  for (std::size_t q = 0; q < n; ++q) {
    fill(q, t.image_x[q]);
    fill(n + q, t.image_z[q]);
  }
  return rows;
}

}  // namespace

CliffordTableau CliffordTableau::inverse() const {
  const std::size_t n = num_qubits;
  const std::size_t dim = 2 * n;
  const std::size_t words = PauliString::word_count(dim);
  auto m = tableau_bit_rows(*this);
  // Augment with identity and run Gauss-Jordan over GF(2).
  std::vector<std::vector<std::uint64_t>> aug(dim, std::vector<std::uint64_t>(words, 0));
  for (std::size_t i = 0; i < dim; ++i) {
    aug[i][i >> 6] |= 1ULL << (i & 63);
  }
  auto bit = [](const std::vector<std::uint64_t>& row, std::size_t j) {
    return (row[j >> 6] >> (j & 63)) & 1ULL;
  };
  for (std::size_t col = 0; col < dim; ++col) {
    std::size_t pivot = col;
    while (pivot < dim && !bit(m[pivot], col)) {
      ++pivot;
    }
    if (pivot == dim) {
      throw std::invalid_argument("tableau is singular, cannot invert");
    }
    std::swap(m[col], m[pivot]);
    std::swap(aug[col], aug[pivot]);
    for (std::size_t r = 0; r < dim; ++r) {
      if (r != col && bit(m[r], col)) {
        for (std::size_t w = 0; w < words; ++w) {
          m[r][w] ^= m[col][w];
          aug[r][w] ^= aug[col][w];
        }
      }
    }
  }
  CliffordTableau inv;
  inv.num_qubits = n;
  inv.image_x.assign(n, PauliString(n));
  inv.image_z.assign(n, PauliString(n));
  for (std::size_t i = 0; i < dim; ++i) {
    PauliString row(n);
    for (std::size_t q = 0; q < n; ++q) {
      row.set_pauli(q, bit(aug[i], q) != 0, bit(aug[i], n + q) != 0);
    }
    (i < n ? inv.image_x[i] : inv.image_z[i - n]) = row;
  }
  return inv;
}

std::string_view gate_kind_name(GateKind kind) {
  switch (kind) {
    case GateKind::kH:
      return "H";
    case GateKind::kS:
      return "S";
    case GateKind::kSdg:
      return "SDG";
    case GateKind::kX:
      return "X";
    case GateKind::kY:
      return "Y";
    case GateKind::kZ:
      return "Z";
    case GateKind::kCnot:
      return "CNOT";
    case GateKind::kCz:
      return "CZ";
    case GateKind::kSwap:
      return "SWAP";
    case GateKind::kTableau:
      return "TABLEAU";
  }
  return "?";
}

std::optional<GateKind> gate_kind_from_name(std::string_view name) {
  static constexpr GateKind kAll[] = {
      GateKind::kH,    GateKind::kS,  GateKind::kSdg, GateKind::kX,
      GateKind::kY,    GateKind::kZ,  GateKind::kCnot, GateKind::kCz,
      GateKind::kSwap, GateKind::kTableau};
  for (GateKind k : kAll) {
    if (gate_kind_name(k) == name) {
      return k;
    }
  }
  return std::nullopt;
}

std::size_t gate_arity(GateKind kind) {
  switch (kind) {
    case GateKind::kCnot:
    case GateKind::kCz:
    case GateKind::kSwap:
      return 2;
    case GateKind::kTableau:
      return 0;
    default:
      return 1;
  }
}

std::string gate_defect(const Gate& g, std::size_t num_qubits) {
  const std::size_t arity = gate_arity(g.kind);
  if (arity != 0 && g.qubits.size() != arity) {
    return std::string(gate_kind_name(g.kind)) + " expects " +
           std::to_string(arity) + " qubit(s)";
  }
  std::set<std::uint32_t> seen;
  for (std::uint32_t q : g.qubits) {
    if (q >= num_qubits) {
      return "qubit index " + std::to_string(q) + " out of range";
    }
    if (!seen.insert(q).second) {
      return "repeated qubit index " + std::to_string(q);
    }
  }
  if (g.kind == GateKind::kTableau) {
    if (g.qubits.empty()) {
      return "TABLEAU gate needs at least one qubit";
    }
    if (!g.tableau || g.tableau->num_qubits != g.qubits.size()) {
      return "TABLEAU gate rows do not match its qubit count";
    }
    if (!g.tableau->is_symplectic()) {
      return "TABLEAU gate rows are not symplectic";
    }
  } else if (g.tableau) {
    return "tableau payload on a named gate";
  }
  return {};
}

void apply_gate_conjugation(const Gate& g, PauliString& p) {
  switch (g.kind) {
    case GateKind::kH: {
      const std::size_t q = g.qubits[0];
      const bool x = p.x_bit(q), z = p.z_bit(q);
      if (x && z) {
        p.scale(-1.0);
      }
      p.set_pauli(q, z, x);
      break;
    }
    case GateKind::kS: {
      const std::size_t q = g.qubits[0];
      const bool x = p.x_bit(q), z = p.z_bit(q);
      if (x && z) {
        p.scale(-1.0);  // Y -> -X
      }
      p.set_pauli(q, x, z != x);
      break;
    }
    case GateKind::kSdg: {
      const std::size_t q = g.qubits[0];
      const bool x = p.x_bit(q), z = p.z_bit(q);
      if (x && !z) {
        p.scale(-1.0);  // X -> -Y
      }
      p.set_pauli(q, x, z != x);
      break;
    }
    case GateKind::kX: {
      if (p.z_bit(g.qubits[0])) {
        p.scale(-1.0);
      }
      break;
    }
    case GateKind::kY: {
      const std::size_t q = g.qubits[0];
      if (p.x_bit(q) != p.z_bit(q)) {
        p.scale(-1.0);
      }
      break;
    }
    case GateKind::kZ: {
      if (p.x_bit(g.qubits[0])) {
        p.scale(-1.0);
      }
      break;
    }
    case GateKind::kCnot: {
      const std::size_t c = g.qubits[0], t = g.qubits[1];
      const bool xc = p.x_bit(c), zc = p.z_bit(c);
      const bool xt = p.x_bit(t), zt = p.z_bit(t);
      if (xc && zt && (xt == zc)) {
        p.scale(-1.0);
      }
      p.set_pauli(t, xt != xc, zt);
      p.set_pauli(c, xc, zc != zt);
      break;
    }
    case GateKind::kCz: {
      const std::size_t a = g.qubits[0], b = g.qubits[1];
      const bool xa = p.x_bit(a), za = p.z_bit(a);
      const bool xb = p.x_bit(b), zb = p.z_bit(b);
      if (xa && xb && (za != zb)) {
        p.scale(-1.0);
      }
      p.set_pauli(a, xa, za != xb);
      p.set_pauli(b, xb, zb != xa);
      break;
    }
    case GateKind::kSwap: {
      const std::size_t a = g.qubits[0], b = g.qubits[1];
      const bool xa = p.x_bit(a), za = p.z_bit(a);
      p.set_pauli(a, p.x_bit(b), p.z_bit(b));
      p.set_pauli(b, xa, za);
      break;
    }
    case GateKind::kTableau: {
      const std::size_t k = g.qubits.size();
      PauliString local(k);
      local.set_coeff(1.0);
      for (std::size_t j = 0; j < k; ++j) {
        if (p.x_bit(g.qubits[j])) {
          local.multiply_inplace(g.tableau->image_x[j]);
        }
        if (p.z_bit(g.qubits[j])) {
          local.multiply_inplace(g.tableau->image_z[j]);
        }
      }
      p.scale(local.coeff());
      for (std::size_t j = 0; j < k; ++j) {
        p.set_pauli(g.qubits[j], local.x_bit(j), local.z_bit(j));
      }
      break;
    }
  }
}

Gate adjoint_gate(const Gate& g) {
  Gate out = g;
  switch (g.kind) {
    case GateKind::kS:
      out.kind = GateKind::kSdg;
      break;
    case GateKind::kSdg:
      out.kind = GateKind::kS;
      break;
    case GateKind::kTableau:
      out.tableau = g.tableau->inverse();
      break;
    default:
      break;
  }
  return out;
}

CliffordTableau tableau_from_layer(std::size_t n, const std::vector<Gate>& gates) {
  std::set<std::uint32_t> used;
  for (const Gate& g : gates) {
    std::string defect = gate_defect(g, n);
    if (!defect.empty()) {
      throw std::invalid_argument(defect);
    }
    for (std::uint32_t q : g.qubits) {
      if (!used.insert(q).second) {
        throw std::invalid_argument("overlapping gates on qubit " + std::to_string(q));
      }
    }
  }
  CliffordTableau t = CliffordTableau::identity(n);
  for (const Gate& g : gates) {
    for (std::size_t q = 0; q < n; ++q) {
      apply_gate_conjugation(g, t.image_x[q]);
      apply_gate_conjugation(g, t.image_z[q]);
    }
  }
  return t;
}

std::vector<std::vector<int>> tableau_rows(const CliffordTableau& t) {
  const std::size_t k = t.num_qubits;
  std::vector<std::vector<int>> rows(2 * k, std::vector<int>(2 * k, 0));
  for (std::size_t i = 0; i < 2 * k; ++i) {
    const PauliString& img = i < k ? t.image_x[i] : t.image_z[i - k];
    for (std::size_t q = 0; q < k; ++q) {
      rows[i][q] = img.x_bit(q) ? 1 : 0;
      rows[i][k + q] = img.z_bit(q) ? 1 : 0;
    }
  }
  return rows;
}

CliffordTableau tableau_from_rows(const std::vector<std::vector<int>>& rows) {
  if (rows.empty() || rows.size() % 2 != 0) {
    throw std::invalid_argument("tableau needs 2k rows");
  }
  const std::size_t k = rows.size() / 2;
  CliffordTableau t;
  t.num_qubits = k;
  for (std::size_t i = 0; i < 2 * k; ++i) {
    if (rows[i].size() != 2 * k) {
      throw std::invalid_argument("tableau rows must have 2k entries");
    }
    PauliString img(k);
    for (std::size_t q = 0; q < k; ++q) {
      img.set_pauli(q, rows[i][q] != 0, rows[i][k + q] != 0);
    }
    (i < k ? t.image_x : t.image_z).push_back(img);
  }
  return t;
}

namespace {

// Symplectic form on 2k-bit vectors in [x-block | z-block] layout.
int form(std::uint32_t u, std::uint32_t v, std::size_t k) {
  const std::uint32_t ux = u & ((1u << k) - 1), uz = u >> k;
  const std::uint32_t vx = v & ((1u << k) - 1), vz = v >> k;
  return std::popcount((ux & vz) ^ (uz & vx)) & 1;
}

// Recursive uniform symplectic-basis sampler over the span of `basis`
// (a symplectic subspace of even dimension). Appends pairs (v_i, w_i).
void sample_basis(Rng& rng, std::size_t k, std::vector<std::uint32_t> basis,
                  std::vector<std::uint32_t>& xs, std::vector<std::uint32_t>& ws) {
  if (basis.empty()) {
    return;
  }
  const std::size_t dim = basis.size();
  // Image of the next X generator: uniform nonzero combination.
  const std::uint64_t idx = rng.uniform_below((1ULL << dim) - 1) + 1;
  std::uint32_t v = 0;
  for (std::size_t j = 0; j < dim; ++j) {
    if ((idx >> j) & 1) {
      v ^= basis[j];
    }
  }
  // Partner candidates: any b with <v,b> = 1 plus an arbitrary element of
  // the kernel of <v, .> restricted to the subspace.
  std::size_t anchor = dim;
  for (std::size_t j = 0; j < dim; ++j) {
    if (form(v, basis[j], k)) {
      anchor = j;
      break;
    }
  }
  if (anchor == dim) {
    throw std::logic_error("degenerate symplectic restriction");
  }
  std::vector<std::uint32_t> kernel;
  kernel.reserve(dim - 1);
  for (std::size_t j = 0; j < dim; ++j) {
    if (j == anchor) {
      continue;
    }
    kernel.push_back(form(v, basis[j], k) ? basis[j] ^ basis[anchor] : basis[j]);
  }
  const std::uint64_t bits = rng.uniform_below(1ULL << kernel.size());
  std::uint32_t w = basis[anchor];
  for (std::size_t j = 0; j < kernel.size(); ++j) {
    if ((bits >> j) & 1) {
      w ^= kernel[j];
    }
  }
  xs.push_back(v);
  ws.push_back(w);
  // Symplectic complement of span{v, w} inside the subspace: strip the w
  // pairing from the kernel basis of v.
  std::size_t pivot = kernel.size();
  for (std::size_t j = 0; j < kernel.size(); ++j) {
    if (form(w, kernel[j], k)) {
      pivot = j;
      break;
    }
  }
  std::vector<std::uint32_t> next;
  next.reserve(dim - 2);
  if (pivot == kernel.size()) {
    // w already pairs trivially with the whole kernel; v itself must have
    // been in the kernel span, which form nondegeneracy rules out unless
    // the kernel is empty.
    next = kernel;
  } else {
    for (std::size_t j = 0; j < kernel.size(); ++j) {
      if (j == pivot) {
        continue;
      }
      next.push_back(form(w, kernel[j], k) ? kernel[j] ^ kernel[pivot] : kernel[j]);
    }
  }
  sample_basis(rng, k, std::move(next), xs, ws);
}

}  // namespace

std::vector<std::uint32_t> random_symplectic_rows(Rng& rng, std::size_t k) {
  if (k == 0 || k > 15) {
    throw std::invalid_argument("random_symplectic_rows supports 1 <= k <= 15");
  }
  std::vector<std::uint32_t> ambient(2 * k);
  for (std::size_t j = 0; j < 2 * k; ++j) {
    ambient[j] = 1u << j;
  }
  std::vector<std::uint32_t> xs, ws;
  sample_basis(rng, k, std::move(ambient), xs, ws);
  std::vector<std::uint32_t> rows;
  rows.reserve(2 * k);
  rows.insert(rows.end(), xs.begin(), xs.end());
  rows.insert(rows.end(), ws.begin(), ws.end());
  return rows;
}

CliffordTableau random_two_qubit_clifford(Rng& rng) {
  // Uniform over the symplectic action (Pauli-frame signs are irrelevant to
  // weight dynamics and cannot be represented in circuit files, so rows are
  // normalized to +1).
  const std::size_t k = 2;
  const auto rows = random_symplectic_rows(rng, k);
  CliffordTableau t;
  t.num_qubits = k;
  for (std::size_t i = 0; i < 2 * k; ++i) {
    PauliString img(k);
    for (std::size_t q = 0; q < k; ++q) {
      img.set_pauli(q, (rows[i] >> q) & 1, (rows[i] >> (k + q)) & 1);
    }
    (i < k ? t.image_x : t.image_z).push_back(img);
  }
  return t;
}

}  // namespace cliffmem
