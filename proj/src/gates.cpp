#include "sknet/gates.hpp"

#include <cmath>
#include <nlohmann/json.hpp>
#include <utility>

#include "sknet/json_io.hpp"

namespace sknet {
namespace {

constexpr double kDuplicateTol = 1e-12;

// Global phase c with c^d * det(M) = 1, c the principal d-th root of det^{-1}.
// arg is taken in (-pi, pi]; determinants within rounding of the negative real
// axis snap onto the +pi side so the branch choice is stable (det = -1 at
// d = 2 yields +i, at d = 4 yields e^{i pi/4}).
Complex normalization_phase(const UMatrix& m) {
  const Complex det = m.determinant();
  const Complex inv = Complex(1.0, 0.0) / det;
  double re = inv.real(), im = inv.imag();
  if (std::abs(im) <= 1e-12 * std::abs(inv)) im = 0.0;
  const double theta = std::atan2(im, re);
  return std::polar(std::pow(std::abs(inv), 1.0 / m.dim()), theta / m.dim());
}

CMatrix kron(const CMatrix& a, const CMatrix& b) {
  CMatrix out(a.rows() * b.rows(), a.cols() * b.cols());
  for (Eigen::Index i = 0; i < a.rows(); ++i)
    for (Eigen::Index j = 0; j < a.cols(); ++j)
      out.block(i * b.rows(), j * b.cols(), b.rows(), b.cols()) = a(i, j) * b;
  return out;
}

CMatrix lift_single(const CMatrix& g, int position, int n_qubits) {
  CMatrix out = CMatrix::Identity(1, 1);
  for (int q = 0; q < n_qubits; ++q) {
    if (q == position)
      out = kron(out, g);
    else
      out = kron(out, CMatrix::Identity(2, 2));
  }
  return out;
}

// Two-qubit CNOT block on adjacent qubits (left qubit is the more significant
// bit). control_left selects which of the two qubits controls.
CMatrix cnot_block(bool control_left) {
  CMatrix m = CMatrix::Zero(4, 4);
  if (control_left) {
    m(0, 0) = m(1, 1) = m(2, 3) = m(3, 2) = 1.0;
  } else {
    m(0, 0) = m(3, 1) = m(2, 2) = m(1, 3) = 1.0;
  }
  return m;
}

}  // namespace

GateSet GateSet::build(std::string name, int dim,
                       const std::vector<std::pair<std::string, UMatrix>>& raw,
                       std::vector<std::string>* repair_log, const Tolerances& tol) {
  GateSet gs;
  gs.name_ = std::move(name);
  gs.dim_ = dim;
  if (raw.empty()) throw ValidationError("gate set: no gates");

  auto note = [&](const std::string& msg) {
    if (repair_log) repair_log->push_back(msg);
  };
  // Density of the generated subgroup is undecidable; it is assumed, and
  // failure modes such as finite-group proximity are not detected.
  note("density of the generated subgroup is assumed, not verified");

  auto find_close = [&](const UMatrix& m) -> int {
    for (int i = 0; i < gs.size(); ++i)
      if (dist(gs.gates_[i].matrix, m, tol) <= kDuplicateTol) return i;
    return -1;
  };

  for (const auto& [label, matrix] : raw) {
    if (matrix.dim() != dim) throw ValidationError("gate set: dimension mismatch for " + label);
    if (!matrix.is_unitary(tol.unitary_tol))
      throw ValidationError("gate set: gate not unitary within tolerance: " + label);
    const Complex phase = normalization_phase(matrix);
    UMatrix normalized = matrix * phase;
    if (std::abs(phase - Complex(1.0, 0.0)) > kDuplicateTol)
      note("normalized " + label + " into SU(d), phase applied");
    const int dup = find_close(normalized);
    if (dup >= 0) {
      note("collapsed duplicate gate " + label + " into " + gs.gates_[dup].label);
      continue;
    }
    gs.gates_.push_back(Gate{label, std::move(normalized), "", phase});
  }

  // Inverse closure: resolve each adjoint, appending derived gates as needed.
  for (int i = 0; i < gs.size(); ++i) {
    if (!gs.gates_[i].inverse_label.empty()) continue;
    const UMatrix adj = gs.gates_[i].matrix.adjoint();
    int j = find_close(adj);
    if (j < 0) {
      j = gs.size();
      gs.gates_.push_back(Gate{gs.gates_[i].label + "†", adj, gs.gates_[i].label,
                               std::conj(gs.gates_[i].phase_applied)});
      note("closure repair: added adjoint gate " + gs.gates_[j].label);
    }
    gs.gates_[i].inverse_label = gs.gates_[j].label;
    if (j != i) gs.gates_[j].inverse_label = gs.gates_[i].label;
  }

  gs.inverse_index_.resize(gs.size());
  for (int i = 0; i < gs.size(); ++i) {
    const int j = gs.index_of(gs.gates_[i].inverse_label);
    if (dist(gs.gates_[j].matrix, gs.gates_[i].matrix.adjoint(), tol) > tol.unitary_tol)
      throw ValidationError("gate set: inverse closure failed for " + gs.gates_[i].label);
    gs.inverse_index_[i] = j;
  }
  for (const Gate& g : gs.gates_) {
    if (!g.matrix.is_special(tol.unitary_tol))
      throw ValidationError("gate set: gate not special after normalization: " + g.label);
  }
  return gs;
}

int GateSet::index_of(const std::string& label) const {
  for (int i = 0; i < size(); ++i)
    if (gates_[i].label == label) return i;
  throw ValidationError("gate set: unknown label " + label);
}

const UMatrix& word_value(const Word& w, const GateSet& gs, const Tolerances& tol) {
  if (w.cached_value) return *w.cached_value;
  UMatrix value = UMatrix::identity(gs.dim());
  for (int idx : w.indices) {
    if (idx < 0 || idx >= gs.size()) throw ValidationError("word: gate index out of range");
    value = value * gs.gate(idx).matrix;
  }
  if (!value.is_unitary(gs.dim() * tol.unitary_tol) ||
      !value.is_special(gs.dim() * tol.unitary_tol))
    throw NumericsError("word: product drifted off SU(d)");
  w.cached_value = std::move(value);
  return *w.cached_value;
}

Word word_inverse(const Word& w, const GateSet& gs) {
  Word out;
  out.indices.reserve(w.indices.size());
  for (auto it = w.indices.rbegin(); it != w.indices.rend(); ++it) {
    if (*it < 0 || *it >= gs.size()) throw ValidationError("word: gate index out of range");
    out.indices.push_back(gs.inverse_index(*it));
  }
  if (w.cached_value) out.cached_value = w.cached_value->adjoint();
  return out;
}

Word word_concat(const Word& u, const Word& v) {
  Word out;
  out.indices.reserve(u.indices.size() + v.indices.size());
  out.indices.insert(out.indices.end(), u.indices.begin(), u.indices.end());
  out.indices.insert(out.indices.end(), v.indices.begin(), v.indices.end());
  if (u.cached_value && v.cached_value) out.cached_value = *u.cached_value * *v.cached_value;
  return out;
}

GateSet standard_gateset(int n_qubits, std::vector<std::string>* repair_log,
                         const Tolerances& tol) {
  if (n_qubits < 1 || n_qubits > 4)
    throw ValidationError("standard_gateset: n_qubits outside [1, 4]");
  const int d = 1 << n_qubits;

  CMatrix h(2, 2);
  h << 1, 1, 1, -1;
  h /= std::sqrt(2.0);
  CMatrix k = CMatrix::Zero(2, 2);
  k(0, 0) = 1.0;
  k(1, 1) = Complex(0.0, 1.0);
  CMatrix t = CMatrix::Zero(2, 2);
  t(0, 0) = 1.0;
  t(1, 1) = std::exp(Complex(0.0, M_PI / 8.0));

  std::vector<std::pair<std::string, UMatrix>> raw;
  const std::pair<std::string, CMatrix> singles[] = {{"H", h}, {"K", k}, {"T", t}};
  for (int q = 0; q < n_qubits; ++q)
    for (const auto& [base, m] : singles)
      raw.emplace_back(base + std::to_string(q), UMatrix(lift_single(m, q, n_qubits)));

  for (int q = 0; q + 1 < n_qubits; ++q) {
    raw.emplace_back("CNOT" + std::to_string(q) + std::to_string(q + 1),
                     UMatrix(lift_single(cnot_block(true), q, n_qubits - 1)));
    raw.emplace_back("CNOT" + std::to_string(q + 1) + std::to_string(q),
                     UMatrix(lift_single(cnot_block(false), q, n_qubits - 1)));
  }

  return GateSet::build("standard-" + std::to_string(n_qubits) + "q", d, raw, repair_log, tol);
}

std::string gateset_to_json(const GateSet& gs) {
  std::string out = "{\"name\": \"" + gs.name() + "\", \"dim\": " + std::to_string(gs.dim()) +
                    ", \"gates\": [";
  for (int i = 0; i < gs.size(); ++i) {
    const Gate& g = gs.gate(i);
    if (i) out += ", ";
    out += "{\"label\": " + nlohmann::json(g.label).dump() +
           ", \"inverse\": " + nlohmann::json(g.inverse_label).dump() +
           ", \"matrix\": " + matrix_to_json(g.matrix) + "}";
  }
  out += "]}\n";
  return out;
}

GateSet gateset_from_json_text(const std::string& text,
                               std::vector<std::string>* repair_log, const Tolerances& tol) {
  const auto j = nlohmann::json::parse(text);
  if (!j.contains("name") || !j.contains("dim") || !j.contains("gates"))
    throw ValidationError("gate set JSON: expected {name, dim, gates}");
  const int dim = j.at("dim").get<int>();
  std::vector<std::pair<std::string, UMatrix>> raw;
  std::vector<std::string> declared_inverse;
  for (const auto& gj : j.at("gates")) {
    raw.emplace_back(gj.at("label").get<std::string>(), matrix_from_json(gj.at("matrix")));
    declared_inverse.push_back(gj.value("inverse", std::string{}));
  }
  GateSet gs = GateSet::build(j.at("name").get<std::string>(), dim, raw, repair_log, tol);
  // Inverse links are recomputed from the matrices; flag stale declarations.
  for (size_t i = 0; i < raw.size() && repair_log; ++i) {
    const int idx = gs.index_of(raw[i].first);
    if (!declared_inverse[i].empty() && declared_inverse[i] != gs.gate(idx).inverse_label)
      repair_log->push_back("declared inverse of " + raw[i].first + " did not match; recomputed");
  }
  return gs;
}

std::string gateset_hash(const GateSet& gs) { return content_hash(gateset_to_json(gs)); }

}  // namespace sknet
