#pragma once

#include <nlohmann/json_fwd.hpp>
#include <optional>
#include <string>
#include <vector>

#include "sknet/matcore.hpp"

namespace sknet {

/// One generator: determinant-normalized special unitary plus the global
/// phase that normalization applied (kept for provenance).
struct Gate {
  std::string label;
  UMatrix matrix;
  std::string inverse_label;
  Complex phase_applied{1.0, 0.0};
};

/// Inverse-closed, deduplicated generating set. Immutable after construction
/// and safe to share across threads.
class GateSet {
 public:
  /// Normalizes each matrix into SU(d) (principal d-th root of det^{-1}),
  /// collapses duplicates within 1e-12, and repairs inverse closure by
  /// appending missing adjoints with derived labels. Every repair is reported
  /// through repair_log; a set that cannot be made sound is rejected.
  static GateSet build(std::string name, int dim,
                       const std::vector<std::pair<std::string, UMatrix>>& raw,
                       std::vector<std::string>* repair_log = nullptr,
                       const Tolerances& tol = default_tolerances());

  const std::string& name() const { return name_; }
  int dim() const { return dim_; }
  int size() const { return static_cast<int>(gates_.size()); }
  const Gate& gate(int i) const { return gates_.at(i); }
  const std::vector<Gate>& gates() const { return gates_; }

  /// Index of the gate whose matrix is the adjoint of gate i.
  int inverse_index(int i) const { return inverse_index_.at(i); }

  int index_of(const std::string& label) const;

 private:
  GateSet() = default;
  std::string name_;
  int dim_ = 0;
  std::vector<Gate> gates_;
  std::vector<int> inverse_index_;
};

/// Sequence of gate indices; the synthesis output currency. The value cache
/// is filled lazily and idempotently (same product either way), so concurrent
/// fills behave as if computed once. Words from different gate sets must not
/// be mixed; the indices carry no set reference.
struct Word {
  std::vector<int> indices;
  mutable std::optional<UMatrix> cached_value;

  Word() = default;
  explicit Word(std::vector<int> idx) : indices(std::move(idx)) {}

  int length() const { return static_cast<int>(indices.size()); }
};

/// Ordered product of the word's gates, index 0 applied first in the product
/// written left-to-right: value = g[i1] * g[i2] * ... * g[im].
const UMatrix& word_value(const Word& w, const GateSet& gs,
                          const Tolerances& tol = default_tolerances());

/// Reversed indices with each index replaced by its inverse gate; the value
/// is the adjoint of the input's value.
Word word_inverse(const Word& w, const GateSet& gs);

Word word_concat(const Word& u, const Word& v);

/// Hadamard, K = diag(1, i) and T = diag(1, e^{i pi/8}) on every qubit, plus
/// CNOT on every ordered adjacent pair for n_qubits >= 2, all lifted to
/// SU(2^n) and closed under adjoints. n_qubits in [1, 4].
GateSet standard_gateset(int n_qubits,
                         std::vector<std::string>* repair_log = nullptr,
                         const Tolerances& tol = default_tolerances());

std::string gateset_to_json(const GateSet& gs);
GateSet gateset_from_json_text(const std::string& text,
                               std::vector<std::string>* repair_log = nullptr,
                               const Tolerances& tol = default_tolerances());

/// Hash of the canonical serialization; nets embed it to pin their gate set.
std::string gateset_hash(const GateSet& gs);

}  // namespace sknet
