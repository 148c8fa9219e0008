#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "sknet/gates.hpp"
#include "sknet/matcore.hpp"

namespace sknet {

/// Parameters of a shell-net chain: shells Gamma_0..Gamma_k with radii
/// r_i = 2/q^i and coverage delta_i = 2/q^{i+1}.
struct NetParams {
  double q = 2.0;         ///< quality ratio, 1 < q < 1/epsilon
  double epsilon = 0.1;   ///< target resolution in (0, 1)
  int max_word_len = 16;  ///< L, cap on stored word lengths
  int dim = 2;

  /// k = ceil((1 + ln(1/epsilon)) / ln q), natural logs on both sides.
  int shell_count() const;
  double shell_radius(int i) const;  ///< r_i = 2 / q^i
  double shell_delta(int i) const;   ///< delta_i = 2 / q^{i+1}
  void validate() const;
};

/// The unique i in [0, k] whose window [2/q^{i+1}, 2/q^i] contains delta,
/// lower index preferred on exact boundary ties. Empty when delta exceeds the
/// unitary diameter 2 or falls below the deepest window.
std::optional<int> shell_index(double delta, const NetParams& params);

struct ShellEntry {
  Word word;
  UMatrix value = UMatrix::zero(1);  // assigned on construction
  double dist_to_identity = 0.0;
};

/// The chain {Gamma_i}: one sparse annulus net per shell, identity included
/// everywhere. Inserts enforce the membership window and 1-sparseness; the
/// structure never repairs a violating element silently.
class ShellNet {
 public:
  ShellNet(NetParams params, std::string gate_set_name, std::string gate_set_hash);

  const NetParams& params() const { return params_; }
  const std::string& gate_set_name() const { return gate_set_name_; }
  const std::string& gate_set_hash() const { return gate_set_hash_; }

  int shell_count() const { return static_cast<int>(shells_.size()) - 1; }  // shells 0..k
  const std::vector<ShellEntry>& shell(int i) const { return shells_.at(i); }

  /// Window + sparseness gated insert; returns false when an existing element
  /// sits closer than delta_i (the candidate is redundant, not an error).
  bool try_insert(int shell_idx, ShellEntry entry,
                  const Tolerances& tol = default_tolerances());

  /// Smallest distance from target to any element of the shell (with the
  /// element index), linear scan with a Frobenius prefilter.
  std::pair<double, int> nearest(int shell_idx, const UMatrix& target,
                                 const Tolerances& tol = default_tolerances()) const;

  /// True when some element lies strictly within radius of target.
  bool any_within(int shell_idx, const UMatrix& target, double radius,
                  const Tolerances& tol = default_tolerances()) const;

  int total_elements() const;  ///< identity entries excluded
  int max_word_length(int shell_idx) const;

 private:
  NetParams params_;
  std::string gate_set_name_;
  std::string gate_set_hash_;
  std::vector<std::vector<ShellEntry>> shells_;
};

struct BuildLogEntry {
  int sweep = 0;
  int shell = 0;
  int word_len = 0;
  double dist_to_identity = 0.0;
};

struct BuildLog {
  std::vector<BuildLogEntry> insertions;
  std::vector<int> additions_per_sweep;  // index 0 = gate initialization pass
  long divisions_checked = 0;            // every one passed its asserted bound
  std::string to_text() const;
};

/// Breadth-first enumeration of all words up to max_len with duplicate-matrix
/// pruning at 1e-10 (first hit keeps the shorter word), each distinct value
/// routed to its shell. Refuses |G|^max_len beyond 1e8 estimated nodes.
ShellNet build_exhaustive(const GateSet& gs, const NetParams& params, int max_len,
                          const Tolerances& tol = default_tolerances());

/// Exhaustive enumeration routed into shell 0 only; the cheap seed the
/// heuristic builder starts from.
ShellNet build_seed_shell0(const GateSet& gs, const NetParams& params, int max_len,
                           const Tolerances& tol = default_tolerances());

/// The main heuristic: sweep candidates h = g * gamma; insert where the shell
/// has room, otherwise divide by the blocking element and re-descend; discard
/// below epsilon or beyond L; stop when a full sweep adds nothing.
/// Deterministic: gates in set order crossed with elements in insertion order.
ShellNet build_heuristic(const GateSet& gs, const NetParams& params,
                         const ShellNet& seed_net, BuildLog* log = nullptr,
                         const Tolerances& tol = default_tolerances());

/// Complementary speedup: from shell i at (r, r/q) with q > 4, emit
/// U V W^{-1} over U, V in the inner half H, W the nearest shell element with
/// dist(UV, W) <= r/q. Returns a candidate net populated at shell i+1 whose
/// net property must be confirmed by audit, never assumed.
ShellNet build_complement(const ShellNet& base, int shell_idx, const GateSet& gs,
                          const Tolerances& tol = default_tolerances());

struct CoverageReport {
  int shell_index = 0;
  int samples_tested = 0;
  int covered_count = 0;
  double worst_gap = 0.0;
  bool covered_verdict = false;
  bool membership_ok = false;
  bool sparseness_ok = false;
  std::uint64_t sampling_seed = 0;
};

/// Empirical stand-in for the unprovable net property: stratified samples per
/// shell annulus, coverage verdict at delta_i (1 + 1e-6), plus exhaustive
/// re-verification of membership windows and pairwise sparseness.
std::vector<CoverageReport> audit_net(const ShellNet& net, int samples_per_shell,
                                      std::uint64_t seed,
                                      const Tolerances& tol = default_tolerances());

struct ZoomResult {
  Word word;
  UMatrix value = UMatrix::zero(1);  // assigned on synthesis
  double achieved = 0.0;
};

/// Zooming in: per shell pick the nearest element, quotient it out of the
/// residual, and return the product U_0 U_1 ... U_k with the achieved distance
/// measured directly (heuristic shells carry no coverage proof).
ZoomResult zoom_synthesize(const UMatrix& target, const ShellNet& net,
                           const Tolerances& tol = default_tolerances());

struct TelescopeResult {
  bool pass = false;
  int samples_tested = 0;
  int failing_sample = -1;
  double failing_gap = 0.0;
  std::optional<UMatrix> witness;
};

/// Telescoping diagnostic: Gamma_1 Gamma_2 should delta_2-cover S_{r_1} when
/// delta_1 <= r_2. Greedy nearest pair first, exhaustive pair fallback at desk
/// sizes before declaring a failure.
TelescopeResult telescope_check(const ShellNet& net1, int shell1, const ShellNet& net2,
                                int shell2, int samples, std::uint64_t seed,
                                const Tolerances& tol = default_tolerances());

/// {"params": {...}, "gate_set_hash": ..., "shells": [[{"word": [...],
/// "dist": ...}, ...], ...]}; matrices are recomputed on load and re-validated
/// against the stored distances within 1e-9.
std::string net_to_json(const ShellNet& net);
ShellNet net_from_json_text(const std::string& text, const GateSet& gs,
                            const Tolerances& tol = default_tolerances());

}  // namespace sknet
