#include "sknet/nets.hpp"

#include <algorithm>
#include <cmath>
#include <nlohmann/json.hpp>
#include <sstream>
#include <unordered_map>

#include "sknet/json_io.hpp"

namespace sknet {
namespace {

constexpr double kDuplicateTol = 1e-10;     // BFS duplicate-matrix collapse
constexpr double kWindowSlack = 1e-9;       // float slack on window/sparseness checks
constexpr double kCoverageSlack = 1e-6;     // relative slack on coverage verdicts
constexpr double kBudgetNodes = 1e8;

// Conclusive three-way test for "op-dist strictly below radius" that only
// falls back to a Jacobi norm when the Frobenius bounds cannot decide
// (op <= frob <= sqrt(d) * op).
bool within_strict(const UMatrix& a, const UMatrix& b, double radius,
                   const Tolerances& tol) {
  const double fd = (a - b).frobenius();
  if (fd < radius) return true;
  if (fd >= std::sqrt(static_cast<double>(a.dim())) * radius) return false;
  return dist(a, b, tol) < radius;
}

}  // namespace

int NetParams::shell_count() const {
  return static_cast<int>(std::ceil((1.0 + std::log(1.0 / epsilon)) / std::log(q)));
}

double NetParams::shell_radius(int i) const { return 2.0 / std::pow(q, i); }

double NetParams::shell_delta(int i) const { return 2.0 / std::pow(q, i + 1); }

void NetParams::validate() const {
  if (!(epsilon > 0.0 && epsilon < 1.0)) throw ValidationError("net params: epsilon outside (0, 1)");
  if (!(q > 1.0 && q < 1.0 / epsilon)) throw ValidationError("net params: require 1 < q < 1/epsilon");
  if (max_word_len < 1) throw ValidationError("net params: L must be >= 1");
  if (dim < 2 || dim > 64) throw ValidationError("net params: dimension out of range");
}

std::optional<int> shell_index(double delta, const NetParams& params) {
  if (delta < 0.0) throw ValidationError("shell_index: negative distance");
  const int k = params.shell_count();
  if (delta > 2.0 * (1.0 + kWindowSlack)) return std::nullopt;
  if (delta >= 2.0) return 0;
  if (delta <= 0.0) return std::nullopt;
  const int guess = static_cast<int>(std::floor(std::log(2.0 / delta) / std::log(params.q)));
  for (int c = std::max(0, guess - 1); c <= std::min(k, guess + 1); ++c) {
    if (params.shell_delta(c) <= delta && delta <= params.shell_radius(c)) return c;
  }
  return std::nullopt;
}

ShellNet::ShellNet(NetParams params, std::string gate_set_name, std::string gate_set_hash)
    : params_(params),
      gate_set_name_(std::move(gate_set_name)),
      gate_set_hash_(std::move(gate_set_hash)) {
  params_.validate();
  shells_.resize(params_.shell_count() + 1);
  for (auto& shell : shells_) {
    ShellEntry identity;
    identity.word = Word{};
    identity.word.cached_value = UMatrix::identity(params_.dim);
    identity.value = UMatrix::identity(params_.dim);
    identity.dist_to_identity = 0.0;
    shell.push_back(std::move(identity));
  }
}

bool ShellNet::try_insert(int shell_idx, ShellEntry entry, const Tolerances& tol) {
  if (shell_idx < 0 || shell_idx > shell_count())
    throw ValidationError("shell insert: index out of range");
  const double delta_i = params_.shell_delta(shell_idx);
  const double r_i = params_.shell_radius(shell_idx);
  if (entry.word.length() > params_.max_word_len)
    throw ValidationError("shell insert: word longer than L");
  if (entry.dist_to_identity < delta_i * (1.0 - kWindowSlack) ||
      entry.dist_to_identity > r_i * (1.0 + kWindowSlack))
    throw ValidationError("shell insert: membership window violated");
  if (any_within(shell_idx, entry.value, delta_i, tol)) return false;
  shells_[shell_idx].push_back(std::move(entry));
  return true;
}

std::pair<double, int> ShellNet::nearest(int shell_idx, const UMatrix& target,
                                         const Tolerances& tol) const {
  const auto& shell = shells_.at(shell_idx);
  const double sd = std::sqrt(static_cast<double>(params_.dim));
  double best = std::numeric_limits<double>::infinity();
  int best_idx = -1;
  for (int j = 0; j < static_cast<int>(shell.size()); ++j) {
    const double fd = (shell[j].value - target).frobenius();
    if (fd / sd >= best) continue;  // cannot strictly improve
    const double d = dist(shell[j].value, target, tol);
    if (d < best) {
      best = d;
      best_idx = j;
    }
  }
  return {best, best_idx};
}

bool ShellNet::any_within(int shell_idx, const UMatrix& target, double radius,
                          const Tolerances& tol) const {
  for (const ShellEntry& e : shells_.at(shell_idx))
    if (within_strict(e.value, target, radius, tol)) return true;
  return false;
}

int ShellNet::total_elements() const {
  int n = 0;
  for (const auto& shell : shells_) n += static_cast<int>(shell.size()) - 1;
  return n;
}

int ShellNet::max_word_length(int shell_idx) const {
  int n = 0;
  for (const ShellEntry& e : shells_.at(shell_idx)) n = std::max(n, e.word.length());
  return n;
}

std::string BuildLog::to_text() const {
  std::ostringstream out;
  out << "# heuristic build log: sweep shell word_len dist\n";
  for (const auto& e : insertions)
    out << e.sweep << " " << e.shell << " " << e.word_len << " "
        << format_f17(e.dist_to_identity) << "\n";
  out << "# additions per sweep:";
  for (int n : additions_per_sweep) out << " " << n;
  out << "\n# divisions checked: " << divisions_checked << " (all within asserted bound)\n";
  return out.str();
}

namespace {

// Near-duplicate index over matrices: quantized entry buckets at a cell size
// far above the duplicate tolerance, probing neighbor cells only for
// coordinates that sit within the tolerance of a cell boundary.
class MatrixDedup {
 public:
  explicit MatrixDedup(int dim) : dim_(dim) {}

  bool contains_within(const UMatrix& m, double tol_dist, const Tolerances& tol) const {
    std::vector<std::pair<long long, int>> coords = quantize(m);
    std::vector<int> boundary;
    for (int i = 0; i < static_cast<int>(coords.size()); ++i)
      if (coords[i].second != 0) boundary.push_back(i);
    if (boundary.size() > 8) boundary.resize(8);  // cap the probe fan-out

    const std::size_t combos = std::size_t{1} << boundary.size();
    std::vector<long long> key(coords.size());
    for (std::size_t mask = 0; mask < combos; ++mask) {
      for (std::size_t i = 0; i < coords.size(); ++i) key[i] = coords[i].first;
      for (std::size_t b = 0; b < boundary.size(); ++b)
        if (mask & (std::size_t{1} << b)) key[boundary[b]] += coords[boundary[b]].second;
      const auto it = buckets_.find(hash_key(key));
      if (it == buckets_.end()) continue;
      for (int id : it->second) {
        if (within_strict(entries_[id], m, tol_dist, tol)) return true;
      }
    }
    return false;
  }

  void insert(const UMatrix& m) {
    std::vector<long long> key;
    key.reserve(2 * dim_ * dim_);
    for (const auto& coord : quantize(m)) key.push_back(coord.first);
    buckets_[hash_key(key)].push_back(static_cast<int>(entries_.size()));
    entries_.push_back(m);
  }

  int size() const { return static_cast<int>(entries_.size()); }

 private:
  // (floor(x/cell), neighbor offset) per real coordinate. Keys of two values
  // within kDuplicateTol differ only at coordinates within the margin of a
  // cell edge; the offset names which neighbor cell to probe there.
  std::vector<std::pair<long long, int>> quantize(const UMatrix& m) const {
    const double cell = 1e-6;
    const double margin = 2.0 * kDuplicateTol / cell;
    std::vector<std::pair<long long, int>> out;
    out.reserve(2 * dim_ * dim_);
    for (int i = 0; i < dim_; ++i) {
      for (int j = 0; j < dim_; ++j) {
        for (double x : {m(i, j).real(), m(i, j).imag()}) {
          const double u = x / cell;
          const double f = std::floor(u);
          const double frac = u - f;
          int offset = 0;
          if (frac < margin) offset = -1;
          if (frac > 1.0 - margin) offset = 1;
          out.emplace_back(static_cast<long long>(f), offset);
        }
      }
    }
    return out;
  }

  static std::uint64_t hash_key(const std::vector<long long>& key) {
    std::uint64_t h = 0xcbf29ce484222325ull;
    for (long long v : key) {
      auto u = static_cast<std::uint64_t>(v);
      for (int b = 0; b < 8; ++b) {
        h ^= (u >> (8 * b)) & 0xff;
        h *= 0x100000001b3ull;
      }
    }
    return h;
  }

  int dim_;
  std::unordered_map<std::uint64_t, std::vector<int>> buckets_;
  std::vector<UMatrix> entries_;
};

ShellNet exhaustive_impl(const GateSet& gs, const NetParams& params, int max_len,
                         bool shell0_only, const Tolerances& tol) {
  params.validate();
  if (gs.dim() != params.dim) throw ValidationError("build: gate set dimension mismatch");
  if (max_len < 0) throw ValidationError("build: negative max_len");
  if (max_len > params.max_word_len)
    throw ValidationError("build: max_len exceeds the word-length cap L");
  if (std::pow(static_cast<double>(gs.size()), max_len) > kBudgetNodes)
    throw BudgetError("build: |G|^max_len exceeds the enumeration budget");

  ShellNet net(params, gs.name(), gateset_hash(gs));
  const UMatrix eye = UMatrix::identity(params.dim);

  MatrixDedup seen(params.dim);
  seen.insert(eye);

  std::vector<ShellEntry> frontier;
  {
    ShellEntry root;
    root.value = eye;
    root.word.cached_value = eye;
    frontier.push_back(std::move(root));
  }

  for (int len = 1; len <= max_len; ++len) {
    std::vector<ShellEntry> next;
    for (const ShellEntry& base : frontier) {
      for (int g = 0; g < gs.size(); ++g) {
        UMatrix value = base.value * gs.gate(g).matrix;
        if (seen.contains_within(value, kDuplicateTol, tol)) continue;
        seen.insert(value);

        ShellEntry e;
        e.word.indices = base.word.indices;
        e.word.indices.push_back(g);
        e.word.cached_value = value;
        e.value = value;
        e.dist_to_identity = dist(value, eye, tol);

        if (const auto idx = shell_index(e.dist_to_identity, params)) {
          if (!shell0_only || *idx == 0) net.try_insert(*idx, e, tol);
        }
        next.push_back(std::move(e));
      }
    }
    frontier = std::move(next);
  }
  return net;
}

}  // namespace

ShellNet build_exhaustive(const GateSet& gs, const NetParams& params, int max_len,
                          const Tolerances& tol) {
  return exhaustive_impl(gs, params, max_len, false, tol);
}

ShellNet build_seed_shell0(const GateSet& gs, const NetParams& params, int max_len,
                           const Tolerances& tol) {
  return exhaustive_impl(gs, params, max_len, true, tol);
}

namespace {

// Candidate cascade of the heuristic: place h, dividing by the nearest
// blocking element until inserted, discarded (<= epsilon or > L) or the
// division bound fails (which would be a numerics bug).
bool place_candidate(ShellNet& net, const GateSet& gs, const UMatrix& eye, Word word,
                     UMatrix value, int sweep, BuildLog* log, const Tolerances& tol) {
  const NetParams& params = net.params();
  while (true) {
    if (word.length() > params.max_word_len) return false;
    const double delta = dist(value, eye, tol);
    if (delta <= params.epsilon) return false;
    const auto idx = shell_index(delta, params);
    if (!idx) return false;
    const double delta_i = params.shell_delta(*idx);

    const auto [best, best_j] = net.nearest(*idx, value, tol);
    if (best >= delta_i) {
      ShellEntry e;
      e.word = word;
      e.word.cached_value = value;
      e.value = value;
      e.dist_to_identity = delta;
      if (!net.try_insert(*idx, std::move(e), tol)) return false;
      if (log) log->insertions.push_back({sweep, *idx, word.length(), delta});
      return true;
    }

    // Divide by the blocking element: d(h gamma^{-1}, I) = d(h, gamma) < delta_i.
    const ShellEntry& gamma = net.shell(*idx)[best_j];
    word = word_concat(word, word_inverse(gamma.word, gs));
    value = value * gamma.value.adjoint();
    if (log) ++log->divisions_checked;
    const double divided = dist(value, eye, tol);
    if (divided > delta_i + kWindowSlack)
      throw NumericsError("heuristic build: division step left dist above 2/q^{i+1}");
  }
}

}  // namespace

ShellNet build_heuristic(const GateSet& gs, const NetParams& params,
                         const ShellNet& seed_net, BuildLog* log, const Tolerances& tol) {
  params.validate();
  if (gs.dim() != params.dim) throw ValidationError("build: gate set dimension mismatch");
  if (seed_net.gate_set_hash() != gateset_hash(gs))
    throw ValidationError("build: seed net was built over a different gate set");

  ShellNet net(params, gs.name(), gateset_hash(gs));
  const UMatrix eye = UMatrix::identity(params.dim);

  // Adopt the seed (canonically a shell-0 net), rerouted under these params.
  for (int i = 0; i <= seed_net.shell_count(); ++i) {
    for (const ShellEntry& e : seed_net.shell(i)) {
      if (e.word.length() == 0 || e.word.length() > params.max_word_len) continue;
      if (const auto idx = shell_index(e.dist_to_identity, params)) net.try_insert(*idx, e, tol);
    }
  }
  bool shell0_seeded = false;
  for (const ShellEntry& e : net.shell(0))
    if (e.word.length() > 0) shell0_seeded = true;
  if (!shell0_seeded) throw ValidationError("build: empty seed shell 0");

  BuildLog local_log;
  if (!log) log = &local_log;

  // Gate initialization pass (logged as sweep 0).
  int added = 0;
  for (int g = 0; g < gs.size(); ++g) {
    const Gate& gate = gs.gate(g);
    const double delta = dist(gate.matrix, eye, tol);
    if (delta <= params.epsilon) continue;
    if (const auto idx = shell_index(delta, params)) {
      ShellEntry e;
      e.word.indices = {g};
      e.word.cached_value = gate.matrix;
      e.value = gate.matrix;
      e.dist_to_identity = delta;
      if (net.try_insert(*idx, std::move(e), tol)) {
        log->insertions.push_back({0, *idx, 1, delta});
        ++added;
      }
    }
  }
  log->additions_per_sweep.push_back(added);

  for (int sweep = 1;; ++sweep) {
    // Snapshot H = G x (union of shells) at sweep start; insertions during
    // the sweep join the candidate pool next sweep but block collisions now.
    std::vector<int> shell_sizes;
    shell_sizes.reserve(net.shell_count() + 1);
    for (int i = 0; i <= net.shell_count(); ++i)
      shell_sizes.push_back(static_cast<int>(net.shell(i).size()));

    added = 0;
    for (int g = 0; g < gs.size(); ++g) {
      for (int i = 0; i <= net.shell_count(); ++i) {
        for (int j = 0; j < shell_sizes[i]; ++j) {
          const ShellEntry& gamma = net.shell(i)[j];
          Word word;
          word.indices.reserve(1 + gamma.word.indices.size());
          word.indices.push_back(g);
          word.indices.insert(word.indices.end(), gamma.word.indices.begin(),
                              gamma.word.indices.end());
          UMatrix value = gs.gate(g).matrix * gamma.value;
          if (place_candidate(net, gs, eye, std::move(word), std::move(value), sweep, log,
                              tol))
            ++added;
        }
      }
    }
    log->additions_per_sweep.push_back(added);
    if (added == 0) break;
  }
  return net;
}

ShellNet build_complement(const ShellNet& base, int shell_idx, const GateSet& gs,
                          const Tolerances& tol) {
  const NetParams& params = base.params();
  if (!(params.q > 4.0)) throw ValidationError("complement: requires q > 4");
  if (shell_idx < 0 || shell_idx >= base.shell_count())
    throw ValidationError("complement: shell index must leave room for shell i+1");
  if (base.gate_set_hash() != gateset_hash(gs))
    throw ValidationError("complement: net was built over a different gate set");

  const double r = params.shell_radius(shell_idx);
  const int target_shell = shell_idx + 1;
  const double r_t = params.shell_radius(target_shell);     // r / q
  const double delta_t = params.shell_delta(target_shell);  // r / q^2

  const auto& gamma = base.shell(shell_idx);
  std::vector<int> inner;  // H = Gamma intersected with S_{r/2}
  for (int j = 0; j < static_cast<int>(gamma.size()); ++j)
    if (gamma[j].dist_to_identity <= r / 2.0) inner.push_back(j);

  ShellNet out(params, base.gate_set_name(), base.gate_set_hash());
  const UMatrix eye = UMatrix::identity(params.dim);

  for (int ui : inner) {
    for (int vi : inner) {
      const UMatrix product = gamma[ui].value * gamma[vi].value;
      // Nearest W with d(UV, W) <= r/q; one emission per (U, V) pair keeps
      // |Gamma'| <= |H|^2.
      const auto [best, wj] = base.nearest(shell_idx, product, tol);
      if (wj < 0 || best > r_t) continue;

      UMatrix value = product * gamma[wj].value.adjoint();
      const double d_i = dist(value, eye, tol);
      if (d_i > r_t + kWindowSlack)
        throw NumericsError("complement: emitted element left the r/q ball");
      if (d_i < delta_t || d_i > r_t) continue;  // outside the candidate window

      ShellEntry e;
      e.word = word_concat(word_concat(gamma[ui].word, gamma[vi].word),
                           word_inverse(gamma[wj].word, gs));
      e.word.cached_value = value;
      e.value = value;
      e.dist_to_identity = d_i;
      if (e.word.length() > params.max_word_len) continue;
      out.try_insert(target_shell, std::move(e), tol);
    }
  }
  return out;
}

std::vector<CoverageReport> audit_net(const ShellNet& net, int samples_per_shell,
                                      std::uint64_t seed, const Tolerances& tol) {
  if (samples_per_shell < 1) throw ValidationError("audit: samples_per_shell must be >= 1");
  const NetParams& params = net.params();
  std::vector<CoverageReport> reports;

  for (int i = 0; i <= net.shell_count(); ++i) {
    const auto& shell = net.shell(i);
    const double r_i = params.shell_radius(i);
    const double delta_i = params.shell_delta(i);

    CoverageReport rep;
    rep.shell_index = i;
    rep.samples_tested = samples_per_shell;
    rep.sampling_seed = seed;

    rep.membership_ok = true;
    for (const ShellEntry& e : shell) {
      if (e.word.length() == 0) continue;
      if (e.dist_to_identity < delta_i * (1.0 - kWindowSlack) ||
          e.dist_to_identity > r_i * (1.0 + kWindowSlack) ||
          e.word.length() > params.max_word_len)
        rep.membership_ok = false;
    }

    rep.sparseness_ok = true;
    const double sd = std::sqrt(static_cast<double>(params.dim));
    for (std::size_t a = 0; a < shell.size() && rep.sparseness_ok; ++a) {
      for (std::size_t b = a + 1; b < shell.size(); ++b) {
        const double floor_dist = delta_i * (1.0 - kWindowSlack);
        const double fd = (shell[a].value - shell[b].value).frobenius();
        if (fd >= sd * floor_dist) continue;
        if (dist(shell[a].value, shell[b].value, tol) < floor_dist) {
          rep.sparseness_ok = false;
          break;
        }
      }
    }

    Rng rng = Rng(seed).split(static_cast<std::uint64_t>(i));
    rep.worst_gap = 0.0;
    for (int s = 0; s < samples_per_shell; ++s) {
      const double target_dist =
          delta_i + (r_i - delta_i) * (s + 0.5) / samples_per_shell;
      const UMatrix sample =
          near_identity_sample_wide(params.dim, target_dist, rng.next_u64(), tol);
      const double gap = net.nearest(i, sample, tol).first;
      if (gap <= delta_i * (1.0 + kCoverageSlack)) ++rep.covered_count;
      rep.worst_gap = std::max(rep.worst_gap, gap);
    }
    rep.covered_verdict = rep.worst_gap <= delta_i * (1.0 + kCoverageSlack);
    reports.push_back(rep);
  }
  return reports;
}

ZoomResult zoom_synthesize(const UMatrix& target, const ShellNet& net,
                           const Tolerances& tol) {
  if (target.dim() != net.params().dim) throw ValidationError("zoom: dimension mismatch");
  if (!target.is_unitary(target.dim() * tol.unitary_tol) ||
      !target.is_special(target.dim() * tol.unitary_tol))
    throw ValidationError("zoom: target is not special unitary within tolerance");

  ZoomResult result;
  result.value = UMatrix::identity(net.params().dim);
  UMatrix residual = target;

  for (int i = 0; i <= net.shell_count(); ++i) {
    if (net.shell(i).empty())
      throw SynthesisGapError("zoom: shell " + std::to_string(i) + " is empty");
    const auto [best, j] = net.nearest(i, residual, tol);
    const ShellEntry& pick = net.shell(i)[j];
    result.word = word_concat(result.word, pick.word);
    result.value = result.value * pick.value;
    residual = pick.value.adjoint() * residual;  // left quotient keeps U_0 U_1 ... order
  }
  result.achieved = dist(result.value, target, tol);
  return result;
}

TelescopeResult telescope_check(const ShellNet& net1, int shell1, const ShellNet& net2,
                                int shell2, int samples, std::uint64_t seed,
                                const Tolerances& tol) {
  if (samples < 1) throw ValidationError("telescope: samples must be >= 1");
  const double r1 = net1.params().shell_radius(shell1);
  const double delta1 = net1.params().shell_delta(shell1);
  const double r2 = net2.params().shell_radius(shell2);
  const double delta2 = net2.params().shell_delta(shell2);
  if (delta1 > r2 * (1.0 + kWindowSlack))
    throw ValidationError("telescope: requires delta_1 <= r_2");
  if (net1.params().dim != net2.params().dim)
    throw ValidationError("telescope: dimension mismatch");

  const auto& g1 = net1.shell(shell1);
  const auto& g2 = net2.shell(shell2);
  const double accept = delta2 * (1.0 + kCoverageSlack);

  TelescopeResult result;
  result.samples_tested = samples;
  Rng rng = Rng(seed).split(0x54454cull);

  for (int s = 0; s < samples; ++s) {
    const double target_dist = r1 * (s + 0.5) / samples;
    const UMatrix target =
        near_identity_sample_wide(net1.params().dim, target_dist, rng.next_u64(), tol);

    const auto [d1, j1] = net1.nearest(shell1, target, tol);
    const UMatrix residual = g1[j1].value.adjoint() * target;
    const auto [d2, j2] = net2.nearest(shell2, residual, tol);
    double best = dist(g1[j1].value * g2[j2].value, target, tol);

    if (best > accept &&
        static_cast<long>(g1.size()) * static_cast<long>(g2.size()) <= 250000) {
      for (const ShellEntry& u1 : g1) {
        for (const ShellEntry& u2 : g2) {
          best = std::min(best, dist(u1.value * u2.value, target, tol));
          if (best <= accept) break;
        }
        if (best <= accept) break;
      }
    }
    if (best > accept) {
      result.pass = false;
      result.failing_sample = s;
      result.failing_gap = best;
      result.witness = target;
      return result;
    }
  }
  result.pass = true;
  return result;
}

std::string net_to_json(const ShellNet& net) {
  const NetParams& p = net.params();
  std::ostringstream out;
  out << "{\"params\": {\"q\": " << format_f17(p.q) << ", \"epsilon\": "
      << format_f17(p.epsilon) << ", \"L\": " << p.max_word_len << ", \"d\": " << p.dim
      << ", \"k\": " << p.shell_count() << "}, \"gate_set_hash\": \""
      << net.gate_set_hash() << "\", \"shells\": [";
  for (int i = 0; i <= net.shell_count(); ++i) {
    if (i) out << ", ";
    out << "[";
    bool first = true;
    for (const ShellEntry& e : net.shell(i)) {
      if (!first) out << ", ";
      first = false;
      out << "{\"word\": [";
      for (std::size_t t = 0; t < e.word.indices.size(); ++t) {
        if (t) out << ", ";
        out << e.word.indices[t];
      }
      out << "], \"dist\": " << format_f17(e.dist_to_identity) << "}";
    }
    out << "]";
  }
  out << "]}\n";
  return out.str();
}

ShellNet net_from_json_text(const std::string& text, const GateSet& gs,
                            const Tolerances& tol) {
  const auto j = nlohmann::json::parse(text);
  if (!j.contains("params") || !j.contains("gate_set_hash") || !j.contains("shells"))
    throw ValidationError("net JSON: expected {params, gate_set_hash, shells}");

  const auto& pj = j.at("params");
  NetParams params;
  params.q = pj.at("q").get<double>();
  params.epsilon = pj.at("epsilon").get<double>();
  params.max_word_len = pj.at("L").get<int>();
  params.dim = pj.at("d").get<int>();
  params.validate();
  if (pj.at("k").get<int>() != params.shell_count())
    throw ValidationError("net JSON: stored k does not match the params formula");

  const std::string hash = j.at("gate_set_hash").get<std::string>();
  if (hash != gateset_hash(gs))
    throw ValidationError("net JSON: gate set hash mismatch; wrong gate set supplied");

  ShellNet net(params, gs.name(), hash);
  const auto& shells = j.at("shells");
  if (static_cast<int>(shells.size()) != params.shell_count() + 1)
    throw ValidationError("net JSON: shell count mismatch");

  const UMatrix eye = UMatrix::identity(params.dim);
  for (int i = 0; i <= params.shell_count(); ++i) {
    for (const auto& ej : shells.at(i)) {
      Word word;
      for (const auto& idx : ej.at("word")) word.indices.push_back(idx.get<int>());
      if (word.length() == 0) continue;  // identity is implicit in every shell

      ShellEntry e;
      e.value = word_value(word, gs, tol);
      e.word = std::move(word);
      e.word.cached_value = e.value;
      e.dist_to_identity = dist(e.value, eye, tol);
      const double stored = ej.at("dist").get<double>();
      if (std::abs(stored - e.dist_to_identity) > 1e-9)
        throw ValidationError("net JSON: stored dist disagrees with the recomputed word value");
      if (!net.try_insert(i, std::move(e), tol))
        throw ValidationError("net JSON: stored shell violates sparseness");
    }
  }
  return net;
}

}  // namespace sknet
