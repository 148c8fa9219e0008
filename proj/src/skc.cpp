#include "sknet/skc.hpp"

#include <cmath>
#include <sstream>

#include "sknet/json_io.hpp"

namespace sknet {
namespace {

constexpr double kIdentityTol = 1e-10;  // commutator identity check
constexpr double kCertSlack = 1e-12;    // float slack on proven bounds

UMatrix diagonal_part(const UMatrix& h) {
  UMatrix d(h.dim());
  for (int i = 0; i < h.dim(); ++i) d(i, i) = h(i, i);
  return d;
}

}  // namespace

SKConstants SKConstants::for_dim(int d) {
  if (d < 2 || d > 64) throw ValidationError("sk constants: dimension out of range");
  SKConstants c;
  c.dim = d;
  const double half_pairs = d * (d - 1) / 2.0;
  c.c_gc1 = 8.0 * std::pow(half_pairs, 1.5);
  c.c_gc2 = std::sqrt(static_cast<double>(d)) * std::sqrt((d - 1) / 2.0);
  c.c_approx = 16.0 * std::sqrt(half_pairs) + d + c.c_gc1;
  c.eps0_max = 1.0 / (c.c_approx * c.c_approx);
  return c;
}

CommutatorPair decompose_offdiag(const UMatrix& h, const Tolerances& tol) {
  const int d = h.dim();
  if (!h.is_hermitian(tol.unitary_tol)) throw ValidationError("decompose_offdiag: not Hermitian");
  for (int i = 0; i < d; ++i)
    if (std::abs(h(i, i)) > tol.unitary_tol)
      throw ValidationError("decompose_offdiag: diagonal not zero");

  UMatrix g_raw(d);
  for (int j = 0; j < d; ++j) g_raw(j, j) = -(d - 1) / 2.0 + j;

  UMatrix f_raw(d);
  for (int j = 0; j < d; ++j)
    for (int k = 0; k < d; ++k)
      if (j != k) f_raw(j, k) = Complex(0.0, 1.0) * h(j, k) / static_cast<double>(k - j);

  const double fn = op_norm(f_raw, tol);
  CommutatorPair pair;
  if (fn == 0.0) {
    pair.f = UMatrix::zero(d);
    pair.g = UMatrix::zero(d);
    pair.norm_bound = 0.0;
    return pair;
  }

  const double gn = op_norm(g_raw, tol);  // (d-1)/2 exactly
  const double alpha = std::sqrt(gn / fn);
  pair.f = f_raw * Complex(alpha, 0.0);
  pair.g = g_raw * Complex(1.0 / alpha, 0.0);
  pair.norm_bound = std::max(op_norm(pair.f, tol), op_norm(pair.g, tol));

  const CMatrix comm = pair.f.eigen() * pair.g.eigen() - pair.g.eigen() * pair.f.eigen();
  const UMatrix residual{CMatrix(comm - Complex(0.0, 1.0) * h.eigen())};
  if (op_norm(residual, tol) > kIdentityTol)
    throw NumericsError("decompose_offdiag: [F, G] strayed from iH");

  const double hn = op_norm(h, tol);
  const double bound = std::pow(d, 0.25) * std::sqrt((d - 1) / 2.0) * std::sqrt(hn);
  if (pair.norm_bound > bound + kCertSlack)
    throw NumericsError("decompose_offdiag: rescaled norms exceed the certified cap");
  return pair;
}

std::pair<UMatrix, UMatrix> offdiagonalize(const UMatrix& diag, const Tolerances& tol) {
  const int d = diag.dim();
  for (int i = 0; i < d; ++i)
    for (int j = 0; j < d; ++j)
      if (i != j && std::abs(diag(i, j)) > tol.unitary_tol)
        throw ValidationError("offdiagonalize: input not diagonal");
  if (!diag.is_hermitian(tol.unitary_tol))
    throw ValidationError("offdiagonalize: input not Hermitian");
  if (std::abs(diag.trace()) > tol.unitary_tol)
    throw ValidationError("offdiagonalize: input not traceless");

  UMatrix fourier(d);
  const double scale = 1.0 / std::sqrt(static_cast<double>(d));
  for (int j = 0; j < d; ++j)
    for (int k = 0; k < d; ++k)
      fourier(j, k) = scale * std::exp(Complex(0.0, 2.0 * M_PI * j * k / d));

  UMatrix off = fourier * diag * fourier.adjoint();
  return {std::move(off), std::move(fourier)};
}

LambdaDecomposition decompose_lambda(const UMatrix& lambda, const SKConstants& consts,
                                     const Tolerances& tol) {
  const int d = lambda.dim();
  if (d != consts.dim) throw ValidationError("decompose_lambda: constants built for another dimension");
  const double eps = dist(lambda, UMatrix::identity(d), tol);
  if (eps >= 1.0) throw BranchError("decompose_lambda: dist(Lambda, I) >= 1");

  const UMatrix h = mlog_principal(lambda, tol);
  const UMatrix h_d = diagonal_part(h);
  const UMatrix h_o = h - h_d;

  LambdaDecomposition out;
  auto& cert = out.certificate;
  cert.epsilon = eps;
  cert.h_norm = op_norm(h, tol);
  cert.ho_norm = op_norm(h_o, tol);
  cert.hd_norm = op_norm(h_d, tol);

  // Split-norm envelope: the weaker of the sqrt(d)||H|| family and the
  // elementary ||H_d|| <= ||H||, ||H_o|| <= 2||H||.
  const double sd = std::sqrt(static_cast<double>(d));
  if (cert.hd_norm > std::min(sd, 1.0) * cert.h_norm + kCertSlack ||
      cert.ho_norm > std::min(sd, 2.0) * cert.h_norm + kCertSlack)
    throw NumericsError("decompose_lambda: H split left the norm envelope");

  // A pair with [F, G] = iX approximates exp(-iX) as a group commutator;
  // the parts enter negated so the assembled product tracks Lambda = exp(iH),
  // not its adjoint.
  const CommutatorPair e_pair = decompose_offdiag(h_o * Complex(-1.0, 0.0), tol);
  out.e1 = mexp(e_pair.f, ExpSign::PlusI, tol);
  out.e2 = mexp(e_pair.g, ExpSign::PlusI, tol);

  const auto [m, fourier] = offdiagonalize(h_d * Complex(-1.0, 0.0), tol);
  const CommutatorPair t_pair = decompose_offdiag(m, tol);
  const UMatrix f1_h{CMatrix(fourier.adjoint().eigen() * t_pair.f.eigen() * fourier.eigen())};
  const UMatrix f2_h{CMatrix(fourier.adjoint().eigen() * t_pair.g.eigen() * fourier.eigen())};
  out.f1 = mexp(f1_h, ExpSign::PlusI, tol);
  out.f2 = mexp(f2_h, ExpSign::PlusI, tol);

  const UMatrix product = group_comm(out.e1, out.e2) * group_comm(out.f1, out.f2);
  cert.product_dist = dist(product, lambda, tol);
  cert.product_bound = consts.c_gc1 * std::pow(eps, 1.5);
  cert.factor_bound = consts.c_gc2 * std::sqrt(eps);

  const UMatrix eye = UMatrix::identity(d);
  cert.factor_dists = {dist(out.e1, eye, tol), dist(out.e2, eye, tol),
                       dist(out.f1, eye, tol), dist(out.f2, eye, tol)};

  // Proven bounds; allow absolute float noise on top (tiny eps drives the
  // bound below the arithmetic floor of the product evaluation).
  const double noise_floor = 64.0 * d * 1e-16;
  if (cert.product_dist > cert.product_bound + noise_floor) {
    std::ostringstream diag_msg;
    diag_msg << "decompose_lambda: certificate violated: measured "
             << cert.product_dist << " > bound " << cert.product_bound
             << " at eps " << eps << ", d " << d;
    throw NumericsError(diag_msg.str());
  }
  for (double fd : cert.factor_dists)
    if (fd > cert.factor_bound + noise_floor)
      throw NumericsError("decompose_lambda: factor strayed past c_gc2 sqrt(eps)");
  return out;
}

NetBackend::NetBackend(const ShellNet& net, const GateSet& gs, const Tolerances& tol)
    : net_(net), gs_(gs), tol_(tol) {
  if (net.params().dim != gs.dim())
    throw ValidationError("net backend: net and gate set dimensions differ");
  if (net.gate_set_hash() != gateset_hash(gs))
    throw ValidationError("net backend: net was built over a different gate set");
}

double NetBackend::epsilon0() const {
  return net_.params().shell_delta(net_.params().shell_count());
}

BaseApproximator::Query NetBackend::query(const UMatrix& target) {
  const ZoomResult z = zoom_synthesize(target, net_, tol_);
  return Query{z.word, z.value, z.achieved};
}

MockBackend::MockBackend(int dim, double epsilon0, std::uint64_t seed)
    : dim_(dim), epsilon0_(epsilon0), seeds_(Rng(seed).split(0x4d4f434bull)) {
  if (dim < 2 || dim > 64) throw ValidationError("mock backend: dimension out of range");
  if (epsilon0 < 0.0 || epsilon0 >= 1.0)
    throw ValidationError("mock backend: epsilon0 outside [0, 1)");
}

BaseApproximator::Query MockBackend::query(const UMatrix& target) {
  if (target.dim() != dim_) throw ValidationError("mock backend: dimension mismatch");
  Query q;
  if (epsilon0_ == 0.0) {
    q.value = target;
    q.achieved = 0.0;
    return q;
  }
  const UMatrix pert = near_identity_sample(dim_, epsilon0_, seeds_.next_u64());
  q.value = target * pert;
  q.achieved = dist(q.value, target);
  q.word.indices = {0};  // placeholder letter so length ledgers stay meaningful
  return q;
}

namespace {

SynthesisResult recurse_impl(const UMatrix& target, int level, BaseApproximator& base,
                             const SKConstants& consts, const Tolerances& tol) {
  if (level == 0) {
    auto q = base.query(target);
    SynthesisResult res;
    res.word = std::move(q.word);
    res.value = std::move(q.value);
    res.achieved = dist(res.value, target, tol);
    res.levels = 0;
    res.ledger = {{base.epsilon0(), res.achieved}};
    res.length = res.word.length();
    return res;
  }

  SynthesisResult prev = recurse_impl(target, level - 1, base, consts, tol);
  const double predicted =
      consts.c_approx * std::pow(prev.ledger.back().predicted, 1.5);

  const UMatrix lambda = target * prev.value.adjoint();
  const double residual = dist(lambda, UMatrix::identity(target.dim()), tol);
  if (residual <= tol.series_tol) {
    // Numerically exact already; decomposing a zero Hamiltonian buys nothing.
    prev.levels = level;
    prev.ledger.push_back({predicted, prev.achieved});
    return prev;
  }

  LambdaDecomposition dec;
  try {
    dec = decompose_lambda(lambda, consts, tol);
  } catch (const BranchError& e) {
    throw BranchError("level " + std::to_string(level) + ": " + e.what());
  }

  const SynthesisResult e1 = recurse_impl(dec.e1, level - 1, base, consts, tol);
  const SynthesisResult e2 = recurse_impl(dec.e2, level - 1, base, consts, tol);
  const SynthesisResult f1 = recurse_impl(dec.f1, level - 1, base, consts, tol);
  const SynthesisResult f2 = recurse_impl(dec.f2, level - 1, base, consts, tol);

  auto comm_word = [&](const SynthesisResult& a, const SynthesisResult& b) {
    return word_concat(word_concat(a.word, b.word),
                       word_concat(base.invert_word(a.word), base.invert_word(b.word)));
  };

  SynthesisResult res;
  res.value = group_comm(e1.value, e2.value) * group_comm(f1.value, f2.value) * prev.value;
  res.word = word_concat(word_concat(comm_word(e1, e2), comm_word(f1, f2)), prev.word);
  res.achieved = dist(res.value, target, tol);
  res.levels = level;
  res.ledger = std::move(prev.ledger);
  res.ledger.push_back({predicted, res.achieved});
  res.length = res.word.length();
  return res;
}

}  // namespace

SynthesisResult sk_recurse(const UMatrix& target, int levels, BaseApproximator& base,
                           const SKConstants& consts, const Tolerances& tol) {
  if (levels < 0) throw ValidationError("sk_recurse: negative level count");
  if (target.dim() != base.dim() || target.dim() != consts.dim)
    throw ValidationError("sk_recurse: dimension mismatch");
  if (!target.is_unitary(target.dim() * tol.unitary_tol) ||
      !target.is_special(target.dim() * tol.unitary_tol))
    throw ValidationError("sk_recurse: target is not special unitary");
  return recurse_impl(target, levels, base, consts, tol);
}

int iterations_needed(double epsilon, double epsilon0) {
  if (!(epsilon > 0.0 && epsilon < epsilon0 && epsilon0 < 1.0))
    throw ValidationError("iterations_needed: require 0 < epsilon < epsilon0 < 1");
  const double expr =
      std::log(std::log(epsilon) / std::log(epsilon0)) / std::log(1.5);
  // smallest integer strictly above expr; the nudge absorbs float error when
  // the expression lands on an exact integer
  return static_cast<int>(std::floor(expr + 1e-9)) + 1;
}

std::string synthesis_to_json(const SynthesisResult& result) {
  std::ostringstream out;
  out << "{\"word\": [";
  for (std::size_t i = 0; i < result.word.indices.size(); ++i) {
    if (i) out << ", ";
    out << result.word.indices[i];
  }
  out << "], \"achieved\": " << format_f17(result.achieved)
      << ", \"levels\": " << result.levels << ", \"ledger\": [";
  for (std::size_t i = 0; i < result.ledger.size(); ++i) {
    if (i) out << ", ";
    out << "{\"predicted\": " << format_f17(result.ledger[i].predicted)
        << ", \"measured\": " << format_f17(result.ledger[i].measured) << "}";
  }
  out << "], \"length\": " << result.length << "}\n";
  return out.str();
}

}  // namespace sknet
