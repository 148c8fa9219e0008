#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "sknet/skc.hpp"

using namespace sknet;

namespace {

UMatrix random_offdiag_hermitian(int d, Rng& rng, double norm) {
  UMatrix h(d);
  for (int i = 0; i < d; ++i)
    for (int j = i + 1; j < d; ++j) {
      const Complex z = rng.complex_gaussian();
      h(i, j) = z;
      h(j, i) = std::conj(z);
    }
  const double n = op_norm(h);
  if (n == 0.0) return random_offdiag_hermitian(d, rng, norm);
  return h * Complex(norm / n, 0.0);
}

UMatrix random_diag_traceless(int d, Rng& rng, double norm) {
  UMatrix h(d);
  double mean = 0.0;
  for (int i = 0; i < d; ++i) {
    const double x = rng.gaussian();
    h(i, i) = x;
    mean += x / d;
  }
  for (int i = 0; i < d; ++i) h(i, i) -= mean;
  const double n = op_norm(h);
  if (n == 0.0) return random_diag_traceless(d, rng, norm);
  return h * Complex(norm / n, 0.0);
}

}  // namespace

TEST_CASE("recursion constants at small dimensions") {
  const SKConstants c2 = SKConstants::for_dim(2);
  CHECK(c2.c_gc1 == doctest::Approx(8.0));
  CHECK(c2.c_gc2 == doctest::Approx(1.0));
  CHECK(c2.c_approx == doctest::Approx(26.0));
  CHECK(c2.eps0_max == doctest::Approx(1.0 / 676.0));

  const SKConstants c3 = SKConstants::for_dim(3);
  CHECK(c3.c_gc1 == doctest::Approx(8.0 * std::pow(3.0, 1.5)));
  CHECK(c3.eps0_max < 1.0);
  CHECK(c3.eps0_max > 0.0);
}

TEST_CASE("off-diagonal decomposition on the Pauli X closed form") {
  UMatrix x(2);
  x(0, 1) = 1.0;
  x(1, 0) = 1.0;
  const CommutatorPair pair = decompose_offdiag(x);

  // Balanced norms sqrt(1 * 1/2), under the cap 2^{1/4} sqrt(1/2).
  CHECK(op_norm(pair.f) == doctest::Approx(std::sqrt(0.5)).epsilon(1e-10));
  CHECK(op_norm(pair.g) == doctest::Approx(std::sqrt(0.5)).epsilon(1e-10));
  CHECK(pair.norm_bound <= std::pow(2.0, 0.25) * std::sqrt(0.5) + 1e-12);

  const CMatrix comm = pair.f.eigen() * pair.g.eigen() - pair.g.eigen() * pair.f.eigen();
  CHECK(op_norm(UMatrix{CMatrix(comm - Complex(0, 1) * x.eigen())}) <= 1e-10);
}

TEST_CASE("off-diagonal decomposition: zero input and guards") {
  const CommutatorPair zero = decompose_offdiag(UMatrix::zero(3));
  CHECK(op_norm(zero.f) == 0.0);
  CHECK(op_norm(zero.g) == 0.0);
  CHECK(zero.norm_bound == 0.0);

  UMatrix diag(2);
  diag(0, 0) = 0.5;
  diag(1, 1) = -0.5;
  CHECK_THROWS_AS(decompose_offdiag(diag), ValidationError);
}

TEST_CASE("off-diagonal decomposition across dimensions") {
  Rng rng(2711);
  for (int d = 3; d <= 8; ++d) {
    for (int trial = 0; trial < 30; ++trial) {
      Rng sub = rng.split(d * 1000 + trial);
      const double hn = 0.05 + 0.5 * sub.uniform();
      const UMatrix h = random_offdiag_hermitian(d, sub, hn);
      const CommutatorPair p = decompose_offdiag(h);

      const CMatrix comm = p.f.eigen() * p.g.eigen() - p.g.eigen() * p.f.eigen();
      CHECK(op_norm(UMatrix{CMatrix(comm - Complex(0, 1) * h.eigen())}) <= 1e-10);
      CHECK(std::max(op_norm(p.f), op_norm(p.g)) <=
            std::pow(d, 0.25) * std::sqrt((d - 1) / 2.0) * std::sqrt(hn) + 1e-12);
    }
  }
}

TEST_CASE("fourier off-diagonalization") {
  const auto [zero_m, phi0] = offdiagonalize(UMatrix::zero(3));
  CHECK(op_norm(zero_m) == 0.0);
  CHECK(phi0.is_unitary(1e-12));

  UMatrix d3(3);
  d3(0, 0) = 1.0;
  d3(2, 2) = -1.0;
  const auto [m, phi] = offdiagonalize(d3);
  for (int i = 0; i < 3; ++i) CHECK(std::abs(m(i, i)) <= 1e-12);
  CHECK(op_norm(m) == doctest::Approx(1.0).epsilon(1e-10));  // conjugation preserves norm

  UMatrix nondiag(2);
  nondiag(0, 1) = 0.3;
  nondiag(1, 0) = 0.3;
  CHECK_THROWS_AS(offdiagonalize(nondiag), ValidationError);
}

TEST_CASE("fourier diagonal entries vanish across dimensions") {
  Rng rng(515);
  for (int d = 2; d <= 8; ++d) {
    for (int trial = 0; trial < 20; ++trial) {
      Rng sub = rng.split(d * 100 + trial);
      const UMatrix diag = random_diag_traceless(d, sub, 0.2 + 0.6 * sub.uniform());
      const auto [m, phi] = offdiagonalize(diag);
      for (int i = 0; i < d; ++i) CHECK(std::abs(m(i, i)) <= 1e-12);
    }
  }
}

TEST_CASE("conjugation transports commutators") {
  Rng rng(616);
  for (int trial = 0; trial < 40; ++trial) {
    const int d = 2 + trial % 4;
    Rng sub = rng.split(trial);
    const UMatrix a = haar_sample(d, sub.next_u64());
    const UMatrix b = haar_sample(d, sub.next_u64());
    const UMatrix s = haar_sample(d, sub.next_u64());
    const UMatrix lhs = s.adjoint() * group_comm(a, b) * s;
    const UMatrix rhs = group_comm(s.adjoint() * a * s, s.adjoint() * b * s);
    CHECK(dist(lhs, rhs) <= 1e-12);
  }
}

TEST_CASE("lambda decomposition: identity and branch guard") {
  const SKConstants c = SKConstants::for_dim(3);
  const LambdaDecomposition dec = decompose_lambda(UMatrix::identity(3), c);
  CHECK(dec.certificate.product_dist <= 1e-13);
  CHECK(dist(dec.e1, UMatrix::identity(3)) <= 1e-13);

  UMatrix far(3);
  far(0, 0) = std::exp(Complex(0.0, 2.0));
  far(1, 1) = std::exp(Complex(0.0, -2.0));
  far(2, 2) = 1.0;
  CHECK_THROWS_AS(decompose_lambda(far, c), BranchError);
}

TEST_CASE("lambda decomposition certificate at d in {2, 3, 4}") {
  for (int d : {2, 3, 4}) {
    const SKConstants c = SKConstants::for_dim(d);
    for (int trial = 0; trial < 25; ++trial) {
      const double eps = 1e-2;
      const UMatrix lambda = near_identity_sample(d, eps, 9000 + 17 * d + trial);
      const LambdaDecomposition dec = decompose_lambda(lambda, c);
      const auto& cert = dec.certificate;
      CHECK(cert.product_dist <= cert.product_bound);
      CHECK(cert.epsilon <= eps + 1e-12);
      for (double fd : cert.factor_dists) CHECK(fd <= cert.factor_bound + 1e-12);
    }
  }
}

TEST_CASE("lambda certificate holds up to eps 0.1 across dimensions") {
  Rng rng(717);
  for (int d = 2; d <= 8; ++d) {
    const SKConstants c = SKConstants::for_dim(d);
    Rng sub = rng.split(d);
    for (int trial = 0; trial < 100; ++trial) {
      const double eps = 0.002 + 0.098 * sub.uniform();
      const UMatrix lambda = near_identity_sample(d, eps, sub.next_u64());
      const LambdaDecomposition dec = decompose_lambda(lambda, c);  // hard-errors on violation
      CHECK(dec.certificate.product_dist <= dec.certificate.product_bound);
    }
  }
}

TEST_CASE("recursion with an exact mock returns the target at every level") {
  MockBackend base(2, 0.0, 1);
  const SKConstants c = SKConstants::for_dim(2);
  const UMatrix u = haar_sample(2, 77);
  for (int n : {0, 1, 3}) {
    const SynthesisResult r = sk_recurse(u, n, base, c);
    CHECK(r.achieved <= 1e-14);
    CHECK(r.levels == n);
    CHECK(static_cast<int>(r.ledger.size()) == n + 1);
  }
}

TEST_CASE("recursion contracts under the mock at epsilon0 = 1e-4") {
  const SKConstants c = SKConstants::for_dim(2);
  for (int t = 0; t < 4; ++t) {
    MockBackend base(2, 1e-4, 100 + t);
    const UMatrix u = haar_sample(2, 7000 + t);
    const SynthesisResult r = sk_recurse(u, 3, base, c);

    REQUIRE(r.ledger.size() == 4);
    for (int i = 0; i <= 3; ++i) {
      CHECK(r.ledger[i].measured <= r.ledger[i].predicted * (1.0 + 1e-9));
      if (i > 0) CHECK(r.ledger[i].measured < r.ledger[i - 1].measured);
    }
    CHECK(r.achieved == r.ledger.back().measured);

    // Placeholder leaves have length 1, so the assembled word grows 9x per
    // level exactly: 8 commutator factors plus the previous approximant.
    CHECK(r.length == 9 * 9 * 9);
  }
}

TEST_CASE("recursion over a net backend keeps words faithful to values") {
  const GateSet gs = standard_gateset(1);
  NetParams p;
  p.q = 1.5;
  p.epsilon = 0.6;
  p.max_word_len = 8;
  p.dim = 2;
  const ShellNet net = build_exhaustive(gs, p, 8);
  NetBackend base(net, gs);
  CHECK(base.epsilon0() == doctest::Approx(p.shell_delta(p.shell_count())));

  const SKConstants c = SKConstants::for_dim(2);
  const UMatrix u = haar_sample(2, 4242);
  const SynthesisResult r0 = sk_recurse(u, 0, base, c);
  CHECK(r0.achieved <= base.epsilon0());
  Word w0;
  w0.indices = r0.word.indices;
  CHECK(dist(word_value(w0, gs), r0.value) <= 1e-9);

  const SynthesisResult r1 = sk_recurse(u, 1, base, c);
  Word w1;
  w1.indices = r1.word.indices;
  CHECK(dist(word_value(w1, gs), r1.value) <= 1e-9);
  CHECK(r1.length <= 9 * std::max(r0.length, net.params().max_word_len * (net.shell_count() + 1)));
}

TEST_CASE("iterations_needed matches the printed expression") {
  CHECK(iterations_needed(std::pow(0.1, 1.5), 0.1) == 2);
  CHECK(iterations_needed(std::pow(0.37, std::pow(1.5, 3)), 0.37) == 4);
  CHECK(iterations_needed(1e-8, 1e-4) == 2);  // log 2 / log 1.5 ~ 1.71
  CHECK_THROWS_AS(iterations_needed(0.1, 0.01), ValidationError);
  CHECK_THROWS_AS(iterations_needed(-0.1, 0.5), ValidationError);
}

TEST_CASE("synthesis JSON carries the ledger") {
  MockBackend base(2, 1e-4, 5);
  const SKConstants c = SKConstants::for_dim(2);
  const SynthesisResult r = sk_recurse(haar_sample(2, 1), 2, base, c);
  const std::string text = synthesis_to_json(r);
  CHECK(text.find("\"levels\": 2") != std::string::npos);
  CHECK(text.find("\"ledger\"") != std::string::npos);
  CHECK(text.find("\"length\": 81") != std::string::npos);

  MockBackend base2(2, 1e-4, 5);
  const SynthesisResult r2 = sk_recurse(haar_sample(2, 1), 2, base2, c);
  CHECK(synthesis_to_json(r2) == text);  // determinism, bytewise
}
