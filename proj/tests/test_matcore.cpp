#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "sknet/matcore.hpp"

using namespace sknet;

namespace {

UMatrix pauli_z() {
  UMatrix z(2);
  z(0, 0) = 1.0;
  z(1, 1) = -1.0;
  return z;
}

// Hermitian with a trace component, scaled to the requested operator norm.
UMatrix random_hermitian(int d, Rng& rng, double norm) {
  CMatrix g(d, d);
  for (int i = 0; i < d; ++i)
    for (int j = 0; j < d; ++j) g(i, j) = rng.complex_gaussian();
  CMatrix h = 0.5 * (g + g.adjoint().eval());
  UMatrix m{std::move(h)};
  return m * Complex(norm / op_norm(m), 0.0);
}

}  // namespace

TEST_CASE("tolerances validate their ordering") {
  CHECK_NOTHROW(default_tolerances().validate());
  Tolerances bad;
  bad.series_tol = 1.0;
  CHECK_THROWS_AS(bad.validate(), ValidationError);
  bad = Tolerances{};
  bad.norm_rel = 0.0;
  CHECK_THROWS_AS(bad.validate(), ValidationError);
}

TEST_CASE("op_norm on closed-form cases") {
  CHECK(op_norm(UMatrix::zero(3)) == doctest::Approx(0.0).epsilon(1e-12));
  CHECK(op_norm(UMatrix::identity(4)) == doctest::Approx(1.0).epsilon(1e-10));

  UMatrix diag34(2);
  diag34(0, 0) = 3.0;
  diag34(1, 1) = 4.0;
  CHECK(op_norm(diag34) == doctest::Approx(4.0).epsilon(1e-10));

  UMatrix nan(2);
  nan(0, 0) = std::nan("");
  CHECK_THROWS_AS(op_norm(nan), ValidationError);
}

TEST_CASE("dist closed forms and dimension guard") {
  const UMatrix eye2 = UMatrix::identity(2);
  CHECK(dist(eye2, eye2) == 0.0);

  UMatrix iphase(2);
  iphase(0, 0) = Complex(0.0, 1.0);
  iphase(1, 1) = Complex(0.0, -1.0);
  CHECK(dist(eye2, iphase) == doctest::Approx(std::sqrt(2.0)).epsilon(1e-12));

  const UMatrix rot = mexp(pauli_z() * Complex(0.3, 0.0), ExpSign::PlusI);
  CHECK(dist(rot, eye2) == doctest::Approx(2.0 * std::sin(0.15)).epsilon(1e-12));

  CHECK_THROWS_AS(dist(eye2, UMatrix::identity(3)), ValidationError);
}

TEST_CASE("metric axioms on random unitary triples") {
  Rng rng(101);
  for (int trial = 0; trial < 500; ++trial) {
    const int d = (trial % 2 == 0) ? 2 : 3;
    const UMatrix u = haar_sample(d, rng.next_u64());
    const UMatrix v = haar_sample(d, rng.next_u64());
    const UMatrix w = haar_sample(d, rng.next_u64());

    const double duv = dist(u, v);
    CHECK(duv >= 0.0);
    CHECK(dist(u, u) == 0.0);
    CHECK(duv == dist(v, u));  // symmetry is exact: same Gram matrix
    CHECK(duv <= dist(u, w) + dist(w, v) + 1e-12);
    CHECK(std::abs(dist(u * w, v * w) - duv) <= 1e-12);
    CHECK(std::abs(dist(w * u, w * v) - duv) <= 1e-12);
  }
}

TEST_CASE("product perturbation adds at most the per-factor distances") {
  Rng rng(202);
  for (int trial = 0; trial < 100; ++trial) {
    const int d = 2 + trial % 3;
    double budget = 0.0;
    UMatrix lhs = UMatrix::identity(d), rhs = UMatrix::identity(d);
    for (int i = 0; i < 4; ++i) {
      const UMatrix base = haar_sample(d, rng.next_u64());
      const double delta = 0.05 + 0.1 * rng.uniform();
      const UMatrix pert = base * near_identity_sample(d, delta, rng.next_u64());
      lhs = lhs * base;
      rhs = rhs * pert;
      budget += delta;
    }
    CHECK(dist(lhs, rhs) <= budget + 1e-12);
  }
}

TEST_CASE("mexp closed forms and guards") {
  CHECK(dist(mexp(UMatrix::zero(3), ExpSign::PlusI), UMatrix::identity(3)) <= 1e-14);

  const UMatrix h = pauli_z() * Complex(M_PI / 2.0, 0.0);
  UMatrix expected(2);
  expected(0, 0) = Complex(0.0, 1.0);
  expected(1, 1) = Complex(0.0, -1.0);
  CHECK(dist(mexp(h, ExpSign::PlusI), expected) <= 1e-13);
  CHECK(dist(mexp(h, ExpSign::MinusI), expected.adjoint()) <= 1e-13);

  UMatrix not_herm(2);
  not_herm(0, 1) = 1.0;
  CHECK_THROWS_AS(mexp(not_herm, ExpSign::PlusI), ValidationError);
  CHECK_THROWS_AS(mexp(pauli_z() * Complex(5.0, 0.0), ExpSign::PlusI), ValidationError);
}

TEST_CASE("exp of i-Hermitian stays within norm of identity (1000 trials)") {
  Rng rng(303);
  for (int trial = 0; trial < 1000; ++trial) {
    const int d = 2 + trial % 3;
    const UMatrix h = random_hermitian(d, rng, 0.01 + 0.99 * rng.uniform());
    const UMatrix u = mexp(h, ExpSign::PlusI);
    CHECK(u.is_unitary(1e-12));
    CHECK(dist(u, UMatrix::identity(d)) <= op_norm(h) + 1e-11);
  }
}

TEST_CASE("exp additivity bound delta^2") {
  Rng rng(404);
  for (double delta : {0.3, 0.1, 0.03}) {
    for (int trial = 0; trial < 100; ++trial) {
      const int d = 2 + trial % 3;
      const UMatrix a = random_hermitian(d, rng, delta * (0.1 + 0.9 * rng.uniform()));
      const UMatrix b = random_hermitian(d, rng, delta * (0.1 + 0.9 * rng.uniform()));
      const UMatrix lhs = mexp(a + b, ExpSign::PlusI);
      const UMatrix rhs = mexp(a, ExpSign::PlusI) * mexp(b, ExpSign::PlusI);
      CHECK(dist(lhs, rhs) <= delta * delta + 1e-9);
    }
  }
}

TEST_CASE("group commutator tracks exp of the matrix commutator to 4 delta^3") {
  Rng rng(505);
  const double delta = 0.1;
  for (int trial = 0; trial < 200; ++trial) {
    const int d = 2 + trial % 3;
    const UMatrix a = random_hermitian(d, rng, delta * (0.1 + 0.9 * rng.uniform()));
    const UMatrix b = random_hermitian(d, rng, delta * (0.1 + 0.9 * rng.uniform()));
    const UMatrix gc = group_comm(mexp(a, ExpSign::PlusI), mexp(b, ExpSign::PlusI));
    // [iA, iB] = i (i[A, B]) with i[A, B] Hermitian.
    const CMatrix comm = a.eigen() * b.eigen() - b.eigen() * a.eigen();
    const UMatrix herm_comm{CMatrix(Complex(0.0, 1.0) * comm)};
    CHECK(dist(gc, mexp(herm_comm, ExpSign::PlusI)) <= 4.0 * delta * delta * delta + 1e-9);
  }
}

TEST_CASE("group commutator trivial cases") {
  const UMatrix b = haar_sample(3, 99);
  CHECK(dist(group_comm(UMatrix::identity(3), b), UMatrix::identity(3)) <= 1e-12);
  CHECK(dist(group_comm(b, b), UMatrix::identity(3)) <= 1e-12);
  CHECK_THROWS_AS(group_comm(b, UMatrix::identity(2)), ValidationError);
}

TEST_CASE("group commutators absorb small perturbations of their arguments") {
  Rng rng(606);
  const double d1 = 0.1, d2 = 0.3;
  const double bound = 8 * d1 * d2 + 4 * d1 * d2 * d2 + 8 * d1 * d1 + 4 * d1 * d1 * d1 + d1 * d1 * d1 * d1;
  for (int trial = 0; trial < 200; ++trial) {
    const int d = 2 + trial % 3;
    auto u = [&](double cap) { return cap * (0.1 + 0.9 * rng.uniform()); };
    const UMatrix a = near_identity_sample(d, u(d2), rng.next_u64());
    const UMatrix b = near_identity_sample(d, u(d2), rng.next_u64());
    const UMatrix ap = a * near_identity_sample(d, u(d1), rng.next_u64());
    const UMatrix bp = b * near_identity_sample(d, u(d1), rng.next_u64());
    CHECK(dist(group_comm(a, b), group_comm(ap, bp)) <= bound + 1e-9);
  }
}

TEST_CASE("mlog principal branch") {
  CHECK(op_norm(mlog_principal(UMatrix::identity(3))) <= 1e-13);

  UMatrix lam(2);
  lam(0, 0) = std::exp(Complex(0.0, 0.2));
  lam(1, 1) = std::exp(Complex(0.0, -0.2));
  UMatrix expected(2);
  expected(0, 0) = 0.2;
  expected(1, 1) = -0.2;
  CHECK(dist(mlog_principal(lam), expected) <= 1e-12);

  // dist(diag(e^{2i}, e^{-2i}), I) = 2 sin(1) > 1: outside the branch.
  UMatrix far(2);
  far(0, 0) = std::exp(Complex(0.0, 2.0));
  far(1, 1) = std::exp(Complex(0.0, -2.0));
  CHECK_THROWS_AS(mlog_principal(far), BranchError);

  UMatrix not_special(2);
  not_special(0, 0) = std::exp(Complex(0.0, 0.3));
  not_special(1, 1) = 1.0;
  CHECK_THROWS_AS(mlog_principal(not_special), ValidationError);
}

TEST_CASE("mexp/mlog round trips") {
  Rng rng(707);
  for (int trial = 0; trial < 100; ++trial) {
    const int d = 2 + trial % 3;
    Rng sub = rng.split(trial);
    const UMatrix h = random_hermitian_direction(d, sub) * Complex(0.1, 0.0);
    CHECK(dist(mlog_principal(mexp(h, ExpSign::PlusI)), h) <= 1e-12);
  }
  for (int trial = 0; trial < 100; ++trial) {
    const int d = 2 + trial % 3;
    Rng sub = rng.split(1000 + trial);
    const double norm = 0.5 * (0.02 + 0.98 * sub.uniform());
    const UMatrix h = random_hermitian_direction(d, sub) * Complex(norm, 0.0);
    CHECK(dist(mlog_principal(mexp(h, ExpSign::PlusI)), h) <= 1e-11);
  }
}

TEST_CASE("mlog handles the slow region below the branch point") {
  // dist close to 1 exercises the square-root reduction path.
  const UMatrix h = pauli_z() * Complex(0.95, 0.0);  // dist = 2 sin(0.475) ~ 0.915
  const UMatrix lam = mexp(h, ExpSign::PlusI);
  CHECK(dist(mlog_principal(lam), h) <= 1e-11);
}

TEST_CASE("haar_sample contract") {
  const UMatrix u = haar_sample(4, 7);
  CHECK(u.is_unitary(1e-12));
  CHECK(std::abs(u.determinant() - Complex(1.0, 0.0)) <= 1e-12);

  const UMatrix v = haar_sample(4, 7);
  bool identical = true;
  for (int i = 0; i < 4; ++i)
    for (int j = 0; j < 4; ++j)
      if (u(i, j) != v(i, j)) identical = false;
  CHECK(identical);

  CHECK_THROWS_AS(haar_sample(1, 0), ValidationError);
}

TEST_CASE("haar distance to identity concentrates away from zero at d=2") {
  double mean = 0.0;
  const int n = 10000;
  const UMatrix eye = UMatrix::identity(2);
  for (int i = 0; i < n; ++i) mean += dist(haar_sample(2, 9000 + i), eye);
  mean /= n;
  CHECK(mean > 1.0);
  CHECK(mean < 2.0);
}

TEST_CASE("near_identity_sample hits the requested band") {
  const UMatrix eye3 = UMatrix::identity(3);
  for (double target : {0.01, 0.3, 0.9}) {
    const UMatrix s = near_identity_sample(3, target, 42);
    const double got = dist(s, eye3);
    CHECK(got >= 0.99 * target - 1e-12);
    CHECK(got <= target + 1e-12);
    CHECK(s.is_unitary(1e-12));
    CHECK(s.is_special(1e-11));
  }
  CHECK_THROWS_AS(near_identity_sample(3, 0.0, 1), ValidationError);
  CHECK_THROWS_AS(near_identity_sample(3, 1.0, 1), ValidationError);

  const UMatrix wide = near_identity_sample_wide(2, 1.7, 5);
  const double got = dist(wide, UMatrix::identity(2));
  CHECK(got >= 0.99 * 1.7 - 1e-12);
  CHECK(got <= 1.7 + 1e-12);
}

TEST_CASE("near-identity distance matches eigenphase arithmetic") {
  // For ||H|| = s the measured distance is 2 sin(s/2) since the extremal
  // eigenphase dominates; spot-check against the dist oracle.
  Rng rng(808);
  for (int trial = 0; trial < 20; ++trial) {
    Rng sub = rng.split(trial);
    const double s = 0.05 + 0.5 * sub.uniform();
    const UMatrix h = random_hermitian_direction(3, sub) * Complex(s, 0.0);
    const double measured = dist(mexp(h, ExpSign::PlusI), UMatrix::identity(3));
    CHECK(measured <= s + 1e-11);                       // never exceeds ||H||
    CHECK(measured >= 2.0 * std::sin(s / 2.0) - 1e-9);  // extremal phase = +-s/2 scale
  }
}
