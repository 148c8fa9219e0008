#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "sknet/gates.hpp"
#include "sknet/json_io.hpp"

using namespace sknet;

namespace {

Word make_word(std::initializer_list<int> idx) { return Word(std::vector<int>(idx)); }

Word random_word(const GateSet& gs, Rng& rng, int len) {
  Word w;
  for (int i = 0; i < len; ++i)
    w.indices.push_back(static_cast<int>(rng.next_u64() % gs.size()));
  return w;
}

}  // namespace

TEST_CASE("standard gate set at one qubit") {
  std::vector<std::string> log;
  const GateSet gs = standard_gateset(1, &log);

  // H, K, T plus whatever adjoints closure had to add. The SU(2)-normalized
  // Hadamard iH squares to -I, so its adjoint is a distinct gate and the
  // closed set holds six elements.
  CHECK(gs.size() == 6);
  CHECK(gs.dim() == 2);

  for (int i = 0; i < gs.size(); ++i) {
    const Gate& g = gs.gate(i);
    CHECK(std::abs(g.matrix.determinant() - Complex(1.0, 0.0)) <= 1e-12);
    CHECK(dist(g.matrix * g.matrix.adjoint(), UMatrix::identity(2)) <= 1e-12);
    CHECK(dist(gs.gate(gs.inverse_index(i)).matrix, g.matrix.adjoint()) <= 1e-12);
  }

  // det(H) = -1, so the principal square root of det^{-1} is +i.
  const Gate& h = gs.gate(gs.index_of("H0"));
  CHECK(std::abs(h.phase_applied - Complex(0.0, 1.0)) <= 1e-12);
  CHECK(gs.inverse_index(gs.index_of("H0")) == gs.index_of("H0†"));

  bool closure_noted = false;
  for (const auto& line : log)
    if (line.find("closure repair") != std::string::npos) closure_noted = true;
  CHECK(closure_noted);

  CHECK_THROWS_AS(standard_gateset(5), ValidationError);
  CHECK_THROWS_AS(standard_gateset(0), ValidationError);
}

TEST_CASE("standard gate set at two qubits includes CNOT with principal phase") {
  const GateSet gs = standard_gateset(2);
  CHECK(gs.dim() == 4);

  const Gate& cnot = gs.gate(gs.index_of("CNOT01"));
  // det(CNOT) = -1 (single transposition); principal 4th root of -1.
  const Complex expected = std::exp(Complex(0.0, M_PI / 4.0));
  CHECK(std::abs(cnot.phase_applied - expected) <= 1e-12);
  CHECK(cnot.matrix.is_special(1e-12));

  CHECK_NOTHROW(gs.index_of("CNOT10"));
  for (int i = 0; i < gs.size(); ++i)
    CHECK(dist(gs.gate(gs.inverse_index(i)).matrix, gs.gate(i).matrix.adjoint()) <= 1e-12);
}

TEST_CASE("word value basics") {
  const GateSet gs = standard_gateset(1);

  const Word empty;
  CHECK(dist(word_value(empty, gs), UMatrix::identity(2)) == 0.0);
  CHECK(empty.length() == 0);

  for (int j = 0; j < gs.size(); ++j) {
    const Word single = make_word({j});
    CHECK(dist(word_value(single, gs), gs.gate(j).matrix) <= 1e-15);
  }

  Word bad = make_word({gs.size()});
  CHECK_THROWS_AS(word_value(bad, gs), ValidationError);
}

TEST_CASE("word inverse inverts") {
  const GateSet gs = standard_gateset(1);

  CHECK(word_inverse(Word{}, gs).length() == 0);

  const Word ab = make_word({0, 2});
  const Word inv = word_inverse(ab, gs);
  CHECK(inv.indices[0] == gs.inverse_index(2));
  CHECK(inv.indices[1] == gs.inverse_index(0));

  Rng rng(11);
  for (int trial = 0; trial < 50; ++trial) {
    const Word w = random_word(gs, rng, 20);
    const Word wi = word_inverse(w, gs);
    CHECK(wi.length() == w.length());
    CHECK(dist(word_value(wi, gs), word_value(w, gs).adjoint()) <= 1e-12);
    CHECK(dist(word_value(w, gs) * word_value(wi, gs), UMatrix::identity(2)) <= 1e-12);
  }
}

TEST_CASE("word concatenation is a homomorphism onto matrix product") {
  const GateSet gs = standard_gateset(1);
  Rng rng(12);

  const Word w = random_word(gs, rng, 7);
  const Word cat = word_concat(w, Word{});
  CHECK(cat.indices == w.indices);

  for (int trial = 0; trial < 200; ++trial) {
    const Word u = random_word(gs, rng, 1 + static_cast<int>(rng.next_u64() % 12));
    const Word v = random_word(gs, rng, 1 + static_cast<int>(rng.next_u64() % 12));
    const Word uv = word_concat(u, v);
    CHECK(uv.length() == u.length() + v.length());
    CHECK(dist(word_value(uv, gs), word_value(u, gs) * word_value(v, gs)) <= 1e-11);
  }
}

TEST_CASE("gate set JSON round trip") {
  const GateSet gs = standard_gateset(2);
  const std::string text = gateset_to_json(gs);
  const GateSet back = gateset_from_json_text(text);

  REQUIRE(back.size() == gs.size());
  CHECK(back.name() == gs.name());
  for (int i = 0; i < gs.size(); ++i) {
    CHECK(back.gate(i).label == gs.gate(i).label);
    CHECK(back.gate(i).inverse_label == gs.gate(i).inverse_label);
    CHECK(dist(back.gate(i).matrix, gs.gate(i).matrix) <= 1e-15);
  }
  CHECK(gateset_hash(back) == gateset_hash(gs));
  CHECK(gateset_to_json(back) == text);
}

TEST_CASE("loader repairs closure and collapses duplicates") {
  // T alone is not inverse-closed; the loader must add the adjoint and say so.
  UMatrix t(2);
  t(0, 0) = std::exp(Complex(0.0, -M_PI / 16.0));
  t(1, 1) = std::exp(Complex(0.0, M_PI / 16.0));

  std::vector<std::string> log;
  const GateSet gs = GateSet::build("just-t", 2, {{"T", t}, {"Tdup", t}}, &log);
  CHECK(gs.size() == 2);  // T and its repaired adjoint; duplicate collapsed

  bool repaired = false, collapsed = false;
  for (const auto& line : log) {
    if (line.find("closure repair") != std::string::npos) repaired = true;
    if (line.find("collapsed duplicate") != std::string::npos) collapsed = true;
  }
  CHECK(repaired);
  CHECK(collapsed);

  UMatrix not_unitary(2);
  not_unitary(0, 0) = 2.0;
  not_unitary(1, 1) = 1.0;
  CHECK_THROWS_AS(GateSet::build("bad", 2, {{"X", not_unitary}}, nullptr), ValidationError);
}
