#include <random>
#include <sstream>

#include "doctest.h"

#include "ksynth/dense.hpp"
#include "ksynth/operator_sum.hpp"
#include "ksynth/pauli.hpp"

using namespace ksynth;

namespace {

OperatorSum random_sum(int length, int terms, std::mt19937_64& rng) {
  std::uniform_int_distribution<std::uint32_t> word(0, (std::uint32_t{1} << (2 * length)) - 1);
  std::uniform_real_distribution<Real> coeff(-1.0, 1.0);
  OperatorSum out(length);
  while (out.size() < static_cast<std::size_t>(terms)) {
    const Real c = coeff(rng);
    if (std::abs(c) < 0.1) continue;
    out.add(PauliString::from_pauli_index(length, word(rng)), c);
  }
  return out;
}

Real max_abs(const Matrix& m) { return m.cwiseAbs().maxCoeff(); }

}  // namespace

TEST_CASE("single-site multiplication table") {
  const auto X = PauliString::from_letters("X");
  const auto Y = PauliString::from_letters("Y");
  const auto Z = PauliString::from_letters("Z");
  const auto I = PauliString::from_letters("I");

  auto prod = ps_multiply(X, Z);
  CHECK(prod.word == Y);
  CHECK(prod.phase() == Complex(0, -1));  // X Z = -i Y

  prod = ps_multiply(Z, X);
  CHECK(prod.word == Y);
  CHECK(prod.phase() == Complex(0, 1));

  prod = ps_multiply(X, Y);
  CHECK(prod.word == Z);
  CHECK(prod.phase() == Complex(0, 1));

  prod = ps_multiply(Y, Y);
  CHECK(prod.word == I);
  CHECK(prod.phase() == Complex(1, 0));

  // identity leaves anything alone
  for (const auto& p : {I, X, Y, Z}) {
    const auto q = ps_multiply(I, p);
    CHECK(q.word == p);
    CHECK(q.phase() == Complex(1, 0));
  }
}

TEST_CASE("multi-site product picks up sitewise phases") {
  // (X0 Z1) x (Z0 Z1) = -i Y0 I1
  const auto a = PauliString::from_letters("XZ");
  const auto b = PauliString::from_letters("ZZ");
  const auto prod = ps_multiply(a, b);
  CHECK(prod.word == PauliString::from_letters("YI"));
  CHECK(prod.phase() == Complex(0, -1));
}

TEST_CASE("ps_multiply rejects mismatched lengths") {
  CHECK_THROWS_AS(ps_multiply(PauliString::from_letters("X"), PauliString::from_letters("XX")),
                  std::invalid_argument);
}

TEST_CASE("weight and letters round-trip") {
  const auto p = PauliString::from_letters("XIYZI");
  CHECK(p.length() == 5);
  CHECK(p.weight() == 3);
  CHECK(p.str() == "XIYZI");
  CHECK(PauliString::from_pauli_index(5, p.pauli_index()) == p);
  CHECK(PauliString(5).weight() == 0);
}

TEST_CASE("words against the dense oracle") {
  // X on one qubit
  Matrix x = pauli_word_dense(PauliString::from_letters("X"));
  CHECK(x(0, 1) == Complex(1, 0));
  CHECK(x(1, 0) == Complex(1, 0));
  CHECK(x(0, 0) == Complex(0, 0));

  // Z0 Z1 is diag(1,-1,-1,1)
  Matrix zz = to_dense(OperatorSum::term(PauliString::from_letters("ZZ"), 1.0));
  const Vector diag = zz.diagonal();
  CHECK(diag(0) == Complex(1, 0));
  CHECK(diag(1) == Complex(-1, 0));
  CHECK(diag(2) == Complex(-1, 0));
  CHECK(diag(3) == Complex(1, 0));
  CHECK(max_abs(zz - zz.diagonal().asDiagonal().toDenseMatrix()) == 0.0);

  // every word is its own dense product up to the tabulated phase
  std::mt19937_64 rng(7);
  std::uniform_int_distribution<std::uint32_t> word(0, (1u << 6) - 1);
  for (int trial = 0; trial < 50; ++trial) {
    const auto p = PauliString::from_pauli_index(3, word(rng));
    const auto q = PauliString::from_pauli_index(3, word(rng));
    const auto prod = ps_multiply(p, q);
    const Matrix lhs = pauli_word_dense(p) * pauli_word_dense(q);
    const Matrix rhs = prod.phase() * pauli_word_dense(prod.word);
    CHECK(max_abs(lhs - rhs) < 1e-14);
  }
}

TEST_CASE("to_dense guards the dimension") {
  OperatorSum big(9);
  big.add(PauliString::single(9, 0, 'X'), 1.0);
  CHECK_THROWS_AS(to_dense(big), std::invalid_argument);
  CHECK_NOTHROW(to_dense(big, 9));
}

TEST_CASE("bracket on single strings") {
  const auto z0 = OperatorSum::term(PauliString::from_letters("Z"), 1.0);
  const auto x0 = OperatorSum::term(PauliString::from_letters("X"), 1.0);
  const OperatorSum b = bracket(z0, x0);
  // i[Z, X] = -2 Y
  CHECK(b.size() == 1);
  CHECK(b.coeff(PauliString::from_letters("Y")) == doctest::Approx(-2.0).epsilon(1e-15));

  CHECK(bracket(z0, z0).is_zero());
}

TEST_CASE("pairs of words commute or anticommute; bracket is 0 or +-2 a word") {
  std::mt19937_64 rng(11);
  std::uniform_int_distribution<std::uint32_t> word(0, (1u << 8) - 1);
  for (int trial = 0; trial < 200; ++trial) {
    const auto p = PauliString::from_pauli_index(4, word(rng));
    const auto q = PauliString::from_pauli_index(4, word(rng));
    const OperatorSum b =
        bracket(OperatorSum::term(p, 1.0), OperatorSum::term(q, 1.0));
    if (p.commutes_with(q)) {
      CHECK(b.is_zero());
    } else {
      REQUIRE(b.size() == 1);
      CHECK(std::abs(b.begin()->second) == doctest::Approx(2.0));
    }
  }
}

TEST_CASE("bracket matches the dense commutator on random sums") {
  std::mt19937_64 rng(13);
  for (int trial = 0; trial < 40; ++trial) {
    const OperatorSum a = random_sum(3, 6, rng);
    const OperatorSum b = random_sum(3, 6, rng);
    const Matrix da = to_dense(a);
    const Matrix db = to_dense(b);
    const Matrix expected = Complex(0, 1) * (da * db - db * da);
    CHECK(max_abs(to_dense(bracket(a, b)) - expected) < 1e-10);
  }
}

TEST_CASE("bracket is bilinear and antisymmetric") {
  std::mt19937_64 rng(17);
  const OperatorSum a = random_sum(3, 5, rng);
  const OperatorSum b = random_sum(3, 5, rng);
  const OperatorSum c = random_sum(3, 5, rng);

  const OperatorSum lhs = bracket(a + 2.0 * b, c);
  const OperatorSum rhs = bracket(a, c) + 2.0 * bracket(b, c);
  CHECK((lhs - rhs).hs_norm() < 1e-12);

  const OperatorSum anti = bracket(a, b) + bracket(b, a);
  CHECK(anti.hs_norm() < 1e-12);
}

TEST_CASE("hs_inner basics") {
  const auto x0 = OperatorSum::term(PauliString::from_letters("XII"), 1.0);
  CHECK(hs_inner(x0, x0) == doctest::Approx(1.0));

  // distinct words are orthogonal
  const auto z0z1 = OperatorSum::term(PauliString::from_letters("ZZI"), 1.0);
  CHECK(hs_inner(x0, z0z1) == 0.0);
}

TEST_CASE("hs_inner agrees with the normalized dense trace") {
  std::mt19937_64 rng(19);
  for (int trial = 0; trial < 40; ++trial) {
    const OperatorSum a = random_sum(3, 7, rng);
    const OperatorSum b = random_sum(3, 7, rng);
    const Real dense =
        std::real((to_dense(a).adjoint() * to_dense(b)).trace()) / 8.0;
    CHECK(hs_inner(a, b) == doctest::Approx(dense).epsilon(1e-10));
    CHECK(a.hs_norm() ==
          doctest::Approx(std::sqrt(std::real((to_dense(a).adjoint() * to_dense(a)).trace()) / 8.0))
              .epsilon(1e-10));
  }
}

TEST_CASE("s_min definition and pruning") {
  OperatorSum a(2);
  a.add(PauliString::from_letters("XI"), 0.3);
  a.add(PauliString::from_letters("ZZ"), 0.5);
  CHECK(s_min(a, 1e-10) == 1);

  CHECK(s_min(OperatorSum::term(PauliString::from_letters("ZZ"), 1.0), 1e-10) == 2);

  OperatorSum b(3);
  b.add(PauliString::from_letters("YYY"), 1.0);
  b.add(PauliString::from_letters("XII"), 1e-14);
  CHECK(s_min(b, 1e-10) == 3);

  OperatorSum zero(2);
  CHECK_THROWS_AS(s_min(zero, 1e-10), std::invalid_argument);
}

TEST_CASE("strip_identity") {
  OperatorSum a(2);
  a.add(PauliString::from_letters("II"), 2.0);
  a.add(PauliString::from_letters("XI"), 1.0);
  const auto [traceless, id] = strip_identity(a);
  CHECK(id == 2.0);
  CHECK(traceless.coeff(PauliString::from_letters("II")) == 0.0);
  CHECK(traceless.coeff(PauliString::from_letters("XI")) == 1.0);

  const auto [zero_part, zero_id] = strip_identity(OperatorSum(2));
  CHECK(zero_id == 0.0);
  CHECK(zero_part.is_zero());

  // traceless parts really have dense trace ~ 0
  std::mt19937_64 rng(23);
  for (int trial = 0; trial < 20; ++trial) {
    const OperatorSum s = random_sum(3, 8, rng);
    const auto [t, c] = strip_identity(s);
    CHECK(std::abs(to_dense(t).trace()) < 1e-10 * 8.0);
  }
}

TEST_CASE("coefficient pruning keeps maps clean") {
  OperatorSum a(2);
  a.add(PauliString::from_letters("XI"), 1.0);
  a.add(PauliString::from_letters("XI"), -1.0);
  CHECK(a.is_zero());

  OperatorSum b(2);
  b.add(PauliString::from_letters("XI"), 5e-13);  // below prune tolerance
  CHECK(b.is_zero());
}

TEST_CASE("text serialization round-trips") {
  std::mt19937_64 rng(29);
  for (int trial = 0; trial < 20; ++trial) {
    const OperatorSum a = random_sum(4, 9, rng);
    const OperatorSum back = OperatorSum::from_text(a.to_text());
    CHECK(back.length() == a.length());
    CHECK((back - a).hs_norm() < 1e-15);
  }

  const OperatorSum parsed = OperatorSum::from_text("1.0 XIZ\n-0.5 IYI\n");
  CHECK(parsed.length() == 3);
  CHECK(parsed.coeff(PauliString::from_letters("XIZ")) == 1.0);
  CHECK(parsed.coeff(PauliString::from_letters("IYI")) == -0.5);

  CHECK_THROWS(OperatorSum::from_text("not a term\n"));
  CHECK_THROWS(OperatorSum::from_text(""));
}
