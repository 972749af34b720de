#include <algorithm>
#include <string>

#include "doctest.h"

#include "ksynth/models.hpp"

using namespace ksynth;

TEST_CASE("native set layout and channel order") {
  const NativeSet natives = build_native_set(parse_model("ising", 3));
  REQUIRE(natives.channels() == 4);
  CHECK(natives.names == std::vector<std::string>{"X", "Z", "break", "int"});

  // H_X = X0 + X1 + X2
  CHECK(natives.terms[0].size() == 3);
  CHECK(natives.terms[0].coeff(PauliString::from_letters("XII")) == 1.0);
  CHECK(natives.terms[0].coeff(PauliString::from_letters("IXI")) == 1.0);

  // H_break is the single X on the first site
  CHECK(natives.terms[2].size() == 1);
  CHECK(natives.terms[2].coeff(PauliString::from_letters("XII")) == 1.0);
  CHECK(hs_inner(natives.terms[2], natives.terms[2]) == doctest::Approx(1.0));

  // Ising coupling has L-1 = 2 terms
  CHECK(natives.terms[3].size() == 2);
  CHECK(natives.terms[3].coeff(PauliString::from_letters("ZZI")) == 1.0);
  CHECK(natives.terms[3].coeff(PauliString::from_letters("IZZ")) == 1.0);
}

TEST_CASE("heisenberg coupling at L=2") {
  const NativeSet natives = build_native_set(parse_model("heisenberg", 2));
  const OperatorSum& h_int = natives.terms[3];
  CHECK(h_int.size() == 3);
  CHECK(h_int.coeff(PauliString::from_letters("XX")) == 1.0);
  CHECK(h_int.coeff(PauliString::from_letters("YY")) == 1.0);
  CHECK(h_int.coeff(PauliString::from_letters("ZZ")) == 1.0);
}

TEST_CASE("xxz target matches the anisotropic form") {
  TargetSpec t = parse_target("xxz:1.5");
  const OperatorSum h = build_target(t, parse_model("ising", 3));
  CHECK(h.size() == 6);
  CHECK(h.coeff(PauliString::from_letters("XXI")) == 1.0);
  CHECK(h.coeff(PauliString::from_letters("YYI")) == 1.0);
  CHECK(h.coeff(PauliString::from_letters("ZZI")) == 1.5);
  CHECK(h.coeff(PauliString::from_letters("IXX")) == 1.0);
  CHECK(h.coeff(PauliString::from_letters("IYY")) == 1.0);
  CHECK(h.coeff(PauliString::from_letters("IZZ")) == 1.5);
}

TEST_CASE("xxz at delta=1 equals heisenberg term by term") {
  for (int L = 2; L <= 5; ++L) {
    const ModelSpec spec = parse_model("xxz:1.0", L);
    const OperatorSum xxz = build_native_set(spec).terms[3];
    const OperatorSum heis = build_native_set(parse_model("heisenberg", L)).terms[3];
    CHECK((xxz - heis).is_zero());
  }
}

TEST_CASE("every produced operator is traceless") {
  for (const char* model : {"ising", "heisenberg", "xxz:1.5"}) {
    const NativeSet natives = build_native_set(parse_model(model, 4));
    for (const auto& term : natives.terms) {
      CHECK(term.coeff(PauliString(4)) == 0.0);
    }
  }
}

TEST_CASE("heisenberg coupling commutes with the total X generator") {
  for (int L = 2; L <= 6; ++L) {
    const NativeSet natives = build_native_set(parse_model("heisenberg", L));
    CHECK(bracket(natives.terms[3], natives.terms[0]).is_zero());
  }
}

TEST_CASE("reflection symmetry of couplings, broken by H_break") {
  const int L = 4;
  auto reflect = [L](const OperatorSum& op) {
    OperatorSum out(L);
    for (const auto& [word, c] : op) {
      std::string letters = word.str();
      std::reverse(letters.begin(), letters.end());
      out.add(PauliString::from_letters(letters), c);
    }
    return out;
  };
  for (const char* model : {"ising", "heisenberg"}) {
    const NativeSet natives = build_native_set(parse_model(model, L));
    CHECK((reflect(natives.terms[3]) - natives.terms[3]).is_zero());
    CHECK_FALSE((reflect(natives.terms[2]) - natives.terms[2]).is_zero());
  }
}

TEST_CASE("single Pauli and zz-pair targets") {
  const ModelSpec spec = parse_model("ising", 6);
  const OperatorSum zz = build_target(parse_target("zz:1,4"), spec);
  CHECK(zz.size() == 1);
  CHECK(zz.coeff(PauliString::from_letters("IZIIZI")) == 1.0);
  CHECK(s_min(zz, 1e-10) == 2);

  const OperatorSum y2 = build_target(parse_target("y:2"), spec);
  CHECK(y2.coeff(PauliString::single(6, 2, 'Y')) == 1.0);

  CHECK_THROWS_AS(build_target(parse_target("zz:4,1"), spec), std::invalid_argument);
  CHECK_THROWS_AS(build_target(parse_target("zz:1,1"), spec), std::invalid_argument);
  CHECK_THROWS_AS(build_target(parse_target("x:9"), spec), std::invalid_argument);
  CHECK_THROWS_AS(parse_target("nonsense"), std::invalid_argument);
}

TEST_CASE("low-weight target enumeration: counts and order") {
  const auto set3 = enumerate_lowweight_set(parse_model("ising", 3));
  CHECK(set3.size() == 12);  // 9 singles + 3 pairs
  CHECK(set3.front().label == "x:0");
  CHECK(set3.front().op.coeff(PauliString::from_letters("XII")) == 1.0);
  CHECK(set3[1].label == "y:0");
  CHECK(set3[2].label == "z:0");
  CHECK(set3[3].label == "x:1");
  CHECK(set3.back().label == "zz:1,2");

  const auto set6 = enumerate_lowweight_set(parse_model("ising", 6));
  CHECK(set6.size() == 33);  // 18 singles + 15 pairs
}

TEST_CASE("model selector parsing") {
  CHECK(parse_model("ising", 3).kind == InteractionKind::Ising);
  CHECK(parse_model("heisenberg", 3).kind == InteractionKind::Heisenberg);
  const ModelSpec xxz = parse_model("xxz:2.25", 3);
  CHECK(xxz.kind == InteractionKind::XXZ);
  CHECK(xxz.delta == 2.25);
  CHECK(xxz.name() == "xxz:2.25");
  CHECK_THROWS_AS(parse_model("isingg", 3), std::invalid_argument);
  CHECK_THROWS_AS(build_native_set(parse_model("ising", 1)), std::invalid_argument);
}
