#include <random>

#include "doctest.h"
#include "dwell/core.hpp"

using namespace dwell;

TEST_CASE("evaluate_potential examples") {
  SquareWell sq{.d = 2, .c = 1, .a = 1, .b = 2, .U0 = 2, .W0 = 0};
  CHECK(evaluate_potential(sq, 0.0) == 2.0);
  CHECK(evaluate_potential(InvSquare{.w = 1, .B = 0}, 2.0) == 2.0);
  CHECK(evaluate_potential(ParabolicPair{.w = 1, .a = 1}, 0.0) == 0.5);
}

TEST_CASE("square well regions") {
  SquareWell sq{.d = 3, .c = 1, .a = 0.5, .b = 2, .U0 = 4, .W0 = 1.5};
  CHECK(evaluate_potential(sq, -2.0) == 0.0);
  CHECK(evaluate_potential(sq, 0.0) == 4.0);
  CHECK(evaluate_potential(sq, 1.0) == -1.5);
  CHECK_THROWS_AS(evaluate_potential(sq, 2.5), DomainError);
  CHECK_THROWS_AS(evaluate_potential(sq, -3.5), DomainError);
}

TEST_CASE("Morse minima and junction") {
  MorsePair m;
  CHECK(evaluate_potential(m, -m.c) == doctest::Approx(-m.A));
  CHECK(evaluate_potential(m, m.a) == doctest::Approx(-m.B));
  const double left = evaluate_potential(m, -1e-12);
  const double right = evaluate_potential(m, 1e-12);
  CHECK(left == doctest::Approx(right).epsilon(1e-9));
}

TEST_CASE("InvSquare singularity") {
  CHECK_THROWS_AS(evaluate_potential(InvSquare{.w = 1, .B = 1}, 0.0), DomainError);
  CHECK(evaluate_potential(InvSquare{.w = 2, .B = 1}, 1.0, {.hbar = 1, .mass = 3}) ==
        doctest::Approx(0.5 * 3 * 4 * 2));
}

TEST_CASE("parameter validation") {
  CHECK_THROWS_AS(validate(SquareWell{.d = 1, .c = 2}), DomainError);
  CHECK_THROWS_AS(validate(SquareWell{.U0 = -1}), DomainError);
  CHECK_THROWS_AS(validate(MorsePair{.A = 0}), DomainError);
  CHECK_THROWS_AS(validate(InvSquare{.w = 0}), DomainError);
  CHECK_THROWS_AS(validate(ParabolicPair{.a = 0}), DomainError);
  CHECK_THROWS_AS((PhysConfig{.hbar = 0}.validate()), DomainError);
  CHECK_NOTHROW(validate(SquareWell{}));
  CHECK_NOTHROW(validate(MorsePair{}));
}

TEST_CASE("property: symmetric potentials are even") {
  std::mt19937 rng(1);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  const std::vector<PotentialSpec> specs{
      SquareWell{.d = 3, .c = 1, .a = 1, .b = 3, .U0 = 7, .W0 = 0},
      MorsePair{},
      InvSquare{.w = 1.3, .B = 0.7},
      ParabolicPair{.w = 0.8, .a = 1.5},
  };
  for (const auto& spec : specs) {
    REQUIRE(is_symmetric(spec));
    for (int i = 0; i < 200; ++i) {
      double x = 0.01 + 2.9 * u(rng);
      CHECK(evaluate_potential(spec, -x) == doctest::Approx(evaluate_potential(spec, x)).epsilon(1e-14));
    }
  }
}

TEST_CASE("finalize sorts and counts") {
  Spectrum s;
  s.levels = {{.energy = 3.0}, {.energy = 1.0}, {.energy = 2.0}};
  finalize(s);
  CHECK(s.count_bound == 3);
  CHECK(s.levels[0].energy == 1.0);
  CHECK(s.levels[2].index == 2);
}
