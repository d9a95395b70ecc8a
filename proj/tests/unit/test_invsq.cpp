#include <doctest.h>

#include <cmath>
#include <numbers>

#include "dwell/invsq.hpp"
#include "dwell/oracle.hpp"

using namespace dwell;

namespace {

constexpr double pi = std::numbers::pi;

// Frozen oracle, hbar = m = w = 1, B = 1, half line with a wall at the core.
const double kOracleB1[] = {2.118034051386, 4.118034121760, 6.118034196145};

}  // namespace

TEST_CASE("parameters") {
  const InvSquare s{1.5, 0.8};
  const PhysConfig phys{0.7, 1.3};
  const InvSqParams p = invsq_params(s, 2.0, phys);
  CHECK(p.alpha_scale == doctest::Approx(1.3 * 1.5 / 0.7));
  CHECK(p.K == doctest::Approx(p.F * 0.64));
  CHECK(p.mu * p.mu == doctest::Approx(1.0 / 16.0 - p.K / 4.0));
  CHECK(p.mu >= 0.25);
  CHECK(p.c_hyp == doctest::Approx(1.0 + 2.0 * p.mu));
  CHECK(p.k_whittaker == doctest::Approx(2.0 / (2.0 * 0.7 * 1.5)));
}

TEST_CASE("B = 0 merges into the harmonic oscillator") {
  const Spectrum sp = spectrum_exact(InvSquare{1.0, 0.0}, 4);
  REQUIRE(sp.size() == 10);
  for (std::size_t i = 0; i < sp.size(); ++i) {
    CHECK(sp.levels[i].energy == doctest::Approx(0.5 + static_cast<double>(i)).epsilon(1e-14));
    CHECK(sp.levels[i].parity == (i % 2 == 0 ? Parity::even : Parity::odd));
  }
  CHECK(sp.notes.empty());
}

TEST_CASE("ladder gap does not depend on n") {
  for (double B : {0.0, 0.3, 1.0, 4.0}) {
    const InvSquare s{1.2, B};
    const double d = splitting(s);
    for (int n = 0; n < 6; ++n) {
      CHECK(level_energy(s, n, Branch::plus) - level_energy(s, n, Branch::minus) ==
            doctest::Approx(d).epsilon(1e-12));
    }
  }
}

TEST_CASE("B = 1 ladders against the oracle") {
  const InvSquare s{1.0, 1.0};
  // E_0^- is negative although U > 0 everywhere.
  CHECK(level_energy(s, 0, Branch::minus) == doctest::Approx(1.0 - std::sqrt(5.0) / 2.0));
  CHECK(level_energy(s, 0, Branch::minus) < 0.0);
  for (int n = 0; n < 3; ++n) {
    CHECK(std::abs(level_energy(s, n, Branch::plus) - kOracleB1[n]) < 1e-5);
  }
  const LadderCheck lc = check_ladders(s, 6);
  CHECK(lc.plus_supported);
  CHECK_FALSE(lc.minus_supported);
  for (int n = 0; n < 3; ++n) CHECK(lc.oracle[n] == doctest::Approx(kOracleB1[n]).epsilon(1e-8));
  const Spectrum sp = spectrum_exact(s, 3);
  CHECK_FALSE(sp.notes.empty());
}

TEST_CASE("oracle supports only the + ladder for every B > 0") {
  for (double B : {0.25, 0.5, 2.0}) {
    const LadderCheck lc = check_ladders(InvSquare{1.0, B}, 5);
    CHECK(lc.plus_supported);
    CHECK_FALSE(lc.minus_supported);
    for (std::size_t i = 0; i < lc.oracle.size(); ++i) {
      CHECK(std::abs(lc.oracle[i] - level_energy(InvSquare{1.0, B}, static_cast<int>(i), Branch::plus)) <=
            std::max(10.0 * lc.oracle_error[i], 1e-6));
    }
  }
  const LadderCheck zero = check_ladders(InvSquare{1.0, 0.0}, 6);
  CHECK(zero.plus_supported);
  CHECK(zero.minus_supported);
}

TEST_CASE("period") {
  CHECK(period(InvSquare{1.0, 0.0}) == doctest::Approx(pi));
  for (double B : {0.0, 0.5, 1.0, 2.0}) CHECK(period(InvSquare{2.0, B}) == doctest::Approx(pi / 2.0));
  const InvSquare s{1.7, 0.4};
  const double delta = level_energy(s, 1, Branch::plus) - level_energy(s, 0, Branch::plus);
  CHECK(period(s) * delta == doctest::Approx(2.0 * pi));
}

TEST_CASE("splitting") {
  CHECK(splitting(InvSquare{1.0, 0.0}) == doctest::Approx(1.0));
  const PhysConfig phys{1.0, 2.0};
  for (double B : {60.0, 200.0}) {
    const InvSquare s{1.5, B};
    const double r = 2.0 * 1.5 * 1.5 * B * 2.0;  // 2 m w^2 B
    CHECK(4.0 * std::pow(2.0 * 1.5 * B, 2) > 1e4);
    CHECK(std::abs(splitting(s, phys) / r - 1.0) < 1e-2);
  }
}

TEST_CASE("transmission shape") {
  const DShape flat = d_dependency(InvSquare{1.0, 0.0});
  CHECK(flat.in_period(0.3) == doctest::Approx(pi * pi));
  CHECK(flat.in_period(30.0) == doctest::Approx(pi * pi));

  const PhysConfig phys{0.8, 1.4};
  const DShape s = d_dependency(InvSquare{1.0, 0.6}, phys);
  for (double T : {0.5, 1.0, 3.0, 10.0}) {
    CHECK(s.in_period(T) == doctest::Approx(s.in_spacing(2.0 * pi * phys.hbar / T)).epsilon(1e-13));
  }
  double prev = s.in_period(0.1);
  for (double T = 0.2; T < 20.0; T *= 1.5) {
    CHECK(s.in_period(T) < prev);
    prev = s.in_period(T);
  }
  CHECK(s.in_period(5.0) > 1.0);  // a shape, not a probability
}

TEST_CASE("Kummer quantization reproduces the ladders") {
  for (double B : {0.0, 0.3, 1.0, 2.5}) {
    const QuantizationCheck q = verify_quantization(InvSquare{1.3, B}, 5, PhysConfig{0.9, 1.1});
    CHECK(q.consistent);
    CHECK(q.max_level_deviation < 1e-12);
    CHECK(q.max_ode_residual < 1e-10);
    CHECK(q.quoted_form_residual > 1e-2);
  }
}

TEST_CASE("argument checks") {
  CHECK_THROWS_AS(spectrum_exact(InvSquare{1.0, 0.0}, -1), DomainError);
  CHECK_THROWS_AS(level_energy(InvSquare{1.0, 0.0}, -2, Branch::plus), DomainError);
  CHECK_THROWS_AS(d_dependency(InvSquare{1.0, 1.0}).in_period(0.0), DomainError);
}
