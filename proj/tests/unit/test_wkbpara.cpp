#include <doctest.h>

#include <cmath>
#include <numbers>

#include "dwell/morse.hpp"
#include "dwell/numerics.hpp"
#include "dwell/oracle.hpp"
#include "dwell/squarewell.hpp"
#include "dwell/wkbpara.hpp"

using namespace dwell;

namespace {

constexpr double pi = std::numbers::pi;

// |p| / hbar summed on a fixed trapezoid grid.
double action_on_grid(const PotentialSpec& spec, double energy, double lo, double hi, int n) {
  const double h = (hi - lo) / n;
  double sum = 0.0;
  for (int i = 0; i <= n; ++i) {
    const double x = lo + i * h;
    const double v = std::sqrt(2.0 * std::max(evaluate_potential(spec, x) - energy, 0.0));
    sum += (i == 0 || i == n) ? 0.5 * v : v;
  }
  return sum * h;
}

double oracle_gap(const ParabolicPair& p, int n) {
  const OracleResult o = solve_grid(make_grid_problem(p, {}, 2 * n + 2), 2 * n + 2);
  return o.energies[2 * n + 1] - o.energies[2 * n];
}

}  // namespace

TEST_CASE("square barrier action is L sqrt(2m(U0 - E)) / hbar") {
  const SquareWell sq{3.0, 1.0, 1.0, 3.0, 10.0, 0.0};
  const PhysConfig phys{0.9, 1.7};
  for (double E : {0.5, 2.0, 8.0}) {
    const WkbContext c = wkb_action(sq, E, phys);
    CHECK(c.x_left == doctest::Approx(-1.0).epsilon(1e-12));
    CHECK(c.x_right == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(c.action == doctest::Approx(2.0 * std::sqrt(2.0 * 1.7 * (10.0 - E)) / 0.9).epsilon(1e-11));
    // Flat well of width 2: period 2 * 2 / v.
    CHECK(c.w_classical == doctest::Approx(pi * std::sqrt(2.0 * E / 1.7) / 2.0).epsilon(1e-9));
    CHECK(c.v0 == doctest::Approx(std::sqrt(2.0 * (10.0 - E) / 1.7)));
  }
}

TEST_CASE("parabolic action, two quadratures and the closed form") {
  const ParabolicPair p{1.0, 2.0};
  const WkbContext c = wkb_action(p, 0.5);
  CHECK(c.x_left == doctest::Approx(-1.0).epsilon(1e-13));
  CHECK(c.x_right == doctest::Approx(1.0).epsilon(1e-13));
  const double grid = action_on_grid(p, 0.5, c.x_left, c.x_right, 1000000);
  CHECK(std::abs(c.action - grid) < 1e-8);
  CHECK(c.action == doctest::Approx(2.0 * std::sqrt(3.0) - std::log(2.0 + std::sqrt(3.0))).epsilon(1e-13));
  CHECK(c.w_classical == doctest::Approx(1.0).epsilon(1e-9));
}

TEST_CASE("action vanishes as the turning points merge") {
  const ParabolicPair p{1.0, 2.0};
  double previous = wkb_action(p, 1.9).action;
  for (double gap : {1e-2, 1e-4, 1e-6}) {
    const double a = wkb_action(p, 2.0 - gap).action;
    CHECK(a < previous);
    previous = a;
  }
  CHECK(previous < 1e-5);
}

TEST_CASE("classical frequency at the level energy") {
  // x^2 + B^2/x^2 on one side oscillates at 2w for every energy.
  const WkbContext inv = wkb_action(InvSquare{1.3, 1.0}, 5.0);
  CHECK(inv.w_classical == doctest::Approx(2.6).epsilon(1e-9));
  CHECK(std::isinf(inv.action));
  CHECK(wkb_splitting(inv) == 0.0);
  CHECK(wkb_transmission(inv) == 0.0);

  const WkbContext m = wkb_action(MorsePair{}, -14.0);
  // Morse oscillation frequency alpha sqrt(2(-E)/m).
  CHECK(m.w_classical == doctest::Approx(2.0 * std::sqrt(28.0)).epsilon(1e-8));
}

TEST_CASE("splitting identities") {
  for (double pf : {1.0, 0.6}) {
    const PhysConfig phys{1.1, 0.8, pf};
    const WkbContext c = wkb_action(ParabolicPair{1.4, 2.5}, 0.7, phys);
    const double d = wkb_splitting(c);
    CHECK(d > 0.0);
    CHECK(wkb_splitting_from_amplitude(c) == doctest::Approx(d).epsilon(1e-13));
    CHECK(splitting_from_transmission(c, wkb_transmission(c)) == doctest::Approx(d).epsilon(1e-13));
    CHECK(d == doctest::Approx(pf * c.w_classical * 1.1 / pi * std::exp(-c.action)).epsilon(1e-14));
    CHECK(wkb_transmission(c) <= 1.0);
  }
}

TEST_CASE("WKB transmission against the exact square barrier") {
  const SquareWell sq{3.0, 1.0, 1.0, 3.0, 10.0, 0.0};
  for (double E : {0.5, 2.0, 5.0, 7.0, 8.0}) {
    const WkbContext c = wkb_action(sq, E);
    REQUIRE(c.action >= 3.0);
    const double ratio = wkb_transmission(c) / transmission(sq, E).D;
    CHECK(ratio >= 0.25);
    CHECK(ratio <= 4.0);
  }
}

TEST_CASE("WKB and Hermite splittings agree with each other and the oracle") {
  const ParabolicPair p{1.0, 2.0};
  const double full_gap = 2.0 * parabolic_splitting(p, 0).delta_E_n;
  const double wkb = wkb_splitting(wkb_action(p, 0.5));
  CHECK(wkb / full_gap >= 0.5);
  CHECK(wkb / full_gap <= 2.0);
  const double gap = oracle_gap(p, 0);
  CHECK(wkb / gap >= 0.5);
  CHECK(wkb / gap <= 2.0);
}

TEST_CASE("Morse doublet from WKB") {
  const Spectrum sp = solve_oscillation_spectrum(MorsePair{});
  const double gap = sp.levels[1].energy - sp.levels[0].energy;
  const double mid = 0.5 * (sp.levels[1].energy + sp.levels[0].energy);
  const double ratio = wkb_splitting(wkb_action(MorsePair{}, mid)) / gap;
  CHECK(ratio > 0.5);
  CHECK(ratio < 2.0);
}

TEST_CASE("turning point failures") {
  CHECK_THROWS_AS(wkb_action(ParabolicPair{1.0, 2.0}, 2.5), TurningPointError);
  CHECK_THROWS_AS(wkb_action(InvSquare{1.0, 0.0}, 1.0), TurningPointError);
  CHECK_THROWS_AS(wkb_action(SquareWell{}, 6.0), TurningPointError);
}

TEST_CASE("parabolic n = 0 example") {
  const ParabolicLevel l = parabolic_splitting(ParabolicPair{1.0, 2.0}, 0);
  const double a0 = 1.0 / (0.5 * std::sqrt(pi) * (1.0 + std::erf(2.0)));
  CHECK(l.A_n_sq == doctest::Approx(a0).epsilon(1e-14));
  CHECK(l.A_n_sq == doctest::Approx(0.565512).epsilon(1e-5));
  const double quad = integrate([](double x) { return std::exp(-(x - 2.0) * (x - 2.0)); }, 0.0, 14.0);
  CHECK(l.A_n_sq == doctest::Approx(1.0 / quad).epsilon(1e-10));
  CHECK(l.delta_E_n == doctest::Approx(a0 * std::exp(-4.0) * 2.0).epsilon(1e-14));
  CHECK(l.delta_E_n == doctest::Approx(2.07e-2).epsilon(1e-2));
  CHECK(l.alpha == 1.0);
}

TEST_CASE("normalisation matches quadrature for n <= 5") {
  for (double a : {1.5, 2.0, 3.0}) {
    for (double w : {1.0, 2.25}) {
      const ParabolicPair p{w, a};
      for (int n = 0; n <= 5; ++n) {
        const ParabolicLevel l = parabolic_splitting(p, n);
        const double al = l.alpha;
        const double q = integrate(
            [&](double x) {
              const double h = hermite(n, al * (x - a));
              return std::exp(-al * al * (x - a) * (x - a)) * h * h;
            },
            0.0, a + 14.0 / al, 1e-14);
        CHECK(l.A_n_sq == doctest::Approx(1.0 / q).epsilon(1e-8));
        if (n >= 2) CHECK(std::abs(l.A_n_sq_quoted / l.A_n_sq - 1.0) > 1e-8);
      }
    }
  }
}

TEST_CASE("shift is the product phi(0) phi'(0) of the right-well state") {
  const ParabolicPair p{1.6, 1.8};
  const PhysConfig phys{0.8, 1.3};
  for (int n = 0; n <= 4; ++n) {
    const ParabolicLevel l = parabolic_splitting(p, n, phys);
    const double al = l.alpha;
    const auto phi = [&](double x) {
      return std::sqrt(l.A_n_sq) * std::exp(-0.5 * al * al * (x - p.a) * (x - p.a)) *
             hermite(n, al * (x - p.a));
    };
    const double h = 1e-5;
    const double dphi = (phi(h) - phi(-h)) / (2.0 * h);
    CHECK(l.delta_E_n ==
          doctest::Approx(phys.hbar * phys.hbar / phys.mass * phi(0.0) * dphi).epsilon(1e-7));
  }
}

TEST_CASE("parabolic level pair") {
  const PhysConfig phys{1.2, 0.7};
  for (int n = 0; n <= 3; ++n) {
    const ParabolicLevel l = parabolic_splitting(ParabolicPair{1.1, 3.0}, n, phys);
    CHECK(l.E_plus + l.E_minus == doctest::Approx(2.0 * 1.2 * 1.1 * (n + 0.5)).epsilon(1e-15));
    CHECK(l.E_plus - l.E_minus == doctest::Approx(2.0 * l.delta_E_n));
    CHECK(l.delta_E_n > 0.0);
    CHECK(l.A_n_sq > 0.0);
  }
  double previous = 1.0;
  for (double a : {2.0, 3.0, 4.0, 5.0}) {
    const double d = parabolic_splitting(ParabolicPair{1.0, a}, 1).delta_E_n;
    CHECK(d < previous);
    previous = d;
  }
  CHECK(previous < 1e-8);
  CHECK_THROWS_AS(parabolic_splitting(ParabolicPair{1.0, 2.0}, -1), DomainError);
}

TEST_CASE("shift against the oracle half-gap") {
  for (double a : {2.5, 3.0, 3.5}) {
    const ParabolicPair p{1.0, a};
    for (int n = 0; n <= 1; ++n) {
      const double ratio = parabolic_splitting(p, n).delta_E_n / (0.5 * oracle_gap(p, n));
      CHECK(ratio >= 0.7);
      CHECK(ratio <= 1.4);
    }
  }
}
