#include <cmath>
#include <complex>
#include <numbers>
#include <random>

#include "doctest.h"
#include "dwell/numerics.hpp"
#include "dwell/oracle.hpp"
#include "dwell/squarewell.hpp"

using namespace dwell;
using doctest::Approx;

namespace {

constexpr double pi = std::numbers::pi;

const SquareWell kSym{.d = 2, .c = 1, .a = 1, .b = 2, .U0 = 5, .W0 = 0};
const SquareWell kAsym{.d = 2.5, .c = 1, .a = 1, .b = 2, .U0 = 10, .W0 = 0.3};

// Plane-wave transfer matrices across the two steps of the barrier.
double transfer_matrix_D(const SquareWell& s, double e) {
  using C = std::complex<double>;
  const C k = std::sqrt(C(2 * e)), q = std::sqrt(C(2 * (e - s.U0))), k3 = std::sqrt(C(2 * (e + s.W0)));
  const double x1 = -s.c, x2 = s.a;
  // Coefficients (A, B) of A e^{iKx} + B e^{-iKx}; continuity of psi and psi' at x0.
  const auto step = [](C ka, C kb, double x0, C A, C B) {
    const C i(0, 1);
    const C psi = A * std::exp(i * ka * x0) + B * std::exp(-i * ka * x0);
    const C dpsi = i * ka * (A * std::exp(i * ka * x0) - B * std::exp(-i * ka * x0));
    const C Ap = 0.5 * (psi + dpsi / (i * kb)) * std::exp(-i * kb * x0);
    const C Bp = 0.5 * (psi - dpsi / (i * kb)) * std::exp(i * kb * x0);
    return std::pair{Ap, Bp};
  };
  // Propagate a pure transmitted wave backwards from the right.
  auto [A2, B2] = step(k3, q, x2, C(1), C(0));
  auto [A1, B1] = step(q, k, x1, A2, B2);
  (void)B1;
  return std::real(k3 / k) / std::norm(A1);
}

Spectrum oracle_spectrum(const SquareWell& s, int n) {
  const auto r = solve_grid(make_grid_problem(s, {}, n, 4000), n);
  Spectrum sp;
  for (int i = 0; i < static_cast<int>(r.energies.size()); ++i) sp.levels.push_back({.energy = r.energies[i]});
  return sp;
}

}  // namespace

TEST_CASE("symmetric and asymmetric solvers agree on a symmetric well") {
  const Spectrum s = solve_spectrum_symmetric(kSym);
  const Spectrum a = solve_spectrum_asymmetric(kSym);
  REQUIRE(s.size() == a.size());
  for (std::size_t i = 0; i < s.size(); ++i) CHECK(std::abs(s.levels[i].energy - a.levels[i].energy) <= 1e-9);
}

TEST_CASE("symmetric levels alternate even and odd") {
  const Spectrum s = solve_spectrum_symmetric(kSym);
  for (std::size_t i = 0; i < s.size(); ++i) {
    CHECK(s.levels[i].parity == (i % 2 == 0 ? Parity::even : Parity::odd));
    CHECK(s.levels[i].index == static_cast<int>(i));
  }
}

TEST_CASE("asymmetric spectrum matches the finite-difference oracle") {
  const Spectrum sp = solve_spectrum_asymmetric(kAsym);
  const Spectrum ref = oracle_spectrum(kAsym, static_cast<int>(sp.size()));
  REQUIRE(sp.size() == ref.size());
  for (std::size_t i = 0; i < sp.size(); ++i) {
    CAPTURE(i);
    CHECK(std::abs(sp.levels[i].energy - ref.levels[i].energy) <= 1e-4);
  }
}

TEST_CASE("symmetric spectrum matches the finite-difference oracle") {
  const Spectrum sp = solve_spectrum_symmetric(kSym);
  const Spectrum ref = oracle_spectrum(kSym, static_cast<int>(sp.size()));
  REQUIRE(sp.size() == ref.size());
  for (std::size_t i = 0; i < sp.size(); ++i) CHECK(std::abs(sp.levels[i].energy - ref.levels[i].energy) <= 1e-4);
}

TEST_CASE("impenetrable barrier limit") {
  // Width-1 wells, width-1 barrier. Penetration lowers each level by about
  // 2/(chi L); frozen values from an independent high-precision root solve.
  const std::vector<std::pair<double, double>> expected{{1e4, -0.013994660565}, {4e4, -0.007033886668},
                                                        {1e5, -0.004457216926}};
  for (const auto& [U0, shift] : expected) {
    const SquareWell s{.d = 1.5, .c = 0.5, .a = 0.5, .b = 1.5, .U0 = U0, .W0 = 0};
    const Spectrum asym = solve_spectrum_asymmetric(s);
    const Spectrum sym = solve_spectrum_symmetric(s);
    REQUIRE(asym.size() >= 2);
    REQUIRE(sym.size() == asym.size());
    for (const Spectrum* sp : {&asym, &sym}) {
      const double box = 0.5 * pi * pi;
      const double lo = sp->levels[0].energy, hi = sp->levels[1].energy;
      CHECK(lo / box - 1.0 == Approx(shift).epsilon(1e-6));
      CHECK(hi - lo <= 1e-12 * box);
    }
    for (std::size_t i = 0; i < sym.size(); ++i) {
      CHECK(std::abs(sym.levels[i].energy - asym.levels[i].energy) <= 1e-9 * U0);
    }
  }
}

TEST_CASE("splitting shrinks as the barrier rises") {
  double previous = 1e300;
  for (double U0 : {5.0, 10.0, 20.0, 40.0}) {
    SquareWell s = kSym;
    s.U0 = U0;
    const Spectrum sp = solve_spectrum_symmetric(s);
    const double split = sp.levels[1].energy - sp.levels[0].energy;
    CHECK(split > 0.0);
    CHECK(split < previous);
    previous = split;
  }
}

TEST_CASE("zero-width barrier merges the wells") {
  const SquareWell s{.d = 1, .c = 0, .a = 0, .b = 1, .U0 = 50, .W0 = 0};
  const Spectrum sp = solve_spectrum_symmetric(s);
  for (const Level& l : sp.levels) {
    const double k = std::sqrt(2 * l.energy);
    const double n = k * 2.0 / pi;
    CHECK(std::abs(k - pi * std::round(n) / 2.0) <= 1e-6);
  }
}

TEST_CASE("every symmetric root zeroes the full matching determinant") {
  for (double U0 : {3.0, 12.0, 60.0}) {
    SquareWell s = kSym;
    s.U0 = U0;
    for (const Level& l : solve_spectrum_symmetric(s).levels) {
      CHECK(std::abs(square_residual(s, l.energy).relative()) < 1e-8);
    }
  }
}

TEST_CASE("no bound states") {
  const SquareWell s{.d = 0.2, .c = 0.1, .a = 0.1, .b = 0.2, .U0 = 1.0, .W0 = 0};
  CHECK_THROWS_AS(solve_spectrum_symmetric(s), NoBoundStatesError);
  CHECK_THROWS_AS(solve_spectrum_asymmetric(s), NoBoundStatesError);
}

TEST_CASE("wavefunction parity at the centre") {
  const Spectrum sp = solve_spectrum_symmetric(kSym);
  for (const Level& l : sp.levels) {
    const auto wf = wavefunction(kSym, l);
    if (l.parity == Parity::even) {
      CHECK(std::abs(wf(0.0)) > 1e-3);
      CHECK(std::abs(wf.derivative(0.0)) <= 1e-8);
    } else {
      CHECK(std::abs(wf(0.0)) <= 1e-8);
    }
  }
}

TEST_CASE("wavefunction invariants") {
  for (const SquareWell& s : {kSym, kAsym}) {
    const Spectrum sp = solve_spectrum(s);
    for (const Level& l : sp.levels) {
      CAPTURE(l.energy);
      const auto wf = wavefunction(s, l);
      const double norm = integrate_pieces([&](double x) { return wf(x) * wf(x); }, -s.d, s.b, {-s.c, s.a}, 1e-13);
      CHECK(norm == Approx(1.0).epsilon(1e-8));
      CHECK(std::abs(wf(-s.d)) <= 1e-10);
      CHECK(std::abs(wf(s.b)) <= 1e-10);
      for (double x0 : {-s.c, s.a}) {
        const double h = 1e-12;
        const double scale = std::max(1.0, std::abs(wf(x0)));
        CHECK(std::abs(wf(x0 - h) - wf(x0 + h)) <= 1e-8 * scale);
        const double dscale = std::max(1.0, std::abs(wf.derivative(x0 - h)));
        CHECK(std::abs(wf.derivative(x0 - h) - wf.derivative(x0 + h)) <= 1e-8 * dscale);
      }
    }
  }
}

TEST_CASE("node count equals level index") {
  for (const SquareWell& s : {kSym, kAsym}) {
    const Spectrum sp = solve_spectrum(s);
    for (const Level& l : sp.levels) {
      const auto wf = wavefunction(s, l);
      std::vector<double> samples;
      for (int i = 1; i < 10000; ++i) samples.push_back(wf(-s.d + (s.b + s.d) * i / 10000.0));
      CHECK(count_nodes(samples) == l.index);
    }
  }
}

TEST_CASE("closed-form normalisation audit") {
  // The general closed form agrees with quadrature.
  for (const Level& l : solve_spectrum_asymmetric(kAsym).levels) {
    if (l.energy <= 0.0) continue;
    CHECK(wavefunction(kAsym, l).a1_discrepancy < 1e-6);
  }
  // The parity-reduced closed form does not: it drops the sin(2kL)/2k term
  // and half of the barrier cross term.
  const Spectrum sp = solve_spectrum_symmetric(kSym);
  CHECK(wavefunction(kSym, sp.levels[0]).a1_discrepancy > 1e-3);
}

TEST_CASE("non-eigenvalues are rejected") {
  const Spectrum sp = solve_spectrum_symmetric(kSym);
  Level bogus = sp.levels[0];
  bogus.energy += 0.05;
  CHECK_THROWS_AS(wavefunction(kSym, bogus), NotAnEigenvalueError);
  bogus.parity = Parity::none;
  CHECK_THROWS_AS(wavefunction(kSym, bogus), NotAnEigenvalueError);
}

TEST_CASE("transmission examples") {
  const SquareWell thin{.d = 2, .c = 0, .a = 0, .b = 2, .U0 = 2, .W0 = 0};
  const auto t0 = transmission(thin, 1.0);
  CHECK(t0.D == Approx(1.0).epsilon(1e-15));
  CHECK(t0.R == Approx(0.0));
  const SquareWell unit{.d = 2, .c = 0.5, .a = 0.5, .b = 2, .U0 = 2, .W0 = 0};
  const auto t = transmission(unit, 1.0);
  // frozen: 1 / cosh^2(sqrt 2)
  CHECK(t.D == Approx(0.21077109396613).epsilon(1e-12));
  CHECK(t.D == Approx(transfer_matrix_D(unit, 1.0)).epsilon(1e-12));
  CHECK_THROWS_AS(transmission(unit, 0.0), DomainError);
  CHECK_THROWS_AS(transmission(unit, 2.0), DomainError);
}

TEST_CASE("property: D + R = 1 and transfer-matrix agreement") {
  std::mt19937 rng(42);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  for (int i = 0; i < 1000; ++i) {
    SquareWell s{.d = 3, .c = 0.1 + u(rng), .a = u(rng), .b = 3, .U0 = 0.5 + 10 * u(rng), .W0 = 3 * u(rng)};
    const double e = s.U0 * (0.001 + 0.998 * u(rng));
    const auto t = transmission(s, e);
    CHECK(std::abs(t.D + t.R - 1.0) <= 1e-12);
    CHECK(t.D >= 0.0);
    CHECK(t.D <= 1.0);
    if (i % 10 == 0) CHECK(t.D == Approx(transfer_matrix_D(s, e)).epsilon(1e-9));
  }
}

TEST_CASE("D increases with energy") {
  double prev = 0.0;
  for (int i = 1; i < 200; ++i) {
    const double d = transmission(kSym, kSym.U0 * i / 200.0).D;
    CHECK(d > prev);
    prev = d;
  }
}

TEST_CASE("linearized spectrum identities") {
  const auto lin = linearized_spectrum(kSym);
  REQUIRE(lin.N >= 0);
  for (int n = 0; n <= lin.N; ++n) {
    CHECK(lin.energies[n] - lin.energies[0] == Approx(4 * lin.E0 * n * (n + 1)).epsilon(1e-14));
    CHECK(lin.k[n] < std::sqrt(2 * kSym.U0));
  }
  CHECK(lin.period * lin.delta == Approx(2 * pi).epsilon(1e-15));
  // N is the largest integer below (kmax - k0)/(2 k0).
  const double bound = (std::sqrt(2 * kSym.U0) - lin.k0) / (2 * lin.k0);
  CHECK(lin.N < bound);
  CHECK(lin.N + 1 >= bound);
}

TEST_CASE("limiting period") {
  const SquareWell s{.d = 2, .c = 1, .a = 1, .b = 2, .U0 = 5};
  CHECK(limiting_period(s) == Approx(4.0 / pi).epsilon(1e-15));
  SquareWell high = s;
  high.U0 = 1e12;
  CHECK(linearized_spectrum(high).period == Approx(4.0 / pi).epsilon(1e-5));
}

TEST_CASE("D(T) and D(delta) reproduce the scattering formula") {
  for (int n = 0; n < 3; ++n) {
    const double k = 0.7 + 0.4 * n;
    const double e = 0.5 * k * k;
    const double T = pi * (2 * n + 1) * (2 * n + 1) / (k * k);
    const double delta = 2 * k * k / ((2 * n + 1) * (2 * n + 1));
    const double d = transmission(kSym, e).D;
    CHECK(d_of_period(kSym, n, T) == Approx(d).epsilon(1e-10));
    CHECK(d_of_delta(kSym, n, delta) == Approx(d).epsilon(1e-10));
  }
  CHECK(d_of_delta(kSym, 0, 0.0) == 0.0);
  CHECK(d_of_delta(kSym, 0, 1e-12) < 1e-10);
  CHECK_THROWS_AS(d_of_period(kSym, 0, 1e-6), DomainError);
}

TEST_CASE("D(T) is monotone from the domain edge") {
  const double t_edge = pi / (2 * kSym.U0);
  double prev = 2.0;
  for (int i = 1; i <= 200; ++i) {
    const double T = t_edge * (1.0 + 0.05 * i);
    const double d = d_of_period(kSym, 0, T);
    CHECK(d < prev);
    prev = d;
  }
}

TEST_CASE("classification") {
  const auto sym = classify_levels(kSym);
  REQUIRE(!sym.levels.empty());
  for (const auto& c : sym.levels) CHECK(c.tunneling_case == 1);
  const double L = kSym.left_width();
  for (std::size_t n = 0; n < sym.box_left.size(); ++n) {
    CHECK(sym.box_left[n] == Approx(pi * pi * (n + 1) * (n + 1) / (2 * L * L)).epsilon(1e-15));
  }
  SquareWell lopsided = kAsym;
  lopsided.W0 = 4.0;
  const auto asym = classify_levels(lopsided);
  int other = 0;
  for (const auto& c : asym.levels) other += c.tunneling_case != 1;
  CHECK(other >= 1);
}
