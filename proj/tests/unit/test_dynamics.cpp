#include <doctest.h>

#include <boost/math/tools/minima.hpp>
#include <cmath>
#include <numbers>
#include <random>

#include "dwell/dynamics.hpp"
#include "dwell/invsq.hpp"
#include "dwell/squarewell.hpp"

using namespace dwell;

namespace {

constexpr double pi = std::numbers::pi;

std::vector<double> ladder(const Spectrum& sp, Parity p) {
  std::vector<double> out;
  for (const Level& l : sp.levels) {
    if (l.parity == p) out.push_back(l.energy);
  }
  return out;
}

std::vector<std::complex<double>> random_amplitudes(std::mt19937& rng, std::size_t n) {
  std::normal_distribution<double> g;
  std::vector<std::complex<double>> a;
  for (std::size_t i = 0; i < n; ++i) a.emplace_back(g(rng), g(rng));
  return a;
}

// Lowest doublet of a symmetric square well, packet (phi_even + phi_odd)/sqrt 2.
struct Doublet {
  SquareWell spec{3.0, 0.5, 0.5, 3.0, 12.0, 0.0};
  Spectrum sp;
  WavePacket packet;
  double gap = 0.0;

  explicit Doublet(double sign = 1.0) {
    sp = solve_spectrum(spec);
    std::vector<PacketComponent> comps;
    for (int i = 0; i < 2; ++i) {
      PacketComponent c;
      c.g = i == 0 ? 1.0 : sign;
      c.energy = sp.levels[i].energy;
      c.level = sp.levels[i];
      const SquareWavefunction wf = wavefunction(spec, sp.levels[i]);
      c.wavefunction = [wf](double x) { return wf(x); };
      comps.push_back(c);
    }
    packet = make_packet(comps);
    gap = sp.levels[1].energy - sp.levels[0].energy;
  }

  double left(double t) const {
    return well_occupation(packet, Well::left, t, 0.0, {-spec.d, spec.b}, {-spec.c, spec.a});
  }
  double right(double t) const {
    return well_occupation(packet, Well::right, t, 0.0, {-spec.d, spec.b}, {-spec.c, spec.a});
  }
};

}  // namespace

TEST_CASE("packets are normalised and ordered") {
  const WavePacket p = make_packet({3.0, 1.0, 2.0}, {1.0, 2.0, {0.0, 2.0}});
  CHECK(p.components.front().energy == 1.0);
  CHECK(p.base_energy == 1.0);
  double mass = 0.0;
  for (const auto& c : p.components) mass += std::norm(c.g);
  CHECK(mass == doctest::Approx(1.0).epsilon(1e-14));
  CHECK(std::abs(p.components.front().g) == doctest::Approx(2.0 / 3.0));

  WavePacket bad = p;
  bad.components[0].g *= 1.1;
  CHECK_THROWS_AS(bad.validate(), NormalizationError);
  CHECK_THROWS_AS(make_packet(std::vector<double>{1.0, 1.0}, {1.0, 1.0}), DomainError);
  CHECK_THROWS_AS(make_packet(std::vector<double>{1.0}, std::vector<std::complex<double>>{0.0}),
                  NormalizationError);
}

TEST_CASE("common divisor of a simple ladder") {
  const CommensurabilityReport r = commensurate_delta(std::vector<double>{1.0, 2.0, 4.0});
  REQUIRE(r.delta);
  CHECK(*r.delta == doctest::Approx(1.0));
  CHECK(*r.l_values == std::vector<long long>{0, 1, 3});
  CHECK(*r.period == doctest::Approx(2.0 * pi));
  CHECK(poincare_period(r) == doctest::Approx(2.0 * pi));

  const CommensurabilityReport q = commensurate_delta(std::vector<double>{0.3, 0.8, 1.05, 2.3});
  REQUIRE(q.delta);
  CHECK(*q.delta == doctest::Approx(0.25));
  CHECK(*q.l_values == std::vector<long long>{0, 2, 3, 8});
}

TEST_CASE("irrational spacing has no divisor") {
  const std::vector<double> e{1.0, 1.0 + std::sqrt(2.0)};
  // Two levels always share their gap.
  CHECK(commensurate_delta(e, 1e-9).delta);
  const std::vector<double> three{0.0, 1.0, 1.0 + std::sqrt(2.0)};
  const CommensurabilityReport r = commensurate_delta(three, 1e-9, 10000);
  CHECK_FALSE(r.delta);
  CHECK(r.residual > 1e-9);
  CHECK_THROWS_AS(poincare_period(r), IncommensurateError);
}

TEST_CASE("inverse-square ladders have divisor 2 hbar w") {
  for (double B : {0.0, 0.37, 1.0, 2.0}) {
    const InvSquare s{1.3, B};
    const Spectrum sp = spectrum_exact(s, 8);
    for (Parity p : {Parity::odd, Parity::even}) {
      const CommensurabilityReport r = commensurate_delta(ladder(sp, p));
      REQUIRE(r.delta);
      CHECK(*r.delta == doctest::Approx(2.0 * 1.3).epsilon(1e-12));
      CHECK(poincare_period(r) == doctest::Approx(period(s)).epsilon(1e-12));
    }
  }
  // Both ladders of the harmonic oscillator together: hbar w and 2 pi / w.
  const CommensurabilityReport both = commensurate_delta(spectrum_exact(InvSquare{1.3, 0.0}, 8));
  REQUIRE(both.delta);
  CHECK(*both.delta == doctest::Approx(1.3).epsilon(1e-12));
}

TEST_CASE("linearised square-well spacing gives pi hbar / (2 E0)") {
  const LinearizedSpectrum lin = linearized_spectrum(SquareWell{});
  std::vector<double> e;
  for (int n = 0; n < 5; ++n) e.push_back(lin.E0 * (2 * n + 1) * (2 * n + 1));
  const CommensurabilityReport r = commensurate_delta(e);
  REQUIRE(r.delta);
  CHECK(*r.delta == doctest::Approx(8.0 * lin.E0).epsilon(1e-10));
  // Delta = 4 E0 for the spacing used in the period formula.
  CommensurabilityReport manual;
  manual.delta = 4.0 * lin.E0;
  CHECK(poincare_period(manual) == doctest::Approx(pi / (2.0 * lin.E0)));
}

TEST_CASE("divisor is scale-equivariant") {
  std::mt19937 rng(12345);
  std::uniform_int_distribution<int> li(1, 40);
  std::uniform_real_distribution<double> ud(0.05, 3.0);
  for (int trial = 0; trial < 50; ++trial) {
    const double delta = ud(rng);
    const double e0 = ud(rng) - 1.0;
    std::vector<double> e{e0};
    int l = 0;
    for (int k = 0; k < 5; ++k) {
      l += li(rng);
      e.push_back(e0 + l * delta);
    }
    const CommensurabilityReport r = commensurate_delta(e);
    REQUIRE(r.delta);
    const double lambda = ud(rng) * 3.0;
    std::vector<double> scaled;
    for (double x : e) scaled.push_back(lambda * x);
    const CommensurabilityReport s = commensurate_delta(scaled);
    REQUIRE(s.delta);
    CHECK(*s.delta == doctest::Approx(lambda * *r.delta).epsilon(1e-9));
    CHECK(poincare_period(s) == doctest::Approx(poincare_period(r) / lambda).epsilon(1e-9));
    // The largest divisor is an integer multiple of the generating step.
    const double ratio = *r.delta / delta;
    CHECK(std::abs(ratio - std::round(ratio)) < 1e-6);
  }
}

TEST_CASE("autocorrelation basics") {
  std::mt19937 rng(7);
  const WavePacket p = make_packet({0.0, 1.0, 3.0, 4.5}, random_amplitudes(rng, 4), 0.8);
  CHECK(std::abs(autocorrelation(p, 0.0) - 1.0) < 1e-15);
  std::uniform_real_distribution<double> ut(0.0, 100.0);
  for (int i = 0; i < 200; ++i) CHECK(std::abs(autocorrelation(p, ut(rng))) <= 1.0 + 1e-15);
  const double T = poincare_period(commensurate_delta(std::vector<double>{0.0, 1.0, 3.0, 4.5}, {}, 10000, 0.8));
  CHECK(T == doctest::Approx(2.0 * pi * 0.8 / 0.5));
  CHECK(std::abs(std::abs(autocorrelation(p, T)) - 1.0) < 1e-12);

  const double gap = 0.37;
  const WavePacket two = make_packet({1.0, 1.0 + gap}, {1.0, 1.0});
  for (double t : {0.1, 1.0, 4.0, 13.0}) {
    const double c = std::cos(gap * t / 2.0);
    CHECK(std::norm(autocorrelation(two, t)) == doctest::Approx(c * c).epsilon(1e-13));
  }
}

TEST_CASE("inverse-square packets revive at pi / w") {
  std::mt19937 rng(99);
  for (double B : {0.0, 0.5, 1.0, 2.0}) {
    const InvSquare s{1.7, B};
    const Spectrum sp = spectrum_exact(s, 6);
    for (Parity p : {Parity::odd, Parity::even}) {
      const std::vector<double> e = ladder(sp, p);
      const WavePacket packet = make_packet(e, random_amplitudes(rng, e.size()));
      CHECK(std::abs(std::abs(autocorrelation(packet, period(s))) - 1.0) < 1e-10);
    }
  }
}

TEST_CASE("quasi-cycles") {
  std::mt19937 rng(3);
  const WavePacket comm = make_packet({0.0, 1.0, 3.0}, random_amplitudes(rng, 3));
  const auto t = quasi_cycle_search(comm, 0.999, 20.0);
  REQUIRE(t);
  CHECK(*t <= 2.0 * pi + 1e-9);
  CHECK(std::abs(autocorrelation(comm, *t)) >= 0.999 - 1e-9);

  const WavePacket inc = make_packet({0.0, 1.0, std::sqrt(2.0)}, {1.0, 1.0, 1.0});
  const auto q = quasi_cycle_search(inc, 0.99, 2000.0);
  REQUIRE(q);
  CHECK(std::abs(autocorrelation(inc, *q)) == doctest::Approx(0.99).epsilon(1e-9));
  // No earlier grid point reaches the fidelity after the initial decay.
  const double dt = pi / (10.0 * std::sqrt(2.0)) / 20.0;
  bool dropped = false;
  for (double s = dt; s < *q - dt; s += dt) {
    const double a = std::abs(autocorrelation(inc, s));
    if (a < 0.99) dropped = true;
    if (dropped) CHECK(a < 0.99);
  }

  double previous = 0.0;
  for (double f : {0.9, 0.95, 0.98, 0.99, 0.995}) {
    const auto r = quasi_cycle_search(inc, f, 20000.0);
    REQUIRE(r);
    CHECK(*r >= previous);
    previous = *r;
  }
  CHECK_THROWS_AS(quasi_cycle_search(inc, 1.0, 10.0), DomainError);
  CHECK_FALSE(quasi_cycle_search(inc, 0.99, 1.0));
}

TEST_CASE("doublet occupation oscillates with period 2 pi hbar / gap") {
  const Doublet d;
  const double T = 2.0 * pi / d.gap;
  CHECK(d.left(0.0) > 0.99);
  for (double t : {0.0, 0.1 * T, 0.37 * T, 0.5 * T, 0.8 * T}) {
    CHECK(d.left(t) + d.right(t) == doctest::Approx(1.0).epsilon(1e-8));
  }
  CHECK(d.left(0.5 * T) < 0.01);

  // Measured period: first maximum of the left occupation after its minimum.
  const auto neg_left = [&](double t) { return -d.left(t); };
  const int n = 60;
  double best_t = 0.0;
  double best = -1.0;
  for (int i = 1; i <= n; ++i) {
    const double t = 0.6 * T + 0.8 * T * i / n;
    if (d.left(t) > best) {
      best = d.left(t);
      best_t = t;
    }
  }
  const auto [tm, v] =
      boost::math::tools::brent_find_minima(neg_left, best_t - 0.8 * T / n, best_t + 0.8 * T / n, 52);
  (void)v;
  // A maximum of P_L is flat, so Brent locates it to ~sqrt(eps).
  CHECK(tm == doctest::Approx(T).epsilon(1e-6));

  // Two-level formula P_L = 1/2 + c cos(gap t).
  const double c = d.left(0.0) - 0.5;
  for (double t : {0.13 * T, 0.61 * T}) {
    CHECK(d.left(t) == doctest::Approx(0.5 + c * std::cos(d.gap * t)).epsilon(1e-8));
  }
  const Doublet anti(-1.0);
  CHECK(anti.right(0.0) > 0.99);
}
