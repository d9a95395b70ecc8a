#pragma once

// Time evolution of packets built on a discrete spectrum: commensurability
// of the levels, recurrence period, autocorrelation and well occupations.

#include <complex>
#include <functional>
#include <optional>
#include <vector>

#include "dwell/core.hpp"

namespace dwell {

struct PacketComponent {
  std::complex<double> g;
  double energy = 0.0;
  Level level{};
  /// Real stationary state phi_n(x); may be empty when only spectral
  /// quantities are needed.
  std::function<double(double)> wavefunction;
};

/// psi(x, t) = sum g_n phi_n(x) exp(-i (E_n - E_0) t / hbar).
struct WavePacket {
  std::vector<PacketComponent> components;
  double base_energy = 0.0;
  double hbar = 1.0;

  /// Throws NormalizationError unless sum |g_n|^2 = 1 within 1e-12 and
  /// DomainError unless energies are strictly ascending.
  void validate() const;
  double energy_range() const;
};

/// Sorts by energy, normalises the amplitudes and takes E_0 as the lowest
/// energy.
WavePacket make_packet(std::vector<PacketComponent> components, double hbar = 1.0);
WavePacket make_packet(const std::vector<double>& energies,
                       const std::vector<std::complex<double>>& amplitudes, double hbar = 1.0);

struct CommensurabilityReport {
  std::optional<double> delta;
  std::optional<std::vector<long long>> l_values;
  std::optional<double> period;
  /// max |E_n - E_0 - l_n delta|; the best failed attempt when delta is absent.
  double residual = 0.0;
  double hbar = 1.0;
};

/// Largest delta with every E_n - E_0 within tol of an integer multiple.
/// Each spacing is matched to the smallest one by continued-fraction
/// convergents with denominators up to l_max. tol defaults to 1e-9 times the
/// energy range.
CommensurabilityReport commensurate_delta(const std::vector<double>& energies,
                                          std::optional<double> tol = std::nullopt,
                                          long long l_max = 10000, double hbar = 1.0);
CommensurabilityReport commensurate_delta(const Spectrum& spectrum,
                                          std::optional<double> tol = std::nullopt,
                                          long long l_max = 10000, double hbar = 1.0);

/// 2 pi hbar / delta. Throws IncommensurateError when delta is absent.
double poincare_period(const CommensurabilityReport& report);

/// <psi(0)|psi(t)> = sum |g_n|^2 exp(-i (E_n - E_0) t / hbar).
std::complex<double> autocorrelation(const WavePacket& packet, double t);

/// Smallest t in (0, t_max] at which |autocorrelation| climbs back to
/// `fidelity` after first falling below it. The grid step is
/// pi hbar / (10 E_range); grid maxima that fall short are polished before
/// being discarded.
std::optional<double> quasi_cycle_search(const WavePacket& packet, double fidelity, double t_max);

/// Probability of finding the particle on one side of x_split at time t,
/// integrated over the part of `domain` on that side.
double well_occupation(const WavePacket& packet, Well side, double t, double x_split,
                       Interval domain, const std::vector<double>& cuts = {});

}  // namespace dwell
