#include "dwell/core.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

namespace dwell {

namespace {

template <class... Ts>
struct overloaded : Ts... {
  using Ts::operator()...;
};
template <class... Ts>
overloaded(Ts...) -> overloaded<Ts...>;

void require(bool ok, const char* what) {
  if (!ok) throw DomainError(what);
}

bool finite_all(std::initializer_list<double> xs) {
  return std::all_of(xs.begin(), xs.end(), [](double v) { return std::isfinite(v); });
}

}  // namespace

void PhysConfig::validate() const {
  require(hbar > 0.0 && std::isfinite(hbar), "hbar must be positive");
  require(mass > 0.0 && std::isfinite(mass), "mass must be positive");
  require(wkb_prefactor > 0.0 && std::isfinite(wkb_prefactor), "wkb_prefactor must be positive");
}

void SquareWell::validate() const {
  require(finite_all({d, c, a, b, U0, W0}), "square well parameters must be finite");
  require(-d < -c && -c <= a && a < b, "square well geometry requires -d < -c <= a < b");
  require(U0 > 0.0, "square well requires U0 > 0");
  require(W0 >= 0.0, "square well requires W0 >= 0");
}

void MorsePair::validate() const {
  require(finite_all({A, B, alpha, beta, c, a, d, b}), "Morse parameters must be finite");
  require(A > 0.0 && B > 0.0, "Morse depths A, B must be positive");
  require(alpha > 0.0 && beta > 0.0, "Morse ranges alpha, beta must be positive");
  require(-d < 0.0 && 0.0 < b, "Morse domain requires -d < 0 < b");
  require(-d < -c && -c < 0.0, "left Morse minimum -c must lie inside (-d, 0)");
  require(0.0 < a && a < b, "right Morse minimum a must lie inside (0, b)");
}

void InvSquare::validate() const {
  require(std::isfinite(w) && std::isfinite(B), "InvSquare parameters must be finite");
  require(w > 0.0, "InvSquare requires w > 0");
  require(B >= 0.0, "InvSquare requires B >= 0");
}

void ParabolicPair::validate() const {
  require(std::isfinite(w) && std::isfinite(a), "ParabolicPair parameters must be finite");
  require(w > 0.0, "ParabolicPair requires w > 0");
  require(a > 0.0, "ParabolicPair requires a > 0");
}

std::string_view to_string(Parity p) {
  switch (p) {
    case Parity::even: return "even";
    case Parity::odd: return "odd";
    case Parity::none: return "none";
  }
  return "none";
}

std::string_view to_string(Well w) {
  switch (w) {
    case Well::left: return "left";
    case Well::right: return "right";
    case Well::both: return "both";
  }
  return "both";
}

std::string_view family_name(const PotentialSpec& spec) {
  return std::visit(overloaded{
                        [](const SquareWell&) { return std::string_view("square"); },
                        [](const MorsePair&) { return std::string_view("morse"); },
                        [](const InvSquare&) { return std::string_view("invsq"); },
                        [](const ParabolicPair&) { return std::string_view("parabolic"); },
                    },
                    spec);
}

void validate(const PotentialSpec& spec) {
  std::visit([](const auto& s) { s.validate(); }, spec);
}

bool is_symmetric(const PotentialSpec& spec) {
  return std::visit(overloaded{
                        [](const SquareWell& s) { return s.is_symmetric(); },
                        [](const MorsePair& s) { return s.is_symmetric(); },
                        [](const InvSquare&) { return true; },
                        [](const ParabolicPair&) { return true; },
                    },
                    spec);
}

std::vector<double> Spectrum::energies() const {
  std::vector<double> out;
  out.reserve(levels.size());
  for (const auto& l : levels) out.push_back(l.energy);
  return out;
}

void finalize(Spectrum& spectrum) {
  std::stable_sort(spectrum.levels.begin(), spectrum.levels.end(),
                   [](const Level& x, const Level& y) { return x.energy < y.energy; });
  for (std::size_t i = 0; i < spectrum.levels.size(); ++i) {
    spectrum.levels[i].index = static_cast<int>(i);
  }
  spectrum.count_bound = static_cast<int>(spectrum.levels.size());
}

Interval natural_domain(const PotentialSpec& spec) {
  constexpr double inf = std::numeric_limits<double>::infinity();
  return std::visit(overloaded{
                        [](const SquareWell& s) { return Interval{-s.d, s.b}; },
                        [](const MorsePair& s) { return Interval{-s.d, s.b}; },
                        [](const InvSquare&) { return Interval{-inf, inf}; },
                        [](const ParabolicPair&) { return Interval{-inf, inf}; },
                    },
                    spec);
}

std::vector<double> breakpoints(const PotentialSpec& spec) {
  return std::visit(overloaded{
                        [](const SquareWell& s) {
                          if (s.a == -s.c) return std::vector<double>{s.a};
                          return std::vector<double>{-s.c, s.a};
                        },
                        [](const MorsePair&) { return std::vector<double>{0.0}; },
                        [](const InvSquare&) { return std::vector<double>{0.0}; },
                        [](const ParabolicPair&) { return std::vector<double>{0.0}; },
                    },
                    spec);
}

double evaluate_potential(const PotentialSpec& spec, double x, const PhysConfig& phys) {
  if (!std::isfinite(x)) throw DomainError("potential evaluated at a non-finite coordinate");
  const auto out_of_domain = [x](double lo, double hi) {
    std::ostringstream msg;
    msg << "x = " << x << " outside potential domain [" << lo << ", " << hi << "]";
    return DomainError(msg.str());
  };
  return std::visit(
      overloaded{
          [&](const SquareWell& s) {
            if (x < -s.d || x > s.b) throw out_of_domain(-s.d, s.b);
            if (x < -s.c) return 0.0;
            if (x <= s.a) return s.U0;
            return -s.W0;
          },
          [&](const MorsePair& s) {
            if (x < -s.d || x > s.b) throw out_of_domain(-s.d, s.b);
            if (x <= 0.0) {
              const double y = std::exp(-s.alpha * (x + s.c));
              return s.A * (y * y - 2.0 * y);
            }
            const double y = std::exp(s.beta * (x - s.a));
            return s.B * (y * y - 2.0 * y);
          },
          [&](const InvSquare& s) {
            if (x == 0.0) {
              if (s.B > 0.0) throw DomainError("InvSquare potential is singular at x = 0");
              return 0.0;
            }
            return 0.5 * phys.mass * s.w * s.w * (x * x + s.B * s.B / (x * x));
          },
          [&](const ParabolicPair& s) {
            const double shifted = std::abs(x) - s.a;
            return 0.5 * phys.mass * s.w * s.w * shifted * shifted;
          },
      },
      spec);
}

}  // namespace dwell
