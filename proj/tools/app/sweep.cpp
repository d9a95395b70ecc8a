#include <cmath>
#include <limits>
#include <ostream>

#include "app.hpp"
#include "dwell/invsq.hpp"
#include "dwell/squarewell.hpp"
#include "dwell/wkbpara.hpp"
#include "families.hpp"

namespace dwell::app {

namespace {

constexpr double nan = std::numeric_limits<double>::quiet_NaN();

void write_row(std::ostream& out, const std::vector<double>& row) {
  for (std::size_t i = 0; i < row.size(); ++i) out << (i ? "," : "") << format_number(row[i]);
  out << '\n';
}

void write_header(std::ostream& out, const std::vector<std::string>& names) {
  for (std::size_t i = 0; i < names.size(); ++i) out << (i ? "," : "") << names[i];
  out << '\n';
}

void require_variable(const SweepRange& r, std::initializer_list<const char*> names, const char* quantity) {
  for (const char* n : names) {
    if (r.name == n) return;
  }
  std::string list;
  for (const char* n : names) list += (list.empty() ? "" : " or ") + std::string(n);
  throw UsageError(std::string(quantity) + " sweeps over " + list + ", not '" + r.name + "'");
}

const SquareWell& symmetric_square(const PotentialSpec& spec, const char* quantity) {
  const auto* s = std::get_if<SquareWell>(&spec);
  if (!s || !s->is_symmetric()) {
    throw UsageError(std::string(quantity) + " needs a symmetric square well (d = b, c = a, W0 = 0)");
  }
  return *s;
}

// D as a function of the period or of the level spacing. Past the edge of
// the domain, where the level would leave (0, U0), the value is nan.
void sweep_transmission(std::ostream& out, const PotentialSpec& spec, const SweepOptions& o, bool of_T) {
  const char* quantity = of_T ? "D_of_T" : "D_of_delta";
  require_variable(o.vary, {of_T ? "T" : "delta"}, quantity);
  if (!(o.vary.lo > 0.0)) throw UsageError(std::string(quantity) + " needs a positive range");
  std::function<double(double)> f;
  if (const auto* inv = std::get_if<InvSquare>(&spec)) {
    const DShape shape = d_dependency(*inv, o.phys);
    f = [shape, of_T](double x) { return of_T ? shape.in_period(x) : shape.in_spacing(x); };
  } else {
    const SquareWell s = symmetric_square(spec, quantity);
    f = [s, o, of_T](double x) {
      try {
        return of_T ? d_of_period(s, o.n, x, o.phys) : d_of_delta(s, o.n, x, o.phys);
      } catch (const DomainError&) {
        return nan;
      }
    };
  }
  write_header(out, {o.vary.name, "D"});
  for (int i = 0; i < o.vary.steps; ++i) {
    const double x = o.vary.at(i);
    write_row(out, {x, f(x)});
  }
}

void sweep_splitting(std::ostream& out, const PotentialSpec& spec, const SweepOptions& o) {
  const bool para = std::holds_alternative<ParabolicPair>(spec);
  const bool inv = std::holds_alternative<InvSquare>(spec);
  std::vector<std::string> header{o.vary.name, "gap", "wkb_gap"};
  if (para) header.push_back("delta_E_n");
  write_header(out, header);
  for (int i = 0; i < o.vary.steps; ++i) {
    const double x = o.vary.at(i);
    const PotentialSpec s = with_parameter(spec, o.vary.name, x);
    std::vector<double> row{x};
    double mid = nan;
    if (inv) {
      row.push_back(splitting(std::get<InvSquare>(s), o.phys));
    } else if (para) {
      const ParabolicLevel l = parabolic_splitting(std::get<ParabolicPair>(s), o.n, o.phys);
      row.push_back(l.E_plus - l.E_minus);
      mid = 0.5 * (l.E_plus + l.E_minus);
    } else {
      if (!is_symmetric(s)) throw UsageError("splitting sweeps need a symmetric potential");
      const Spectrum sp = detail::compute_spectrum(s, 0, o.phys);
      const std::size_t lo = 2 * static_cast<std::size_t>(o.n);
      if (lo + 1 < sp.levels.size()) {
        row.push_back(sp.levels[lo + 1].energy - sp.levels[lo].energy);
        mid = 0.5 * (sp.levels[lo + 1].energy + sp.levels[lo].energy);
      } else {
        row.push_back(nan);
      }
    }
    double wkb = nan;
    if (std::isfinite(mid)) {
      try {
        wkb = wkb_splitting(wkb_action(s, mid, o.phys));
      } catch (const TurningPointError&) {
      }
    }
    row.push_back(wkb);
    if (para) row.push_back(0.5 * row[1]);
    write_row(out, row);
  }
}

void sweep_spectrum(std::ostream& out, const PotentialSpec& spec, const SweepOptions& o) {
  if (o.levels < 1) throw UsageError("spectrum sweeps need --levels >= 1");
  std::vector<std::string> header{o.vary.name};
  for (int n = 0; n < o.levels; ++n) header.push_back("E" + std::to_string(n));
  write_header(out, header);
  for (int i = 0; i < o.vary.steps; ++i) {
    const double x = o.vary.at(i);
    const PotentialSpec s = with_parameter(spec, o.vary.name, x);
    std::vector<double> row{x};
    Spectrum sp;
    try {
      sp = detail::compute_spectrum(s, o.levels, o.phys);
    } catch (const NoBoundStatesError&) {
    }
    for (int n = 0; n < o.levels; ++n) {
      row.push_back(n < static_cast<int>(sp.levels.size()) ? sp.levels[n].energy : nan);
    }
    write_row(out, row);
  }
}

// f1 = kL against the even and odd f2 branches, plus sin of each phase,
// which changes sign exactly at the levels.
void sweep_residual(std::ostream& out, const PotentialSpec& spec, const SweepOptions& o) {
  const SquareWell s = symmetric_square(spec, "residual");
  require_variable(o.vary, {"k", "E"}, "residual");
  const bool in_k = o.vary.name == "k";
  const double kmax = std::sqrt(2.0 * o.phys.mass * s.U0) / o.phys.hbar;
  const auto k_of = [&](double x) {
    return in_k ? x : std::sqrt(2.0 * o.phys.mass * x) / o.phys.hbar;
  };
  const double lim = in_k ? kmax : s.U0;
  if (!(o.vary.lo > 0.0 && o.vary.hi > 0.0 && o.vary.lo <= lim && o.vary.hi <= lim)) {
    throw UsageError(in_k ? "residual sweep over k must stay in (0, kmax]"
                          : "residual sweep over E must stay in (0, U0]");
  }
  write_header(out, {"k", "E", "f1", "f2_even", "f2_odd", "residual_even", "residual_odd"});
  for (int i = 0; i < o.vary.steps; ++i) {
    const double k = k_of(o.vary.at(i));
    const SymmetricCurves c = symmetric_curves(s, k, o.phys);
    const double e = o.phys.hbar * o.phys.hbar * k * k / (2.0 * o.phys.mass);
    write_row(out, {k, e, c.f1, c.f2_even, c.f2_odd, std::sin(c.phase_even), std::sin(c.phase_odd)});
  }
}

}  // namespace

void write_sweep(std::ostream& out, const PotentialSpec& spec, const SweepOptions& opts) {
  if (opts.n < 0) throw UsageError("--n must be non-negative");
  if (opts.quantity == "D_of_T") return sweep_transmission(out, spec, opts, true);
  if (opts.quantity == "D_of_delta") return sweep_transmission(out, spec, opts, false);
  if (opts.quantity == "splitting") return sweep_splitting(out, spec, opts);
  if (opts.quantity == "spectrum") return sweep_spectrum(out, spec, opts);
  if (opts.quantity == "residual") return sweep_residual(out, spec, opts);
  throw UsageError("unknown sweep quantity '" + opts.quantity + "'");
}

}  // namespace dwell::app
