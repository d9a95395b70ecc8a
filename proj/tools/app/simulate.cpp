#include <algorithm>
#include <cmath>
#include <complex>
#include <numbers>
#include <ostream>
#include <sstream>

#include <boost/math/tools/minima.hpp>

#include "app.hpp"
#include "dwell/dynamics.hpp"
#include "dwell/morse.hpp"
#include "dwell/numerics.hpp"
#include "dwell/oracle.hpp"
#include "dwell/squarewell.hpp"
#include "families.hpp"

namespace dwell::app {

namespace {

using Matrix = std::vector<std::vector<double>>;

struct PacketChoice {
  std::vector<int> indices;  // into the computed spectrum
  int levels_needed = 0;     // 0: default count
  bool plus_only = false;
  bool minus_only = false;
};

int parse_index(const std::string& s) {
  std::size_t used = 0;
  int v = -1;
  try {
    v = std::stoi(s, &used);
  } catch (const std::exception&) {
    used = 0;
  }
  if (s.empty() || used != s.size() || v < 0) throw UsageError("invalid level index '" + s + "'");
  return v;
}

PacketChoice parse_packet(const std::string& text, const PotentialSpec& spec) {
  PacketChoice c;
  const auto colon = text.find(':');
  const std::string kind = text.substr(0, colon);
  const std::string arg = colon == std::string::npos ? "" : text.substr(colon + 1);
  if (kind == "doublet") {
    const int k = parse_index(arg);
    c.indices = {2 * k, 2 * k + 1};
    c.levels_needed = 2 * k + 2;
  } else if (kind == "levels") {
    std::stringstream ss(arg);
    std::string item;
    while (std::getline(ss, item, ',')) c.indices.push_back(parse_index(item));
    if (c.indices.empty()) throw UsageError("levels packet needs at least one index");
    std::sort(c.indices.begin(), c.indices.end());
    if (std::adjacent_find(c.indices.begin(), c.indices.end()) != c.indices.end()) {
      throw UsageError("levels packet repeats an index");
    }
    c.levels_needed = c.indices.back() + 1;
  } else if (kind == "all" && arg.empty()) {
    const auto* inv = std::get_if<InvSquare>(&spec);
    c.plus_only = inv && inv->B > 0.0;
  } else if (kind == "ladder" && std::holds_alternative<InvSquare>(spec)) {
    if (arg == "plus") {
      c.plus_only = true;
    } else if (arg == "minus") {
      c.minus_only = true;
    } else {
      throw UsageError("ladder packet is ladder:plus or ladder:minus");
    }
  } else {
    throw UsageError("unknown packet '" + text + "' (doublet:k, levels:i,j,..., all, ladder:plus|minus)");
  }
  return c;
}

// First sample (from the left) above 1e-3 of the maximum is made positive,
// so equal-amplitude doublets start in the left well.
int sign_convention(const std::vector<double>& samples) {
  double big = 0.0;
  for (double v : samples) big = std::max(big, std::abs(v));
  for (double v : samples) {
    if (std::abs(v) > 1e-3 * big) return v > 0.0 ? 1 : -1;
  }
  return 1;
}

struct Overlaps {
  Matrix left;
  Matrix right;
  std::string source;
};

Overlaps analytic_overlaps(const PotentialSpec& spec, const std::vector<Level>& levels, const PhysConfig& phys) {
  SolverConfig cfg;
  cfg.phys = phys;
  const Interval dom = natural_domain(spec);
  std::vector<std::function<double(double)>> phi;
  for (const Level& l : levels) {
    std::function<double(double)> f;
    if (const auto* s = std::get_if<SquareWell>(&spec)) {
      const SquareWavefunction wf = wavefunction(*s, l, cfg);
      f = [wf](double x) { return wf(x); };
    } else {
      const MorseWavefunction wf = wavefunction(std::get<MorsePair>(spec), l, cfg);
      f = [wf](double x) { return wf(x); };
    }
    std::vector<double> samples;
    for (int i = 1; i < 2000; ++i) samples.push_back(f(dom.lo + (dom.hi - dom.lo) * i / 2000.0));
    const int sign = sign_convention(samples);
    phi.push_back([f, sign](double x) { return sign * f(x); });
  }
  const double split = detail::split_point(spec);
  std::vector<double> cuts_l, cuts_r;
  for (double c : breakpoints(spec)) {
    if (c > dom.lo && c < split) cuts_l.push_back(c);
    if (c > split && c < dom.hi) cuts_r.push_back(c);
  }
  const std::size_t n = levels.size();
  Overlaps o{Matrix(n, std::vector<double>(n)), Matrix(n, std::vector<double>(n)), "analytic"};
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = i; j < n; ++j) {
      const RealFn prod = [&](double x) { return phi[i](x) * phi[j](x); };
      o.left[i][j] = o.left[j][i] = integrate_pieces(prod, dom.lo, split, cuts_l, 1e-12);
      o.right[i][j] = o.right[j][i] = integrate_pieces(prod, split, dom.hi, cuts_r, 1e-12);
    }
  }
  return o;
}

// Eigenvectors of the finite-difference problem; `oracle_index` maps each
// packet level to a state.
Overlaps oracle_overlaps(const PotentialSpec& spec, const std::vector<int>& oracle_index,
                         const PhysConfig& phys) {
  const int need = *std::max_element(oracle_index.begin(), oracle_index.end()) + 1;
  const OracleResult r = solve_grid(make_grid_problem(spec, phys, need, 4000), need);
  if (static_cast<int>(r.states.size()) < need) throw ConvergenceError("oracle returned too few states");
  const double split = detail::split_point(spec);
  const std::size_t n = oracle_index.size();
  std::vector<std::vector<double>> v;
  for (int k : oracle_index) {
    std::vector<double> s = r.states[k];
    double norm = 0.0;
    for (double x : s) norm += x * x;
    const double scale = sign_convention(s) / std::sqrt(norm);
    for (double& x : s) x *= scale;
    v.push_back(std::move(s));
  }
  Overlaps o{Matrix(n, std::vector<double>(n)), Matrix(n, std::vector<double>(n)), "oracle eigenvectors"};
  for (std::size_t p = 0; p < r.grid.size(); ++p) {
    const double x = r.grid[p];
    const double wl = std::abs(x - split) < 1e-9 * r.step ? 0.5 : (x < split ? 1.0 : 0.0);
    for (std::size_t i = 0; i < n; ++i) {
      for (std::size_t j = 0; j < n; ++j) {
        const double prod = v[i][p] * v[j][p];
        o.left[i][j] += wl * prod;
        o.right[i][j] += (1.0 - wl) * prod;
      }
    }
  }
  return o;
}

// P(t) = sum g_i g_j cos((E_i - E_j) t / hbar) O_ij for real amplitudes.
struct Occupation {
  std::vector<double> g;
  std::vector<double> e;
  double hbar = 1.0;

  double value(const Matrix& o, double t) const {
    double s = 0.0;
    for (std::size_t i = 0; i < g.size(); ++i) {
      for (std::size_t j = 0; j < g.size(); ++j) s += g[i] * g[j] * std::cos((e[i] - e[j]) * t / hbar) * o[i][j];
    }
    return s;
  }
  double rate(const Matrix& o, double t) const {
    double s = 0.0;
    for (std::size_t i = 0; i < g.size(); ++i) {
      for (std::size_t j = 0; j < g.size(); ++j) {
        const double w = (e[i] - e[j]) / hbar;
        s -= g[i] * g[j] * w * std::sin(w * t) * o[i][j];
      }
    }
    return s;
  }
};

// First return of P_left to within 1e-3 of P_left(0), refined to the
// stationary point inside the return window.
std::optional<double> measure_period(const Occupation& occ, const Matrix& left, double t_max) {
  double range = 0.0;
  for (double x : occ.e) range = std::max(range, std::abs(x - occ.e.front()));
  if (!(range > 0.0)) return std::nullopt;
  const double dt = std::numbers::pi * occ.hbar / (40.0 * range);
  const long long steps = std::min<long long>(static_cast<long long>(std::ceil(t_max / dt)), 20000000LL);
  const double p0 = occ.value(left, 0.0);
  bool left_start = false;
  double enter = -1.0;
  for (long long i = 1; i <= steps; ++i) {
    const double t = static_cast<double>(i) * dt;
    const bool near = std::abs(occ.value(left, t) - p0) <= 1e-3;
    if (!left_start) {
      left_start = !near;
      continue;
    }
    if (near && enter < 0.0) enter = t - dt;
    if (enter >= 0.0 && (!near || i == steps)) {
      const double exit = t;
      const auto dp = [&](double s) { return occ.rate(left, s); };
      const double f_lo = dp(enter), f_hi = dp(exit);
      if (f_lo * f_hi < 0.0) {
        RootConfig rc;
        rc.abs_tol = 1e-15 * exit;
        rc.rel_tol = 1e-15;
        return refine_root(dp, {enter, exit, f_lo, f_hi}, rc);
      }
      const auto [tm, v] = boost::math::tools::brent_find_minima(
          [&](double s) { return std::abs(occ.value(left, s) - p0); }, enter, exit, 52);
      (void)v;
      return tm;
    }
  }
  return std::nullopt;
}

}  // namespace

Simulation simulate(const PotentialSpec& spec, const SimulateOptions& opts) {
  if (opts.steps < 1) throw UsageError("--steps must be at least 1");
  if (opts.t_max < 0.0) throw UsageError("--t-max must be non-negative");
  const PacketChoice choice = parse_packet(opts.packet, spec);
  const Spectrum sp = detail::compute_spectrum(spec, choice.levels_needed, opts.phys);
  const std::vector<bool> comparable = detail::oracle_comparable(spec, sp);

  std::vector<int> idx = choice.indices;
  if (idx.empty()) {
    for (int i = 0; i < static_cast<int>(sp.levels.size()); ++i) {
      const Parity p = sp.levels[i].parity;
      if (choice.plus_only && p != Parity::odd) continue;
      if (choice.minus_only && p != Parity::even) continue;
      idx.push_back(i);
    }
  }
  for (int i : idx) {
    if (i >= static_cast<int>(sp.levels.size())) {
      throw UsageError("packet refers to level " + std::to_string(i) + " but only " +
                       std::to_string(sp.levels.size()) + " levels were found");
    }
  }

  std::vector<Level> levels;
  for (int i : idx) levels.push_back(sp.levels[i]);
  Overlaps ov;
  const bool analytic = std::holds_alternative<SquareWell>(spec) || std::holds_alternative<MorsePair>(spec);
  if (analytic) {
    ov = analytic_overlaps(spec, levels, opts.phys);
  } else {
    std::vector<int> oracle_index;
    for (int i : idx) {
      if (!comparable[i]) {
        throw UsageError("level " + std::to_string(i) + " is not a bound state of the hard-core problem");
      }
      oracle_index.push_back(static_cast<int>(std::count(comparable.begin(), comparable.begin() + i, true)));
    }
    ov = oracle_overlaps(spec, oracle_index, opts.phys);
  }

  Occupation occ;
  occ.hbar = opts.phys.hbar;
  std::vector<std::complex<double>> amps;
  for (const Level& l : levels) {
    occ.e.push_back(l.energy);
    occ.g.push_back(1.0 / std::sqrt(static_cast<double>(levels.size())));
    amps.emplace_back(1.0, 0.0);
  }

  Simulation sim;
  sim.energies = occ.e;
  sim.state_source = ov.source;
  std::optional<WavePacket> packet;
  if (std::adjacent_find(occ.e.begin(), occ.e.end(), std::greater_equal<>()) == occ.e.end()) {
    packet = make_packet(occ.e, amps, opts.phys.hbar);
  }
  if (levels.size() >= 2 && packet) {
    const CommensurabilityReport rep = commensurate_delta(occ.e, std::nullopt, 10000, opts.phys.hbar);
    if (rep.delta) sim.predicted_period = poincare_period(rep);
  }
  double t_max = opts.t_max;
  if (t_max == 0.0) {
    if (sim.predicted_period) {
      t_max = 2.0 * *sim.predicted_period;
    } else if (levels.size() >= 2 && occ.e[1] > occ.e[0]) {
      t_max = 4.0 * std::numbers::pi * opts.phys.hbar / (occ.e[1] - occ.e[0]);
    } else {
      t_max = 1.0;
    }
  }
  for (int i = 0; i <= opts.steps; ++i) {
    const double t = t_max * i / opts.steps;
    SimulationRow row;
    row.t = t;
    row.autocorrelation = packet ? std::abs(autocorrelation(*packet, t)) : 1.0;
    row.p_left = occ.value(ov.left, t);
    row.p_right = occ.value(ov.right, t);
    sim.rows.push_back(row);
  }
  if (packet && levels.size() >= 2) sim.measured_period = measure_period(occ, ov.left, t_max);
  if (packet && sim.predicted_period) sim.revival = std::abs(autocorrelation(*packet, *sim.predicted_period));
  return sim;
}

void write_simulation(std::ostream& out, const Simulation& sim) {
  out << "t,autocorrelation,P_left,P_right\n";
  for (const auto& r : sim.rows) {
    out << format_number(r.t) << ',' << format_number(r.autocorrelation) << ','
        << format_number(r.p_left) << ',' << format_number(r.p_right) << '\n';
  }
  const auto opt = [](const std::optional<double>& x) {
    return x ? format_number(*x) : std::string("nan");
  };
  out << "# predicted_period," << opt(sim.predicted_period) << '\n';
  out << "# measured_period," << opt(sim.measured_period) << '\n';
  out << "# revival," << opt(sim.revival) << '\n';
  out << "# states," << sim.state_source << '\n';
}

}  // namespace dwell::app
