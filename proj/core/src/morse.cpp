#include "dwell/morse.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <sstream>

#include <boost/math/tools/roots.hpp>

namespace dwell {

namespace {

constexpr double kGuard = 1e-6;
constexpr double kNearGuard = 1e-4;
constexpr double kTwoPi = 2.0 * std::numbers::pi;

// One half of the potential in its own xi variable. `dir` is the sign of
// dxi/dx: -1 on the left, +1 on the right.
struct Side {
  double s = 0.0;
  double n = 0.0;
  double lambda = 0.0;
  double xi0 = 0.0;
  double X = 0.0;
  double rate = 0.0;
  double dir = 0.0;
};

Side make_side(double depth, double rate, double minimum, double wall, double s, double dir,
               const PhysConfig& phys) {
  Side side;
  side.lambda = std::sqrt(2.0 * phys.mass * depth) / (rate * phys.hbar);
  side.s = s;
  side.n = side.lambda - s - 0.5;
  side.xi0 = 2.0 * side.lambda * std::exp(-rate * minimum);
  side.X = side.xi0 * std::exp(rate * wall);
  side.rate = rate;
  side.dir = dir;
  return side;
}

double s_of_energy(const MorsePair& spec, double energy, const PhysConfig& phys) {
  return std::sqrt(-2.0 * phys.mass * energy) / (spec.alpha * phys.hbar);
}

double energy_of_s(const MorsePair& spec, double s_A, const PhysConfig& phys) {
  const double p = spec.alpha * phys.hbar * s_A;
  return -p * p / (2.0 * phys.mass);
}

Side side_A(const MorsePair& spec, double s_A, const PhysConfig& phys) {
  return make_side(spec.A, spec.alpha, spec.c, spec.d, s_A, -1.0, phys);
}

Side side_B(const MorsePair& spec, double s_A, const PhysConfig& phys) {
  return make_side(spec.B, spec.beta, spec.a, spec.b, spec.alpha / spec.beta * s_A, 1.0, phys);
}

ScaledValue power(double xi, double p) {
  return {1.0, static_cast<long double>(p) * std::log(static_cast<long double>(xi))};
}

ScaledValue neg(ScaledValue v) { return {-v.mantissa, v.log_scale}; }

long double log_abs_ld(ScaledValue v) {
  return v.log_scale + std::log(static_cast<long double>(std::abs(v.mantissa)));
}

// Both values divided by the larger magnitude, plus the log of that magnitude.
struct Pair {
  double x = 0.0;
  double y = 0.0;
  long double log_scale = 0.0L;
};

Pair normalised_pair(ScaledValue x, ScaledValue y) {
  if (x.mantissa == 0.0 && y.mantissa == 0.0) return {};
  const long double L =
      x.mantissa == 0.0 ? log_abs_ld(y)
                        : (y.mantissa == 0.0 ? log_abs_ld(x) : std::max(log_abs_ld(x), log_abs_ld(y)));
  return {x.mantissa * static_cast<double>(std::exp(x.log_scale - L)),
          y.mantissa * static_cast<double>(std::exp(y.log_scale - L)), L};
}

std::pair<double, double> common(ScaledValue x, ScaledValue y) {
  const Pair p = normalised_pair(x, y);
  return {p.x, p.y};
}

// sqrt(x^2 + y^2) as a scaled value.
ScaledValue magnitude(ScaledValue x, ScaledValue y) {
  const Pair p = normalised_pair(x, y);
  return {std::hypot(p.x, p.y), p.log_scale};
}

// t1 = xi^s F1, t2 = xi^-s F2 and their xi-derivatives.
struct Basis {
  ScaledValue t1, t2, d1, d2;
};

Basis basis(const Side& side, double xi, KummerPath path) {
  const double s = side.s, n = side.n;
  const ScaledValue F1 = kummer_m_scaled(-n, 1.0 + 2.0 * s, xi, path);
  const ScaledValue F1p = kummer_m_dxi_scaled(-n, 1.0 + 2.0 * s, xi, path);
  const ScaledValue F2 = kummer_m_scaled(-n - 2.0 * s, 1.0 - 2.0 * s, xi, path);
  const ScaledValue F2p = kummer_m_dxi_scaled(-n - 2.0 * s, 1.0 - 2.0 * s, xi, path);
  const ScaledValue up = power(xi, s), down = power(xi, -s);
  Basis b;
  b.t1 = F1 * up;
  b.t2 = F2 * down;
  b.d1 = add(F1 * (s / xi), F1p) * up;
  b.d2 = add(F2 * (-s / xi), F2p) * down;
  return b;
}

// Null vector of the wall condition, scaled so max(|c1|, |c2|) = 1.
struct Amplitudes {
  double c1 = 0.0;
  double c2 = 0.0;
};

Amplitudes wall_amplitudes(const Side& side, KummerPath path) {
  const double s = side.s, n = side.n, X = side.X;
  const ScaledValue F1 = kummer_m_scaled(-n, 1.0 + 2.0 * s, X, path);
  const ScaledValue F2 = kummer_m_scaled(-n - 2.0 * s, 1.0 - 2.0 * s, X, path);
  const auto [c1, c2] = common(neg(F2 * power(X, -s)), F1 * power(X, s));
  return {c1, c2};
}

// u and du/dxi of e^{-xi/2}(c1 t1 + c2 t2), plus the size of the larger term.
struct Local {
  ScaledValue u, du;
  double log_term = 0.0;
};

Local local(const Amplitudes& amp, const Basis& b, double xi) {
  const ScaledValue p1 = b.t1 * amp.c1, p2 = b.t2 * amp.c2;
  Local out;
  out.u = add(p1, p2);
  out.du = add(add(b.d1, b.t1 * -0.5) * amp.c1, add(b.d2, b.t2 * -0.5) * amp.c2);
  out.u.log_scale -= 0.5 * xi;
  out.du.log_scale -= 0.5 * xi;
  out.log_term = std::max(p1.log_abs(), p2.log_abs()) - 0.5 * xi;
  return out;
}

// phi(0) and phi'(0) of the wall-satisfying solution on one side.
struct Junction {
  ScaledValue phi, dphi;
};

Junction junction(const Side& side, KummerPath path) {
  const Amplitudes amp = wall_amplitudes(side, path);
  const Local l = local(amp, basis(side, side.xi0, path), side.xi0);
  return {l.u, l.du * (side.dir * side.rate * side.xi0)};
}

// Phase angle atan2(phi, phi'/rate) at x = 0; monotone in the energy.
double phase(const Side& side, const Junction& j) {
  const auto [p, dp] = common(j.phi, j.dphi * (1.0 / side.rate));
  return std::atan2(p, dp);
}

bool near_half_integer(double s, double width) {
  const double twice = 2.0 * s;
  return std::abs(twice - std::round(twice)) < 2.0 * width;
}

void check_guard(const MorsePair& spec, double energy, const PhysConfig& phys) {
  if (!(energy < 0.0)) throw DomainError("Morse solutions require E < 0");
  if (in_guard_band(spec, energy, phys)) {
    std::ostringstream msg;
    msg << "E = " << energy << " lies within the 2s integer guard band";
    throw DegenerateParameterError(msg.str());
  }
}

// Transcribed matching factors: V = rho xi^s F1 + xi^-s F2 and the
// matching derivative bracket G, evaluated at the junction without the
// common e^{-xi/2}.
struct Transcribed {
  ScaledValue V, G;
};

ScaledValue wall_ratio(const Side& side, KummerPath path) {
  const double s = side.s, n = side.n, X = side.X;
  const ScaledValue F1 = kummer_m_scaled(-n, 1.0 + 2.0 * s, X, path);
  const ScaledValue F2 = kummer_m_scaled(-n - 2.0 * s, 1.0 - 2.0 * s, X, path);
  if (F1.mantissa == 0.0) return {-F2.sign() * 1.0, std::numeric_limits<double>::max()};
  return {-F2.mantissa / F1.mantissa, F2.log_scale - F1.log_scale -
                                           2.0L * s * std::log(static_cast<long double>(X))};
}

Transcribed transcribed(const Side& side, KummerPath path) {
  const ScaledValue rho = wall_ratio(side, path);
  const Basis b = basis(side, side.xi0, path);
  Transcribed t;
  t.V = add(rho * b.t1, b.t2);
  t.G = add(rho * add(b.d1, b.t1 * -0.5), add(b.d2, b.t2 * -0.5));
  return t;
}

double normalised_difference(ScaledValue lhs, ScaledValue rhs) {
  const auto [l, r] = common(lhs, rhs);
  const double scale = std::abs(l) + std::abs(r);
  return scale == 0.0 ? 0.0 : (l - r) / scale;
}

double single_well_residual(const Side& side, double wall, KummerPath path) {
  const double s = side.s, n = side.n;
  const ScaledValue F1_0 = kummer_m_scaled(-n, 1.0 + 2.0 * s, side.xi0, path);
  const ScaledValue F2_0 = kummer_m_scaled(-n - 2.0 * s, 1.0 - 2.0 * s, side.xi0, path);
  const ScaledValue F1_X = kummer_m_scaled(-n, 1.0 + 2.0 * s, side.X, path);
  const ScaledValue F2_X = kummer_m_scaled(-n - 2.0 * s, 1.0 - 2.0 * s, side.X, path);
  ScaledValue lhs = F2_0 * F1_X;
  lhs.log_scale += 2.0 * s * side.rate * wall;
  return normalised_difference(lhs, F2_X * F1_0);
}

// ---------------------------------------------------------------------------
// Phase scan. Each condition is "a weighted sum of the two junction phases
// hits offset + k step"; the sum is strictly increasing in E, so every
// crossing is a simple root even inside a near-degenerate doublet.

struct Condition {
  double wA = 0.0;
  double wB = 0.0;
  double offset = 0.0;
  double step = std::numbers::pi;
};

struct Sample {
  double s = 0.0;
  double rawA = 0.0;
  double rawB = 0.0;
  double A = 0.0;  // unwrapped
  double B = 0.0;
};

struct Crossing {
  double s = 0.0;
  long k = 0;
};

double unwrap_up(double prev_raw, double raw) {
  double d = std::remainder(raw - prev_raw, kTwoPi);
  if (d < -0.5) d += kTwoPi;
  return d;
}

double unwrap_down(double prev_raw, double raw) {
  double d = std::remainder(raw - prev_raw, kTwoPi);
  if (d > 0.5) d -= kTwoPi;
  return d;
}

double nearest_branch(double raw, double target) {
  return raw + kTwoPi * std::round((target - raw) / kTwoPi);
}

class PhaseScanner {
 public:
  PhaseScanner(const MorsePair& spec, const PhysConfig& phys, KummerPath path)
      : spec_(spec), phys_(phys), path_(path) {}

  std::pair<double, double> raw(double s_A) const {
    const Side a = side_A(spec_, s_A, phys_);
    const Side b = side_B(spec_, s_A, phys_);
    return {phase(a, junction(a, path_)), phase(b, junction(b, path_))};
  }

  // Samples of one guard-free interval in ascending energy (descending s),
  // bisected wherever a phase jumps by more than 2 radians.
  std::vector<Sample> scan(double s_hi, double s_lo, int points) const {
    std::vector<Sample> out;
    for (int i = 0; i < points; ++i) {
      const double s = (i == points - 1) ? s_lo : s_hi + (s_lo - s_hi) * i / (points - 1.0);
      push(out, s);
    }
    for (std::size_t i = 1; i < out.size(); ++i) {
      const double jump = std::max(std::abs(unwrap_up(out[i - 1].rawA, out[i].rawA)),
                                   std::abs(unwrap_down(out[i - 1].rawB, out[i].rawB)));
      const double width = out[i - 1].s - out[i].s;
      if (jump > 2.0 && width > 1e-14 * out[i - 1].s) {
        Sample mid;
        mid.s = 0.5 * (out[i - 1].s + out[i].s);
        std::tie(mid.rawA, mid.rawB) = raw(mid.s);
        out.insert(out.begin() + static_cast<long>(i), mid);
        --i;
      }
    }
    out[0].A = out[0].rawA;
    out[0].B = out[0].rawB;
    for (std::size_t i = 1; i < out.size(); ++i) {
      out[i].A = out[i - 1].A + unwrap_up(out[i - 1].rawA, out[i].rawA);
      out[i].B = out[i - 1].B + unwrap_down(out[i - 1].rawB, out[i].rawB);
    }
    return out;
  }

  std::vector<Crossing> crossings(const std::vector<Sample>& samples, const Condition& cond) const {
    std::vector<Crossing> out;
    const auto total = [&](const Sample& x) { return cond.wA * x.A + cond.wB * x.B; };
    for (std::size_t i = 1; i < samples.size(); ++i) {
      const Sample& l = samples[i - 1];
      const Sample& r = samples[i];
      const double fl = (total(l) - cond.offset) / cond.step;
      const double fr = (total(r) - cond.offset) / cond.step;
      for (long k = static_cast<long>(std::floor(fl)) + 1; k <= static_cast<long>(std::floor(fr));
           ++k) {
        out.push_back({refine(l, r, cond, cond.offset + k * cond.step), k});
      }
    }
    return out;
  }

 private:
  void push(std::vector<Sample>& out, double s) const {
    Sample x;
    x.s = s;
    std::tie(x.rawA, x.rawB) = raw(s);
    out.push_back(x);
  }

  double refine(const Sample& l, const Sample& r, const Condition& cond, double target) const {
    const double midA = 0.5 * (l.A + r.A), midB = 0.5 * (l.B + r.B);
    const auto g = [&](double s) {
      if (s == l.s) return cond.wA * l.A + cond.wB * l.B - target;
      if (s == r.s) return cond.wA * r.A + cond.wB * r.B - target;
      const auto [a, b] = raw(s);
      return cond.wA * nearest_branch(a, midA) + cond.wB * nearest_branch(b, midB) - target;
    };
    const double gl = g(l.s), gr = g(r.s);
    if (gl == 0.0) return l.s;
    if (gr == 0.0) return r.s;
    if ((gl > 0.0) == (gr > 0.0)) return 0.5 * (l.s + r.s);
    boost::math::tools::eps_tolerance<double> tol(std::numeric_limits<double>::digits - 3);
    std::uintmax_t iters = 200;
    const auto [lo, hi] = boost::math::tools::toms748_solve(g, r.s, l.s, gr, gl, tol, iters);
    return 0.5 * (lo + hi);
  }

  MorsePair spec_;
  PhysConfig phys_;
  KummerPath path_;
};

struct Interval1 {
  double hi;
  double lo;
};

// s_A ranges between guard bands, ordered by ascending energy.
std::vector<Interval1> scan_intervals(const MorsePair& spec, const PhysConfig& phys) {
  const double e_lo = -0.999 * std::max(spec.A, spec.B);
  const double e_hi = -1e-9 * std::min(spec.A, spec.B);
  const double s_hi = s_of_energy(spec, e_lo, phys);
  const double s_lo = s_of_energy(spec, e_hi, phys);
  const double ratio_BA = spec.beta / spec.alpha;
  std::vector<std::pair<double, double>> bands;
  for (int j = 1; 0.5 * j <= s_hi + 1.0; ++j) {
    bands.emplace_back(0.5 * j - kGuard, 0.5 * j + kGuard);
  }
  for (int j = 1; ratio_BA * 0.5 * j <= s_hi + 1.0; ++j) {
    const double c = ratio_BA * 0.5 * j, w = ratio_BA * kGuard;
    bands.emplace_back(c - w, c + w);
  }
  std::sort(bands.begin(), bands.end());
  std::vector<Interval1> out;
  double top = s_hi;
  for (auto it = bands.rbegin(); it != bands.rend(); ++it) {
    const auto [blo, bhi] = *it;
    if (blo >= top) continue;
    if (bhi <= s_lo) break;
    if (bhi < top) out.push_back({top, std::max(bhi, s_lo)});
    top = blo;
  }
  if (top > s_lo) out.push_back({top, s_lo});
  return out;
}

struct ScanResult {
  std::vector<double> energies;
  std::vector<long> labels;
  std::vector<std::string> notes;
};

ScanResult solve_condition(const MorsePair& spec, const SolverConfig& cfg, KummerPath path,
                           const Condition& cond) {
  validate(spec);
  cfg.validate();
  const PhysConfig& phys = cfg.phys;
  const PhaseScanner scanner(spec, phys, path);
  const auto intervals = scan_intervals(spec, phys);
  double total = 0.0;
  for (const auto& iv : intervals) total += iv.hi - iv.lo;
  ScanResult out;
  for (const auto& iv : intervals) {
    const int pts = std::max(16, static_cast<int>(cfg.roots.scan_points * (iv.hi - iv.lo) / total));
    const auto samples = scanner.scan(iv.hi, iv.lo, pts);
    for (const Crossing& c : scanner.crossings(samples, cond)) {
      out.energies.push_back(energy_of_s(spec, c.s, phys));
      out.labels.push_back(c.k);
      const double sB = spec.alpha / spec.beta * c.s;
      if (near_half_integer(c.s, kNearGuard) || near_half_integer(sB, kNearGuard)) {
        std::ostringstream msg;
        msg << "level E = " << out.energies.back() << " lies within " << kNearGuard
            << " of a 2s integer guard band";
        out.notes.push_back(msg.str());
      }
    }
  }
  return out;
}

void note_degenerate(Spectrum& spectrum) {
  for (std::size_t i = 1; i < spectrum.levels.size(); ++i) {
    const double e0 = spectrum.levels[i - 1].energy, e1 = spectrum.levels[i].energy;
    if (e1 - e0 <= 4.0 * std::numeric_limits<double>::epsilon() * std::abs(e1)) {
      std::ostringstream msg;
      msg << "levels " << i - 1 << " and " << i << " at E = " << e1
          << " are degenerate to machine precision";
      spectrum.notes.push_back(msg.str());
    }
  }
}

Spectrum to_spectrum(const MorsePair& spec, const ScanResult& r, Well well) {
  Spectrum out;
  out.potential = spec;
  out.notes = r.notes;
  for (double e : r.energies) out.levels.push_back({e, 0, Parity::none, well});
  finalize(out);
  note_degenerate(out);
  return out;
}

Spectrum single_well(const MorsePair& spec, const SolverConfig& cfg, bool left) {
  const auto own = left ? left_well_roots(spec, cfg) : right_well_roots(spec, cfg);
  if (own.empty()) throw NoBoundStatesError("single-well condition has no roots below E = 0");
  const auto other = left ? right_well_roots(spec, cfg) : left_well_roots(spec, cfg);
  Spectrum out;
  out.potential = spec;
  for (double e : own) {
    const bool shared = std::any_of(other.begin(), other.end(), [&](double o) {
      return std::abs(o - e) <= cfg.match_tol_rel * std::abs(e);
    });
    if (shared) {
      std::ostringstream msg;
      msg << "E = " << e << " is shared by both wells and excluded";
      out.notes.push_back(msg.str());
    } else {
      out.levels.push_back({e, 0, Parity::none, left ? Well::left : Well::right});
    }
  }
  finalize(out);
  return out;
}

}  // namespace

bool in_guard_band(const MorsePair& spec, double energy, const PhysConfig& phys) {
  const double sA = s_of_energy(spec, energy, phys);
  const double sB = spec.alpha / spec.beta * sA;
  return near_half_integer(sA, kGuard) || near_half_integer(sB, kGuard);
}

MorseParams morse_params(const MorsePair& spec, double energy, const PhysConfig& phys,
                         KummerPath path) {
  validate(spec);
  phys.validate();
  check_guard(spec, energy, phys);
  const double sA = s_of_energy(spec, energy, phys);
  const Side a = side_A(spec, sA, phys), b = side_B(spec, sA, phys);
  MorseParams p;
  p.s_A = a.s;
  p.s_B = b.s;
  p.n_A = a.n;
  p.n_B = b.n;
  p.lambda_A = a.lambda;
  p.lambda_B = b.lambda;
  p.xi_A0 = a.xi0;
  p.xi_B0 = b.xi0;
  p.X_A = a.X;
  p.X_B = b.X;
  p.c1a_over_c2a = wall_ratio(a, path).value();
  p.c1b_over_c2b = wall_ratio(b, path).value();
  return p;
}

double residual_oscillation(const MorsePair& spec, double energy, const PhysConfig& phys,
                            KummerPath path) {
  check_guard(spec, energy, phys);
  const double sA = s_of_energy(spec, energy, phys);
  const Side a = side_A(spec, sA, phys), b = side_B(spec, sA, phys);
  const Transcribed ta = transcribed(a, path), tb = transcribed(b, path);
  const double factor = -(spec.alpha * a.xi0) / (spec.beta * b.xi0);
  // Divided by the sizes of (V, xi0 G) on both sides, which makes the
  // result a bounded, smooth function of the phase mismatch.
  const ScaledValue size = magnitude(ta.V, ta.G * a.xi0) * magnitude(tb.V, tb.G * b.xi0);
  const ScaledValue diff = add(tb.V * ta.G * factor, neg(tb.G * ta.V));
  return diff.mantissa / size.mantissa *
         static_cast<double>(std::exp(diff.log_scale - size.log_scale)) * b.xi0 * spec.beta /
         std::max(spec.alpha, spec.beta);
}

double matching_determinant(const MorsePair& spec, double energy, const PhysConfig& phys,
                            KummerPath path) {
  check_guard(spec, energy, phys);
  const double sA = s_of_energy(spec, energy, phys);
  const Side a = side_A(spec, sA, phys), b = side_B(spec, sA, phys);
  const Junction ja = junction(a, path), jb = junction(b, path);
  const ScaledValue qa = ja.dphi * (1.0 / spec.alpha), qb = jb.dphi * (1.0 / spec.beta);
  const auto [pa, ua] = common(ja.phi, qa);
  const auto [pb, ub] = common(jb.phi, qb);
  const double theta_a = std::atan2(pa, ua), theta_b = std::atan2(pb, ub);
  // phi_A phi_B' - phi_A' phi_B over the sizes of (phi, phi'/rate).
  return (spec.beta * std::sin(theta_a) * std::cos(theta_b) -
          spec.alpha * std::cos(theta_a) * std::sin(theta_b)) /
         std::max(spec.alpha, spec.beta);
}

double residual_left_well(const MorsePair& spec, double energy, const PhysConfig& phys,
                          KummerPath path) {
  check_guard(spec, energy, phys);
  return single_well_residual(side_A(spec, s_of_energy(spec, energy, phys), phys), spec.d, path);
}

double residual_right_well(const MorsePair& spec, double energy, const PhysConfig& phys,
                           KummerPath path) {
  check_guard(spec, energy, phys);
  return single_well_residual(side_B(spec, s_of_energy(spec, energy, phys), phys), spec.b, path);
}

Spectrum solve_oscillation_spectrum(const MorsePair& spec, const SolverConfig& cfg,
                                    KummerPath path) {
  const ScanResult r = solve_condition(spec, cfg, path, {1.0, -1.0, 0.0, std::numbers::pi});
  if (r.energies.empty()) throw NoBoundStatesError("no Morse oscillation levels below E = 0");
  Spectrum out = to_spectrum(spec, r, Well::both);
  if (spec.is_symmetric()) {
    const PhaseScanner scanner(spec, cfg.phys, path);
    for (auto& l : out.levels) {
      const double theta = scanner.raw(s_of_energy(spec, l.energy, cfg.phys)).first;
      l.parity = std::abs(std::sin(theta)) < std::abs(std::cos(theta)) ? Parity::odd : Parity::even;
    }
  }
  return out;
}

std::vector<double> left_well_roots(const MorsePair& spec, const SolverConfig& cfg,
                                    KummerPath path) {
  auto r = solve_condition(spec, cfg, path, {1.0, 0.0, 0.0, std::numbers::pi}).energies;
  std::sort(r.begin(), r.end());
  return r;
}

std::vector<double> right_well_roots(const MorsePair& spec, const SolverConfig& cfg,
                                     KummerPath path) {
  auto r = solve_condition(spec, cfg, path, {0.0, -1.0, 0.0, std::numbers::pi}).energies;
  std::sort(r.begin(), r.end());
  return r;
}

Spectrum solve_left_well(const MorsePair& spec, const SolverConfig& cfg) {
  return single_well(spec, cfg, true);
}

Spectrum solve_right_well(const MorsePair& spec, const SolverConfig& cfg) {
  return single_well(spec, cfg, false);
}

Spectrum solve_symmetric_parity(const MorsePair& spec, const SolverConfig& cfg, KummerPath path) {
  if (!spec.is_symmetric()) throw DomainError("parity systems need A = B, alpha = beta, c = a, d = b");
  // theta_A = k pi/2: even k is phi(0) = 0, odd k is phi'(0) = 0.
  const ScanResult r = solve_condition(spec, cfg, path, {1.0, 0.0, 0.0, 0.5 * std::numbers::pi});
  if (r.energies.empty()) throw NoBoundStatesError("no Morse parity levels below E = 0");
  Spectrum out;
  out.potential = spec;
  out.notes = r.notes;
  for (std::size_t i = 0; i < r.energies.size(); ++i) {
    const bool node_at_origin = (r.labels[i] % 2 + 2) % 2 == 0;
    out.levels.push_back(
        {r.energies[i], 0, node_at_origin ? Parity::odd : Parity::even, Well::both});
  }
  finalize(out);
  note_degenerate(out);
  return out;
}

TranscriptionCheck check_transcribed_equation(const MorsePair& spec, const SolverConfig& cfg,
                                              double tol) {
  TranscriptionCheck out;
  out.determinant_roots = solve_oscillation_spectrum(spec, cfg).energies();
  out.agrees = true;
  const auto& roots = out.determinant_roots;
  for (std::size_t i = 0; i < roots.size(); ++i) {
    const double e = roots[i];
    const double scale = std::max(1.0, std::abs(e));
    const bool doubled = (i > 0 && roots[i - 1] == e) || (i + 1 < roots.size() && roots[i + 1] == e);
    double found = std::numeric_limits<double>::quiet_NaN();
    try {
      if (doubled) {
        if (std::abs(residual_oscillation(spec, e, cfg.phys)) < tol) found = e;
      } else {
        // Widen the bracket gradually: the transcribed form has a pole next
        // to every well-localised level, often closer than tol.
        const auto f = [&](double x) { return residual_oscillation(spec, x, cfg.phys); };
        for (double frac : {1e-4, 1e-3, 1e-2, 1e-1, 0.5}) {
          const double h = frac * tol * scale;
          const double fl = f(e - h), fr = f(e + h);
          if ((fl > 0.0) == (fr > 0.0) || fl == 0.0 || fr == 0.0) continue;
          boost::math::tools::eps_tolerance<double> t(std::numeric_limits<double>::digits - 3);
          std::uintmax_t iters = 200;
          const auto [lo, hi] = boost::math::tools::toms748_solve(f, e - h, e + h, fl, fr, t, iters);
          const double x = 0.5 * (lo + hi);
          if (std::abs(f(x)) < 1e-6) {
            found = x;
            break;
          }
        }
      }
    } catch (const Error&) {
      found = std::numeric_limits<double>::quiet_NaN();
    }
    out.transcribed_roots.push_back(found);
    if (std::isnan(found)) {
      out.agrees = false;
      out.max_deviation = std::numeric_limits<double>::infinity();
    } else {
      const double dev = std::abs(found - e) / scale;
      out.max_deviation = std::max(out.max_deviation, dev);
      if (dev > tol) out.agrees = false;
    }
  }
  return out;
}

// ---------------------------------------------------------------------------
// Wavefunction

namespace {

// Past this xi the state is below e^-100 of its peak and is not evaluated.
double xi_limit(const Side& side) { return std::max(200.0, 20.0 * side.lambda); }

struct SideEval {
  const Side* side;
  double c1, c2, log_norm;
};

// Returns {phi, dphi/dx}.
std::pair<double, double> evaluate_side(const SideEval& e, double xi) {
  if (xi > xi_limit(*e.side)) return {0.0, 0.0};
  const Local l = local({e.c1, e.c2}, basis(*e.side, xi, KummerPath::automatic), xi);
  constexpr double floor_log = -27.6;  // ln 1e-12
  const auto value = [&](ScaledValue v) {
    if (v.log_abs() < l.log_term + floor_log) return 0.0;
    return v.mantissa * static_cast<double>(std::exp(v.log_scale - e.log_norm));
  };
  const double dxi_dx = e.side->dir * e.side->rate * xi;
  return {value(l.u), value(l.du) * dxi_dx};
}

}  // namespace

double MorseWavefunction::operator()(double x) const {
  if (x < -spec.d || x > spec.b) throw DomainError("x outside the Morse domain");
  if (x <= 0.0) {
    const Side a = side_A(spec, params.s_A, phys);
    return evaluate_side({&a, c1A, c2A, log_norm_A}, a.xi0 * std::exp(-spec.alpha * x)).first;
  }
  const Side b = side_B(spec, params.s_A, phys);
  return evaluate_side({&b, c1B, c2B, log_norm_B}, b.xi0 * std::exp(spec.beta * x)).first;
}

double MorseWavefunction::derivative(double x) const {
  if (x < -spec.d || x > spec.b) throw DomainError("x outside the Morse domain");
  if (x <= 0.0) {
    const Side a = side_A(spec, params.s_A, phys);
    return evaluate_side({&a, c1A, c2A, log_norm_A}, a.xi0 * std::exp(-spec.alpha * x)).second;
  }
  const Side b = side_B(spec, params.s_A, phys);
  return evaluate_side({&b, c1B, c2B, log_norm_B}, b.xi0 * std::exp(spec.beta * x)).second;
}

MorseWavefunction wavefunction(const MorsePair& spec, const Level& level, const SolverConfig& cfg) {
  const PhysConfig& phys = cfg.phys;
  MorseWavefunction wf;
  wf.level = level;
  wf.spec = spec;
  wf.phys = phys;
  wf.params = morse_params(spec, level.energy, phys);
  const Side a = side_A(spec, wf.params.s_A, phys), b = side_B(spec, wf.params.s_A, phys);
  const Amplitudes amp_a = wall_amplitudes(a, KummerPath::automatic);
  const Amplitudes amp_b = wall_amplitudes(b, KummerPath::automatic);
  const Junction ja = junction(a, KummerPath::automatic);
  const Junction jb = junction(b, KummerPath::automatic);

  // Scale the right side onto the left through whichever of phi(0), phi'(0)
  // is better conditioned, then measure the other one.
  const auto [pb, dpb] = common(jb.phi, jb.dphi * (1.0 / spec.beta));
  const bool by_value = std::abs(pb) >= std::abs(dpb);
  const ScaledValue num = by_value ? ja.phi : ja.dphi;
  const ScaledValue den = by_value ? jb.phi : jb.dphi;
  const double sign = (num.sign() == den.sign()) ? 1.0 : -1.0;
  const double log_k = static_cast<double>(log_abs_ld(num) - log_abs_ld(den));
  wf.c1A = amp_a.c1;
  wf.c2A = amp_a.c2;
  wf.c1B = sign * amp_b.c1;
  wf.c2B = sign * amp_b.c2;
  wf.log_norm_A = 0.0;
  wf.log_norm_B = -log_k;

  // Mismatch at the junction relative to the size of (phi, phi'/rate).
  {
    const ScaledValue qa = ja.dphi * (1.0 / spec.alpha);
    const ScaledValue kb_phi{sign * jb.phi.mantissa, jb.phi.log_scale + log_k};
    const ScaledValue kb_q{sign * jb.dphi.mantissa / spec.alpha, jb.dphi.log_scale + log_k};
    const Pair values = normalised_pair(ja.phi, kb_phi);
    const Pair slopes = normalised_pair(qa, kb_q);
    const ScaledValue size = magnitude(ja.phi, qa);
    const auto rel = [&](const Pair& p) {
      return std::abs(p.x - p.y) * static_cast<double>(std::exp(p.log_scale - size.log_scale)) /
             size.mantissa;
    };
    wf.value_mismatch = rel(values);
    wf.derivative_mismatch = rel(slopes);
  }
  if (std::max(wf.value_mismatch, wf.derivative_mismatch) > 1e-6) {
    std::ostringstream msg;
    msg << "E = " << level.energy << " does not match at x = 0 (relative mismatch "
        << std::max(wf.value_mismatch, wf.derivative_mismatch) << ")";
    throw NotAnEigenvalueError(msg.str());
  }

  // Normalise over the part of the domain where xi stays below the limit.
  const double x_lo = std::max(-spec.d, -std::log(xi_limit(a) / a.xi0) / spec.alpha);
  const double x_hi = std::min(spec.b, std::log(xi_limit(b) / b.xi0) / spec.beta);
  const auto sq = [&](double x) {
    const double v = wf(x);
    return v * v;
  };
  const double lo = std::min(x_lo, 0.0), hi = std::max(x_hi, 0.0);
  constexpr double loose = std::numeric_limits<double>::infinity();
  const double rough = integrate(sq, lo, 0.0, loose) + integrate(sq, 0.0, hi, loose);
  const double norm =
      integrate(sq, lo, 0.0, 1e-12 * rough) + integrate(sq, 0.0, hi, 1e-12 * rough);
  if (!(norm > 0.0) || !std::isfinite(norm)) throw NormalizationError("Morse state has zero norm");
  wf.log_norm_A += 0.5 * std::log(norm);
  wf.log_norm_B += 0.5 * std::log(norm);
  return wf;
}

}  // namespace dwell
