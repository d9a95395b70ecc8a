#include "dwell/oracle.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include <lapacke.h>

namespace dwell {

namespace {

struct Segment {
  double lo;
  double hi;
  int n;  // interior points on the coarse grid
};

struct SegmentSolution {
  std::vector<double> x;
  std::vector<double> values;
  std::vector<std::vector<double>> vectors;
};

// Average of U over [l, r] using 3-point Gauss on each smooth piece.
double cell_average(const GridProblem& p, double l, double r) {
  static constexpr double node = 0.7745966692414834;  // sqrt(3/5)
  static constexpr double w_end = 5.0 / 9.0;
  static constexpr double w_mid = 8.0 / 9.0;
  std::vector<double> cuts{l};
  for (double b : p.breakpoints) {
    if (b > l && b < r) cuts.push_back(b);
  }
  cuts.push_back(r);
  double total = 0.0;
  for (std::size_t i = 0; i + 1 < cuts.size(); ++i) {
    const double m = 0.5 * (cuts[i] + cuts[i + 1]);
    const double h = 0.5 * (cuts[i + 1] - cuts[i]);
    total += h * (w_end * p.potential(m - node * h) + w_mid * p.potential(m) +
                  w_end * p.potential(m + node * h));
  }
  return total / (r - l);
}

SegmentSolution solve_segment(const GridProblem& p, const Segment& seg, int want) {
  const int n = seg.n;
  const double h = (seg.hi - seg.lo) / (n + 1);
  const double kin = p.phys.hbar * p.phys.hbar / (2.0 * p.phys.mass * h * h);
  SegmentSolution out;
  out.x.resize(n);
  std::vector<double> diag(n), off(std::max(n - 1, 1), -kin);
  for (int j = 0; j < n; ++j) {
    out.x[j] = seg.lo + (j + 1) * h;
    diag[j] = 2.0 * kin + cell_average(p, out.x[j] - 0.5 * h, out.x[j] + 0.5 * h);
  }
  const int m_want = std::min(want, n);
  std::vector<double> w(n), z(static_cast<std::size_t>(n) * m_want);
  std::vector<lapack_int> isuppz(2 * static_cast<std::size_t>(m_want));
  lapack_int found = 0;
  const lapack_int info =
      LAPACKE_dstevr(LAPACK_COL_MAJOR, 'V', 'I', n, diag.data(), off.data(), 0.0, 0.0, 1, m_want,
                     0.0, &found, w.data(), z.data(), n, isuppz.data());
  if (info != 0) {
    std::ostringstream msg;
    msg << "tridiagonal eigensolver failed with info = " << info;
    throw ConvergenceError(msg.str());
  }
  for (int k = 0; k < found; ++k) {
    out.values.push_back(w[k]);
    std::vector<double> v(z.begin() + static_cast<std::ptrdiff_t>(k) * n,
                          z.begin() + static_cast<std::ptrdiff_t>(k + 1) * n);
    const double scale = 1.0 / std::sqrt(h);  // unit L2 norm on the grid
    double largest = 0.0;
    for (double& e : v) {
      e *= scale;
      if (std::abs(e) > std::abs(largest)) largest = e;
    }
    if (largest < 0.0) {
      for (double& e : v) e = -e;
    }
    out.vectors.push_back(std::move(v));
  }
  return out;
}

std::vector<Segment> segments(const GridProblem& p, int refine) {
  std::vector<double> cuts{p.x_lo};
  for (double w : p.hard_walls) {
    if (w > p.x_lo && w < p.x_hi) cuts.push_back(w);
  }
  cuts.push_back(p.x_hi);
  std::sort(cuts.begin(), cuts.end());
  const double total = p.x_hi - p.x_lo;
  std::vector<Segment> out;
  for (std::size_t i = 0; i + 1 < cuts.size(); ++i) {
    const double len = cuts[i + 1] - cuts[i];
    const int coarse = std::max(3, static_cast<int>(std::lround(p.n_points * len / total)));
    out.push_back({cuts[i], cuts[i + 1], refine * (coarse + 1) - 1});
  }
  return out;
}

struct Pass {
  std::vector<double> values;
  std::vector<double> grid;
  std::vector<std::vector<double>> states;
  double step = 0.0;
};

Pass solve_pass(const GridProblem& p, int n_levels, int refine, bool keep_states) {
  const auto segs = segments(p, refine);
  struct Candidate {
    double energy;
    std::size_t segment;
    int k;
  };
  std::vector<SegmentSolution> sols;
  std::vector<Candidate> all;
  for (std::size_t s = 0; s < segs.size(); ++s) {
    sols.push_back(solve_segment(p, segs[s], n_levels));
    for (int k = 0; k < static_cast<int>(sols.back().values.size()); ++k) {
      all.push_back({sols.back().values[k], s, k});
    }
  }
  std::sort(all.begin(), all.end(),
            [](const Candidate& x, const Candidate& y) { return x.energy < y.energy; });
  if (static_cast<int>(all.size()) > n_levels) all.resize(n_levels);

  Pass out;
  out.step = (segs.front().hi - segs.front().lo) / (segs.front().n + 1);
  std::vector<std::size_t> offset;
  for (const auto& sol : sols) {
    offset.push_back(out.grid.size());
    out.grid.insert(out.grid.end(), sol.x.begin(), sol.x.end());
  }
  for (const auto& c : all) {
    out.values.push_back(c.energy);
    if (keep_states) {
      std::vector<double> full(out.grid.size(), 0.0);
      const auto& v = sols[c.segment].vectors[c.k];
      std::copy(v.begin(), v.end(), full.begin() + static_cast<std::ptrdiff_t>(offset[c.segment]));
      out.states.push_back(std::move(full));
    }
  }
  return out;
}

}  // namespace

void GridProblem::validate() const {
  if (!(x_lo < x_hi) || !std::isfinite(x_lo) || !std::isfinite(x_hi)) {
    throw DomainError("grid problem requires finite x_lo < x_hi");
  }
  if (n_points < 3) throw DomainError("grid problem requires n_points >= 3");
  if (!potential) throw DomainError("grid problem has no potential");
  phys.validate();
}

OracleResult solve_grid(const GridProblem& problem, int n_levels) {
  problem.validate();
  if (n_levels < 1) throw DomainError("n_levels must be at least 1");
  const Pass coarse = solve_pass(problem, n_levels, 1, false);
  Pass fine = solve_pass(problem, n_levels, 2, true);
  const std::size_t n = std::min(coarse.values.size(), fine.values.size());

  OracleResult out;
  out.coarse.assign(coarse.values.begin(), coarse.values.begin() + static_cast<std::ptrdiff_t>(n));
  out.fine.assign(fine.values.begin(), fine.values.begin() + static_cast<std::ptrdiff_t>(n));
  for (std::size_t i = 0; i < n; ++i) {
    const double diff = fine.values[i] - coarse.values[i];
    out.energies.push_back(fine.values[i] + diff / 3.0);
    out.error_estimates.push_back(std::abs(diff) / 3.0);
  }
  fine.states.resize(n);
  out.grid = std::move(fine.grid);
  out.states = std::move(fine.states);
  out.step = fine.step;

  if (problem.max_error) {
    for (std::size_t i = 0; i < n; ++i) {
      if (out.error_estimates[i] > *problem.max_error) {
        std::ostringstream msg;
        msg << "grid too coarse: level " << i << " error estimate " << out.error_estimates[i]
            << " exceeds " << *problem.max_error;
        throw GridError(msg.str());
      }
    }
  }
  return out;
}

GridProblem make_grid_problem(const PotentialSpec& spec, const PhysConfig& phys, int n_levels,
                              int n_points) {
  validate(spec);
  phys.validate();
  GridProblem p;
  p.n_points = n_points;
  p.phys = phys;
  p.potential = [spec, phys](double x) { return evaluate_potential(spec, x, phys); };
  p.breakpoints = breakpoints(spec);
  // Harmonic-like families: extend until U exceeds the target energy comfortably.
  const auto harmonic_reach = [&](double w) {
    const double e_cut = std::max(40.0, 6.0 * (n_levels + 2)) * phys.hbar * w;
    return std::sqrt(2.0 * e_cut / (phys.mass * w * w));
  };
  if (const auto* s = std::get_if<SquareWell>(&spec)) {
    p.x_lo = -s->d;
    p.x_hi = s->b;
  } else if (const auto* m = std::get_if<MorsePair>(&spec)) {
    p.x_lo = -m->d;
    p.x_hi = m->b;
  } else if (const auto* inv = std::get_if<InvSquare>(&spec)) {
    const double reach = harmonic_reach(inv->w);
    if (inv->B > 0.0) {
      p.x_lo = 0.0;
      p.x_hi = reach + inv->B;
    } else {
      p.x_lo = -reach;
      p.x_hi = reach;
    }
  } else if (const auto* par = std::get_if<ParabolicPair>(&spec)) {
    const double reach = harmonic_reach(par->w);
    p.x_lo = -(par->a + reach);
    p.x_hi = par->a + reach;
  }
  return p;
}

Parity parity_of_state(const OracleResult& result, int index, double center) {
  if (index < 0 || index >= static_cast<int>(result.states.size())) {
    throw DomainError("state index out of range");
  }
  const auto& x = result.grid;
  const auto& phi = result.states[index];
  const auto sample = [&](double xq) {
    if (xq < x.front() || xq > x.back()) return 0.0;
    const auto it = std::lower_bound(x.begin(), x.end(), xq);
    const std::size_t j = static_cast<std::size_t>(it - x.begin());
    if (j == 0) return phi[0];
    const double t = (xq - x[j - 1]) / (x[j] - x[j - 1]);
    return (1.0 - t) * phi[j - 1] + t * phi[j];
  };
  double corr = 0.0, norm = 0.0;
  for (std::size_t j = 0; j < x.size(); ++j) {
    corr += phi[j] * sample(2.0 * center - x[j]);
    norm += phi[j] * phi[j];
  }
  const double c = corr / norm;
  if (c > 0.9) return Parity::even;
  if (c < -0.9) return Parity::odd;
  std::ostringstream msg;
  msg << "state " << index << " has mirror correlation " << c;
  throw AmbiguousParityError(msg.str());
}

Parity parity_of_state(const GridProblem& problem, int index) {
  const OracleResult r = solve_grid(problem, index + 1);
  return parity_of_state(r, index, 0.5 * (problem.x_lo + problem.x_hi));
}

int count_nodes(const std::vector<double>& values, double rel_floor) {
  double peak = 0.0;
  for (double v : values) peak = std::max(peak, std::abs(v));
  const double floor = rel_floor * peak;
  int nodes = 0;
  int last = 0;
  for (double v : values) {
    if (std::abs(v) <= floor) continue;
    const int s = v > 0.0 ? 1 : -1;
    if (last != 0 && s != last) ++nodes;
    last = s;
  }
  return nodes;
}

}  // namespace dwell
