#include <cmath>

#include "app.hpp"
#include "dwell/dynamics.hpp"
#include "dwell/invsq.hpp"
#include "dwell/morse.hpp"
#include "dwell/squarewell.hpp"
#include "dwell/wkbpara.hpp"
#include "families.hpp"

namespace dwell::app {

namespace {

using nlohmann::json;

json number_or_null(std::optional<double> x) {
  if (!x || !std::isfinite(*x)) return nullptr;
  return *x;
}

json period_report(const CommensurabilityReport& rep, const char* basis) {
  json j;
  j["basis"] = basis;
  j["delta"] = number_or_null(rep.delta);
  j["period"] = number_or_null(rep.period);
  j["l_values"] = rep.l_values ? json(*rep.l_values) : json(nullptr);
  j["residual"] = rep.residual;
  return j;
}

std::vector<double> ladder(const Spectrum& sp, Parity p) {
  std::vector<double> out;
  for (const Level& l : sp.levels) {
    if (l.parity == p) out.push_back(l.energy);
  }
  return out;
}

std::optional<double> wkb_gap(const PotentialSpec& spec, double energy, const PhysConfig& phys) {
  try {
    return wkb_splitting(wkb_action(spec, energy, phys));
  } catch (const Error&) {
    return std::nullopt;
  }
}

json splitting_table(const PotentialSpec& spec, const Spectrum& sp, const PhysConfig& phys) {
  json rows = json::array();
  if (const auto* inv = std::get_if<InvSquare>(&spec)) {
    const auto minus = ladder(sp, Parity::even), plus = ladder(sp, Parity::odd);
    for (std::size_t n = 0; n < std::min(minus.size(), plus.size()); ++n) {
      rows.push_back({{"n", n}, {"lower", minus[n]}, {"upper", plus[n]}, {"gap", plus[n] - minus[n]},
                      {"closed_form", splitting(*inv, phys)}});
    }
    return rows;
  }
  if (!is_symmetric(spec)) return rows;
  for (std::size_t i = 0; i + 1 < sp.levels.size(); i += 2) {
    const double lo = sp.levels[i].energy, hi = sp.levels[i + 1].energy;
    json row{{"n", i / 2}, {"lower", lo}, {"upper", hi}, {"gap", hi - lo}};
    row["wkb_gap"] = number_or_null(wkb_gap(spec, 0.5 * (lo + hi), phys));
    if (const auto* p = std::get_if<ParabolicPair>(&spec)) {
      const ParabolicLevel l = parabolic_splitting(*p, static_cast<int>(i / 2), phys);
      row["delta_E_n"] = l.delta_E_n;
      row["A_n_sq"] = l.A_n_sq;
      row["A_n_sq_quoted"] = l.A_n_sq_quoted;
    }
    rows.push_back(row);
  }
  return rows;
}

json square_extras(const SquareWell& s, const PhysConfig& phys) {
  json j;
  json table = json::array();
  for (int i = 0; i < 10; ++i) {
    const double e = s.U0 * (0.05 + 0.1 * i);
    const ScatteringSolution t = transmission(s, e, phys);
    table.push_back({{"E", e}, {"D", t.D}, {"R", t.R}});
  }
  j["transmission"] = table;
  if (s.is_symmetric()) {
    const LinearizedSpectrum lin = linearized_spectrum(s, phys);
    j["linearized"] = {{"k0", lin.k0},         {"E0", lin.E0}, {"delta", lin.delta},
                       {"period", lin.period}, {"N", lin.N},   {"energies", lin.energies}};
    j["limiting_period"] = limiting_period(s, phys);
  }
  return j;
}

}  // namespace

nlohmann::json solve_document(const PotentialSpec& spec, const SolveOptions& opts) {
  const Spectrum sp = detail::compute_spectrum(spec, opts.levels, opts.phys);
  json doc;
  doc["schema_version"] = kSchemaVersion;
  json params = json::object();
  for (const auto& [k, v] : potential_parameters(spec)) params[k] = v;
  doc["potential"] = {{"family", std::string(family_name(spec))}, {"params", params}};
  doc["phys"] = {{"hbar", opts.phys.hbar},
                 {"mass", opts.phys.mass},
                 {"wkb_prefactor", opts.phys.wkb_prefactor}};

  std::optional<detail::OracleComparison> cmp;
  if (opts.oracle) cmp = detail::compare_with_oracle(spec, sp, opts.phys);

  json levels = json::array();
  for (std::size_t i = 0; i < sp.levels.size(); ++i) {
    const Level& l = sp.levels[i];
    json row{{"index", l.index},
             {"energy", l.energy},
             {"parity", std::string(to_string(l.parity))},
             {"well", std::string(to_string(l.well))}};
    if (cmp) {
      row["oracle"] = number_or_null(cmp->oracle[i]);
      row["oracle_error"] = number_or_null(cmp->error[i]);
      row["deviation"] = number_or_null(cmp->deviation[i]);
    }
    levels.push_back(row);
  }
  doc["spectrum"] = {{"levels", levels}, {"count_bound", sp.count_bound}, {"notes", sp.notes}};

  if (const auto* inv = std::get_if<InvSquare>(&spec)) {
    // Each ladder is equally spaced by 2 hbar w on its own.
    const auto plus = ladder(sp, Parity::odd);
    if (plus.size() >= 2) {
      doc["period"] = period_report(commensurate_delta(plus, std::nullopt, 10000, opts.phys.hbar),
                                    "each ladder");
    }
    doc["invsq"] = {{"period", period(*inv)}, {"splitting", splitting(*inv, opts.phys)}};
  } else if (sp.levels.size() >= 2) {
    doc["period"] = period_report(commensurate_delta(sp, std::nullopt, 10000, opts.phys.hbar),
                                  "spectrum");
  } else {
    doc["period"] = nullptr;
  }

  if (const auto* s = std::get_if<SquareWell>(&spec)) doc["square"] = square_extras(*s, opts.phys);
  if (const auto* m = std::get_if<MorsePair>(&spec)) {
    SolverConfig cfg;
    cfg.phys = opts.phys;
    const TranscriptionCheck tc = check_transcribed_equation(*m, cfg);
    doc["morse"] = {{"transcription_max_deviation", tc.max_deviation}, {"transcription_agrees", tc.agrees}};
  }
  doc["splittings"] = splitting_table(spec, sp, opts.phys);

  if (cmp) {
    doc["oracle"] = {{"n_points", cmp->n_points}, {"max_deviation", cmp->max_deviation}};
  }
  return doc;
}

}  // namespace dwell::app
