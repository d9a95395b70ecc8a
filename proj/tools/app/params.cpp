#include <cmath>
#include <cstdio>
#include <string>

#include "app.hpp"

namespace dwell::app {

namespace {

std::string_view trim(std::string_view s) {
  while (!s.empty() && (s.front() == ' ' || s.front() == '\t')) s.remove_prefix(1);
  while (!s.empty() && (s.back() == ' ' || s.back() == '\t')) s.remove_suffix(1);
  return s;
}

double parse_number(std::string_view text, std::string_view what) {
  const std::string s(trim(text));
  std::size_t used = 0;
  double v = 0.0;
  try {
    v = std::stod(s, &used);
  } catch (const std::exception&) {
    used = 0;
  }
  if (s.empty() || used != s.size() || !std::isfinite(v)) {
    throw UsageError("invalid number '" + s + "' for " + std::string(what));
  }
  return v;
}

template <class Spec>
using Field = std::pair<const char*, double Spec::*>;

template <class Spec, std::size_t N>
Spec fill(const std::map<std::string, double>& kv, const Field<Spec> (&fields)[N],
          std::string_view family) {
  Spec spec{};
  for (const auto& [key, value] : kv) {
    bool known = false;
    for (const auto& [name, member] : fields) {
      if (key == name) {
        spec.*member = value;
        known = true;
      }
    }
    if (!known) {
      throw UsageError("unknown parameter '" + key + "' for family " + std::string(family));
    }
  }
  return spec;
}

constexpr Field<SquareWell> kSquareFields[] = {{"d", &SquareWell::d},   {"c", &SquareWell::c},
                                               {"a", &SquareWell::a},   {"b", &SquareWell::b},
                                               {"U0", &SquareWell::U0}, {"W0", &SquareWell::W0}};
constexpr Field<MorsePair> kMorseFields[] = {
    {"A", &MorsePair::A}, {"B", &MorsePair::B}, {"alpha", &MorsePair::alpha},
    {"beta", &MorsePair::beta}, {"c", &MorsePair::c}, {"a", &MorsePair::a},
    {"d", &MorsePair::d}, {"b", &MorsePair::b}};
constexpr Field<InvSquare> kInvFields[] = {{"w", &InvSquare::w}, {"B", &InvSquare::B}};
constexpr Field<ParabolicPair> kParaFields[] = {{"w", &ParabolicPair::w}, {"a", &ParabolicPair::a}};

template <class Spec, std::size_t N>
std::vector<std::pair<std::string, double>> listing(const Spec& s, const Field<Spec> (&fields)[N]) {
  std::vector<std::pair<std::string, double>> out;
  for (const auto& [name, member] : fields) out.emplace_back(name, s.*member);
  return out;
}

}  // namespace

std::map<std::string, double> parse_key_values(std::string_view text) {
  std::map<std::string, double> out;
  text = trim(text);
  if (text.empty()) return out;
  std::size_t start = 0;
  while (start <= text.size()) {
    const std::size_t comma = std::min(text.find(',', start), text.size());
    const std::string_view item = trim(text.substr(start, comma - start));
    const std::size_t eq = item.find('=');
    if (eq == std::string_view::npos) {
      throw UsageError("expected key=value, got '" + std::string(item) + "'");
    }
    const std::string key(trim(item.substr(0, eq)));
    if (key.empty()) throw UsageError("empty parameter name in '" + std::string(item) + "'");
    if (out.count(key)) throw UsageError("parameter '" + key + "' given twice");
    out[key] = parse_number(item.substr(eq + 1), key);
    start = comma + 1;
  }
  return out;
}

PotentialSpec parse_potential(std::string_view family, std::string_view params) {
  const auto kv = parse_key_values(params);
  PotentialSpec spec;
  if (family == "square") {
    spec = fill(kv, kSquareFields, family);
  } else if (family == "morse") {
    spec = fill(kv, kMorseFields, family);
  } else if (family == "invsq") {
    spec = fill(kv, kInvFields, family);
  } else if (family == "parabolic") {
    spec = fill(kv, kParaFields, family);
  } else {
    throw UsageError("unknown potential family '" + std::string(family) +
                     "' (expected square, morse, invsq or parabolic)");
  }
  try {
    validate(spec);
  } catch (const DomainError& e) {
    throw UsageError(e.what());
  }
  return spec;
}

std::vector<std::pair<std::string, double>> potential_parameters(const PotentialSpec& spec) {
  return std::visit(
      [](const auto& s) -> std::vector<std::pair<std::string, double>> {
        using T = std::decay_t<decltype(s)>;
        if constexpr (std::is_same_v<T, SquareWell>) return listing(s, kSquareFields);
        if constexpr (std::is_same_v<T, MorsePair>) return listing(s, kMorseFields);
        if constexpr (std::is_same_v<T, InvSquare>) return listing(s, kInvFields);
        if constexpr (std::is_same_v<T, ParabolicPair>) return listing(s, kParaFields);
      },
      spec);
}

PotentialSpec with_parameter(const PotentialSpec& spec, const std::string& name, double value) {
  std::string params;
  bool found = false;
  for (const auto& [k, v] : potential_parameters(spec)) {
    const double x = k == name ? value : v;
    found = found || k == name;
    if (!params.empty()) params += ',';
    params += k + '=' + format_number(x);
  }
  if (!found) {
    throw UsageError("family " + std::string(family_name(spec)) + " has no parameter '" + name + "'");
  }
  return parse_potential(family_name(spec), params);
}

std::string format_number(double x) {
  if (std::isnan(x)) return "nan";
  if (std::isinf(x)) return x > 0 ? "inf" : "-inf";
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}

double SweepRange::at(int i) const {
  if (steps == 1) return lo;
  if (i == steps - 1) return hi;
  return lo + (hi - lo) * static_cast<double>(i) / static_cast<double>(steps - 1);
}

SweepRange parse_range(std::string_view text) {
  std::vector<std::string_view> parts;
  std::size_t start = 0;
  while (true) {
    const std::size_t colon = text.find(':', start);
    parts.push_back(text.substr(start, colon == std::string_view::npos ? text.npos : colon - start));
    if (colon == std::string_view::npos) break;
    start = colon + 1;
  }
  if (parts.size() != 4) throw UsageError("--vary expects name:lo:hi:steps");
  SweepRange r;
  r.name = std::string(trim(parts[0]));
  if (r.name.empty()) throw UsageError("--vary needs a parameter name");
  r.lo = parse_number(parts[1], "range start");
  r.hi = parse_number(parts[2], "range end");
  const double steps = parse_number(parts[3], "step count");
  if (steps != std::floor(steps) || steps < 1 || steps > 1e6) {
    throw UsageError("step count must be an integer in [1, 1e6]");
  }
  r.steps = static_cast<int>(steps);
  if (r.steps == 1 && r.lo != r.hi) throw UsageError("a single step needs lo == hi");
  return r;
}

}  // namespace dwell::app
