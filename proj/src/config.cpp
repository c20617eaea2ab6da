#include "rotnum/config.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <numeric>
#include <utility>

#include "rotnum/errors.hpp"
#include "rotnum/rotation.hpp"

namespace rotnum::config {

using nlohmann::json;

namespace {

constexpr std::int64_t kMaxPeriodSearch = 64;
constexpr std::int64_t kDefaultGridPoints = 10000;

template <class... Ts>
struct Overloaded : Ts... {
  using Ts::operator()...;
};
template <class... Ts>
Overloaded(Ts...) -> Overloaded<Ts...>;

const json& require(const json& obj, const char* key, const std::string& where) {
  if (!obj.is_object() || !obj.contains(key)) {
    throw ConfigError(where + ": missing field '" + key + "'");
  }
  return obj.at(key);
}

double as_number(const json& value, const std::string& where) {
  if (!value.is_number()) throw ConfigError(where + ": expected a number");
  const double x = value.get<double>();
  if (!std::isfinite(x)) throw ConfigError(where + ": must be finite");
  return x;
}

double number(const json& obj, const char* key, const std::string& where) {
  return as_number(require(obj, key, where), where + "." + key);
}

double number_or(const json& obj, const char* key, double fallback, const std::string& where) {
  if (!obj.contains(key)) return fallback;
  return as_number(obj.at(key), where + "." + key);
}

std::int64_t integer_or(const json& obj, const char* key, std::int64_t fallback,
                        const std::string& where) {
  if (!obj.contains(key)) return fallback;
  const json& value = obj.at(key);
  if (!value.is_number_integer()) throw ConfigError(where + "." + key + ": expected an integer");
  return value.get<std::int64_t>();
}

std::string type_of(const json& obj, const std::string& where) {
  const json& t = require(obj, "type", where);
  if (!t.is_string()) throw ConfigError(where + ".type: expected a string");
  return t.get<std::string>();
}

std::vector<TrigTermSpec> parse_terms(const json& obj, const std::string& where) {
  std::vector<TrigTermSpec> terms;
  if (!obj.contains("terms")) return terms;
  const json& arr = obj.at("terms");
  if (!arr.is_array()) throw ConfigError(where + ".terms: expected an array");
  for (std::size_t k = 0; k < arr.size(); ++k) {
    const std::string at = where + ".terms[" + std::to_string(k) + "]";
    terms.push_back({number(arr[k], "amplitude", at), number(arr[k], "frequency", at),
                     number_or(arr[k], "phase", 0.0, at)});
  }
  return terms;
}

json terms_json(const std::vector<TrigTermSpec>& terms) {
  json arr = json::array();
  for (const auto& t : terms) {
    arr.push_back({{"amplitude", t.amplitude}, {"frequency", t.frequency}, {"phase", t.phase}});
  }
  return arr;
}

std::vector<TrigTerm> to_terms(const std::vector<TrigTermSpec>& terms) {
  std::vector<TrigTerm> out;
  out.reserve(terms.size());
  for (const auto& t : terms) out.push_back({t.amplitude, t.frequency, t.phase});
  return out;
}

LatticeSpec parse_lattice(const json& obj) {
  const std::string where = "potential.lattice";
  const std::string type = type_of(obj, where);
  if (type == "periodic") return PeriodicLatticeSpec{number_or(obj, "spacing", 1.0, where)};
  if (type == "sine") {
    return SineLatticeSpec{number(obj, "amplitude", where), number_or(obj, "frequency", 1.0, where),
                           number_or(obj, "phase", 0.0, where),
                           number_or(obj, "spacing", 1.0, where)};
  }
  throw ConfigError(where + ": unknown type '" + type + "'");
}

SequenceSpec parse_sequence(const json& obj, const std::string& where) {
  const std::string type = type_of(obj, where);
  if (type == "constant") return ConstantSeqSpec{number(obj, "value", where)};
  if (type == "alternating") return AlternatingSeqSpec{number(obj, "amplitude", where)};
  if (type == "sine") {
    return SineSeqSpec{number(obj, "amplitude", where), number_or(obj, "frequency", 1.0, where),
                       number_or(obj, "phase", 0.0, where)};
  }
  if (type == "trig") return TrigSeqSpec{number_or(obj, "offset", 0.0, where), parse_terms(obj, where)};
  throw ConfigError(where + ": unknown type '" + type + "'");
}

BackgroundSpec parse_background(const json& obj) {
  const std::string where = "potential.q";
  const std::string type = type_of(obj, where);
  if (type == "constant") return ConstantQSpec{number(obj, "value", where)};
  if (type == "trig") return TrigQSpec{number_or(obj, "offset", 0.0, where), parse_terms(obj, where)};
  if (type == "piecewise_constant") {
    return PiecewiseConstantQSpec{parse_sequence(require(obj, "values", where), where + ".values")};
  }
  throw ConfigError(where + ": unknown type '" + type + "'");
}

json lattice_json(const LatticeSpec& spec) {
  return std::visit(Overloaded{
                        [](const PeriodicLatticeSpec& s) -> json {
                          return {{"type", "periodic"}, {"spacing", s.spacing}};
                        },
                        [](const SineLatticeSpec& s) -> json {
                          return {{"type", "sine"},
                                  {"amplitude", s.amplitude},
                                  {"frequency", s.frequency},
                                  {"phase", s.phase},
                                  {"spacing", s.spacing}};
                        },
                    },
                    spec);
}

json sequence_json(const SequenceSpec& spec) {
  return std::visit(Overloaded{
                        [](const ConstantSeqSpec& s) -> json {
                          return {{"type", "constant"}, {"value", s.value}};
                        },
                        [](const AlternatingSeqSpec& s) -> json {
                          return {{"type", "alternating"}, {"amplitude", s.amplitude}};
                        },
                        [](const SineSeqSpec& s) -> json {
                          return {{"type", "sine"},
                                  {"amplitude", s.amplitude},
                                  {"frequency", s.frequency},
                                  {"phase", s.phase}};
                        },
                        [](const TrigSeqSpec& s) -> json {
                          return {{"type", "trig"}, {"offset", s.offset}, {"terms", terms_json(s.terms)}};
                        },
                    },
                    spec);
}

json background_json(const BackgroundSpec& spec) {
  return std::visit(Overloaded{
                        [](const ConstantQSpec& s) -> json {
                          return {{"type", "constant"}, {"value", s.value}};
                        },
                        [](const TrigQSpec& s) -> json {
                          return {{"type", "trig"}, {"offset", s.offset}, {"terms", terms_json(s.terms)}};
                        },
                        [](const PiecewiseConstantQSpec& s) -> json {
                          return {{"type", "piecewise_constant"}, {"values", sequence_json(s.values)}};
                        },
                    },
                    spec);
}

PointSet build_lattice(const LatticeSpec& spec) {
  return std::visit(Overloaded{
                        [](const PeriodicLatticeSpec& s) { return periodic_lattice(s.spacing); },
                        [](const SineLatticeSpec& s) {
                          return sine_lattice(s.amplitude, s.frequency, s.phase, s.spacing);
                        },
                    },
                    spec);
}

BiSequence build_sequence(const SequenceSpec& spec) {
  return std::visit(Overloaded{
                        [](const ConstantSeqSpec& s) { return constant_sequence(s.value); },
                        [](const AlternatingSeqSpec& s) { return alternating_sequence(s.amplitude); },
                        [](const SineSeqSpec& s) {
                          return sine_sequence(s.amplitude, s.frequency, s.phase);
                        },
                        [](const TrigSeqSpec& s) { return trig_sequence(s.offset, to_terms(s.terms)); },
                    },
                    spec);
}

PotentialSampler build_background(const BackgroundSpec& spec) {
  return std::visit(Overloaded{
                        [](const ConstantQSpec& s) { return constant_potential(s.value); },
                        [](const TrigQSpec& s) { return trig_potential(s.offset, to_terms(s.terms)); },
                        [](const PiecewiseConstantQSpec& s) {
                          return piecewise_constant_potential(build_sequence(s.values));
                        },
                    },
                    spec);
}

// Smallest p in [1, 64] with frequency * unit * p a multiple of 2π for every
// frequency.
std::optional<std::int64_t> common_period(const std::vector<double>& frequencies, double unit) {
  constexpr double kTwoPi = 2.0 * std::numbers::pi;
  for (std::int64_t p = 1; p <= kMaxPeriodSearch; ++p) {
    bool ok = true;
    for (double w : frequencies) {
      if (std::abs(std::remainder(w * unit * static_cast<double>(p), kTwoPi)) > 1e-9) {
        ok = false;
        break;
      }
    }
    if (ok) return p;
  }
  return std::nullopt;
}

std::vector<double> active_frequencies(const std::vector<TrigTermSpec>& terms) {
  std::vector<double> out;
  for (const auto& t : terms) {
    if (t.amplitude != 0.0) out.push_back(t.frequency);
  }
  return out;
}

std::optional<std::int64_t> sequence_period(const SequenceSpec& spec) {
  return std::visit(Overloaded{
                        [](const ConstantSeqSpec&) -> std::optional<std::int64_t> { return 1; },
                        [](const AlternatingSeqSpec& s) -> std::optional<std::int64_t> {
                          return s.amplitude == 0.0 ? 1 : 2;
                        },
                        [](const SineSeqSpec& s) -> std::optional<std::int64_t> {
                          if (s.amplitude == 0.0) return 1;
                          return common_period({s.frequency}, 1.0);
                        },
                        [](const TrigSeqSpec& s) {
                          return common_period(active_frequencies(s.terms), 1.0);
                        },
                    },
                    spec);
}

bool all_zero(const SequenceSpec& spec) {
  return std::visit(Overloaded{
                        [](const ConstantSeqSpec& s) { return s.value == 0.0; },
                        [](const AlternatingSeqSpec& s) { return s.amplitude == 0.0; },
                        [](const SineSeqSpec& s) { return s.amplitude == 0.0; },
                        [](const TrigSeqSpec& s) {
                          return s.offset == 0.0 && active_frequencies(s.terms).empty() &&
                                 std::all_of(s.terms.begin(), s.terms.end(),
                                             [](const TrigTermSpec& t) { return t.amplitude == 0.0; });
                        },
                    },
                    spec);
}

std::optional<double> periodic_spacing(const LatticeSpec& spec) {
  if (const auto* p = std::get_if<PeriodicLatticeSpec>(&spec)) return p->spacing;
  const auto& s = std::get<SineLatticeSpec>(spec);
  if (s.amplitude == 0.0) return s.spacing;
  return std::nullopt;
}

void validate(const RunConfig& cfg) {
  GeneralizedPotential p = [&] {
    try {
      return build_potential(cfg.potential);
    } catch (const PreconditionError& e) {
      throw ConfigError(std::string("potential: ") + e.what());
    }
  }();
  if (cfg.horizon < 2 || cfg.horizon % 2 != 0) {
    throw ConfigError("horizon: must be an even integer >= 2");
  }
  if (!std::isfinite(cfg.initial_angle)) throw ConfigError("initial_angle: must be finite");
  try {
    build_integrator(cfg, p.gamma()).validate(p.gamma());
  } catch (const PreconditionError& e) {
    throw ConfigError(std::string("integrator: ") + e.what());
  }
  (void)energies(cfg);
  if (cfg.output.format != "csv" && cfg.output.format != "json") {
    throw ConfigError("output.format: expected 'csv' or 'json'");
  }
  if (!(cfg.plateaus.flat_tol > 0.0) || cfg.plateaus.min_width < 1) {
    throw ConfigError("plateaus: need flat_tol > 0 and min_width >= 1");
  }
  if (cfg.diagnostics.window < 1 || cfg.diagnostics.samples_per_gap < 1 ||
      cfg.diagnostics.quad_points_per_gap < 2) {
    throw ConfigError("diagnostics: need window >= 1, samples_per_gap >= 1, quad_points_per_gap >= 2");
  }
}

}  // namespace

RunConfig parse_config(const json& doc) {
  if (!doc.is_object()) throw ConfigError("config: expected a JSON object");
  RunConfig cfg;

  const json& pot = require(doc, "potential", "config");
  cfg.potential.lattice = parse_lattice(require(pot, "lattice", "potential"));
  cfg.potential.q = pot.contains("q") ? parse_background(pot.at("q")) : BackgroundSpec{ConstantQSpec{}};
  cfg.potential.v = pot.contains("v") ? parse_sequence(pot.at("v"), "potential.v")
                                      : SequenceSpec{ConstantSeqSpec{}};

  const json& en = require(doc, "energies", "config");
  if (en.is_array()) {
    std::vector<double> list;
    for (std::size_t k = 0; k < en.size(); ++k) {
      list.push_back(as_number(en[k], "energies[" + std::to_string(k) + "]"));
    }
    cfg.energies = std::move(list);
  } else if (en.is_object() && en.contains("list")) {
    std::vector<double> list;
    const json& arr = en.at("list");
    if (!arr.is_array()) throw ConfigError("energies.list: expected an array");
    for (std::size_t k = 0; k < arr.size(); ++k) {
      list.push_back(as_number(arr[k], "energies.list[" + std::to_string(k) + "]"));
    }
    cfg.energies = std::move(list);
  } else {
    EnergyRange range{number(en, "min", "energies"), number(en, "max", "energies"), std::nullopt};
    if (en.contains("step")) range.step = number(en, "step", "energies");
    cfg.energies = range;
  }

  if (doc.contains("integrator")) {
    const json& in = doc.at("integrator");
    if (in.contains("h_max")) cfg.integrator.h_max = number(in, "h_max", "integrator");
    cfg.integrator.substep_angle_cap =
        number_or(in, "substep_angle_cap", cfg.integrator.substep_angle_cap, "integrator");
  }
  cfg.horizon = integer_or(doc, "horizon", cfg.horizon, "config");
  cfg.initial_angle = number_or(doc, "initial_angle", 0.0, "config");

  if (doc.contains("output")) {
    const json& out = doc.at("output");
    if (out.contains("path")) {
      if (!out.at("path").is_string()) throw ConfigError("output.path: expected a string");
      cfg.output.path = out.at("path").get<std::string>();
    }
    if (out.contains("format")) {
      if (!out.at("format").is_string()) throw ConfigError("output.format: expected a string");
      cfg.output.format = out.at("format").get<std::string>();
    }
  }
  if (doc.contains("plateaus")) {
    const json& pl = doc.at("plateaus");
    cfg.plateaus.flat_tol = number_or(pl, "flat_tol", cfg.plateaus.flat_tol, "plateaus");
    cfg.plateaus.min_width = integer_or(pl, "min_width", cfg.plateaus.min_width, "plateaus");
  }
  if (doc.contains("diagnostics")) {
    const json& dg = doc.at("diagnostics");
    cfg.diagnostics.window = integer_or(dg, "window", cfg.diagnostics.window, "diagnostics");
    cfg.diagnostics.samples_per_gap =
        integer_or(dg, "samples_per_gap", cfg.diagnostics.samples_per_gap, "diagnostics");
    cfg.diagnostics.quad_points_per_gap =
        integer_or(dg, "quad_points_per_gap", cfg.diagnostics.quad_points_per_gap, "diagnostics");
  }

  validate(cfg);
  return cfg;
}

RunConfig load_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open config file '" + path + "'");
  json doc;
  try {
    in >> doc;
  } catch (const json::exception& e) {
    throw ConfigError("config '" + path + "' is not valid JSON: " + e.what());
  }
  return parse_config(doc);
}

json to_json(const RunConfig& cfg) {
  json doc;
  doc["potential"] = {{"q", background_json(cfg.potential.q)},
                      {"v", sequence_json(cfg.potential.v)},
                      {"lattice", lattice_json(cfg.potential.lattice)}};
  if (const auto* range = std::get_if<EnergyRange>(&cfg.energies)) {
    doc["energies"] = {{"min", range->min}, {"max", range->max}};
    if (range->step) doc["energies"]["step"] = *range->step;
  } else {
    doc["energies"] = std::get<std::vector<double>>(cfg.energies);
  }
  doc["integrator"] = {{"substep_angle_cap", cfg.integrator.substep_angle_cap}};
  if (cfg.integrator.h_max) doc["integrator"]["h_max"] = *cfg.integrator.h_max;
  doc["horizon"] = cfg.horizon;
  doc["initial_angle"] = cfg.initial_angle;
  doc["output"] = {{"format", cfg.output.format}};
  if (cfg.output.path) doc["output"]["path"] = *cfg.output.path;
  doc["plateaus"] = {{"flat_tol", cfg.plateaus.flat_tol}, {"min_width", cfg.plateaus.min_width}};
  doc["diagnostics"] = {{"window", cfg.diagnostics.window},
                        {"samples_per_gap", cfg.diagnostics.samples_per_gap},
                        {"quad_points_per_gap", cfg.diagnostics.quad_points_per_gap}};
  return doc;
}

GeneralizedPotential build_potential(const PotentialSpec& spec) {
  return GeneralizedPotential(build_background(spec.q), build_sequence(spec.v),
                              build_lattice(spec.lattice));
}

IntegratorConfig build_integrator(const RunConfig& cfg, const PointSet& gamma) {
  IntegratorConfig out = IntegratorConfig::for_lattice(gamma);
  if (cfg.integrator.h_max) out.h_max = *cfg.integrator.h_max;
  out.substep_angle_cap = cfg.integrator.substep_angle_cap;
  return out;
}

std::vector<double> energies(const RunConfig& cfg) {
  if (const auto* list = std::get_if<std::vector<double>>(&cfg.energies)) {
    if (list->empty()) throw ConfigError("energies: empty energy list");
    return *list;
  }
  const auto& range = std::get<EnergyRange>(cfg.energies);
  if (!(range.min < range.max)) throw ConfigError("energies: need min < max");
  const double step =
      range.step.value_or((range.max - range.min) / static_cast<double>(kDefaultGridPoints - 1));
  if (!(step > 0.0)) throw ConfigError("energies: need step > 0");
  return energy_grid(range.min, range.max, step);
}

std::optional<double> free_background(const PotentialSpec& spec) {
  const auto* q = std::get_if<ConstantQSpec>(&spec.q);
  if (q == nullptr || !all_zero(spec.v)) return std::nullopt;
  return q->value;
}

std::optional<KronigPenney> kronig_penney(const PotentialSpec& spec) {
  const auto* q = std::get_if<ConstantQSpec>(&spec.q);
  const auto* v = std::get_if<ConstantSeqSpec>(&spec.v);
  const auto spacing = periodic_spacing(spec.lattice);
  if (q == nullptr || v == nullptr || !spacing) return std::nullopt;
  return KronigPenney{q->value, v->value, *spacing};
}

std::optional<std::int64_t> lattice_period(const PotentialSpec& spec) {
  const auto spacing = periodic_spacing(spec.lattice);
  if (!spacing) return std::nullopt;
  const auto q_period = std::visit(
      Overloaded{
          [](const ConstantQSpec&) -> std::optional<std::int64_t> { return 1; },
          [&](const TrigQSpec& s) { return common_period(active_frequencies(s.terms), *spacing); },
          [](const PiecewiseConstantQSpec& s) { return sequence_period(s.values); },
      },
      spec.q);
  const auto v_period = sequence_period(spec.v);
  if (!q_period || !v_period) return std::nullopt;
  const std::int64_t p = std::lcm(*q_period, *v_period);
  if (p > kMaxPeriodSearch) return std::nullopt;
  return p;
}

}  // namespace rotnum::config
