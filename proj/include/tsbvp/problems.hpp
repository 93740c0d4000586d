#pragma once

#include <cmath>
#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "json.hpp"
#include "tsbvp/cone.hpp"
#include "tsbvp/error.hpp"
#include "tsbvp/hypotheses.hpp"
#include "tsbvp/operators.hpp"
#include "tsbvp/piecewise.hpp"
#include "tsbvp/timescale.hpp"

namespace tsbvp {

using Json = nlohmann::ordered_json;

/// A fully built problem: operator spec plus the theorem parameters.
struct Problem {
  std::string name;
  std::variant<ThermistorSpec, QuasilinearSpec, DelaySpec> spec;
  LWParams lw;
  double xi = 0.25;
  double x_small = 1e-4;
  double x_large = 1e4;
  std::optional<double> literal_B1;

  const char* kind() const {
    switch (spec.index()) {
      case 0: return "thermistor";
      case 1: return "quasilinear";
      default: return "delay";
    }
  }

  TimeScalePtr timescale() const {
    return std::visit([](const auto& s) { return s.ts; }, spec);
  }

  OperatorFn op() const {
    return std::visit([](const auto& s) { return make_operator(s); }, spec);
  }

  /// G maps into decreasing functions, F and Q into increasing ones.
  ConeSpec cone() const {
    ConeSpec cs;
    cs.xi = xi;
    cs.monotonicity = spec.index() == 0 ? Monotonicity::Decreasing : Monotonicity::Increasing;
    return cs;
  }

  /// Levels at which the Leggett-Williams conditions are sampled. The ball
  /// radii follow the u-ranges on which the hypotheses bound f: [0, zeta a]
  /// and [0, zeta c] for the thermistor, [0, a] and [0, c] otherwise.
  LWParams lw_levels() const {
    if (spec.index() != 0) return lw;
    const auto k = thermistor_constants(std::get<0>(spec), lw.a, lw.b, lw.c, lw.d, xi);
    return {k.a1, lw.b, k.c1, lw.d};
  }

  HypothesisReport check() const {
    const auto& [a, b, c, d] = lw;
    switch (spec.index()) {
      case 0: return check_thermistor(std::get<0>(spec), a, b, c, d, xi, literal_B1);
      case 1: return check_quasilinear(std::get<1>(spec), a, b, c, d, xi);
      default: return check_delay(std::get<2>(spec), a, b, c, d, x_small, x_large, xi);
    }
  }
};

namespace detail {

[[noreturn]] inline void config_error(const std::string& msg) { throw Error(ErrorCode::ConfigParseError, msg); }

inline const Json& field(const Json& j, const char* key) {
  if (!j.is_object() || !j.contains(key)) config_error(std::string("missing field \"") + key + "\"");
  return j.at(key);
}

inline double number(const Json& j, const char* key) {
  const Json& v = field(j, key);
  if (!v.is_number()) config_error(std::string("field \"") + key + "\" must be a number");
  return v.get<double>();
}

inline double number_or(const Json& j, const char* key, double fallback) {
  return j.contains(key) ? number(j, key) : fallback;
}

inline std::vector<double> numbers(const Json& j) {
  if (!j.is_array()) config_error("expected an array of numbers");
  std::vector<double> out;
  for (const auto& x : j) {
    if (!x.is_number()) config_error("expected an array of numbers");
    out.push_back(x.get<double>());
  }
  return out;
}

inline Segment parse_segment(const Json& j) {
  if (j.contains("interval")) {
    const auto v = numbers(j.at("interval"));
    if (v.size() != 2) config_error("interval needs [lo, hi]");
    return Segment::interval(v[0], v[1]);
  }
  if (j.contains("points")) return Segment::discrete(numbers(j.at("points")));
  if (j.contains("geometric")) {
    const Json& g = j.at("geometric");
    return Segment::geometric(number(g, "limit"), number(g, "ratio"), number(g, "from"));
  }
  config_error("segment must be one of interval, points, geometric");
}

inline TimeScalePtr parse_timescale(const Json& j, double hmax) {
  if (!j.is_array()) config_error("time scale must be an array of segments");
  std::vector<Segment> segs;
  for (const auto& s : j) segs.push_back(parse_segment(s));
  return make_timescale(segs, hmax);
}

inline PiecewiseFunction parse_piecewise(const Json& j) {
  if (j.is_number()) return PiecewiseFunction::constant(j.get<double>());
  std::vector<Polynomial> pieces;
  for (const auto& p : field(j, "poly")) pieces.push_back(Polynomial{numbers(p)});
  Extrapolation mode = Extrapolation::ClampEnds;
  if (j.contains("extrapolation")) {
    const auto m = j.at("extrapolation").get<std::string>();
    if (m == "clamp") {
      mode = Extrapolation::ClampEnds;
    } else if (m == "extend") {
      mode = Extrapolation::Extend;
    } else if (m == "error") {
      mode = Extrapolation::Error;
    } else {
      config_error("unknown extrapolation mode " + m);
    }
  }
  return PiecewiseFunction(numbers(field(j, "bp")), std::move(pieces), mode);
}

inline Json piecewise_json(std::vector<double> bp, std::vector<std::vector<double>> poly, const char* mode = "clamp") {
  return Json{{"bp", std::move(bp)}, {"poly", std::move(poly)}, {"extrapolation", mode}};
}

}  // namespace detail

/// Builds a problem from its JSON description. hmax <= 0 picks the default.
///
/// Layout: {"problem": "thermistor"|"quasilinear"|"delay", "timescale": [...],
/// "p", "lw": {"a","b","c","d"}, "xi", then per-problem fields.
inline Problem load_problem(const Json& j, double hmax = 0.0) {
  using namespace detail;
  try {
    Problem pr;
    pr.name = j.value("name", std::string("custom"));
    const std::string kind = field(j, "problem").get<std::string>();
    const auto ts = parse_timescale(field(j, "timescale"), hmax);
    const Json& lw = field(j, "lw");
    pr.lw = {number(lw, "a"), number(lw, "b"), number(lw, "c"), number(lw, "d")};
    pr.xi = number(j, "xi");
    pr.x_small = number_or(j, "x_small", pr.x_small);
    pr.x_large = number_or(j, "x_large", pr.x_large);
    const PExponent p(number(j, "p"));

    if (kind == "thermistor") {
      ThermistorSpec s{ts, parse_piecewise(field(j, "f")), number(j, "lambda"), number(j, "beta"), number(j, "eta"), p};
      s.validate();
      if (j.contains("literal_B1")) pr.literal_B1 = number(j, "literal_B1");
      pr.spec = std::move(s);
    } else if (kind == "quasilinear") {
      QuasilinearSpec s{ts, parse_piecewise(field(j, "f"))};
      if (j.contains("h")) s.h = parse_piecewise(j.at("h"));
      s.eta = number(j, "eta");
      s.p = p;
      s.validate();
      pr.spec = std::move(s);
    } else if (kind == "delay") {
      DelaySpec s;
      s.ts = ts;
      s.r = number(j, "r");
      if (j.contains("history")) s.history_ts = parse_timescale(j.at("history"), hmax);
      s.psi = parse_piecewise(field(j, "psi"));
      s.omega = parse_piecewise(field(j, "omega"));
      s.a = parse_piecewise(field(j, "coefficient"));
      s.B0 = parse_piecewise(field(j, "B0"));
      s.delta = number(j, "delta");
      s.gamma = number(j, "gamma");
      s.lambda = number(j, "lambda");
      const Json& f2 = field(j, "f2");
      s.f2 = {parse_piecewise(field(f2, "g")), number(f2, "c1"), number(f2, "c2")};
      s.p = p;
      s.validate();
      pr.spec = std::move(s);
    } else {
      config_error("unknown problem kind " + kind);
    }
    return pr;
  } catch (const nlohmann::json::exception& e) {
    throw Error(ErrorCode::ConfigParseError, e.what());
  }
}

inline Json preset_json(const std::string& name) {
  using detail::piecewise_json;
  const double r2 = std::sqrt(2.0);
  const Json dyadic = Json::array({Json{{"geometric", {{"limit", 1.0}, {"ratio", 0.5}, {"from", 0.0}}}}});
  if (name == "example1") {
    return Json{{"name", name},
                {"problem", "thermistor"},
                {"timescale", dyadic},
                {"p", 1.5},
                {"lambda", 1.0},
                {"beta", 0.5},
                {"eta", 0.25},
                {"f", piecewise_json({0.0, 1.0, 1.5, 10.0, 16.0},
                                     {{2 * r2}, {2 * r2 - 4.0, 4.0}, {2.0 + 2 * r2}, {2 * r2 - 18.0, 2.0}})},
                {"lw", {{"a", 0.5}, {"b", 1.5}, {"c", 8.0}, {"d", 10.0}}},
                {"xi", 0.25},
                {"literal_B1", 1.0 / (2.0 * (2.0 + r2))}};
  }
  if (name == "example2") {
    return Json{{"name", name},
                {"problem", "quasilinear"},
                {"timescale", dyadic},
                {"p", 1.5},
                {"eta", 0.5},
                {"f", piecewise_json({0.0, 0.5, 1.5, 25.0}, {{r2 / 2}, {r2 / 2 - 2.0, 4.0}, {4.0 + r2 / 2}})},
                {"h", 0.0},
                {"lw", {{"a", 0.5}, {"b", 1.5}, {"c", 25.0}, {"d", 3.0}}},
                {"xi", 0.25}};
  }
  if (name == "example3") {
    return Json{
        {"name", name},
        {"problem", "delay"},
        {"timescale", Json::array({Json{{"points", {0.0, 0.75}}},
                                   Json{{"geometric", {{"limit", 0.0}, {"ratio", 0.5}, {"from", 1.0}}}}})},
        {"history", Json::array({Json{{"interval", {-0.75, -0.25}}}, Json{{"points", {0.0}}}})},
        {"p", 1.5},
        {"r", 0.75},
        {"lambda", 1.0},
        {"psi", piecewise_json({-0.75, 0.0}, {{0.0}})},
        {"omega", piecewise_json({0.0, 1.0}, {{-0.75, 1.0}}, "extend")},
        {"coefficient", piecewise_json({0.0, 1.0}, {{1.0}})},
        {"B0", piecewise_json({0.0, 1.0}, {{0.0, 1.0}}, "extend")},
        {"delta", 1.0},
        {"gamma", 1.0},
        {"f2", {{"g", piecewise_json({0.0, 1.0}, {{0.0, 0.0, 1.0}}, "extend")}, {"c1", 1.0}, {"c2", 1.0}}},
        {"lw", {{"a", 0.1}, {"b", 1.0}, {"c", 16.0}, {"d", 4.0}}},
        {"xi", 0.25}};
  }
  throw Error(ErrorCode::UnknownPreset, "unknown preset " + name);
}

/// Applies "key=value" overrides. Leggett-Williams levels live under "lw";
/// every other key is a top-level number.
inline void apply_override(Json& j, const std::string& kv) {
  const auto eq = kv.find('=');
  if (eq == std::string::npos || eq == 0) throw Error(ErrorCode::ConfigParseError, "override must be key=value: " + kv);
  const std::string key = kv.substr(0, eq);
  double value = 0.0;
  try {
    std::size_t used = 0;
    value = std::stod(kv.substr(eq + 1), &used);
    if (used != kv.size() - eq - 1) throw std::invalid_argument(kv);
  } catch (const std::exception&) {
    throw Error(ErrorCode::ConfigParseError, "override value is not a number: " + kv);
  }
  static const char* const allowed[] = {"xi", "lambda", "beta", "eta", "p", "delta", "gamma", "r", "x_small", "x_large"};
  if (key == "a" || key == "b" || key == "c" || key == "d") {
    j["lw"][key] = value;
    return;
  }
  for (const char* k : allowed) {
    if (key == k) {
      j[key] = value;
      return;
    }
  }
  throw Error(ErrorCode::ConfigParseError, "unknown override key " + key);
}

}  // namespace tsbvp
