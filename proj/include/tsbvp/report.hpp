#pragma once

#include <cmath>
#include <cstdio>
#include <ostream>
#include <sstream>
#include <string>

#include "json.hpp"
#include "tsbvp/cone.hpp"
#include "tsbvp/hypotheses.hpp"
#include "tsbvp/solver.hpp"

namespace tsbvp {

namespace detail {

inline void write_number(std::ostream& os, double x) {
  if (!std::isfinite(x)) {
    os << "null";
    return;
  }
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  os << buf;
}

inline void write_json(std::ostream& os, const nlohmann::ordered_json& j, int indent) {
  const std::string pad(static_cast<std::size_t>(indent) * 2, ' ');
  const std::string inner(static_cast<std::size_t>(indent + 1) * 2, ' ');
  switch (j.type()) {
    case nlohmann::json::value_t::object: {
      if (j.empty()) {
        os << "{}";
        return;
      }
      os << "{\n";
      bool first = true;
      for (auto it = j.begin(); it != j.end(); ++it) {
        if (!first) os << ",\n";
        first = false;
        os << inner << nlohmann::json(it.key()).dump() << ": ";
        write_json(os, it.value(), indent + 1);
      }
      os << "\n" << pad << "}";
      return;
    }
    case nlohmann::json::value_t::array: {
      // Arrays of scalars stay on one line; grids are long.
      bool flat = true;
      for (const auto& x : j) flat = flat && !x.is_structured();
      os << "[";
      for (std::size_t i = 0; i < j.size(); ++i) {
        if (i) os << (flat ? ", " : ",");
        if (!flat) os << "\n" << inner;
        write_json(os, j[i], indent + 1);
      }
      if (!flat && !j.empty()) os << "\n" << pad;
      os << "]";
      return;
    }
    case nlohmann::json::value_t::number_float:
      write_number(os, j.get<double>());
      return;
    default:
      os << j.dump();
  }
}

}  // namespace detail

/// Serialises with every double at 17 significant digits, so identical
/// inputs give byte-identical text.
inline std::string to_text(const nlohmann::ordered_json& j) {
  std::ostringstream os;
  detail::write_json(os, j, 0);
  os << "\n";
  return os.str();
}

inline nlohmann::ordered_json to_json(const HypothesisReport& rep) {
  nlohmann::ordered_json j;
  j["problem"] = rep.problem;
  j["pass"] = rep.all_pass();
  auto& consts = j["constants"] = nlohmann::ordered_json::object();
  for (const auto& [k, v] : rep.constants) consts[k] = v;
  auto& hyps = j["hypotheses"] = nlohmann::ordered_json::array();
  for (const auto& v : rep.verdicts) {
    hyps.push_back({{"id", v.id},
                    {"verdict", v.status},
                    {"relation", v.relation},
                    {"lhs", v.lhs},
                    {"rhs", v.rhs},
                    {"margin", v.margin()},
                    {"counts", v.counts},
                    {"detail", v.detail}});
  }
  auto& chain = j["chain"] = nlohmann::ordered_json::array();
  for (const auto& [k, v] : rep.chain) chain.push_back({{"name", k}, {"value", v}});
  j["chain_ok"] = rep.chain_ok;
  j["notes"] = rep.notes;
  return j;
}

inline nlohmann::ordered_json to_json(const ConditionStats& st) {
  return {{"condition", st.name},
          {"pass", st.pass()},
          {"sampled", st.sampled},
          {"qualified", st.qualified},
          {"violations", st.violations},
          {"worst_margin", st.worst_margin}};
}

inline nlohmann::ordered_json to_json(const LWReport& rep) {
  return {{"seed", rep.seed},
          {"nsamples", rep.nsamples},
          {"levels", {{"a", rep.lw.a}, {"b", rep.lw.b}, {"c", rep.lw.c}, {"d", rep.lw.d}}},
          {"pass", rep.all_pass()},
          {"witness_nonempty", rep.witness_nonempty},
          {"total_violations", rep.total_violations()},
          {"conditions", {to_json(rep.cond_i), to_json(rep.cond_ii), to_json(rep.cond_iii)}}};
}

inline nlohmann::ordered_json to_json(const SolutionSet& set) {
  nlohmann::ordered_json j;
  j["seeds_tried"] = set.seeds_tried;
  j["seeds_converged"] = set.seeds_converged;
  j["dedup_distance"] = set.dedup_distance;
  j["signatures_realised"] = set.signatures_realised();
  auto& sols = j["solutions"] = nlohmann::ordered_json::array();
  for (const auto& s : set.solutions) {
    sols.push_back({{"seed", s.seed_label},
                    {"iterations", s.iterations},
                    {"residual", s.residual},
                    {"norm", s.norm},
                    {"alpha", s.alpha},
                    {"signature", to_string(s.signature)},
                    {"cone",
                     {{"ok", s.cone.ok()},
                      {"nonnegative", s.cone.nonnegative},
                      {"monotone", s.cone.monotone},
                      {"concave", s.cone.concave}}},
                    {"grid", s.u.timescale().grid()},
                    {"values", s.u.values()}});
  }
  return j;
}

inline std::string solution_csv(const GridFunction& u) {
  std::ostringstream os;
  os << "t,u\n";
  char buf[96];
  for (std::size_t i = 0; i < u.size(); ++i) {
    std::snprintf(buf, sizeof buf, "%.17g,%.17g\n", u.timescale()[i], u[i]);
    os << buf;
  }
  return os.str();
}

}  // namespace tsbvp
