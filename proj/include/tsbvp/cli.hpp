#pragma once

#include <cstdint>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "tsbvp/cone.hpp"
#include "tsbvp/error.hpp"
#include "tsbvp/problems.hpp"
#include "tsbvp/report.hpp"
#include "tsbvp/solver.hpp"

namespace tsbvp {

enum class Command { Check, SampleLW, Solve, All };

inline Command parse_command(const std::string& s) {
  if (s == "check") return Command::Check;
  if (s == "sample-lw") return Command::SampleLW;
  if (s == "solve") return Command::Solve;
  if (s == "all") return Command::All;
  throw Error(ErrorCode::InvalidArgument, "unknown command " + s);
}

struct RunConfig {
  Command command = Command::Check;
  std::string preset;
  std::string config_path;
  std::filesystem::path out_dir = ".";
  double tol = 1e-10;
  double hmax = 0.0;  // 0 picks the default spacing
  std::uint64_t seed = 42;
  std::size_t nsamples = 1000;
  std::optional<double> xi;
  std::optional<double> x_small;
  std::optional<double> x_large;
  std::vector<std::string> overrides;
  bool emit_gnuplot = false;
};

inline constexpr int kExitOk = 0;
inline constexpr int kExitError = 1;
inline constexpr int kExitVerdict = 2;

namespace detail {

inline Json read_config(const RunConfig& cfg) {
  if (!cfg.preset.empty() && !cfg.config_path.empty()) {
    throw Error(ErrorCode::InvalidArgument, "give either a preset or a config file, not both");
  }
  if (!cfg.preset.empty()) return preset_json(cfg.preset);
  if (cfg.config_path.empty()) throw Error(ErrorCode::InvalidArgument, "no preset or config file given");
  std::ifstream in(cfg.config_path);
  if (!in) throw Error(ErrorCode::ConfigParseError, "cannot open " + cfg.config_path);
  try {
    return Json::parse(in);
  } catch (const nlohmann::json::exception& e) {
    throw Error(ErrorCode::ConfigParseError, cfg.config_path + ": " + e.what());
  }
}

inline void write_file(const std::filesystem::path& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error(ErrorCode::InvalidArgument, "cannot write " + path.string());
  out << text;
}

inline std::string gnuplot_script(std::size_t count) {
  std::ostringstream os;
  os << "set datafile separator ','\n"
     << "set key autotitle columnhead\n"
     << "set xlabel 't'\n"
     << "set ylabel 'u(t)'\n";
  os << "plot ";
  for (std::size_t k = 0; k < count; ++k) {
    if (k) os << ", \\\n     ";
    os << "'solution_" << k << ".csv' using 1:2 with linespoints title 'solution " << k << "'";
  }
  os << "\n";
  return os.str();
}

}  // namespace detail

/// Loads the problem, runs the requested stages and writes their reports.
/// Returns 0 when every verdict passes, 2 when one fails, 1 on error.
inline int run(const RunConfig& cfg, std::ostream& log = std::cout, std::ostream& err = std::cerr) {
  try {
    Json doc = detail::read_config(cfg);
    for (const auto& kv : cfg.overrides) apply_override(doc, kv);
    if (cfg.xi) doc["xi"] = *cfg.xi;
    if (cfg.x_small) doc["x_small"] = *cfg.x_small;
    if (cfg.x_large) doc["x_large"] = *cfg.x_large;
    const Problem pr = load_problem(doc, cfg.hmax);
    std::filesystem::create_directories(cfg.out_dir);

    bool pass = true;
    const bool all = cfg.command == Command::All;

    if (all || cfg.command == Command::Check) {
      const auto rep = pr.check();
      detail::write_file(cfg.out_dir / "hypotheses.json", to_text(to_json(rep)));
      log << pr.name << " hypotheses: " << (rep.all_pass() ? "pass" : "FAIL") << "\n";
      for (const auto& v : rep.verdicts) {
        log << "  " << v.id << ": " << v.status << " (lhs " << v.lhs << " " << v.relation << " rhs " << v.rhs << ")\n";
      }
      log << "  chain: " << (rep.chain_ok ? "ordered" : "NOT ordered") << "\n";
      pass = pass && rep.all_pass();
    }

    if (all || cfg.command == Command::SampleLW) {
      const auto rep = sample_lw_conditions(pr.op(), pr.timescale(), pr.lw_levels(), pr.cone(), cfg.nsamples, cfg.seed);
      detail::write_file(cfg.out_dir / "lw_report.json", to_text(to_json(rep)));
      log << pr.name << " Leggett-Williams sampling: " << (rep.all_pass() ? "pass" : "FAIL") << "\n";
      for (const auto* st : {&rep.cond_i, &rep.cond_ii, &rep.cond_iii}) {
        log << "  " << st->name << ": " << st->violations << "/" << st->qualified << " violations\n";
      }
      pass = pass && rep.all_pass();
    }

    if (all || cfg.command == Command::Solve) {
      SolverConfig sc;
      sc.tol = cfg.tol;
      sc.seed = cfg.seed;
      const auto set = find_three(pr.op(), pr.timescale(), pr.lw_levels(), pr.cone(), sc);
      detail::write_file(cfg.out_dir / "solutions.json", to_text(to_json(set)));
      for (std::size_t k = 0; k < set.solutions.size(); ++k) {
        detail::write_file(cfg.out_dir / ("solution_" + std::to_string(k) + ".csv"),
                           solution_csv(set.solutions[k].u));
      }
      if (cfg.emit_gnuplot && !set.solutions.empty()) {
        detail::write_file(cfg.out_dir / "plot.gp", detail::gnuplot_script(set.solutions.size()));
      }
      bool certified = false;
      for (const auto& s : set.solutions) certified = certified || (s.cone.ok() && s.residual <= cfg.tol);
      log << pr.name << " solve: " << set.solutions.size() << " fixed point(s) from " << set.seeds_tried
          << " seeds, " << set.signatures_realised() << "/3 signatures realised\n";
      pass = pass && certified;
    }
    return pass ? kExitOk : kExitVerdict;
  } catch (const Error& e) {
    err << "error [" << to_string(e.code()) << "]: " << e.what() << "\n";
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
  }
  return kExitError;
}

}  // namespace tsbvp
