#pragma once

// Command implementations for the momentlines executable. Kept separate from
// main() so the test suite can drive them in-process.
//
// Exit codes: 0 success, 1 input error, 2 unsolvable / sufficient condition
// fails / residual above tolerance, 3 numerical failure.

#include <cmath>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "momentlines/json_io.hpp"
#include "momentlines/momentlines.hpp"

namespace momentlines::cli {

enum ExitCode : int { kOk = 0, kInputError = 1, kUnsolvable = 2, kNumerical = 3 };

using json::Json;

struct Options {
  double tol = 1e-9;
  SolverConfig solver;
  bool json = false;
  std::string out_path;
  std::string lines;  // split: comma-separated positions
};

inline int exit_code_for(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::InvalidInput: return kInputError;
    case ErrorKind::NotSolvableOnTheseLines: return kUnsolvable;
    case ErrorKind::PreconditionFailed:
    case ErrorKind::NumericalFailure:
    case ErrorKind::SearchExhausted:
    case ErrorKind::InternalAssertion: return kNumerical;
  }
  return kNumerical;
}

namespace detail {

inline std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorKind::InvalidInput, path + ": cannot open file");
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

inline MomentTable load_table(const std::string& path) {
  return json::table_from_json(json::parse(read_file(path), path));
}

inline AtomicMeasure2D load_measure(const std::string& path) {
  return json::measure_from_json(json::parse(read_file(path), path));
}

inline std::vector<double> parse_lines(const std::string& text) {
  std::vector<double> out;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    std::size_t used = 0;
    double v = 0.0;
    try {
      v = std::stod(item, &used);
    } catch (const std::exception&) {
      used = 0;
    }
    if (used == 0 || used != item.size() || !std::isfinite(v))
      throw Error(ErrorKind::InvalidInput, "--lines: cannot parse \"" + item + "\"");
    out.push_back(v);
  }
  if (out.empty()) throw Error(ErrorKind::InvalidInput, "--lines: no positions given");
  return out;
}

/// Shortest round-trip decimal form of a double.
inline std::string num(double v) { return Json(v).dump(); }

inline Json verdict_json(const HamburgerVerdict& v) {
  return Json{{"kind", std::string(to_string(v.kind))}, {"mass", v.mass},
              {"hankel", std::isnan(v.hankel) ? Json(nullptr) : Json(v.hankel)}};
}

inline Json order3_diagnostics(const Order3Report& r) {
  Json d{{"base_conditions", r.base_ok}};
  if (!r.base_ok) return d;
  d["base_interval"] = json::to_json(r.base);
  d["I1"] = json::to_json(r.I1);
  d["I2"] = json::to_json(r.I2);
  d["I3"] = json::to_json(r.I3);
  d["admissible"] = json::to_json(r.admissible);
  if (r.a2) d["a2"] = *r.a2;
  if (r.a3_lower) d["a3_lower_bound"] = *r.a3_lower;
  if (r.a3) d["a3"] = *r.a3;
  Json trace = Json::array();
  for (const A3Attempt& at : r.a3_trace) {
    Json lines = Json::array();
    for (const HamburgerVerdict& v : at.verdicts) lines.push_back(verdict_json(v));
    Json item{{"a3", at.a3}, {"passed", at.passed}, {"lines", std::move(lines)}};
    if (!at.note.empty()) item["note"] = at.note;
    trace.push_back(std::move(item));
  }
  d["a3_trace"] = std::move(trace);
  if (r.split) d["split"] = json::to_json(*r.split);
  if (!r.line_verdicts.empty()) {
    Json lv = Json::array();
    for (const HamburgerVerdict& v : r.line_verdicts) lv.push_back(verdict_json(v));
    d["line_verdicts"] = std::move(lv);
  }
  if (!std::isnan(r.closed_form_deviation[0])) {
    Json dev = Json::array();
    for (double x : r.closed_form_deviation) dev.push_back(x);
    d["closed_form_deviation"] = std::move(dev);
  }
  return d;
}

inline void emit(const Options& opt, const Json& doc, const std::string& human, std::ostream& out) {
  const std::string text = opt.json ? doc.dump(2) + "\n" : human;
  if (opt.out_path.empty()) {
    out << text;
    return;
  }
  std::ofstream f(opt.out_path, std::ios::binary);
  if (!f) throw Error(ErrorKind::InvalidInput, opt.out_path + ": cannot open for writing");
  f << text;
}

inline std::string human_measure(const AtomicMeasure2D& mu) {
  std::ostringstream os;
  if (mu.empty()) os << "  (zero measure)\n";
  for (const Atom2D& a : mu.atoms())
    os << "  x1 = " << num(a.x1) << ", x2 = " << num(a.x2) << ", w = " << num(a.w) << "\n";
  return os.str();
}

struct SolveOutcome {
  std::string verdict;
  std::string case_tag;
  std::optional<AtomicMeasure2D> measure;
  std::vector<double> lines;
  std::string note;
  std::string admissible_text;
  Json diagnostics = Json::object();
  int code = kOk;
};

inline SolveOutcome solve_low_order(const MomentTable& t) {
  SolveOutcome o;
  if (t.N() == 1) {
    const CaseM1N1 c = classify_m1n1(t);
    o.case_tag = std::string(to_string(c));
    if (c == CaseM1N1::Unsolvable) {
      o.verdict = "unsolvable";
      o.note = "s00 <= 0 with nonzero moments";
      o.code = kUnsolvable;
      return o;
    }
    if (c == CaseM1N1::CaseI_Zero) o.note = "unique solution μ≡0";
    else {
      const LineFamily lf = lines_m1n1(t);
      o.lines.assign(lf.positions().begin(), lf.positions().end());
    }
    o.measure = solve_m1n1(t);
  } else {
    const ClassificationM1N2 c = classify_m1n2(t);
    o.case_tag = std::string(to_string(c.tag));
    if (c.tag == CaseM1N2::Unsolvable) {
      o.verdict = "unsolvable";
      o.note = c.diagnostic;
      o.code = kUnsolvable;
      return o;
    }
    if (c.tag == CaseM1N2::CaseA_Zero) o.note = "unique solution μ≡0";
    if (c.tag == CaseM1N2::CaseB_Rank1) {
      o.lines = {*c.alpha};
      o.diagnostics["alpha"] = *c.alpha;
    }
    if (c.tag == CaseM1N2::CaseC_PD) {
      const LineFamily lf = lines_m1n2(t);
      o.lines.assign(lf.positions().begin(), lf.positions().end());
      Json ineq = Json::array();
      for (double q : case_c_inequalities(t, lf)) ineq.push_back(q);
      o.diagnostics["line_mass_numerators"] = std::move(ineq);
    }
    o.measure = solve_m1n2(t);
  }
  o.verdict = "solved";
  return o;
}

inline SolveOutcome solve_higher_order(const MomentTable& t, const SolverConfig& cfg) {
  SolveOutcome o;
  o.case_tag = "order3";
  Order3Result r = solve_order3(t, cfg);
  o.diagnostics = order3_diagnostics(r.report);
  o.verdict = std::string(to_string(r.report.verdict));
  o.note = r.report.reason;
  if (r.report.base_ok) o.admissible_text = to_string(r.report.admissible);
  switch (r.report.verdict) {
    case Order3Verdict::Solved:
      o.measure = std::move(r.measure);
      o.lines = {-*r.report.a3, -*r.report.a2, *r.report.a2, *r.report.a3};
      if (t.N() == 2) {
        Json c = Json::array();
        for (std::size_t m = 0; m <= t.M(); ++m) c.push_back(cfg.completion[m]);
        o.diagnostics["completion_s_m3"] = std::move(c);
      }
      break;
    case Order3Verdict::SufficientConditionFails: o.code = kUnsolvable; break;
    case Order3Verdict::SearchExhausted:
    case Order3Verdict::NumericalFailure: o.code = kNumerical; break;
  }
  return o;
}

}  // namespace detail

inline int cmd_solve(const std::string& path, const Options& opt, std::ostream& out) {
  const MomentTable t = detail::load_table(path);
  const bool supported = (t.M() == 1 && (t.N() == 1 || t.N() == 2)) ||
                         (t.M() >= 2 && t.M() <= 3 && t.N() >= 2 && t.N() <= 3);
  if (!supported)
    throw Error(ErrorKind::InvalidInput, "unsupported dimensions M=" + std::to_string(t.M()) +
                                             ", N=" + std::to_string(t.N()) +
                                             "; supported: (1,1) (1,2) (2,2) (2,3) (3,2) (3,3)");

  detail::SolveOutcome o = t.M() == 1 ? detail::solve_low_order(t) : detail::solve_higher_order(t, opt.solver);

  std::optional<double> res;
  if (o.measure) {
    res = residual(t, *o.measure);
    if (!(*res <= residual_bound(t, opt.tol))) {
      o.verdict = "numerical_failure";
      o.note = "re-verification residual " + detail::num(*res) + " exceeds tol*(1+max|s|)";
      o.code = kNumerical;
    }
  }

  Json doc{{"command", "solve"}, {"verdict", o.verdict}, {"case", o.case_tag},
           {"M", t.M()}, {"N", t.N()}, {"lines", o.lines}};
  if (o.measure) doc["measure"] = json::to_json(*o.measure);
  if (res) doc["residual"] = *res;
  if (!o.note.empty()) doc["note"] = o.note;
  doc["diagnostics"] = o.diagnostics;

  std::ostringstream h;
  h << "verdict: " << o.verdict << "\n"
    << "case: " << o.case_tag << "\n";
  if (!o.note.empty()) h << "note: " << o.note << "\n";
  if (!o.lines.empty()) {
    h << "lines x2 =";
    for (double a : o.lines) h << " " << detail::num(a);
    h << "\n";
  }
  if (!o.admissible_text.empty()) h << "admissible a2: " << o.admissible_text << "\n";
  if (o.measure) h << "measure (" << o.measure->size() << " atoms):\n" << detail::human_measure(*o.measure);
  if (res) h << "residual: " << detail::num(*res) << "\n";
  detail::emit(opt, doc, h.str(), out);
  return o.code;
}

inline int cmd_region(const std::string& path, const Options& opt, std::ostream& out) {
  const MomentTable t = detail::load_table(path);
  if (t.M() < 2 || t.N() < 2)
    throw Error(ErrorKind::InvalidInput, "region: table needs M >= 2 and N >= 2");

  Json doc{{"command", "region"}, {"M", t.M()}, {"N", t.N()}};
  std::ostringstream h;
  if (!base_conditions(t)) {
    doc["base_conditions"] = false;
    doc["reason"] = "base conditions fail: need s00 > 0, s00*s02 - s01^2 > 0, s00*s20 - s10^2 > 0";
    h << "base conditions: false\n" << doc["reason"].get<std::string>() << "\n";
    detail::emit(opt, doc, h.str(), out);
    return kUnsolvable;
  }
  const IntervalSet base = base_interval(t), i1 = interval_I1(t), i2 = interval_I2(t),
                    i3 = interval_I3(t);
  const IntervalSet adm = intersect_admissible(base, i1, i2, i3);
  doc["base_conditions"] = true;
  doc["base_interval"] = json::to_json(base);
  doc["I1"] = json::to_json(i1);
  doc["I2"] = json::to_json(i2);
  doc["I3"] = json::to_json(i3);
  doc["admissible"] = json::to_json(adm);
  h << "base conditions: true\n"
    << "base interval: " << to_string(base) << "\n"
    << "I1: " << to_string(i1) << "\n"
    << "I2: " << to_string(i2) << "\n"
    << "I3: " << to_string(i3) << "\n"
    << "admissible a2: " << to_string(adm) << "\n";
  detail::emit(opt, doc, h.str(), out);
  return adm.empty() ? kUnsolvable : kOk;
}

inline int cmd_split(const std::string& path, const Options& opt, std::ostream& out) {
  const MomentTable t = detail::load_table(path);
  if (opt.lines.empty()) throw Error(ErrorKind::InvalidInput, "split: --lines is required");
  const LineFamily lines(detail::parse_lines(opt.lines));
  const SplitMoments split = split_moments(t, lines);

  Json doc{{"command", "split"}, {"lines", std::vector<double>(lines.positions().begin(), lines.positions().end())}};
  const Json sj = json::to_json(split);
  doc["W"] = sj["W"];
  doc["s"] = sj["s"];

  std::ostringstream h;
  h << "W = " << detail::num(split.W) << "\n";
  for (std::size_t m = 0; m <= split.M; ++m) {
    h << "s_" << m << "(j):";
    for (std::size_t j = 0; j <= split.N; ++j) h << " " << detail::num(split(m, j));
    h << "\n";
  }
  detail::emit(opt, doc, h.str(), out);
  return kOk;
}

inline int cmd_verify(const std::string& measure_path, const std::string& table_path,
                      const Options& opt, std::ostream& out) {
  const AtomicMeasure2D mu = detail::load_measure(measure_path);
  const MomentTable t = detail::load_table(table_path);
  const double r = residual(t, mu);
  const double bound = residual_bound(t, opt.tol);
  const bool ok = r <= bound;
  Json doc{{"command", "verify"}, {"residual", r}, {"bound", bound}, {"ok", ok}};
  std::ostringstream h;
  h << "residual: " << detail::num(r) << "\n"
    << "bound: " << detail::num(bound) << "\n"
    << (ok ? "ok" : "FAILED") << "\n";
  detail::emit(opt, doc, h.str(), out);
  return ok ? kOk : kUnsolvable;
}

/// Runs the CLI on argv-style arguments (args[0] is the program name).
inline int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  Options opt;
  if (const char* env = std::getenv("MOMENTLINES_TOL")) {
    char* end = nullptr;
    const double v = std::strtod(env, &end);
    if (end == env || *end != '\0' || !(v > 0.0) || !std::isfinite(v)) {
      err << "error: MOMENTLINES_TOL must be a positive number, got \"" << env << "\"\n";
      return kInputError;
    }
    opt.tol = v;
  }

  CLI::App app{"Truncated two-dimensional moment problem solver", "momentlines"};
  app.require_subcommand(1);
  std::string table_path, measure_path;

  auto common = [&](CLI::App* sub) {
    sub->add_option("--tol", opt.tol, "Residual tolerance, relative to 1+max|s|");
    sub->add_flag("--json", opt.json, "Machine-readable JSON output");
    sub->add_option("--out", opt.out_path, "Write output to this file");
  };
  auto solver_flags = [&](CLI::App* sub) {
    sub->add_option("--a3-margin", opt.solver.a3_margin, "Headroom factor above the a3 lower bound");
    sub->add_option("--a3-growth", opt.solver.a3_growth, "Growth factor of the a3 search");
    sub->add_option("--a3-max-iters", opt.solver.a3_max_iters, "Maximum a3 growth steps");
    for (std::size_t m = 0; m < 4; ++m)
      sub->add_option("--complete-s" + std::to_string(m) + "3", opt.solver.completion[m],
                      "Value for s_{" + std::to_string(m) + ",3} when N = 2");
  };

  CLI::App* solve = app.add_subcommand("solve", "Decide solvability and construct a measure");
  solve->add_option("table", table_path, "Moment table JSON")->required();
  common(solve);
  solver_flags(solve);

  CLI::App* region = app.add_subcommand("region", "Admissible a2 region for 2 <= M, N");
  region->add_option("table", table_path, "Moment table JSON")->required();
  common(region);

  CLI::App* split = app.add_subcommand("split", "Per-line moments for given lines");
  split->add_option("table", table_path, "Moment table JSON")->required();
  split->add_option("--lines", opt.lines, "Comma-separated increasing positions a0,a1,...")->required();
  common(split);

  CLI::App* verify = app.add_subcommand("verify", "Residual of a measure against a table");
  verify->add_option("measure", measure_path, "Measure JSON")->required();
  verify->add_option("table", table_path, "Moment table JSON")->required();
  common(verify);

  try {
    std::vector<std::string> rev(args.rbegin(), args.rend() - (args.empty() ? 0 : 1));
    app.parse(rev);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return kOk;
  } catch (const CLI::ParseError& e) {
    err << "error: " << e.what() << "\n";
    return kInputError;
  }

  try {
    opt.solver.tol = opt.tol;
    opt.solver.validate();
    if (*solve) return cmd_solve(table_path, opt, out);
    if (*region) return cmd_region(table_path, opt, out);
    if (*split) return cmd_split(table_path, opt, out);
    return cmd_verify(measure_path, table_path, opt, out);
  } catch (const Error& e) {
    err << "error (" << to_string(e.kind()) << "): " << e.what() << "\n";
    return exit_code_for(e.kind());
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return kInputError;
  }
}

}  // namespace momentlines::cli
