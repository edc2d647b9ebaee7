#pragma once

#include <cstdint>
#include <cstdlib>
#include <fstream>
#include <optional>
#include <ostream>
#include <sstream>
#include <string>
#include <thread>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "padic_cf/padic_cf.hpp"

namespace padic_cf::cli {

enum ExitCode : int { kOk = 0, kFailure = 1, kInvalid = 2, kCap = 3, kVerify = 4 };

using Json = nlohmann::ordered_json;

namespace detail {

inline std::vector<std::string> split(const std::string& text, char sep) {
  std::vector<std::string> parts;
  std::string part;
  std::istringstream in(text);
  while (std::getline(in, part, sep)) parts.push_back(part);
  if (!text.empty() && text.back() == sep) parts.emplace_back();
  return parts;
}

inline std::vector<Integer> parse_integers(const std::string& text, std::size_t count,
                                           const char* flag) {
  const auto parts = split(text, ',');
  if (parts.size() != count)
    throw InvalidInput(std::string(flag) + " expects " + std::to_string(count) +
                       " comma-separated integers, got '" + text + "'");
  std::vector<Integer> out;
  for (const auto& s : parts) out.push_back(parse_integer(s));
  return out;
}

inline CensusRange parse_range(const std::string& text, const char* flag) {
  const auto parts = split(text, ':');
  if (parts.size() != 2)
    throw InvalidInput(std::string(flag) + " expects lo:hi, got '" + text + "'");
  auto bound = [&](const std::string& s) {
    const Integer v = parse_integer(s);
    if (v > 1000000000 || v < -1000000000) throw InvalidInput(std::string(flag) + " bound too large");
    return v.convert_to<std::int64_t>();
  };
  return {bound(parts[0]), bound(parts[1])};
}

/// --max-steps, then PADIC_CF_MAX_STEPS, then the built-in default.
inline std::int64_t resolve_cap(const std::optional<std::int64_t>& flag, std::int64_t fallback) {
  std::int64_t cap = fallback;
  if (flag) {
    cap = *flag;
  } else if (const char* env = std::getenv("PADIC_CF_MAX_STEPS"); env != nullptr && *env != '\0') {
    const Integer v = parse_integer(env);
    if (v > std::numeric_limits<std::int64_t>::max()) throw InvalidInput("PADIC_CF_MAX_STEPS too large");
    cap = v.convert_to<std::int64_t>();
  }
  if (cap < 1) throw InvalidInput("step cap must be positive");
  return cap;
}

inline std::string str(const Integer& n) { return n.str(); }
inline std::string str(std::int64_t n) { return std::to_string(n); }

inline Json term_json(const CFTerm& t) {
  return Json{{"t", str(t.t)}, {"k", str(t.k)}, {"d", std::to_string(t.d)}};
}

inline Json status_json(const ExpansionStatus& status) {
  Json out;
  if (std::holds_alternative<Finite>(status)) {
    out["kind"] = "finite";
  } else if (const auto* per = std::get_if<EventuallyPeriodic>(&status)) {
    out["kind"] = "periodic";
    out["preperiod"] = str(per->preperiod);
    out["period"] = str(per->period);
  } else {
    out["kind"] = "truncated";
    out["cap"] = str(std::get<Truncated>(status).cap);
  }
  return out;
}

inline std::string status_text(const ExpansionStatus& status) {
  if (std::holds_alternative<Finite>(status)) return "finite";
  if (const auto* per = std::get_if<EventuallyPeriodic>(&status))
    return "periodic preperiod=" + str(per->preperiod) + " period=" + str(per->period);
  return "truncated cap=" + str(std::get<Truncated>(status).cap);
}

struct ElementArgs {
  std::int64_t p = 0;
  std::string algorithm;
  std::string rational;
  std::string poly;
  std::string approx;
  std::optional<std::int64_t> prec;
  std::optional<std::int64_t> max_steps;
  std::string format = "text";

  void attach(CLI::App& cmd) {
    cmd.add_option("--p", p, "prime")->required();
    cmd.add_option("--algorithm", algorithm, "A, B, C or schneider")->required();
    auto* r = cmd.add_option("--rational", rational, "num/den");
    auto* q = cmd.add_option("--poly", poly, "a,b,c for aX^2 + bX + c");
    r->excludes(q);
    cmd.add_option("--approx", approx, "rational approximation selecting the root");
    cmd.add_option("--prec", prec, "selector precision m: |root - approx|_p <= p^-m");
    cmd.add_option("--max-steps", max_steps, "step cap");
    cmd.add_option("--format", format, "json or text")->check(CLI::IsMember({"json", "text"}));
  }

  Element element() const {
    const Prime prime(p);
    if (rational.empty() == poly.empty()) throw InvalidInput("give exactly one of --rational or --poly");
    if (!rational.empty()) {
      if (!approx.empty() || prec) throw InvalidInput("--approx/--prec apply to --poly only");
      return RationalElement(parse_rational(rational), prime);
    }
    const auto abc = parse_integers(poly, 3, "--poly");
    if (abc[0] == 0) {
      if (!approx.empty() || prec) throw InvalidInput("--approx/--prec need a quadratic --poly");
      if (abc[1] == 0) throw InvalidInput("--poly has no root");
      return RationalElement(ratio(-abc[2], abc[1]), prime);
    }
    if (approx.empty() != !prec) throw InvalidInput("--approx and --prec go together");
    if (prec) return make_quadratic(abc[0], abc[1], abc[2], prime, parse_rational(approx), *prec);
    return make_quadratic(abc[0], abc[1], abc[2], prime);
  }

  CFExpansion expansion(const Element& x) const {
    const AlgorithmId alg = parse_algorithm(algorithm);
    if (alg == AlgorithmId::Schneider)
      return schneider_expand(x, resolve_cap(max_steps, kDefaultSchneiderCap));
    return expand(x, alg, resolve_cap(max_steps, kDefaultExpandCap));
  }
};

inline int cmd_expand(const ElementArgs& args, std::optional<std::int64_t> terms,
                      std::ostream& out) {
  const Element x = args.element();
  const CFExpansion e = args.expansion(x);
  std::vector<Convergent> conv;
  if (terms) {
    if (*terms < 0) throw InvalidInput("--terms must be non-negative");
    conv = convergents(e, *terms);
  }
  if (args.format == "json") {
    Json j;
    j["p"] = std::to_string(e.p.value());
    j["algorithm"] = to_string(e.algorithm);
    j["d0"] = to_string(e.d0);
    j["terms"] = Json::array();
    for (const auto& t : e.terms) j["terms"].push_back(term_json(t));
    j["status"] = status_json(e.status);
    if (terms) {
      j["convergents"] = Json::array();
      for (const auto& c : conv)
        j["convergents"].push_back(Json{{"n", str(c.index)},
                                        {"p", str(c.numerator)},
                                        {"q", str(c.denominator)},
                                        {"value", to_string(e.d0 + c.value())}});
    }
    out << j.dump(2) << '\n';
    return kOk;
  }
  out << "p " << e.p.value() << "  algorithm " << to_string(e.algorithm) << '\n';
  out << "d0 " << to_string(e.d0) << '\n';
  for (std::size_t i = 0; i < e.terms.size(); ++i)
    out << "term " << i + 1 << ' ' << e.terms[i] << '\n';
  out << "status " << status_text(e.status) << '\n';
  if (e.hensel_entry) out << "hensel entry " << *e.hensel_entry << '\n';
  for (const auto& c : conv)
    out << "convergent " << c.index << ' ' << c.numerator << '/' << c.denominator << "  value "
        << to_string(e.d0 + c.value()) << '\n';
  return kOk;
}

inline int cmd_orbit(std::int64_t p, const std::string& algorithm, const std::string& state,
                     std::optional<std::int64_t> max_steps, const std::string& format,
                     std::ostream& out) {
  const Prime prime(p);
  const AlgorithmId alg = parse_algorithm(algorithm);
  if (alg == AlgorithmId::Schneider) throw InvalidAlgorithm("orbits are defined for A, B and C");
  const auto bc = parse_integers(state, 2, "--state");
  const HenselState start(bc[0], bc[1], prime);
  const HenselOrbit orbit = hensel_orbit(start, alg, resolve_cap(max_steps, kDefaultExpandCap));
  const std::string cycle = orbit.period == 1 ? "fixed point" : std::to_string(orbit.period) + "-cycle";

  if (format == "json") {
    Json j;
    j["p"] = std::to_string(p);
    j["algorithm"] = to_string(alg);
    j["states"] = Json::array();
    for (std::size_t i = 0; i < orbit.states.size(); ++i) {
      const auto& s = orbit.states[i];
      j["states"].push_back(Json{{"b", str(s.b())},
                                 {"c", str(s.c())},
                                 {"quadrant", to_string(classify_state(s).quadrant)},
                                 {"discriminant", str(discriminant(s))},
                                 {"map", to_string(orbit.maps[i])},
                                 {"term", term_json(orbit.terms[i])}});
    }
    j["preperiod"] = str(orbit.preperiod);
    j["period"] = str(orbit.period);
    out << j.dump(2) << '\n';
    return kOk;
  }
  for (std::size_t i = 0; i < orbit.states.size(); ++i) {
    const auto& s = orbit.states[i];
    out << i << "  " << s << "  " << to_string(classify_state(s).quadrant) << "  disc "
        << discriminant(s) << "  " << to_string(orbit.maps[i]) << "  term " << orbit.terms[i];
    if (static_cast<std::int64_t>(i) == orbit.preperiod) out << "  <- cycle start";
    out << '\n';
  }
  out << "preperiod " << orbit.preperiod << "  period " << orbit.period << "  (" << cycle << " at "
      << orbit.states[static_cast<std::size_t>(orbit.preperiod)] << ")\n";
  return kOk;
}

inline int cmd_census(std::int64_t p, const std::string& algorithm, const std::string& b_range,
                      const std::string& c_range, unsigned jobs, const std::string& out_path,
                      std::optional<std::int64_t> max_steps, std::ostream& out, std::ostream& err) {
  const Prime prime(p);
  const AlgorithmId alg = parse_algorithm(algorithm);
  const CensusReport report = run_census(prime, alg, parse_range(b_range, "--b-range"),
                                         parse_range(c_range, "--c-range"), jobs,
                                         resolve_cap(max_steps, kDefaultExpandCap));
  std::ostream* summary = &out;
  if (out_path.empty()) {
    write_census_csv(report, out);
    summary = &err;
  } else {
    std::ofstream file(out_path);
    if (!file) throw InvalidInput("cannot open " + out_path);
    write_census_csv(report, file);
  }
  std::ostream& s = *summary;
  s << "census p=" << p << " algorithm " << to_string(alg) << " b " << report.b_range.lo << ':'
    << report.b_range.hi << " c " << report.c_range.lo << ':' << report.c_range.hi << '\n';
  s << "states " << report.rows.size() << "  orbit states checked " << report.states_checked
    << "  max orbit length " << report.max_orbit_length << '\n';
  if (alg == AlgorithmId::B)
    s << "max excess over ceil(|b|/p)+2: " << report.max_length_excess << '\n';
  for (const auto& [key, count] : report.counts)
    s << "preperiod " << key.first << " period " << key.second << ": " << count << '\n';
  for (const auto& v : report.violations)
    s << "VIOLATION (" << v.b << ',' << v.c << "): " << v.diagnostic << '\n';
  s << "violations " << report.violations.size() << '\n';
  return report.violations.empty() ? kOk : kVerify;
}

inline void print_rows(const ConvergenceReport& report, const std::string& format,
                       std::ostream& out) {
  if (format == "json") {
    Json rows = Json::array();
    for (const auto& r : report.rows)
      rows.push_back(Json{{"n", str(r.n)},
                          {"predicted", r.predicted.to_string()},
                          {"computed", (r.computed_is_lower_bound ? ">=" : "") + r.computed.to_string()},
                          {"truncation", r.truncation_matches},
                          {"determinant", r.determinant_matches},
                          {"unit_denominator", r.denominator_is_unit},
                          {"passed", r.passed()}});
    out << Json{{"rows", rows}, {"passed", report.passed()}}.dump(2) << '\n';
    return;
  }
  for (const auto& r : report.rows) {
    out << "n " << r.n << "  predicted " << r.predicted << "  computed "
        << (r.computed_is_lower_bound ? ">=" : "") << r.computed;
    if (r.predicted.is_infinite()) out << "  (exact equality)";
    out << "  truncation " << (r.truncation_matches ? "ok" : "FAIL") << "  determinant "
        << (r.determinant_matches ? "ok" : "FAIL") << "  unit denominator "
        << (r.denominator_is_unit ? "ok" : "FAIL") << "  " << (r.passed() ? "PASS" : "FAIL")
        << '\n';
  }
}

inline int cmd_verify(const ElementArgs& args, std::int64_t upto, std::ostream& out) {
  if (upto < 1) throw InvalidInput("--upto must be positive");
  const Element x = args.element();
  const CFExpansion e = args.expansion(x);
  try {
    print_rows(verify_convergence(x, e, upto), args.format, out);
    return kOk;
  } catch (const VerificationFailed& failure) {
    print_rows(failure.report(), args.format, out);
    throw;
  }
}

}  // namespace detail

inline int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"p-adic continued fractions: expand, orbit, census, verify"};
  app.require_subcommand(1);

  detail::ElementArgs expand_args;
  std::optional<std::int64_t> terms;
  auto* expand_cmd = app.add_subcommand("expand", "expand a rational or quadratic element");
  expand_args.attach(*expand_cmd);
  expand_cmd->add_option("--terms", terms, "also print convergents 0..n");

  std::int64_t orbit_p = 0;
  std::string orbit_alg, orbit_state, orbit_format = "text";
  std::optional<std::int64_t> orbit_cap;
  auto* orbit_cmd = app.add_subcommand("orbit", "iterate a Hensel state (b,c) to its cycle");
  orbit_cmd->add_option("--p", orbit_p, "prime")->required();
  orbit_cmd->add_option("--algorithm", orbit_alg, "A, B or C")->required();
  orbit_cmd->add_option("--state", orbit_state, "b,c")->required();
  orbit_cmd->add_option("--max-steps", orbit_cap, "step cap");
  orbit_cmd->add_option("--format", orbit_format, "json or text")
      ->check(CLI::IsMember({"json", "text"}));

  std::int64_t census_p = 0;
  std::string census_alg, b_range, c_range, census_out;
  unsigned jobs = 1;
  std::optional<std::int64_t> census_cap;
  auto* census_cmd = app.add_subcommand("census", "sweep all states of a (b,c) box");
  census_cmd->add_option("--p", census_p, "prime")->required();
  census_cmd->add_option("--algorithm", census_alg, "A, B or C")->required();
  census_cmd->add_option("--b-range", b_range, "lo:hi")->required();
  census_cmd->add_option("--c-range", c_range, "lo:hi")->required();
  census_cmd->add_option("--jobs", jobs, "worker threads")->check(CLI::Range(1u, 1024u));
  census_cmd->add_option("--out", census_out, "CSV path (stdout if omitted)");
  census_cmd->add_option("--max-steps", census_cap, "step cap per orbit");

  detail::ElementArgs verify_args;
  std::int64_t upto = 0;
  auto* verify_cmd = app.add_subcommand("verify", "check convergent error valuations");
  verify_args.attach(*verify_cmd);
  verify_cmd->add_option("--upto", upto, "last convergent index")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kOk : kInvalid;
  }

  try {
    if (*expand_cmd) return detail::cmd_expand(expand_args, terms, out);
    if (*orbit_cmd) return detail::cmd_orbit(orbit_p, orbit_alg, orbit_state, orbit_cap, orbit_format, out);
    if (*census_cmd)
      return detail::cmd_census(census_p, census_alg, b_range, c_range, jobs, census_out, census_cap,
                                out, err);
    if (*verify_cmd) return detail::cmd_verify(verify_args, upto, out);
  } catch (const InputError& e) {
    err << "error: " << e.what() << '\n';
    return kInvalid;
  } catch (const CapExceeded& e) {
    err << "error: " << e.what() << '\n';
    return kCap;
  } catch (const VerificationFailed& e) {
    err << "error: " << e.what() << '\n';
    return kVerify;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return kFailure;
  }
  return kFailure;
}

}  // namespace padic_cf::cli
