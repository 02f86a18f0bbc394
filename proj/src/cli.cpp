#include "ppsolve/cli.hpp"

#include <cmath>
#include <fstream>
#include <iostream>
#include <sstream>

#include <json.hpp>

#include "ppsolve/bssg.hpp"
#include "ppsolve/errors.hpp"
#include "ppsolve/gnm.hpp"
#include "ppsolve/parse.hpp"
#include "ppsolve/policy.hpp"
#include "ppsolve/pps.hpp"
#include "ppsolve/qualitative.hpp"

namespace ppsolve::cli {

using Json = nlohmann::ordered_json;

namespace {

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw InputError("cannot read " + path);
  std::ostringstream text;
  text << in.rdbuf();
  return text.str();
}

Json names_of(const EquationSystem& sys, const IndexSet& set, std::size_t limit) {
  Json out = Json::array();
  for (std::size_t i : set)
    if (i < limit) out.push_back(sys.name(i));
  return out;
}

Json policy_json(const EquationSystem& sys, const Policy& policy) {
  Json out = Json::object();
  for (auto [i, j] : policy.choice) out[sys.name(i)] = sys.name(j);
  return out;
}

Json values_json(const EquationSystem& sys, const RationalVector& v, std::size_t digits, bool exact) {
  Json out = Json::object();
  for (std::size_t i = 0; i < v.size(); ++i) {
    Json entry = {{"decimal", to_decimal(v[i], static_cast<int>(digits))}};
    if (exact) entry["exact"] = to_string(v[i]);
    out[sys.name(i)] = std::move(entry);
  }
  return out;
}

void print_values(std::ostream& out, const EquationSystem& sys, const RationalVector& v, std::size_t digits,
                  bool exact) {
  for (std::size_t i = 0; i < v.size(); ++i) {
    out << sys.name(i) << " ≈ " << to_decimal(v[i], static_cast<int>(digits));
    if (exact) out << "  (" << to_string(v[i]) << ")";
    out << "\n";
  }
}

Policy policy_from_json(const EquationSystem& sys, const Json& j) {
  Policy p;
  if (j.is_null()) return p;
  if (!j.is_object()) throw InputError("candidate policy must be a JSON object");
  for (const auto& [eq, arg] : j.items()) {
    auto i = sys.index_of(eq);
    auto k = arg.is_string() ? sys.index_of(arg.get<std::string>()) : std::nullopt;
    if (!i || !k) throw InputError("candidate policy names an unknown variable: " + eq);
    p.choice[*i] = *k;
  }
  return p;
}

int cmd_solve(const Config& cfg, std::ostream& out) {
  const EquationSystem sys = parse_system(read_file(cfg.input));
  SolveOptions options;
  options.record_iterates = false;
  const SolveReport report = solve(sys, cfg.j, options);
  if (cfg.differential_lp) {
    options.use_lp_for_pure = true;
    const SolveReport lp = solve(sys, cfg.j, options);
    if (lp.approximation != report.approximation)
      throw InvariantViolation("LP and Newton paths disagree on the approximation");
  }
  const std::size_t digits = certified_digits(cfg.j);
  const std::size_t n = sys.size();
  if (cfg.format == OutputFormat::Json) {
    Json doc = {{"j", report.j},
                {"h", report.h},
                {"encoding_size", report.encoding_size},
                {"iterations", report.iterations},
                {"zero", names_of(sys, report.qualitative.zero_set, n)},
                {"one", names_of(sys, report.qualitative.one_set, n)},
                {"values", values_json(sys, report.approximation, digits, cfg.exact)}};
    if (cfg.differential_lp) doc["differential_lp"] = "agree";
    out << doc.dump(2) << "\n";
  } else {
    print_values(out, sys, report.approximation, digits, cfg.exact);
    out << "# j=" << report.j << " h=" << report.h << " |P|=" << report.encoding_size
        << " iterations=" << report.iterations << "\n";
  }
  return 0;
}

int cmd_qualitative(const Config& cfg, std::ostream& out) {
  const EquationSystem sys = parse_system(read_file(cfg.input));
  const SnfResult snf = to_snf(sys);
  const QualitativeReport report = reduce(snf.system);
  const std::size_t n = snf.system.size();
  const std::string reduced = format_system(report.reduced);
  if (cfg.format == OutputFormat::Json) {
    Json doc = {{"zero", names_of(snf.system, report.zero_set, n)},
                {"one", names_of(snf.system, report.one_set, n)},
                {"reduced", reduced}};
    out << doc.dump(2) << "\n";
  } else {
    auto line = [&](const char* label, const IndexSet& set) {
      out << label << ":";
      for (std::size_t i : set) out << " " << snf.system.name(i);
      out << "\n";
    };
    line("zero", report.zero_set);
    line("one", report.one_set);
    out << "reduced:\n" << reduced;
  }
  return 0;
}

int cmd_policy(const Config& cfg, std::ostream& out) {
  const EquationSystem sys = parse_system(read_file(cfg.input));
  PolicyOptions options;
  options.override_j = cfg.override_precision;
  const EpsilonPolicyReport report = epsilon_policy(sys, cfg.epsilon, options);
  const std::size_t digits = certified_digits(report.value_j);
  Json certificate = {{"epsilon", to_string(report.epsilon)},
                      {"precision", report.heuristic ? "heuristic" : "worst-case"},
                      {"j", report.j},
                      {"repair_switches", report.repair_switches},
                      {"value_j", report.value_j},
                      {"value", values_json(report.snf, report.value, digits, cfg.exact)}};
  if (cfg.exact && !report.y.empty()) {
    Json y = Json::object();
    for (std::size_t i = 0; i < report.y.size(); ++i) y[report.snf.name(i)] = to_string(report.y[i]);
    certificate["y"] = std::move(y);
  }
  if (cfg.format == OutputFormat::Json) {
    out << Json{{"policy", policy_json(report.snf, report.policy)}, {"certificate", certificate}}.dump(2) << "\n";
  } else {
    for (auto [i, j] : report.policy.choice) out << report.snf.name(i) << " -> " << report.snf.name(j) << "\n";
    out << "# epsilon=" << to_string(report.epsilon) << " j=" << report.j
        << (report.heuristic ? " (heuristic precision)" : " (worst-case precision)")
        << " repair_switches=" << report.repair_switches << "\n";
    print_values(out, report.snf, report.value, digits, cfg.exact);
  }
  return 0;
}

int cmd_bssg(const Config& cfg, std::ostream& out) {
  ParseOptions parse_options;
  parse_options.allow_mixed = true;
  const EquationSystem snf = to_snf(parse_system(read_file(cfg.input), parse_options)).system;
  CandidateCertificate cert;
  std::optional<std::size_t> checked;
  if (cfg.candidate) {
    Json doc;
    try {
      doc = Json::parse(read_file(*cfg.candidate));
    } catch (const Json::parse_error& e) {
      throw InputError(std::string("candidate file is not JSON: ") + e.what());
    }
    cert = check_candidate(snf, policy_from_json(snf, doc.value("max", Json())),
                           policy_from_json(snf, doc.value("min", Json())), cfg.epsilon);
  } else {
    BssgSolution sol = solve_exhaustive(snf, cfg.epsilon);
    cert = std::move(sol.certificate);
    checked = sol.candidates_checked;
  }
  const std::size_t digits = certified_digits(cert.j);
  if (cfg.format == OutputFormat::Json) {
    Json doc = {{"accepted", cert.accepted},
                {"epsilon", to_string(cert.epsilon)},
                {"j", cert.j},
                {"gap", to_decimal(cert.gap, static_cast<int>(digits))},
                {"max_policy", policy_json(snf, cert.max_policy)},
                {"min_policy", policy_json(snf, cert.min_policy)},
                {"value", values_json(snf, cert.value, digits, cfg.exact)}};
    if (checked) doc["candidates_checked"] = *checked;
    out << doc.dump(2) << "\n";
  } else {
    out << (cert.accepted ? "accepted" : "rejected") << " gap=" << to_decimal(cert.gap, static_cast<int>(digits))
        << " epsilon=" << to_string(cert.epsilon) << "\n";
    for (auto [i, j] : cert.max_policy.choice) out << "max " << snf.name(i) << " -> " << snf.name(j) << "\n";
    for (auto [i, j] : cert.min_policy.choice) out << "min " << snf.name(i) << " -> " << snf.name(j) << "\n";
    print_values(out, snf, cert.value, digits, cfg.exact);
  }
  return 0;
}

int cmd_convert(const Config& cfg, std::ostream& out) {
  out << format_system(bmdp_to_system(parse_bmdp(read_file(cfg.input)), cfg.objective));
  return 0;
}

int cmd_normalize(const Config& cfg, std::ostream& out) {
  ParseOptions options;
  options.allow_mixed = true;
  out << format_system(to_snf(parse_system(read_file(cfg.input), options)).system);
  return 0;
}

}  // namespace

std::size_t certified_digits(std::size_t j) {
  return static_cast<std::size_t>(std::ceil(static_cast<double>(j) * std::log10(2.0) - 1e-12));
}

int run(const Config& cfg, std::ostream& out, std::ostream& err) {
  try {
    if (cfg.j < 1) throw InputError("--j must be at least 1");
    if (sgn(cfg.epsilon) <= 0 || cfg.epsilon > 1) throw InputError("--epsilon must lie in (0, 1]");
    switch (cfg.command) {
      case Command::Solve: return cmd_solve(cfg, out);
      case Command::Qualitative: return cmd_qualitative(cfg, out);
      case Command::Policy: return cmd_policy(cfg, out);
      case Command::Bssg: return cmd_bssg(cfg, out);
      case Command::Convert: return cmd_convert(cfg, out);
      case Command::Normalize: return cmd_normalize(cfg, out);
    }
  } catch (const ParseError& e) {
    err << "error: parse: " << e.what() << "\n";
    return 1;
  } catch (const InputError& e) {
    err << "error: input: " << e.what() << "\n";
    return 1;
  } catch (const InvariantViolation& e) {
    err << "error: invariant: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    err << "error: internal: " << e.what() << "\n";
    return 2;
  }
  return 2;
}

}  // namespace ppsolve::cli
