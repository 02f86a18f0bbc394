#include <iostream>
#include <string>

#include <CLI11.hpp>

#include "ppsolve/cli.hpp"
#include "ppsolve/rational.hpp"

int main(int argc, char** argv) {
  using namespace ppsolve::cli;
  CLI::App app{"Least fixed points of max/min probabilistic polynomial systems"};
  app.require_subcommand(1);

  Config cfg;
  std::string format = "human";
  std::string epsilon;
  std::string objective = "max";
  std::size_t override_precision = 0;
  std::string candidate;

  auto input = [&](CLI::App* sub, const char* what) {
    sub->add_option("input", cfg.input, what)->required()->check(CLI::ExistingFile);
  };
  auto common = [&](CLI::App* sub) {
    sub->add_option("--format", format, "Output format")->check(CLI::IsMember({"human", "json"}));
    sub->add_flag("--exact", cfg.exact, "Also print exact rationals");
  };

  auto* solve = app.add_subcommand("solve", "Approximate q* to within 2^-j");
  input(solve, "Equation file");
  common(solve);
  solve->add_option("--j", cfg.j, "Precision exponent")->check(CLI::PositiveNumber);
  solve->add_flag("--differential-lp", cfg.differential_lp, "Cross-check Newton steps against the LP on pure systems");

  auto* qualitative = app.add_subcommand("qualitative", "Variables with q* = 0 or q* = 1");
  input(qualitative, "Equation file");
  common(qualitative);

  auto* policy = app.add_subcommand("policy", "ε-optimal policy of a max or min system");
  input(policy, "Equation file");
  common(policy);
  policy->add_option("--epsilon", epsilon, "Target ε, e.g. 1/1024 or 0.001");
  policy->add_option("--override-precision", override_precision,
                     "Use this j instead of the worst-case bound (marks the result heuristic)")
      ->check(CLI::PositiveNumber);

  auto* bssg = app.add_subcommand("bssg", "Value of a max-min system by policy guess-and-check");
  input(bssg, "Equation file");
  common(bssg);
  bssg->add_option("--epsilon", epsilon, "Target ε");
  bssg->add_option("--candidate", candidate, "JSON {\"max\": {...}, \"min\": {...}} to check")
      ->check(CLI::ExistingFile);

  auto* convert = app.add_subcommand("convert", "BMDP description to equations");
  input(convert, "BMDP file");
  convert->add_option("--objective", objective, "Extinction objective")->check(CLI::IsMember({"max", "min"}));

  auto* normalize = app.add_subcommand("normalize", "Rewrite a system into simple normal form");
  input(normalize, "Equation file");

  CLI11_PARSE(app, argc, argv);

  if (app.got_subcommand(solve)) cfg.command = Command::Solve;
  if (app.got_subcommand(qualitative)) cfg.command = Command::Qualitative;
  if (app.got_subcommand(policy)) cfg.command = Command::Policy;
  if (app.got_subcommand(bssg)) cfg.command = Command::Bssg;
  if (app.got_subcommand(convert)) cfg.command = Command::Convert;
  if (app.got_subcommand(normalize)) cfg.command = Command::Normalize;
  cfg.format = format == "json" ? OutputFormat::Json : OutputFormat::Human;
  cfg.objective = objective == "min" ? ppsolve::Objective::MinimizeExtinction : ppsolve::Objective::MaximizeExtinction;
  if (override_precision > 0) cfg.override_precision = override_precision;
  if (!candidate.empty()) cfg.candidate = candidate;
  if (!epsilon.empty()) {
    try {
      cfg.epsilon = ppsolve::parse_rational(epsilon);
    } catch (const std::exception& e) {
      std::cerr << "error: input: --epsilon: " << e.what() << "\n";
      return 1;
    }
  }
  return run(cfg, std::cout, std::cerr);
}
