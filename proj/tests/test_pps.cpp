#include <doctest.h>

#include <functional>

#include "ppsolve/errors.hpp"
#include "ppsolve/pps.hpp"
#include "support.hpp"

using namespace ppsolve;
using testing::Generator;

namespace {

EquationSystem random_general_system(Generator& gen, ChoiceOp op) {
  const std::size_t n = 1 + gen.below(4);
  std::vector<std::string> names;
  for (std::size_t i = 0; i < n; ++i) names.push_back("v" + std::to_string(i));
  std::vector<Equation> eqs;
  for (std::size_t i = 0; i < n; ++i) {
    const std::size_t alts = gen.coin(0.35) ? 2 + gen.below(2) : 1;
    GeneralEquation g{alts > 1 ? std::optional(op) : std::nullopt, {}};
    for (std::size_t a = 0; a < alts; ++a) {
      const std::size_t terms = gen.below(3);
      auto w = gen.split(terms + 1, 8);
      ProbPolynomial p{Rational(w[0], 8), {}};
      p.constant.canonicalize();
      for (std::size_t t = 0; t < terms; ++t) {
        std::map<std::size_t, unsigned> mono;
        const std::size_t degree = 1 + gen.below(3);
        for (std::size_t d = 0; d < degree; ++d) ++mono[gen.below(n)];
        Rational c(w[t + 1], 8);
        c.canonicalize();
        if (sgn(c) != 0) p.terms.push_back({c, Monomial(mono.begin(), mono.end())});
      }
      g.alternatives.push_back(std::move(p));
    }
    eqs.push_back(classify(std::move(g)));
  }
  return EquationSystem(names, eqs, op == ChoiceOp::Max ? Flavor::Max : Flavor::Min);
}

// Longest chain of auxiliary variables hanging below an original one: every
// original step of Kleene takes at most this many steps in the SNF system.
std::size_t delay_bound(const EquationSystem& snf, std::size_t originals) {
  std::vector<std::size_t> depth(snf.size(), 0);
  std::function<std::size_t(std::size_t)> visit = [&](std::size_t i) -> std::size_t {
    if (depth[i] != 0) return depth[i];
    std::size_t d = 0;
    for (std::size_t j : dependencies(snf, i))
      if (j >= originals) d = std::max(d, visit(j));
    return depth[i] = d + 1;
  };
  std::size_t best = 0;
  for (std::size_t i = 0; i < originals; ++i)
    for (std::size_t j : dependencies(snf, i))
      if (j >= originals) best = std::max(best, visit(j));
  return best + 1;
}

}  // namespace

TEST_CASE("parse_system") {
  SUBCASE("general polynomial") {
    auto sys = parse_system("x1 = 0.75*x1*x1 + 0.25");
    REQUIRE(sys.size() == 1);
    const auto& g = std::get<GeneralEquation>(sys.equation(0));
    CHECK_FALSE(g.op.has_value());
    REQUIRE(g.alternatives.size() == 1);
    CHECK(g.alternatives[0].constant == Rational(1, 4));
    REQUIRE(g.alternatives[0].terms.size() == 1);
    CHECK(g.alternatives[0].terms[0].coeff == Rational(3, 4));
    CHECK(g.alternatives[0].terms[0].monomial == Monomial{{0, 2}});
  }
  SUBCASE("SNF kinds are recognized") {
    auto sys = parse_system("x1 = max(x2, x3)\nx2 = 0.5\nx3 = x2*x2");
    CHECK(std::holds_alternative<ChoiceEquation>(sys.equation(0)));
    CHECK(std::holds_alternative<LinearEquation>(sys.equation(1)));
    CHECK(std::holds_alternative<ProductEquation>(sys.equation(2)));
    CHECK(sys.flavor() == Flavor::Max);
    CHECK(sys.is_snf());
  }
  SUBCASE("comments, blank lines and fractions") {
    auto sys = parse_system("# header\n\nx = 1/3*y + 1/3 # tail\ny = 2/3\n");
    CHECK(sys.names() == std::vector<std::string>{"x", "y"});
    CHECK(std::get<LinearEquation>(sys.equation(0)) == LinearEquation{Rational(1, 3), {{1, Rational(1, 3)}}});
  }
  SUBCASE("mass above one") {
    try {
      parse_system("x1 = 0.6*x1 + 0.6");
      FAIL("expected ParseError");
    } catch (const ParseError& e) {
      CHECK(std::string(e.what()).find("coefficient sum 6/5 > 1") != std::string::npos);
      CHECK(e.line() == 1);
    }
  }
  SUBCASE("error positions") {
    auto where = [](const char* text) -> std::pair<std::size_t, std::size_t> {
      try {
        parse_system(text);
      } catch (const ParseError& e) {
        return {e.line(), e.column()};
      }
      return {0, 0};
    };
    CHECK(where("x1 = 0.5*x9") == std::pair<std::size_t, std::size_t>{1, 10});
    CHECK(where("x1 = 0.5\nx2 = -0.5") == std::pair<std::size_t, std::size_t>{2, 6});
    CHECK(where("x1 = 0.5 +") == std::pair<std::size_t, std::size_t>{1, 11});
    CHECK(where("x1 == 1") == std::pair<std::size_t, std::size_t>{1, 5});
    CHECK(where("x1 = 1\nx1 = 0") == std::pair<std::size_t, std::size_t>{2, 1});
    CHECK(where("x1 = max(x1)") == std::pair<std::size_t, std::size_t>{1, 12});
  }
  SUBCASE("mixed max and min needs the flag") {
    const char* text = "a = max(b, c)\nb = min(a, c)\nc = 0.5";
    CHECK_THROWS_AS(parse_system(text), ParseError);
    ParseOptions options;
    options.allow_mixed = true;
    CHECK(parse_system(text, options).flavor() == Flavor::MaxMin);
  }
}

TEST_CASE("format_system round-trips") {
  for (const auto& sys : {testing::system_a(), testing::system_b_max(), testing::system_d(),
                          parse_system("x1 = 0.75*x1*x1*x2 + 0.25\nx2 = max(x1*x1, 0.5, x2)")}) {
    CHECK(parse_system(format_system(sys)) == sys);
  }
  CHECK(format_system(testing::system_a()) == "x1 = 3/4*x2 + 1/4\nx2 = x1*x1\n");
}

TEST_CASE("to_snf") {
  SUBCASE("square becomes a product variable") {
    auto out = to_snf(parse_system("x1 = 0.75*x1*x1 + 0.25"));
    CHECK(format_system(out.system) == "x1 = 3/4*x2 + 1/4\nx2 = x1*x1\n");
    CHECK(out.mapping == std::vector<std::size_t>{0});
  }
  SUBCASE("wide max becomes a chain") {
    auto out = to_snf(parse_system("x1 = max(x2, x3, x4)\nx2 = 0.1\nx3 = 0.2\nx4 = 0.3"));
    CHECK(format_system(out.system) == "x1 = max(x2, x5)\nx2 = 1/10\nx3 = 1/5\nx4 = 3/10\nx5 = max(x3, x4)\n");
  }
  SUBCASE("SNF input is returned unchanged") {
    auto sys = testing::system_b_min();
    auto out = to_snf(sys);
    CHECK(out.system == sys);
    CHECK(out.mapping == std::vector<std::size_t>{0, 1, 2, 3, 4});
  }
  SUBCASE("constant alternatives are lifted") {
    auto out = to_snf(parse_system("T = max(1, T*T)"));
    CHECK(format_system(out.system) == "T = max(x2, x3)\nx2 = 1\nx3 = T*T\n");
  }
  SUBCASE("fresh names skip taken ones") {
    auto out = to_snf(parse_system("x2 = 0.5*x2*x2 + 0.5\nx3 = x2"));
    CHECK(out.system.name(2) == "x4");
  }
  SUBCASE("high powers use repeated squaring") {
    auto out = to_snf(parse_system("x = 0.5*x*x*x*x*x + 0.5"));
    CHECK(out.system.is_snf());
    CHECK(out.system.size() == 4);  // x^2, x^4, x^5
  }
}

TEST_CASE("property: to_snf preserves the least fixed point") {
  Generator gen(5);
  for (int trial = 0; trial < 100; ++trial) {
    const auto sys = random_general_system(gen, gen.coin() ? ChoiceOp::Max : ChoiceOp::Min);
    const auto snf = to_snf(sys);
    REQUIRE(snf.system.is_snf());
    const std::size_t n = sys.size();
    const std::size_t d = delay_bound(snf.system, n);
    // Auxiliary variables delay propagation, so SNF iterates lag behind but
    // catch up within d steps per original step.
    for (std::size_t k = 0; k <= 3; ++k) {
      const auto orig = kleene_iterate(sys, k);
      const auto lag = kleene_iterate(snf.system, k);
      for (std::size_t i = 0; i < n; ++i) CHECK(lag[i] <= orig[i]);
    }
    const std::size_t steps = 3000;
    const auto orig = testing::kleene_double(sys, steps);
    const auto slow = testing::kleene_double(snf.system, steps);
    const auto fast = testing::kleene_double(snf.system, d * steps);
    for (std::size_t i = 0; i < n; ++i) {
      CHECK(slow[i] <= orig[i] + 1e-12);
      CHECK(orig[i] <= fast[i] + 1e-12);
    }
  }
}

TEST_CASE("encoding_size") {
  CHECK(encoding_size(parse_system("x1 = x1*x1")) == 4);
  CHECK(encoding_size(testing::system_a()) == 19);
  CHECK(encoding_size(parse_system("x1 = 0*x1 + 1/2")) == encoding_size(parse_system("x1 = 1/2")));
  CHECK_THROWS_AS(encoding_size(parse_system("x1 = 0.5*x1*x1*x1")), InputError);
}

TEST_CASE("apply_policy") {
  auto sys = parse_system("x1 = max(x2, x3)\nx2 = 0.2\nx3 = 0.4");
  auto fixed = apply_policy(sys, Policy{{{0, 2}}});
  CHECK(std::get<LinearEquation>(fixed.equation(0)) == LinearEquation{0, {{2, 1}}});
  CHECK(fixed.flavor() == Flavor::Pure);
  CHECK(apply_policy(testing::system_a(), Policy{}) == EquationSystem(testing::system_a().names(), testing::system_a().equations(), Flavor::Pure));
  CHECK_THROWS_AS(apply_policy(sys, Policy{}), InputError);
  CHECK_THROWS_AS(apply_policy(sys, Policy{{{0, 0}}}), InputError);
  CHECK_THROWS_AS(apply_policy(sys, Policy{{{0, 1}, {1, 2}}}), InputError);

  // x2 branch of B: its q* is 1/3, checked against a long Kleene run.
  auto b = apply_policy(testing::system_b_max(), Policy{{{0, 1}}});
  CHECK(kleene_iterate_numeric(b, 2000)[0] == doctest::Approx(1.0 / 3).epsilon(1e-9));
}

TEST_CASE("evaluate") {
  CHECK(evaluate(testing::system_a(), RationalVector{0, 0}) == RationalVector{Rational(1, 4), 0});
  CHECK(evaluate(testing::system_a(), RationalVector{Rational(1, 3), Rational(1, 9)}) ==
        RationalVector{Rational(1, 3), Rational(1, 9)});
  auto sys = parse_system("x1 = max(x2, x3)\nx2 = 1/3\nx3 = 1/2");
  CHECK(evaluate(sys, RationalVector{0, Rational(1, 3), Rational(1, 2)})[0] == Rational(1, 2));
  CHECK_THROWS_AS(evaluate(sys, RationalVector{0}), InputError);
}

TEST_CASE("jacobian") {
  CHECK(jacobian(testing::system_a(), {Rational(1, 4), 0}) ==
        RationalMatrix{{0, Rational(3, 4)}, {Rational(1, 2), 0}});
  auto zero = jacobian(testing::system_a(), {0, 0});
  CHECK(zero(1, 0) == 0);
  CHECK(zero(1, 1) == 0);
  auto sq = parse_system("x1 = 0.5*x2 + 0.1\nx2 = x1*x1");
  CHECK(jacobian(sq, {Rational(2, 7), 0})(1, 0) == Rational(4, 7));
  CHECK_THROWS_AS(jacobian(testing::system_d(), {0, 0, 0}), InputError);
}

TEST_CASE("kleene_iterate") {
  const auto a = testing::system_a();
  CHECK(kleene_iterate(a, 0) == RationalVector{0, 0});
  CHECK(kleene_iterate(a, 1) == RationalVector{Rational(1, 4), 0});
  CHECK(kleene_iterate(a, 2) == RationalVector{Rational(1, 4), Rational(1, 16)});
  CHECK(kleene_iterate(a, 3) == RationalVector{Rational(19, 64), Rational(1, 16)});

  const auto b = kleene_iterate_numeric(testing::system_b_max(), 10000);
  const double x3 = testing::kBranchX3;
  const std::vector<double> expected{x3, 1.0 / 3, x3, 1.0 / 9, x3 * x3};
  for (std::size_t i = 0; i < 5; ++i) CHECK(std::abs(b[i] - expected[i]) < 1e-6);
}

TEST_CASE("scc_decomposition") {
  using Components = std::vector<std::vector<std::size_t>>;
  CHECK(scc_decomposition(testing::system_c()) == Components{{0}, {1}});
  CHECK(scc_decomposition(parse_system("x1 = x1*x1")) == Components{{0}});
  CHECK(scc_decomposition(parse_system("a = 0.1\nb = 0.2\nc = 0.3")).size() == 3);
  // A before the cycle {B, C} it feeds on, which comes before D.
  auto sys = parse_system("a = 0.5*b\nb = 0.5*c + 0.1\nc = b*d\nd = 0.5");
  CHECK(scc_decomposition(sys) == Components{{0}, {1, 2}, {3}});
}

TEST_CASE("property: SCC order is a topological order") {
  Generator gen(17);
  for (int trial = 0; trial < 100; ++trial) {
    auto sys = gen.snf_system(2 + gen.below(7), 0, ChoiceOp::Max, 4);
    auto comps = scc_decomposition(sys);
    std::vector<std::size_t> position(sys.size());
    std::size_t covered = 0;
    for (std::size_t c = 0; c < comps.size(); ++c)
      for (std::size_t v : comps[c]) {
        position[v] = c;
        ++covered;
      }
    CHECK(covered == sys.size());
    for (std::size_t i = 0; i < sys.size(); ++i)
      for (std::size_t j : dependencies(sys, i)) CHECK(position[j] >= position[i]);
  }
}

TEST_CASE("bmdp_to_system") {
  SUBCASE("single action") {
    auto sys = bmdp_to_system(parse_bmdp("type T1\n1/2 -> T1 T1\n1/2 -> ()\n"), Objective::MaximizeExtinction);
    CHECK(format_system(sys) == "T1 = 1/2*T1*T1 + 1/2\n");
    CHECK(sys.flavor() == Flavor::Pure);
  }
  SUBCASE("two actions") {
    const char* text = "type T1\naction a\n1 -> ()\naction b\n1 -> T1 T1\n";
    auto max = bmdp_to_system(parse_bmdp(text), Objective::MaximizeExtinction);
    CHECK(format_system(max) == "T1 = max(1, T1*T1)\n");
    auto min = bmdp_to_system(parse_bmdp(text), Objective::MinimizeExtinction);
    CHECK(min.flavor() == Flavor::Min);
    CHECK(to_snf(max).system.is_snf());
  }
  SUBCASE("forward references and errors") {
    auto b = parse_bmdp("type A\n1 -> B\ntype B\n0.5 -> ()\n0.5 -> A A\n");
    CHECK(b.types.size() == 2);
    CHECK_THROWS_AS(parse_bmdp("type A\n0.5 -> ()\n"), InputError);
    CHECK_THROWS_AS(parse_bmdp("type A\n1 -> C\n"), ParseError);
    CHECK_THROWS_AS(parse_bmdp("type A\naction a\n"), InputError);
    CHECK_THROWS_AS(parse_bmdp("1 -> ()\n"), ParseError);
  }
}

TEST_CASE("property: Kleene iterates are monotone and evaluate(1) <= 1") {
  Generator gen(3);
  for (int trial = 0; trial < 100; ++trial) {
    auto sys = gen.snf_system(1 + gen.below(6), gen.below(3), gen.coin() ? ChoiceOp::Max : ChoiceOp::Min, 8);
    RationalVector prev = kleene_iterate(sys, 0);
    for (std::size_t k = 1; k <= 6; ++k) {
      RationalVector next = evaluate(sys, prev);
      CHECK(leq(prev, next));
      prev = std::move(next);
    }
    for (const auto& v : evaluate(sys, RationalVector(sys.size(), Rational(1)))) CHECK(v <= 1);
  }
}

TEST_CASE("property: jacobian matches central differences") {
  Generator gen(13);
  for (int trial = 0; trial < 100; ++trial) {
    auto sys = gen.snf_system(1 + gen.below(5), 0, ChoiceOp::Max, 16);
    const std::size_t n = sys.size();
    RationalVector point(n);
    for (auto& p : point) p = gen.rational(1, 99, 100);
    const auto jac = jacobian(sys, point);
    const double step = 1e-5;
    for (std::size_t c = 0; c < n; ++c) {
      std::vector<double> up(n), down(n);
      for (std::size_t v = 0; v < n; ++v) up[v] = down[v] = point[v].get_d();
      up[c] += step;
      down[c] -= step;
      const auto fu = testing::eval_double(sys, up);
      const auto fd = testing::eval_double(sys, down);
      for (std::size_t r = 0; r < n; ++r) CHECK(std::abs((fu[r] - fd[r]) / (2 * step) - jac(r, c).get_d()) < 1e-8);
    }
  }
}

TEST_CASE("property: apply_policy agrees with resolving choices by the policy") {
  Generator gen(19);
  for (int trial = 0; trial < 100; ++trial) {
    auto sys = gen.snf_system(2 + gen.below(5), 1 + gen.below(2), gen.coin() ? ChoiceOp::Max : ChoiceOp::Min, 8);
    const auto policies = testing::all_policies(sys);
    const Policy& sigma = policies[gen.below(policies.size())];
    RationalVector point(sys.size());
    for (auto& p : point) p = gen.rational(0, 64, 64);
    RationalVector expected = testing::eval_exact(sys, point);
    for (auto [i, j] : sigma.choice) expected[i] = point[j];
    CHECK(evaluate(apply_policy(sys, sigma), point) == expected);
  }
}
