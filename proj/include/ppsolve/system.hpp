#pragma once

#include <cstddef>
#include <map>
#include <optional>
#include <string>
#include <utility>
#include <variant>
#include <vector>

#include "ppsolve/linalg.hpp"

namespace ppsolve {

/// One variable occurrence with its coefficient in a linear form.
struct LinearTerm {
  std::size_t var = 0;
  Rational coeff;
  friend bool operator==(const LinearTerm&, const LinearTerm&) = default;
};

/// A monomial x_{v1}^{e1} ... with variables sorted ascending, exponents >= 1.
using Monomial = std::vector<std::pair<std::size_t, unsigned>>;

struct PolyTerm {
  Rational coeff;
  Monomial monomial;
  friend bool operator==(const PolyTerm&, const PolyTerm&) = default;
};

/// Probabilistic polynomial: nonnegative coefficients and constant summing to <= 1.
struct ProbPolynomial {
  Rational constant;
  std::vector<PolyTerm> terms;
  friend bool operator==(const ProbPolynomial&, const ProbPolynomial&) = default;
};

enum class ChoiceOp { Max, Min };

/// Form L: x_i = constant + sum coeff * x_var.
struct LinearEquation {
  Rational constant;
  std::vector<LinearTerm> terms;  // sorted by var, nonzero coefficients
  friend bool operator==(const LinearEquation&, const LinearEquation&) = default;
};

/// Form Q: x_i = x_left * x_right.
struct ProductEquation {
  std::size_t left = 0;
  std::size_t right = 0;
  friend bool operator==(const ProductEquation&, const ProductEquation&) = default;
};

/// Form M: x_i = max/min(x_first, x_second).
struct ChoiceEquation {
  ChoiceOp op = ChoiceOp::Max;
  std::size_t first = 0;
  std::size_t second = 0;
  friend bool operator==(const ChoiceEquation&, const ChoiceEquation&) = default;
};

/// Pre-SNF right-hand side: one polynomial, or max/min over several.
struct GeneralEquation {
  std::optional<ChoiceOp> op;
  std::vector<ProbPolynomial> alternatives;
  friend bool operator==(const GeneralEquation&, const GeneralEquation&) = default;
};

using Equation = std::variant<LinearEquation, ProductEquation, ChoiceEquation, GeneralEquation>;

enum class Flavor { Pure, Max, Min, MaxMin };

/// x = P(x): equation i defines variable i. Immutable after construction; the
/// constructor validates indices, probabilistic invariants, and flavor.
class EquationSystem {
 public:
  EquationSystem() = default;
  EquationSystem(std::vector<std::string> names, std::vector<Equation> equations, Flavor flavor);

  std::size_t size() const noexcept { return equations_.size(); }
  bool empty() const noexcept { return equations_.empty(); }
  Flavor flavor() const noexcept { return flavor_; }
  const std::vector<std::string>& names() const noexcept { return names_; }
  const std::string& name(std::size_t i) const { return names_.at(i); }
  const std::vector<Equation>& equations() const noexcept { return equations_; }
  const Equation& equation(std::size_t i) const { return equations_.at(i); }

  std::optional<std::size_t> index_of(const std::string& name) const;

  /// Only forms L, Q and M.
  bool is_snf() const;

  /// Indices of the M equations, ascending.
  std::vector<std::size_t> choice_equations() const;

  friend bool operator==(const EquationSystem&, const EquationSystem&) = default;

 private:
  std::vector<std::string> names_;
  std::vector<Equation> equations_;
  Flavor flavor_ = Flavor::Pure;
};

/// Canonical form of a general right-hand side: L when every monomial is a
/// single variable, Q for a bare product of two variables, M for a max/min of
/// exactly two bare variables, otherwise the general equation itself.
Equation classify(GeneralEquation equation);

/// Smallest flavor admitting every choice operator in `equations`.
Flavor infer_flavor(const std::vector<Equation>& equations);

/// Maps each M equation to the argument it selects.
struct Policy {
  std::map<std::size_t, std::size_t> choice;
  friend bool operator==(const Policy&, const Policy&) = default;
};

/// Branching MDP: per type a list of actions, per action a list of rules
/// (probability, offspring multiset).
struct BmdpRule {
  Rational probability;
  std::map<std::size_t, unsigned> offspring;
};

struct BmdpAction {
  std::string name;
  std::vector<BmdpRule> rules;
};

struct Bmdp {
  std::vector<std::string> types;
  std::vector<std::vector<BmdpAction>> actions;  // indexed by type

  /// Throws InputError unless every (type, action) distribution sums to 1.
  void validate() const;
};

enum class Objective { MaximizeExtinction, MinimizeExtinction };

std::string to_string(Flavor flavor);

}  // namespace ppsolve
