#include <pybind11/operators.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "ppsolve/bssg.hpp"
#include "ppsolve/errors.hpp"
#include "ppsolve/gnm.hpp"
#include "ppsolve/parse.hpp"
#include "ppsolve/policy.hpp"
#include "ppsolve/pps.hpp"
#include "ppsolve/qualitative.hpp"

namespace py = pybind11;
using namespace ppsolve;

namespace {

// Rationals cross the boundary as "p/q" strings; the Python layer makes Fractions.
py::dict values(const EquationSystem& sys, const RationalVector& v) {
  py::dict out;
  for (std::size_t i = 0; i < v.size(); ++i) out[py::str(sys.name(i))] = to_string(v[i]);
  return out;
}

py::list names(const EquationSystem& sys, const IndexSet& set, std::size_t limit) {
  py::list out;
  for (std::size_t i : set)
    if (i < limit) out.append(sys.name(i));
  return out;
}

py::dict policy_dict(const EquationSystem& sys, const Policy& p) {
  py::dict out;
  for (auto [i, j] : p.choice) out[py::str(sys.name(i))] = sys.name(j);
  return out;
}

Policy policy_from(const EquationSystem& sys, const std::map<std::string, std::string>& choice) {
  Policy p;
  for (const auto& [eq, arg] : choice) {
    auto i = sys.index_of(eq), j = sys.index_of(arg);
    if (!i || !j) throw InputError("policy names an unknown variable: " + eq + " -> " + arg);
    p.choice[*i] = *j;
  }
  return p;
}

py::dict certificate(const EquationSystem& sys, const CandidateCertificate& c) {
  py::dict out;
  out["accepted"] = c.accepted;
  out["epsilon"] = to_string(c.epsilon);
  out["j"] = c.j;
  out["gap"] = to_string(c.gap);
  out["max_policy"] = policy_dict(sys, c.max_policy);
  out["min_policy"] = policy_dict(sys, c.min_policy);
  out["value"] = values(sys, c.value);
  return out;
}

}  // namespace

PYBIND11_MODULE(_core, m) {
  m.doc() = "Exact least-fixed-point solver for max/min probabilistic polynomial systems";

  // Registered base first: later translators are tried first.
  auto& input_error = py::register_exception<InputError>(m, "InputError", PyExc_ValueError);
  py::register_exception<ParseError>(m, "ParseError", input_error.ptr());
  py::register_exception<EnumerationCapError>(m, "EnumerationCapError", input_error.ptr());
  py::register_exception<InvariantViolation>(m, "InvariantViolation", PyExc_RuntimeError);

  py::class_<EquationSystem>(m, "System")
      .def(py::init([](const std::string& text, bool allow_mixed) {
             ParseOptions options;
             options.allow_mixed = allow_mixed;
             return parse_system(text, options);
           }),
           py::arg("text"), py::arg("allow_mixed") = false)
      .def_property_readonly("names", &EquationSystem::names)
      .def_property_readonly("flavor", [](const EquationSystem& s) { return to_string(s.flavor()); })
      .def_property_readonly("is_snf", &EquationSystem::is_snf)
      .def("__len__", &EquationSystem::size)
      .def("__str__", [](const EquationSystem& s) { return format_system(s); })
      .def("__repr__", [](const EquationSystem& s) { return "<System " + to_string(s.flavor()) + " n=" + std::to_string(s.size()) + ">"; })
      .def(py::self == py::self)
      .def("to_snf", [](const EquationSystem& s) { return to_snf(s).system; })
      .def("encoding_size", [](const EquationSystem& s) { return encoding_size(s); });

  m.def(
      "solve",
      [](const EquationSystem& sys, std::size_t j, bool use_lp_for_pure) {
        SolveOptions options;
        options.record_iterates = false;
        options.use_lp_for_pure = use_lp_for_pure;
        const SolveReport r = solve(sys, j, options);
        py::dict out;
        out["values"] = values(sys, r.approximation);
        out["j"] = r.j;
        out["h"] = r.h;
        out["encoding_size"] = r.encoding_size;
        out["iterations"] = r.iterations;
        out["zero"] = names(sys, r.qualitative.zero_set, sys.size());
        out["one"] = names(sys, r.qualitative.one_set, sys.size());
        return out;
      },
      py::arg("system"), py::arg("j") = 20, py::arg("use_lp_for_pure") = false);

  m.def(
      "qualitative",
      [](const EquationSystem& sys) {
        const EquationSystem snf = to_snf(sys).system;
        const QualitativeReport r = reduce(snf);
        py::dict out;
        out["zero"] = names(snf, r.zero_set, snf.size());
        out["one"] = names(snf, r.one_set, snf.size());
        out["reduced"] = r.reduced;
        return out;
      },
      py::arg("system"));

  m.def(
      "epsilon_policy",
      [](const EquationSystem& sys, const std::string& epsilon, std::optional<std::size_t> override_j) {
        PolicyOptions options;
        options.override_j = override_j;
        const EpsilonPolicyReport r = epsilon_policy(sys, parse_rational(epsilon), options);
        py::dict out;
        out["policy"] = policy_dict(r.snf, r.policy);
        out["value"] = values(r.snf, r.value);
        out["value_j"] = r.value_j;
        out["j"] = r.j;
        out["heuristic"] = r.heuristic;
        out["repair_switches"] = r.repair_switches;
        return out;
      },
      py::arg("system"), py::arg("epsilon"), py::arg("override_j") = py::none());

  m.def(
      "bssg",
      [](const EquationSystem& sys, const std::string& epsilon,
         std::optional<std::map<std::string, std::string>> max_policy,
         std::optional<std::map<std::string, std::string>> min_policy) {
        const EquationSystem snf = to_snf(sys).system;
        const Rational eps = parse_rational(epsilon);
        if (max_policy || min_policy) {
          const std::map<std::string, std::string> none;
          return certificate(snf, check_candidate(snf, policy_from(snf, max_policy ? *max_policy : none),
                                                  policy_from(snf, min_policy ? *min_policy : none), eps));
        }
        const BssgSolution sol = solve_exhaustive(snf, eps);
        py::dict out = certificate(snf, sol.certificate);
        out["candidates_checked"] = sol.candidates_checked;
        return out;
      },
      py::arg("system"), py::arg("epsilon"), py::arg("max_policy") = py::none(), py::arg("min_policy") = py::none());

  m.def(
      "bmdp_to_system",
      [](const std::string& text, const std::string& objective) {
        if (objective != "max" && objective != "min") throw InputError("objective must be \"max\" or \"min\"");
        return bmdp_to_system(parse_bmdp(text),
                              objective == "max" ? Objective::MaximizeExtinction : Objective::MinimizeExtinction);
      },
      py::arg("text"), py::arg("objective") = "max");
}
