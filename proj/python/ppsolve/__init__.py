"""Least fixed points of max/min probabilistic polynomial systems, in exact rationals."""

from fractions import Fraction

from . import _core
from ._core import EnumerationCapError, InputError, InvariantViolation, ParseError, System

__all__ = [
    "System",
    "parse",
    "solve",
    "qualitative",
    "epsilon_policy",
    "bssg",
    "bmdp_to_system",
    "InputError",
    "ParseError",
    "EnumerationCapError",
    "InvariantViolation",
]


def _fractions(values):
    return {name: Fraction(v) for name, v in values.items()}


def _rational(x):
    return str(Fraction(x))


def parse(text, allow_mixed=False):
    return System(text, allow_mixed)


def solve(system, j=20, use_lp_for_pure=False):
    """Approximation of q* within 2**-j, as Fractions keyed by variable name."""
    out = _core.solve(system, j, use_lp_for_pure)
    out["values"] = _fractions(out["values"])
    return out


def qualitative(system):
    return _core.qualitative(system)


def epsilon_policy(system, epsilon, override_j=None):
    out = _core.epsilon_policy(system, _rational(epsilon), override_j)
    out["value"] = _fractions(out["value"])
    return out


def bssg(system, epsilon, max_policy=None, min_policy=None):
    """Exhaustive search, or a check of the given policy pair when one is passed."""
    out = _core.bssg(system, _rational(epsilon), max_policy, min_policy)
    out["value"] = _fractions(out["value"])
    out["gap"] = Fraction(out["gap"])
    out["epsilon"] = Fraction(out["epsilon"])
    return out


def bmdp_to_system(text, objective="max"):
    return _core.bmdp_to_system(text, objective)
