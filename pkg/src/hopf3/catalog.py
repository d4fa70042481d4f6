"""Catalog of the studied systems and their center conditions.

Every entry builds a HopfSystem already in canonical form; raw textbook forms
(Rossler before its shift, Lorenz before scaling, the x'=y families) exist
only inside the builders here.  Families whose linear part is x'=y, y'=-x
(Moon-Rand, Gine-Valls) are canonicalized by swapping x and y; z and the
perturbation monomials in z are untouched by that swap.

Center conditions are stored as named constraint sets with the parameter
samples used in the source analyses, plus deterministic extra samples for
property tests.  Condition resolution is data-driven: `zeros` pins, `derived`
computes dependent parameters in order, everything else comes from the
caller or defaults to zero; the constraint polynomials are then verified
exactly.
"""

from __future__ import annotations

from dataclasses import dataclass, field

from .errors import DomainError
from .poly import Roster, SparsePoly
from .rational import ZERO, mpq, parse_rational, rational_sqrt
from .sysmodel import HopfSystem, system_from_rationals


def _to_rat(value):
    if isinstance(value, str):
        return parse_rational(value)
    return mpq(value)


def _eval_formula(formula, values):
    """Evaluate an integer-coefficient rational formula over mpq values."""
    try:
        return mpq(eval(formula, {"__builtins__": {}}, dict(values)))
    except ZeroDivisionError:
        raise DomainError(f"formula {formula!r} divides by zero at this sample",
                          code="inadmissible-parameters") from None


def _constraint_poly(expr, roster):
    names = {n: SparsePoly.variable(roster, n) for n in roster.names}
    poly = eval(expr, {"__builtins__": {}}, names)
    if isinstance(poly, int):
        poly = SparsePoly.constant(roster, mpq(poly))
    return poly


@dataclass(frozen=True)
class CenterCondition:
    label: str
    constraints: tuple  # expression strings that vanish on the condition
    zeros: tuple = ()  # parameters pinned to 0
    derived: tuple = ()  # ordered (name, formula) pairs
    samples: tuple = ()  # free-parameter sample dicts, paper's first

    def free_names(self, family):
        fixed = set(self.zeros) | {n for n, _ in self.derived}
        return tuple(n for n in family if n not in fixed)

    def resolve(self, family, free_values):
        values = {}
        for name, value in free_values.items():
            if name not in family:
                raise DomainError(f"unknown parameter {name!r}", code="unknown-parameter")
            values[name] = _to_rat(value)
        for name in self.zeros:
            values[name] = ZERO
        for name, formula in self.derived:
            values[name] = _eval_formula(formula, values)
        for name in family:
            values.setdefault(name, ZERO)
        return values


@dataclass(frozen=True)
class CatalogEntry:
    name: str
    family: tuple  # ordered parameter names
    builder: object  # full assignment -> HopfSystem
    defaults: dict = field(default_factory=dict)
    conditions: dict = field(default_factory=dict)

    def roster(self):
        return Roster(self.family)

    def full_assignment(self, params):
        values = {k: _to_rat(v) for k, v in self.defaults.items()}
        for name, value in (params or {}).items():
            if name not in self.family:
                raise DomainError(
                    f"unknown parameter {name!r} for system {self.name}",
                    code="unknown-parameter",
                )
            values[name] = _to_rat(value)
        missing = [n for n in self.family if n not in values]
        if missing:
            raise DomainError(f"missing parameters {missing} for {self.name}",
                              code="missing-parameter")
        return values

    def check_condition(self, label, values):
        cond = self.conditions[label]
        roster = self.roster()
        for expr in cond.constraints:
            poly = _constraint_poly(expr, roster)
            if poly.evaluate(values):
                raise DomainError(
                    f"sample violates center condition {label!r}: {expr} != 0",
                    code="condition-violated",
                )


# -- builders -----------------------------------------------------------------


def _build_rossler(v):
    c = v["c"]
    if not c:
        raise DomainError("rossler needs c != 0 (lambda = c)", code="invalid-lambda")
    d = c * c + 1
    p = {(1, 0, 1): -c / d, (0, 0, 2): -c * c / (d * d)}
    q = {(1, 0, 1): 1 / d, (0, 0, 2): c / (d * d)}
    r = {(1, 0, 1): 1, (0, 0, 2): c / d}
    return system_from_rationals(c, p, q, r)


def _build_lorenz(v):
    a, b, d = v["a"], v["b"], v["d"]
    if not a or not d:
        raise DomainError("lorenz needs a != 0 and d != 0", code="inadmissible-parameters")
    if not b:
        raise DomainError("lorenz needs b != 0", code="inadmissible-parameters")
    sigma2 = -a * (a + b)
    if sigma2 <= 0:
        raise DomainError("lorenz needs a(a+b) < 0 for a Hopf point",
                          code="inadmissible-parameters")
    sigma = rational_sqrt(sigma2)
    if sigma is None:
        raise DomainError("lorenz needs -a(a+b) to be a perfect rational square "
                          "(sigma must be rational)", code="sigma-irrational")
    lam = -d / sigma
    p = {(1, 0, 1): -a / (b * sigma), (0, 1, 1): a * a / (b * sigma2)}
    q = {(1, 0, 1): -1 / b, (0, 1, 1): a / (b * sigma)}
    r = {(1, 1, 0): 1 / b, (0, 2, 0): -a / (b * sigma)}
    return system_from_rationals(lam, p, q, r)


def _build_moonrand(v):
    # Original frame: x'=y, y'=-x-xz, z'=-mu z + c x^2 + b xy + a y^2.
    # Canonicalized by the swap (x, y) -> (y, x).
    mu = v["mu"]
    if not mu:
        raise DomainError("moonrand needs mu != 0 (lambda = mu)", code="invalid-lambda")
    p = {(0, 1, 1): mpq(-1)}
    q = {}
    r = {(2, 0, 0): v["a"], (1, 1, 0): v["b"], (0, 2, 0): v["c"]}
    return system_from_rationals(mu, p, q, r)


def _build_ginevalls(v):
    # Original frame: x'=y, y'=-x + a1 x^2 + a2 xy + a3 xz + a4 y^2 + a5 yz + a6 z^2,
    # z'=-z + c1 x^2 + c2 xy + c3 y^2.  Swap (x, y).
    p = {
        (0, 2, 0): v["a1"],
        (1, 1, 0): v["a2"],
        (0, 1, 1): v["a3"],
        (2, 0, 0): v["a4"],
        (1, 0, 1): v["a5"],
        (0, 0, 2): v["a6"],
    }
    q = {}
    r = {(0, 2, 0): v["c1"], (1, 1, 0): v["c2"], (2, 0, 0): v["c3"]}
    return system_from_rationals(1, p, q, r)


def _build_emrs(v):
    p = {(2, 0, 0): v["a"], (0, 2, 0): v["a"], (1, 0, 1): v["c"], (0, 1, 1): v["d"]}
    q = {(2, 0, 0): v["b"], (0, 2, 0): v["b"], (1, 0, 1): v["e"], (0, 1, 1): v["f"]}
    r = {(2, 0, 0): v["S"], (0, 2, 0): v["S"], (1, 0, 1): v["T"], (0, 1, 1): v["U"]}
    return system_from_rationals(1, p, q, r)


# -- jerk canonical form -------------------------------------------------------


@dataclass(frozen=True)
class JerkSpec:
    """Canonical data of a jerk system with a Hopf point: x' = -y + beta*F2,
    y' = x - tau*F2, z' = -lambda*(z + tau*F2)."""

    beta: object
    tau: object
    lambda_: object
    f2: SparsePoly  # quadratic+ polynomial in (x, y, z), rational coefficients

    def __post_init__(self):
        if not self.beta or not self.tau or not self.lambda_:
            raise DomainError("jerk canonical form needs beta, tau, lambda nonzero",
                              code="inadmissible-parameters")
        if self.f2 and self.f2.lowest_degree() < 2:
            raise DomainError("F2 must have no constant or linear terms",
                              code="canonical-form-violation")


def jerk_canonicalize(spec):
    beta, tau, lam = mpq(spec.beta), mpq(spec.tau), mpq(spec.lambda_)
    f2 = {m: mpq(c) for m, c in spec.f2.terms.items()}
    p = {m: beta * c for m, c in f2.items()}
    q = {m: -tau * c for m, c in f2.items()}
    r = {m: -tau * lam * c for m, c in f2.items()}
    return system_from_rationals(lam, p, q, r)


def jerk_f2(values):
    """F2 = a1 x^2 + a2 y^2 + a3 z^2 + a4 xy + a5 xz + a6 yz from a1..a6."""
    from .poly import XYZ

    terms = {
        (2, 0, 0): values["a1"],
        (0, 2, 0): values["a2"],
        (0, 0, 2): values["a3"],
        (1, 1, 0): values["a4"],
        (1, 0, 1): values["a5"],
        (0, 1, 1): values["a6"],
    }
    return SparsePoly(XYZ, {m: mpq(c) for m, c in terms.items() if mpq(c)})


def _build_jerk(v):
    return jerk_canonicalize(JerkSpec(1, -1, 1, jerk_f2(v)))


# -- condition tables ----------------------------------------------------------

_JERK_CONDITIONS = {
    "a": CenterCondition("a", ("a1", "a2", "a4"), zeros=("a1", "a2", "a4"),
                         samples=({"a3": "1", "a5": "2", "a6": "3"},)),
    "b": CenterCondition("b", ("a1-a2", "a3", "a5", "a6"), zeros=("a3", "a5", "a6"),
                         derived=(("a1", "a2"),),
                         samples=({"a2": "2", "a4": "4"},)),
    "c": CenterCondition("c", ("a1+a2", "a3", "a5", "a6"), zeros=("a3", "a5", "a6"),
                         derived=(("a1", "-a2"),),
                         samples=({"a2": "2", "a4": "4"},)),
    "d": CenterCondition(
        "d", ("a1+a2", "2*a2-a3+a6", "a3-a4-2*a5", "2*a4+3*a5+a6"),
        derived=(("a3", "a4+2*a5"), ("a6", "-2*a4-3*a5"), ("a2", "(a3-a6)/2"),
                 ("a1", "-a2")),
        samples=({"a4": "1", "a5": "-1/2"},)),
    "e": CenterCondition(
        "e", ("2*a1-a6", "2*a2+a5", "2*a3-a5+a6", "a4+a5+a6"),
        derived=(("a5", "-2*a2"), ("a6", "a5-2*a3"), ("a4", "-a5-a6"), ("a1", "a6/2")),
        samples=({"a2": "5", "a3": "-1/2"},)),
    "f": CenterCondition(
        "f", ("a1-a2", "2*a2+a6", "a4", "a5+a6"),
        zeros=("a4",),
        derived=(("a1", "a2"), ("a6", "-2*a2"), ("a5", "2*a2")),
        samples=({"a2": "3/5", "a3": "1"},)),
    "g": CenterCondition(
        "g", ("2*a1+a2", "2*a2+a6", "4*a3+5*a6", "a4", "2*a5-a6"),
        zeros=("a4",),
        derived=(("a2", "-2*a1"), ("a6", "4*a1"), ("a3", "-5*a1"), ("a5", "2*a1")),
        samples=({"a1": "2"}, {"a1": "1"}, {"a1": "-1/2"})),
}

_GV_CASE_ZEROS = {
    "5.1": ("a1", "a2"), "5.2": ("a1", "a3"), "5.3": ("a1", "a4"),
    "5.4": ("a1", "a5"), "5.5": ("a1", "a6"), "5.6": ("a2", "a3"),
    "5.7": ("a2", "a4"), "5.8": ("a2", "a5"), "5.9": ("a2", "a6"),
    "5.10": ("a3", "a4"), "5.11": ("a3", "a5"), "5.12": ("a3", "a6"),
    "5.13": ("a4", "a5"), "5.14": ("a4", "a6"), "5.15": ("a5", "a6"),
}

_C_ZEROS = ("c1", "c2", "c3")
_C_HALF = (("c2", "2*c1"),)  # the recurring 2c1 - c2 = 0, c3 = 0 pattern


def _gv(case, item, constraints, zeros=(), derived=(), samples=()):
    case_zeros = _GV_CASE_ZEROS[case]
    label = f"{case}{item}"
    all_constraints = tuple(case_zeros) + tuple(constraints)
    return label, CenterCondition(
        label, all_constraints,
        zeros=tuple(dict.fromkeys(case_zeros + tuple(zeros))),
        derived=tuple(derived), samples=tuple(samples),
    )


_GV_CONDITIONS = dict(
    [
        _gv("5.1", "a", _C_ZEROS, zeros=_C_ZEROS,
            samples=({"a5": "3/4", "a3": "1", "a4": "3", "a6": "1/2"},)),
        _gv("5.1", "b", ("a5", "2*c1-c2", "c3"), zeros=("a5", "c3"), derived=_C_HALF,
            samples=({"c1": "0", "a3": "4", "a4": "1/2", "a6": "-5/3"},)),
        _gv("5.1", "c", ("a3", "a5", "a6"), zeros=("a3", "a5", "a6"),
            samples=({"c1": "-1", "c2": "2/3", "c3": "5", "a4": "-2/3"},)),
        _gv("5.2", "a", ("a4",) + _C_ZEROS, zeros=("a4",) + _C_ZEROS,
            samples=({"a2": "3", "a5": "2/3", "a6": "-6"},)),
        _gv("5.2", "b", ("a2",) + _C_ZEROS, zeros=("a2",) + _C_ZEROS,
            samples=({"a4": "5", "a5": "2", "a6": "1"},)),
        _gv("5.2", "c",
            ("2*a2*a4+a5*c2", "a4*a5**2-a2**2*a6", "2*a4**2*a5+a2*a6*c2",
             "4*a4**3-a6*c2**2", "2*a2**3*a6+a5**3*c2", "2*c1-c2", "c3"),
            zeros=("c3",),
            derived=(("c2", "2*c1"), ("a5", "-2*a2*a4/c2"), ("a6", "a4*a5**2/a2**2")),
            samples=({"a2": "-1", "a4": "5/8", "c1": "1/2"},)),
        _gv("5.2", "d", ("a2", "a5", "2*c1-c2", "c3"), zeros=("a2", "a5", "c3"),
            derived=_C_HALF, samples=({"a4": "1", "a6": "-1", "c1": "2/3"},)),
        _gv("5.2", "e", ("a4", "a5", "a6"), zeros=("a4", "a5", "a6")),
        _gv("5.2", "f", ("a2", "a5", "a6"), zeros=("a2", "a5", "a6")),
        _gv("5.3", "a", _C_ZEROS, zeros=_C_ZEROS,
            samples=({"a2": "1", "a3": "2", "a5": "-1/2", "a6": "5/3"},)),
        _gv("5.3", "b", ("a5", "a6", "2*c1-c2", "c3"), zeros=("a5", "a6", "c3"),
            derived=_C_HALF, samples=({"c1": "1/2", "a2": "-2", "a3": "7/8"},)),
        _gv("5.3", "c", ("a2", "a5", "2*c1-c2", "c3"), zeros=("a2", "a5", "c3"),
            derived=_C_HALF, samples=({"a3": "7/8", "a6": "1/4", "c1": "2/3"},)),
        _gv("5.3", "d", ("a3", "a5", "a6"), zeros=("a3", "a5", "a6"),
            samples=({"a2": "1/2", "c1": "-2", "c2": "7/8", "c3": "1/4"},)),
        _gv("5.4", "a", ("a4",) + _C_ZEROS, zeros=("a4",) + _C_ZEROS,
            samples=({"a2": "1/2", "a3": "-2", "a6": "7/8"},)),
        _gv("5.4", "b", ("a4", "a6", "2*c1-c2", "c3"), zeros=("a4", "a6", "c3"),
            derived=_C_HALF, samples=({"a3": "2", "a2": "3", "c1": "-2/3"},)),
        _gv("5.4", "c", ("a2", "2*c1-c2", "c3"), zeros=("a2", "c3"), derived=_C_HALF,
            samples=({"a3": "-2", "a4": "-2", "a6": "7/8", "c1": "2/3"},)),
        _gv("5.4", "d", ("a3", "a4", "a6"), zeros=("a3", "a4", "a6"),
            samples=({"a2": "1/2", "c3": "1/4", "c1": "2/3", "c2": "-1/2"},)),
        _gv("5.4", "e", ("a2", "a3", "a6"), zeros=("a2", "a3", "a6"),
            samples=({"a4": "-2", "c3": "1/4", "c1": "2/3", "c2": "-1/2"},)),
        _gv("5.5", "a", ("a4",) + _C_ZEROS, zeros=("a4",) + _C_ZEROS,
            samples=({"a2": "1/2", "a3": "-2", "a5": "7/8"},)),
        _gv("5.5", "b", ("a2",) + _C_ZEROS, zeros=("a2",) + _C_ZEROS,
            samples=({"a3": "-2", "a4": "-2", "a5": "7/8"},)),
        _gv("5.5", "c", ("a4", "a5", "2*c1-c2", "c3"), zeros=("a4", "a5", "c3"),
            derived=_C_HALF, samples=({"a2": "1/2", "a3": "-2", "c1": "2/3"},)),
        _gv("5.5", "d", ("a2", "a5", "2*c1-c2", "c3"), zeros=("a2", "a5", "c3"),
            derived=_C_HALF, samples=({"a3": "-2", "a4": "-2", "c1": "2/3"},)),
        _gv("5.5", "e", ("a3", "a4", "a5"), zeros=("a3", "a4", "a5")),
        _gv("5.5", "f", ("a2", "a3", "a5"), zeros=("a2", "a3", "a5")),
        _gv("5.6", "a", ("a5", "a6"), zeros=("a5", "a6"),
            samples=({"a1": "1/2", "a4": "-2", "c3": "1/4", "c1": "2/3", "c2": "-1/2"},)),
        _gv("5.6", "b", ("a5", "2*c1-c2", "c3"), zeros=("a5", "c3"), derived=_C_HALF),
        _gv("5.6", "c", _C_ZEROS, zeros=_C_ZEROS,
            samples=({"a1": "1/2", "a4": "-2", "a5": "7/8", "a6": "1"},)),
        _gv("5.7", "a", ("a5", "2*c1-c2", "c3"), zeros=("a5", "c3"), derived=_C_HALF,
            samples=({"a1": "1/2", "a3": "-2", "a6": "1", "c1": "2/3"},)),
        _gv("5.7", "b", _C_ZEROS, zeros=_C_ZEROS,
            samples=({"a1": "1/2", "a3": "-2", "a5": "7/8", "a6": "1"},)),
        _gv("5.7", "c", ("a3", "a5", "a6"), zeros=("a3", "a5", "a6"),
            samples=({"a1": "1/2", "c3": "1/4", "c1": "2/3", "c2": "-1/2"},)),
        _gv("5.8", "a", ("a3", "a6"), zeros=("a3", "a6"),
            samples=({"a1": "1/2", "a4": "-2", "c3": "1/4", "c1": "2/3", "c2": "-1/2"},)),
        _gv("5.8", "b", ("a1", "a3", "a4") + _C_ZEROS, zeros=("a1", "a3", "a4") + _C_ZEROS,
            samples=({"a6": "1"},)),
        _gv("5.8", "c", ("2*c1-c2", "c3"), zeros=("c3",), derived=_C_HALF,
            samples=({"a1": "1/2", "a3": "-2", "a4": "-2", "a6": "1", "c1": "2/3"},)),
        _gv("5.9", "a", _C_ZEROS, zeros=_C_ZEROS,
            samples=({"a1": "1/2", "a3": "-2", "a4": "-2", "a5": "7/8"},)),
        _gv("5.9", "b", ("a5", "2*c1-c2", "c3"), zeros=("a5", "c3"), derived=_C_HALF,
            samples=({"a1": "1/2", "a3": "-2", "a4": "-2", "c1": "2/3"},)),
        _gv("5.9", "c", ("a3", "a5"), zeros=("a3", "a5")),
        _gv("5.10", "a", ("a2",) + _C_ZEROS, zeros=("a2",) + _C_ZEROS,
            samples=({"a1": "1/2", "a5": "7/8", "a6": "1"},)),
        _gv("5.10", "b", ("a1",) + _C_ZEROS, zeros=("a1",) + _C_ZEROS,
            samples=({"a2": "-2", "a5": "7/8", "a6": "1"},)),
        _gv("5.10", "c", ("a6", "2*a1*a2+a5*c2", "2*c1-c2", "c3"),
            zeros=("a6", "c3"),
            derived=(("c2", "2*c1"), ("a1", "-a5*c2/(2*a2)")),
            samples=({"a2": "-2", "a5": "7/8", "c1": "2/3"},)),
        _gv("5.10", "d", ("a2", "a5", "a6"), zeros=("a2", "a5", "a6"),
            samples=({"a1": "1/2", "c3": "1/4", "c1": "2/3", "c2": "-1/2"},)),
        _gv("5.10", "e", ("a1", "a5", "a6"), zeros=("a1", "a5", "a6"),
            samples=({"a2": "-2", "c3": "1/4", "c1": "2/3", "c2": "-1/2"},)),
        _gv("5.10", "f", ("a2", "a5", "c3", "2*c1-c2"), zeros=("a2", "a5", "c3"),
            derived=_C_HALF, samples=({"a1": "1/2", "c1": "2/3"},)),
        _gv("5.11", "a", ("a2", "a6"), zeros=("a2", "a6"),
            samples=({"a1": "1/2", "a4": "-2", "c3": "1/4", "c1": "2/3", "c2": "-1/2"},)),
        _gv("5.11", "b", ("a2", "2*c1-c2", "c3"), zeros=("a2", "c3"), derived=_C_HALF,
            samples=({"a1": "1/2", "a4": "-2", "a6": "1", "c1": "2/3"},)),
        _gv("5.11", "c", ("a1+a4", "a6"), zeros=("a6",), derived=(("a1", "-a4"),),
            samples=({"a2": "-2", "a4": "-2", "c3": "1/4", "c1": "2/3", "c2": "-1/2"},)),
        _gv("5.11", "d", ("a1+a4",) + _C_ZEROS, zeros=_C_ZEROS, derived=(("a1", "-a4"),),
            samples=({"a2": "-2", "a4": "-2", "a6": "1"},)),
        _gv("5.12", "a", ("a2", "a5"), zeros=("a2", "a5"),
            samples=({"a1": "1/2", "a4": "-2", "c3": "1/4", "c1": "2/3", "c2": "-1/2"},)),
        _gv("5.12", "b", ("a5", "a1+a4"), zeros=("a5",), derived=(("a1", "-a4"),),
            samples=({"a2": "-2", "a4": "-2", "c3": "-1/4", "c1": "4/3", "c2": "-1/2"},)),
        _gv("5.12", "c", ("a2",) + _C_ZEROS, zeros=("a2",) + _C_ZEROS,
            samples=({"a1": "1/2", "a4": "-2", "a5": "7/8"},)),
        _gv("5.12", "d", ("a1+a4",) + _C_ZEROS, zeros=_C_ZEROS, derived=(("a1", "-a4"),),
            samples=({"a2": "-2", "a4": "-2", "a5": "7/8"},)),
        _gv("5.12", "e", ("2*a1*a2+a5*c2", "a4", "2*c1-c2", "c3"),
            zeros=("a4", "c3"),
            derived=(("c1", "c2/2"), ("a1", "-a5*c2/(2*a2)")),
            samples=({"a2": "-1", "a5": "-8/9", "c2": "-1/2"},)),
        _gv("5.13", "a", ("a1",) + _C_ZEROS, zeros=("a1",) + _C_ZEROS,
            samples=({"a2": "-1", "a3": "-2", "a6": "1"},)),
        _gv("5.13", "b", ("a1", "a6", "2*c1-c2", "c3"), zeros=("a1", "a6", "c3"),
            derived=_C_HALF, samples=({"a2": "-1", "a3": "-2", "c1": "4/3"},)),
        _gv("5.13", "c", ("a2", "2*c1-c2", "c3"), zeros=("a2", "c3"), derived=_C_HALF,
            samples=({"a1": "1/2", "a3": "-2", "a6": "1", "c1": "4/3"},)),
        _gv("5.13", "d", ("a2", "a3", "a6"), zeros=("a2", "a3", "a6"),
            samples=({"a1": "1/2", "c3": "-1/4", "c1": "4/3", "c2": "-1/2"},)),
        _gv("5.13", "e", ("a1", "a3", "a6"), zeros=("a1", "a3", "a6"),
            samples=({"a2": "-1", "c3": "-1/4", "c1": "4/3", "c2": "-1/2"},)),
        _gv("5.14", "a", ("a2",) + _C_ZEROS, zeros=("a2",) + _C_ZEROS,
            samples=({"a1": "1/2", "a3": "-2", "a5": "-8/9"},)),
        _gv("5.14", "b", ("a1",) + _C_ZEROS, zeros=("a1",) + _C_ZEROS,
            samples=({"a2": "-1", "a3": "-2", "a5": "-8/9"},)),
        _gv("5.14", "c", ("a2", "a5", "2*c1-c2", "c3"), zeros=("a2", "a5", "c3"),
            derived=_C_HALF, samples=({"a1": "1/2", "a3": "-2", "c1": "2/3"},)),
        _gv("5.14", "d", ("a1", "a5", "2*c1-c2", "c3"), zeros=("a1", "a5", "c3"),
            derived=_C_HALF, samples=({"a2": "-1", "a3": "-2", "c1": "-2/3"},)),
        _gv("5.14", "e", ("a3", "2*a1*a2+a5*c2", "2*c1-c2", "c3"),
            zeros=("a3", "c3"),
            derived=(("c1", "c2/2"), ("a1", "-a5*c2/(2*a2)")),
            samples=({"a5": "1", "a2": "-3/2", "c2": "-1/2"},)),
        _gv("5.14", "f", ("a2", "a3", "a5"), zeros=("a2", "a3", "a5"),
            samples=({"a1": "1/2", "c3": "-2/5", "c1": "-2/3", "c2": "-1/2"},)),
        _gv("5.14", "g", ("a1", "a3", "a5"), zeros=("a1", "a3", "a5"),
            samples=({"a2": "-1", "c3": "-2/5", "c1": "-2/3", "c2": "-1/2"},)),
        _gv("5.15", "a", ("a2", "a3"), zeros=("a2", "a3"),
            samples=({"a1": "1", "a4": "-2", "c3": "-2/5", "c1": "-2/3", "c2": "2"},)),
        _gv("5.15", "b", ("a1+a4", "a3"), zeros=("a3",), derived=(("a1", "-a4"),),
            samples=({"a2": "-1", "a4": "-2", "c3": "65", "c1": "1/28", "c2": "1"},)),
        _gv("5.15", "c", ("a1+a4",) + _C_ZEROS, zeros=_C_ZEROS, derived=(("a1", "-a4"),),
            samples=({"a2": "-1", "a4": "-2", "a3": "-8/9"},)),
        _gv("5.15", "d", ("a2", "2*c1-c2", "c3"), zeros=("a2", "c3"), derived=_C_HALF,
            samples=({"a1": "-1", "a4": "2", "a3": "-9", "c1": "2/5"},)),
        _gv("5.15", "e", ("a1", "a4", "2*c1-c2", "c3"), zeros=("a1", "a4", "c3"),
            derived=_C_HALF, samples=({"a2": "3", "a3": "5", "c1": "2"},)),
    ]
)

_EMRS_CONDITIONS = {
    "6.1": CenterCondition(
        "6.1", ("a", "b", "c+f", "S-1", "c", "d+e"),
        zeros=("a", "b", "c", "f"),
        derived=(("d", "-e"), ("S", "1")),
        samples=({"e": "1", "T": "1/2", "U": "3/4"},)),
    "6.2": CenterCondition(
        "6.2", ("a", "b", "c+f", "S-1", "8*c+T**2-U**2", "4*(e-d)-T**2-U**2",
                "2*(e+d)+T*U"),
        zeros=("a", "b"),
        derived=(("S", "1"), ("c", "(U**2-T**2)/8"), ("f", "-c"),
                 ("e", "(T**2+U**2)/8 - T*U/4"), ("d", "-T*U/2 - e")),
        samples=({"U": "1", "T": "1"},)),
    "6.3": CenterCondition(
        "6.3", ("d+e", "c", "f", "S-1", "a", "b"),
        zeros=("c", "f", "a", "b"),
        derived=(("d", "-e"), ("S", "1")),
        samples=({"e": "-2", "T": "1/2", "U": "3/4"},)),
    "6.4": CenterCondition(
        "6.4", ("d+e", "c", "f", "S-1", "T-2*a", "U-2*b"),
        zeros=("c", "f"),
        derived=(("d", "-e"), ("S", "1"), ("T", "2*a"), ("U", "2*b")),
        samples=({"a": "1", "b": "5/2", "e": "-2"},)),
    "6.5": CenterCondition(
        "6.5", ("d", "e", "c", "f", "S-1"),
        zeros=("d", "e", "c", "f"),
        derived=(("S", "1"),),
        samples=({"a": "1", "b": "5/2", "T": "3/8", "U": "-4"},)),
    "6.6": CenterCondition(
        "6.6", ("S",), zeros=("S",),
        samples=({"a": "1", "b": "2", "c": "3", "d": "-1/2", "e": "5/2",
                  "f": "2/3", "T": "-1", "U": "2"},)),
}

CATALOG = {
    "rossler": CatalogEntry(
        "rossler", ("c",), _build_rossler,
        conditions={
            # the plane z = 0 is invariant for every c, so every instance is a center
            "center": CenterCondition("center", (), samples=({"c": "-1"}, {"c": "2"},
                                                             {"c": "1/2"})),
        },
    ),
    "lorenz": CatalogEntry(
        "lorenz", ("a", "b", "d"), _build_lorenz,
        conditions={
            "bautin": CenterCondition(
                "bautin", ("d+2*a",), derived=(("d", "-2*a"),),
                samples=({"a": "-1", "b": "5"}, {"a": "-2", "b": "10"},
                         {"a": "-4", "b": "13"})),
        },
    ),
    "moonrand": CatalogEntry(
        "moonrand", ("mu", "b", "c", "a"), _build_moonrand, defaults={"a": 0},
        conditions={
            "bautin": CenterCondition(
                "bautin", ("a", "2*c-mu*b"), zeros=("a",),
                derived=(("c", "mu*b/2"),),
                samples=({"mu": "1", "b": "2"}, {"mu": "2", "b": "3"},
                         {"mu": "1/2", "b": "-4"})),
        },
    ),
    "jerk": CatalogEntry(
        "jerk", ("a1", "a2", "a3", "a4", "a5", "a6"), _build_jerk,
        conditions=_JERK_CONDITIONS,
    ),
    "ginevalls": CatalogEntry(
        "ginevalls", ("a1", "a2", "a3", "a4", "a5", "a6", "c1", "c2", "c3"),
        _build_ginevalls, conditions=_GV_CONDITIONS,
    ),
    "emrs": CatalogEntry(
        "emrs", ("a", "b", "c", "d", "e", "f", "S", "T", "U"), _build_emrs,
        conditions=_EMRS_CONDITIONS,
    ),
}

# deterministic pool used to complete missing samples for property tests
_SAMPLE_POOL = ("1/2", "-1", "2/3", "3", "-1/4", "5/2", "-3/2", "1/5", "7/4", "-2")


def condition_samples(entry_name, label, count=3):
    """At least `count` admissible free-parameter samples, paper's first."""
    entry = CATALOG[entry_name]
    cond = entry.conditions[label]
    samples = [dict(s) for s in cond.samples]
    free = cond.free_names(entry.family)
    pool = _SAMPLE_POOL
    offset = 0
    while len(samples) < count and offset < 40:
        candidate = {
            name: pool[(offset + i * 3) % len(pool)] for i, name in enumerate(free)
        }
        offset += 1
        if candidate in samples:
            continue
        try:
            catalog_instantiate(entry_name, candidate, condition=label)
        except DomainError:
            continue
        samples.append(candidate)
    if len(samples) < count:
        raise DomainError(f"could not find {count} admissible samples for "
                          f"{entry_name}/{label}", code="inadmissible-parameters")
    return samples[:count]


def catalog_entry(name):
    try:
        return CATALOG[name]
    except KeyError:
        raise DomainError(f"unknown catalog system {name!r}", code="unknown-system") from None


def catalog_instantiate(name, params=None, condition=None):
    """Build the named system at exact rational parameters.

    With `condition`, `params` assigns only the condition's free parameters;
    the dependent ones are derived and the constraint polynomials are checked
    exactly before building.
    """
    entry = catalog_entry(name)
    if condition is not None:
        if condition not in entry.conditions:
            raise DomainError(
                f"system {name} has no center condition {condition!r}",
                code="unknown-condition",
            )
        cond = entry.conditions[condition]
        values = cond.resolve(entry.family, params or {})
        entry.check_condition(condition, values)
    else:
        values = entry.full_assignment(params)
    return entry.builder(values)
