"""Systems in canonical Hopf form and their JSON file format.

A HopfSystem stores

    x' = -y      + P(x, y, z)
    y' =  x      + Q(x, y, z)
    z' = -lambda*z + R(x, y, z)

with P, Q, R free of constant and linear terms.  The canonical linear part is
implicit: it never appears in the stored term maps or in the file format.
Coefficients are jets over the perturbation-parameter roster; an unperturbed
system has jet degree 0 and an empty roster.
"""

from __future__ import annotations

import json
from dataclasses import dataclass

from .errors import DomainError
from .jet import EMPTY_ROSTER, Jet
from .poly import XYZ, Roster, SparsePoly, grevlex_key
from .rational import ZERO, format_rational, mpq, parse_rational

QUADRATIC_MONOMIALS = ((0, 0, 2), (0, 1, 1), (0, 2, 0), (1, 0, 1), (1, 1, 0), (2, 0, 0))


def perturbation_names(letter):
    return tuple(f"{letter}{j}{k}{l}" for (j, k, l) in QUADRATIC_MONOMIALS)


# Roster order is ascending by name within each letter (a002, a011, ..., c200),
# matching the order in which pivot parameters are reported.
FULL_PERTURBATION = perturbation_names("a") + perturbation_names("b") + perturbation_names("c")


@dataclass(frozen=True)
class HopfSystem:
    lambda_: object  # rational, nonzero
    p_rhs: SparsePoly  # coefficients are Jets over `params`
    q_rhs: SparsePoly
    r_rhs: SparsePoly
    params: Roster
    jet_degree: int

    def __post_init__(self):
        if not self.lambda_:
            raise DomainError("lambda must be nonzero", code="invalid-lambda")
        for label, poly in (("dx", self.p_rhs), ("dy", self.q_rhs), ("dz", self.r_rhs)):
            if poly.roster != XYZ:
                raise DomainError(f"{label} must be a polynomial in (x, y, z)",
                                  code="roster-mismatch")
            for mono, coeff in poly.terms.items():
                if sum(mono) < 2:
                    raise DomainError(
                        f"{label} carries a term of degree {sum(mono)}: "
                        "the canonical linear part is implicit and P, Q, R must "
                        "have no constant or linear terms",
                        code="canonical-form-violation",
                    )
                if not isinstance(coeff, Jet):
                    raise DomainError(f"{label} coefficients must be jets", code="bad-coefficient")
                if coeff.degree != self.jet_degree or coeff.roster != self.params:
                    raise DomainError(
                        f"{label} coefficient jet disagrees with system roster/degree",
                        code="jet-degree-mismatch",
                    )

    # -- convenience ---------------------------------------------------------

    @property
    def equations(self):
        return {"dx": self.p_rhs, "dy": self.q_rhs, "dz": self.r_rhs}

    def is_perturbed(self):
        return len(self.params) > 0

    def max_nonlinear_degree(self):
        return max(2, self.p_rhs.degree(), self.q_rhs.degree(), self.r_rhs.degree())

    def evaluate_parameters(self, assignment):
        """Pin every parameter to a rational; returns a jet-degree-0 system."""
        missing = [n for n in self.params.names if n not in assignment]
        if missing:
            raise DomainError(f"missing parameter values for {missing}", code="missing-parameter")

        def pin(poly):
            out = {}
            for mono, jet in poly.terms.items():
                v = jet.evaluate(assignment)
                if v:
                    out[mono] = Jet.constant(EMPTY_ROSTER, 0, v)
            return SparsePoly(XYZ, out, _normalized=True)

        return HopfSystem(self.lambda_, pin(self.p_rhs), pin(self.q_rhs), pin(self.r_rhs),
                          EMPTY_ROSTER, 0)


def system_from_rationals(lambda_, p_terms, q_terms, r_terms):
    """Unperturbed system from {(j,k,l): rational} term maps."""

    def lift(terms):
        out = {}
        for mono, value in terms.items():
            v = mpq(value)
            if v:
                out[tuple(mono)] = Jet.constant(EMPTY_ROSTER, 0, v)
        return SparsePoly(XYZ, out, _normalized=True)

    return HopfSystem(mpq(lambda_), lift(p_terms), lift(q_terms), lift(r_terms), EMPTY_ROSTER, 0)


def apply_quadratic_perturbation(system, degree, pins=()):
    """Add the full quadratic perturbation as degree-`degree` jets.

    Every quadratic monomial x^j y^k z^l gains an independent parameter in
    each equation: a_jkl in dx, b_jkl in dy, c_jkl in dz (18 in total).
    Parameters named in `pins` are held at zero and never enter the roster.
    """
    if system.is_perturbed() or system.jet_degree != 0:
        raise DomainError("system is already perturbed", code="already-perturbed")
    if degree < 1:
        raise DomainError("perturbation needs jet degree >= 1", code="bad-jet-degree")
    pins = set(pins)
    unknown = pins.difference(FULL_PERTURBATION)
    if unknown:
        raise DomainError(f"unknown pinned parameters {sorted(unknown)}",
                          code="unknown-parameter")
    roster = Roster(tuple(n for n in FULL_PERTURBATION if n not in pins))

    def perturb(poly, letter):
        out = {}
        for mono, jet in poly.terms.items():
            out[mono] = Jet.constant(roster, degree, jet.constant_term())
        for (j, k, l) in QUADRATIC_MONOMIALS:
            name = f"{letter}{j}{k}{l}"
            if name in pins:
                continue
            mono = (j, k, l)
            term = Jet.variable(roster, degree, name)
            out[mono] = out[mono] + term if mono in out else term
        return SparsePoly(XYZ, {m: c for m, c in out.items() if c}, _normalized=True)

    return HopfSystem(
        system.lambda_,
        perturb(system.p_rhs, "a"),
        perturb(system.q_rhs, "b"),
        perturb(system.r_rhs, "c"),
        roster,
        degree,
    )


# -- file format -------------------------------------------------------------


def _poly_to_json(poly):
    items = sorted(poly.terms.items(), key=lambda kv: grevlex_key(kv[0]), reverse=True)
    return [{"coeff": jet.to_coeff_map(), "mono": list(mono)} for mono, jet in items]


def system_to_dict(system):
    return {
        "lambda": format_rational(system.lambda_),
        "jet_degree": system.jet_degree,
        "parameters": list(system.params.names),
        "equations": {
            "dx": _poly_to_json(system.p_rhs),
            "dy": _poly_to_json(system.q_rhs),
            "dz": _poly_to_json(system.r_rhs),
        },
    }


def serialize_system(system):
    return json.dumps(system_to_dict(system), indent=2) + "\n"


def system_from_dict(data):
    try:
        lam_text = data["lambda"]
        degree = data["jet_degree"]
        names = data["parameters"]
        eqs = data["equations"]
    except (KeyError, TypeError):
        raise DomainError("system file missing required fields", code="format-error") from None
    lam = parse_rational(lam_text)
    if not lam:
        raise DomainError("lambda must be nonzero", code="invalid-lambda")
    if not isinstance(degree, int) or degree < 0:
        raise DomainError("jet_degree must be a nonnegative integer", code="format-error")
    roster = Roster(tuple(names))

    def read_poly(items, label):
        terms = {}
        for item in items:
            try:
                mono = tuple(item["mono"])
                cmap = item["coeff"]
            except (KeyError, TypeError):
                raise DomainError(f"malformed term in {label}", code="format-error") from None
            if len(mono) != 3 or any((not isinstance(e, int)) or e < 0 for e in mono):
                raise DomainError(f"bad monomial {mono} in {label}", code="format-error")
            jet = Jet.from_coeff_map(roster, degree, cmap)
            if mono in terms:
                terms[mono] = terms[mono] + jet
            else:
                terms[mono] = jet
        return SparsePoly(XYZ, {m: j for m, j in terms.items() if j}, _normalized=True)

    return HopfSystem(
        lam,
        read_poly(eqs.get("dx", ()), "dx"),
        read_poly(eqs.get("dy", ()), "dy"),
        read_poly(eqs.get("dz", ()), "dz"),
        roster,
        degree,
    )


def parse_system(text):
    try:
        data = json.loads(text)
    except json.JSONDecodeError as exc:
        raise DomainError(f"invalid JSON: {exc}", code="format-error") from None
    return system_from_dict(data)
