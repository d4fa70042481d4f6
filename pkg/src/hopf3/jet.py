"""Truncated jets: polynomials in perturbation parameters cut at total degree D.

A jet is the coefficient ring of perturbed systems.  Terms are stored as
{sorted tuple of parameter indices -> rational}: the constant is keyed by (),
a parameter p by (i,), p*q by (i, j), p^2 by (i, i).  Keys stay short because
D is small (0..3 in practice), which keeps hashing and merging cheap; the key
length IS the term degree.

Ring operations re-truncate at D.  Jets of unequal truncation degree or
roster never combine implicitly; ``truncate`` is the only way down.
"""

from __future__ import annotations

from .errors import DomainError
from .poly import Roster, SparsePoly, grevlex_key
from .rational import ONE, ZERO, format_rational, mpq, parse_rational

EMPTY_ROSTER = Roster(())


def mul_terms(a, b, degree):
    """Truncated convolution of two {index-tuple: rational} term maps."""
    if len(a) > len(b):
        a, b = b, a
    out = {}
    for k1, c1 in a.items():
        d1 = len(k1)
        for k2, c2 in b.items():
            if d1 + len(k2) > degree:
                continue
            key = tuple(sorted(k1 + k2)) if k1 and k2 else (k1 or k2)
            prod = c1 * c2
            cur = out.get(key)
            if cur is None:
                out[key] = prod
            else:
                s = cur + prod
                if s:
                    out[key] = s
                else:
                    del out[key]
    return out


def add_terms(a, b):
    out = dict(a)
    for key, coeff in b.items():
        cur = out.get(key)
        if cur is None:
            out[key] = coeff
        else:
            s = cur + coeff
            if s:
                out[key] = s
            else:
                del out[key]
    return out


class Jet:
    """Polynomial in the parameter roster truncated at total degree D."""

    __slots__ = ("roster", "degree", "terms")

    def __init__(self, roster, degree, terms=None, _normalized=False):
        if degree < 0:
            raise DomainError("jet truncation degree must be >= 0", code="bad-jet-degree")
        self.roster = roster
        self.degree = degree
        if terms is None:
            self.terms = {}
        elif _normalized:
            self.terms = terms
        else:
            n = len(roster)
            clean = {}
            for key, coeff in terms.items():
                key = tuple(sorted(key))
                if len(key) > degree:
                    raise DomainError(
                        f"jet term of degree {len(key)} exceeds truncation {degree}",
                        code="jet-term-too-deep",
                    )
                if any(i < 0 or i >= n for i in key):
                    raise DomainError(f"bad parameter index in {key}", code="bad-monomial")
                if coeff:
                    clean[key] = clean[key] + coeff if key in clean else coeff
            self.terms = {k: c for k, c in clean.items() if c}

    # -- constructors -------------------------------------------------------

    @classmethod
    def zero(cls, roster, degree):
        return cls(roster, degree, {}, _normalized=True)

    @classmethod
    def constant(cls, roster, degree, value):
        value = mpq(value)
        if not value:
            return cls.zero(roster, degree)
        return cls(roster, degree, {(): value}, _normalized=True)

    @classmethod
    def variable(cls, roster, degree, name, coeff=ONE):
        if degree < 1:
            raise DomainError("degree-0 jet cannot carry a parameter", code="jet-term-too-deep")
        return cls(roster, degree, {(roster.index[name],): mpq(coeff)}, _normalized=True)

    # -- ring operations ----------------------------------------------------

    def _check(self, other):
        if self.degree != other.degree:
            raise DomainError(
                f"jets of unequal truncation degree {self.degree} vs {other.degree}",
                code="jet-degree-mismatch",
            )
        if self.roster is not other.roster and self.roster != other.roster:
            raise DomainError("jet parameter roster mismatch", code="roster-mismatch")

    def __bool__(self):
        return bool(self.terms)

    def __eq__(self, other):
        if not isinstance(other, Jet):
            return NotImplemented
        return (
            self.degree == other.degree
            and self.roster == other.roster
            and self.terms == other.terms
        )

    def __hash__(self):
        return hash((self.degree, self.roster, frozenset(self.terms.items())))

    def __add__(self, other):
        if not isinstance(other, Jet):
            return NotImplemented
        self._check(other)
        return Jet(self.roster, self.degree, add_terms(self.terms, other.terms), _normalized=True)

    def __neg__(self):
        return Jet(
            self.roster, self.degree, {k: -c for k, c in self.terms.items()}, _normalized=True
        )

    def __sub__(self, other):
        if not isinstance(other, Jet):
            return NotImplemented
        return self + (-other)

    def __mul__(self, other):
        if isinstance(other, Jet):
            self._check(other)
            return Jet(
                self.roster,
                self.degree,
                mul_terms(self.terms, other.terms, self.degree),
                _normalized=True,
            )
        return self.scale(other)

    def __rmul__(self, other):
        return self.scale(other)

    def scale(self, q):
        if not q:
            return Jet.zero(self.roster, self.degree)
        return Jet(
            self.roster, self.degree, {k: c * q for k, c in self.terms.items()}, _normalized=True
        )

    # -- truncation and structure --------------------------------------------

    def truncate(self, d):
        """Drop all terms of total degree > d; the result has degree d."""
        if d > self.degree:
            raise DomainError(
                f"cannot truncate a degree-{self.degree} jet at {d}", code="jet-truncate-up"
            )
        return Jet(
            self.roster, d, {k: c for k, c in self.terms.items() if len(k) <= d}, _normalized=True
        )

    def constant_term(self):
        return self.terms.get((), ZERO)

    def linear_coefficient(self, name):
        return self.terms.get((self.roster.index[name],), ZERO)

    def homogeneous_terms(self, d):
        return {k: c for k, c in self.terms.items() if len(k) == d}

    def lowest_degree(self):
        if not self.terms:
            return -1
        return min(len(k) for k in self.terms)

    def is_real_zero(self):
        return not self.terms

    def evaluate(self, assignment):
        """Exact value at a full {parameter: rational} assignment."""
        point = [mpq(assignment[n]) for n in self.roster.names]
        total = ZERO
        for key, coeff in self.terms.items():
            v = coeff
            for i in key:
                v = v * point[i]
            total = total + v
        return total

    def substitute(self, images, target_roster=None, target_degree=None):
        """Compose with {parameter: Jet}; unmapped parameters map to themselves.

        Used to solve parameters out (tail normalization) and for linear
        changes of parameter coordinates.  A shared image cache keyed by the
        source monomial makes repeated submonomials cheap.
        """
        target_degree = self.degree if target_degree is None else target_degree
        target = target_roster
        for img in images.values():
            if target is None:
                target = img.roster
            if img.roster != target or img.degree != target_degree:
                raise DomainError("substitution images disagree on roster/degree",
                                  code="roster-mismatch")
        if target is None:
            target = self.roster
        full = {}
        for name in self.roster.names:
            if name in images:
                full[name] = images[name]
            elif name in target.index:
                full[name] = Jet.variable(target, target_degree, name) if target_degree >= 1 \
                    else Jet.zero(target, 0)
            else:
                raise DomainError(f"parameter {name} has no image", code="missing-image")
        cache = {}

        def image_terms(key):
            if not key:
                return {(): ONE}
            got = cache.get(key)
            if got is None:
                head = full[self.roster.names[key[0]]].terms
                got = mul_terms(head, image_terms(key[1:]), target_degree)
                cache[key] = got
            return got

        acc = {}
        for key, coeff in self.terms.items():
            img = image_terms(key)
            for k2, c2 in img.items():
                prod = c2 * coeff
                cur = acc.get(k2)
                if cur is None:
                    acc[k2] = prod
                else:
                    s = cur + prod
                    if s:
                        acc[k2] = s
                    else:
                        del acc[k2]
        return Jet(target, target_degree, acc, _normalized=True)

    # -- interop and serialization --------------------------------------------

    def exponent_vector(self, key):
        vec = [0] * len(self.roster)
        for i in key:
            vec[i] += 1
        return tuple(vec)

    def to_poly(self):
        """View as a SparsePoly over the parameter roster."""
        return SparsePoly(
            self.roster,
            {self.exponent_vector(k): c for k, c in self.terms.items()},
            _normalized=True,
        )

    @classmethod
    def from_poly(cls, poly, degree):
        terms = {}
        for mono, coeff in poly.terms.items():
            key = []
            for i, e in enumerate(mono):
                key.extend([i] * e)
            if len(key) > degree:
                raise DomainError("polynomial exceeds jet truncation degree",
                                  code="jet-term-too-deep")
            terms[tuple(key)] = coeff
        return cls(poly.roster, degree, terms)

    def _mono_name(self, key):
        if not key:
            return "1"
        factors = []
        i = 0
        while i < len(key):
            j = i
            while j < len(key) and key[j] == key[i]:
                j += 1
            name = self.roster.names[key[i]]
            factors.append(name if j - i == 1 else f"{name}^{j - i}")
            i = j
        return "*".join(factors)

    def canonical_terms(self):
        return sorted(
            self.terms.items(), key=lambda kv: grevlex_key(self.exponent_vector(kv[0])),
            reverse=True,
        )

    def to_coeff_map(self):
        """{"1": "c", "a200": "c", "a200*c020": "c", "a200^2": "c"} in canonical order."""
        return {self._mono_name(k): format_rational(c) for k, c in self.canonical_terms()}

    @classmethod
    def from_coeff_map(cls, roster, degree, mapping):
        terms = {}
        for mono_name, ctext in mapping.items():
            key = []
            if mono_name.strip() != "1":
                for factor in mono_name.split("*"):
                    name, sep, exp = factor.strip().partition("^")
                    if name not in roster.index:
                        raise DomainError(f"unknown parameter {name!r}", code="unknown-parameter")
                    e = int(exp) if sep else 1
                    if e < 1:
                        raise DomainError(f"bad exponent in {factor!r}", code="bad-monomial")
                    key.extend([roster.index[name]] * e)
            terms[tuple(sorted(key))] = parse_rational(ctext)
        return cls(roster, degree, terms)

    def __str__(self):
        if not self.terms:
            return "0"
        return " + ".join(
            f"({format_rational(c)})*{self._mono_name(k)}" if k else f"({format_rational(c)})"
            for k, c in self.canonical_terms()
        )

    def __repr__(self):
        return f"Jet(D={self.degree}, {self})"


def jet_truncate(j, d):
    """Spec surface for Jet.truncate."""
    return j.truncate(d)
