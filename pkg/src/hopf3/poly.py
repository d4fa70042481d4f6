"""Sparse multivariate polynomials over exact coefficient rings.

A polynomial is a mapping {exponent tuple -> coefficient} over a declared
variable roster.  Coefficients are duck-typed (rationals, GaussianRationals,
or jets): they only need +, -, *, unary -, truthiness and ==.  No zero
coefficient is ever stored, so equality is plain term-map equality.

Canonical term order is graded reverse-lexicographic on the roster, largest
term first; every iteration and serialization follows it.
"""

from __future__ import annotations

from .errors import DomainError
from .rational import ONE, ZERO, format_rational, mpq, parse_rational


class Roster:
    """Ordered variable list with name->index lookup. Immutable."""

    __slots__ = ("names", "index")

    def __init__(self, names):
        self.names = tuple(names)
        if len(set(self.names)) != len(self.names):
            raise DomainError(f"duplicate variable in roster {self.names}", code="roster-duplicate")
        self.index = {n: i for i, n in enumerate(self.names)}

    def __len__(self):
        return len(self.names)

    def __eq__(self, other):
        return isinstance(other, Roster) and self.names == other.names

    def __hash__(self):
        return hash(self.names)

    def __repr__(self):
        return f"Roster{self.names}"

    def zero_mono(self):
        return (0,) * len(self.names)

    def unit_mono(self, name):
        mono = [0] * len(self.names)
        mono[self.index[name]] = 1
        return tuple(mono)


XYZ = Roster(("x", "y", "z"))
UVZ = Roster(("u", "v", "z"))


def grevlex_key(mono):
    """Sort key: ascending under graded reverse-lexicographic order.

    a > b iff deg a > deg b, or degrees tie and the rightmost nonzero entry
    of a-b is negative.
    """
    return (sum(mono), tuple(-e for e in reversed(mono)))


def _same_roster(a, b):
    if a.roster is not b.roster and a.roster != b.roster:
        raise DomainError(
            f"variable roster mismatch: {a.roster.names} vs {b.roster.names}",
            code="roster-mismatch",
        )


class SparsePoly:
    """Sparse polynomial; terms map exponent tuples to nonzero coefficients."""

    __slots__ = ("roster", "terms")

    def __init__(self, roster, terms=None, _normalized=False):
        self.roster = roster
        if terms is None:
            self.terms = {}
        elif _normalized:
            self.terms = terms
        else:
            n = len(roster)
            clean = {}
            for mono, coeff in terms.items():
                mono = tuple(mono)
                if len(mono) != n or any(e < 0 for e in mono):
                    raise DomainError(f"bad exponent tuple {mono}", code="bad-monomial")
                if coeff:
                    clean[mono] = clean[mono] + coeff if mono in clean else coeff
            self.terms = {m: c for m, c in clean.items() if c}

    # -- constructors -------------------------------------------------------

    @classmethod
    def zero(cls, roster):
        return cls(roster, {}, _normalized=True)

    @classmethod
    def constant(cls, roster, coeff):
        if not coeff:
            return cls.zero(roster)
        return cls(roster, {roster.zero_mono(): coeff}, _normalized=True)

    @classmethod
    def variable(cls, roster, name, coeff=ONE):
        return cls(roster, {roster.unit_mono(name): coeff}, _normalized=True)

    @classmethod
    def from_name_terms(cls, roster, items):
        """Build from {(("x", 2), ("y", 1)): coeff}-style or {name_dict: coeff}."""
        terms = {}
        for spec, coeff in items.items():
            mono = [0] * len(roster)
            for name, exp in (spec.items() if isinstance(spec, dict) else spec):
                mono[roster.index[name]] += exp
            terms[tuple(mono)] = coeff
        return cls(roster, terms)

    # -- ring operations ----------------------------------------------------

    def __bool__(self):
        return bool(self.terms)

    def __eq__(self, other):
        if not isinstance(other, SparsePoly):
            return NotImplemented
        return self.roster == other.roster and self.terms == other.terms

    def __hash__(self):
        return hash((self.roster, frozenset(self.terms.items())))

    def _coerce(self, other):
        """Lift a bare int/rational to a constant polynomial."""
        if isinstance(other, SparsePoly):
            return other
        if isinstance(other, (int, type(ZERO))):
            return SparsePoly.constant(self.roster, mpq(other))
        return None

    def __add__(self, other):
        other = self._coerce(other)
        if other is None:
            return NotImplemented
        _same_roster(self, other)
        out = dict(self.terms)
        for mono, coeff in other.terms.items():
            cur = out.get(mono)
            if cur is None:
                out[mono] = coeff
            else:
                s = cur + coeff
                if s:
                    out[mono] = s
                else:
                    del out[mono]
        return SparsePoly(self.roster, out, _normalized=True)

    def __neg__(self):
        return SparsePoly(self.roster, {m: -c for m, c in self.terms.items()}, _normalized=True)

    def __radd__(self, other):
        return self.__add__(other)

    def __sub__(self, other):
        other = self._coerce(other)
        if other is None:
            return NotImplemented
        return self + (-other)

    def __rsub__(self, other):
        other = self._coerce(other)
        if other is None:
            return NotImplemented
        return other + (-self)

    def __mul__(self, other):
        if not isinstance(other, SparsePoly):
            if isinstance(other, (int, type(ZERO))):
                return self.scale(mpq(other))
            return NotImplemented
        _same_roster(self, other)
        out = {}
        a, b = self.terms, other.terms
        if len(a) > len(b):
            a, b = b, a
        for m1, c1 in a.items():
            for m2, c2 in b.items():
                mono = tuple(e1 + e2 for e1, e2 in zip(m1, m2))
                prod = c1 * c2
                cur = out.get(mono)
                if cur is None:
                    out[mono] = prod
                else:
                    s = cur + prod
                    if s:
                        out[mono] = s
                    else:
                        del out[mono]
        return SparsePoly(self.roster, out, _normalized=True)

    def __rmul__(self, other):
        if isinstance(other, (int, type(ZERO))):
            return self.scale(mpq(other))
        return NotImplemented

    def __pow__(self, n):
        if not isinstance(n, int) or n < 0:
            raise DomainError("polynomial power needs a nonnegative integer", code="bad-power")
        result = SparsePoly.constant(self.roster, ONE)
        base = self
        while n:
            if n & 1:
                result = result * base
            base = base * base if n > 1 else base
            n >>= 1
        return result

    def scale(self, q):
        """Multiply every coefficient by a scalar of the coefficient ring."""
        if not q:
            return SparsePoly.zero(self.roster)
        out = {}
        for mono, coeff in self.terms.items():
            c = coeff * q
            if c:
                out[mono] = c
        return SparsePoly(self.roster, out, _normalized=True)

    def map_coefficients(self, fn):
        out = {}
        for mono, coeff in self.terms.items():
            c = fn(coeff)
            if c:
                out[mono] = c
        return SparsePoly(self.roster, out, _normalized=True)

    # -- calculus and structure ---------------------------------------------

    def diff(self, name):
        i = self.roster.index[name]
        out = {}
        for mono, coeff in self.terms.items():
            e = mono[i]
            if e:
                m = list(mono)
                m[i] = e - 1
                out[tuple(m)] = coeff * e
        return SparsePoly(self.roster, out, _normalized=True)

    def degree(self):
        """Total degree; -1 for the zero polynomial."""
        if not self.terms:
            return -1
        return max(sum(m) for m in self.terms)

    def lowest_degree(self):
        if not self.terms:
            return -1
        return min(sum(m) for m in self.terms)

    def homogeneous_part(self, d):
        return SparsePoly(
            self.roster, {m: c for m, c in self.terms.items() if sum(m) == d}, _normalized=True
        )

    def is_homogeneous(self):
        degs = {sum(m) for m in self.terms}
        return len(degs) <= 1

    def coefficient(self, spec):
        """Coefficient of a monomial given as {name: exp} (or exponent tuple)."""
        if isinstance(spec, dict):
            mono = [0] * len(self.roster)
            for name, exp in spec.items():
                mono[self.roster.index[name]] = exp
            spec = tuple(mono)
        return self.terms.get(tuple(spec), ZERO)

    def constant_term(self):
        return self.terms.get(self.roster.zero_mono(), ZERO)

    def variables_used(self):
        used = set()
        for mono in self.terms:
            for i, e in enumerate(mono):
                if e:
                    used.add(self.roster.names[i])
        return used

    def evaluate(self, assignment):
        """Exact value at a full {name: rational} assignment."""
        total = None
        point = [assignment[n] for n in self.roster.names]
        for mono, coeff in self.terms.items():
            v = coeff
            for x, e in zip(point, mono):
                for _ in range(e):
                    v = v * x
            total = v if total is None else total + v
        if total is None:
            return ZERO
        return total

    def substitute(self, images):
        """Compose with a map {name: SparsePoly}; unmapped names stay themselves.

        All image polynomials must share one roster, which becomes the result
        roster (it may equal the source roster).
        """
        target = None
        for img in images.values():
            if target is None:
                target = img.roster
            elif img.roster != target:
                raise DomainError("substitution images on mixed rosters", code="roster-mismatch")
        if target is None:
            target = self.roster
        full = {}
        for name in self.roster.names:
            if name in images:
                full[name] = images[name]
            else:
                if name not in target.index:
                    raise DomainError(
                        f"variable {name} has no image in target roster", code="missing-image"
                    )
                full[name] = SparsePoly.variable(target, name)
        cache = {(): SparsePoly.constant(target, ONE)}

        def mono_image(flat):
            # flat: tuple of roster indices with multiplicity, sorted
            got = cache.get(flat)
            if got is None:
                head = full[self.roster.names[flat[0]]]
                got = head * mono_image(flat[1:])
                cache[flat] = got
            return got

        acc = SparsePoly.zero(target)
        for mono, coeff in self.terms.items():
            flat = []
            for i, e in enumerate(mono):
                flat.extend([i] * e)
            acc = acc + mono_image(tuple(flat)).scale(coeff)
        return acc

    # -- canonical order, display, serialization ----------------------------

    def canonical_terms(self):
        """Terms in canonical order (grevlex, largest first)."""
        return sorted(self.terms.items(), key=lambda kv: grevlex_key(kv[0]), reverse=True)

    def __str__(self):
        if not self.terms:
            return "0"
        parts = []
        for mono, coeff in self.canonical_terms():
            factors = []
            for name, e in zip(self.roster.names, mono):
                if e == 1:
                    factors.append(name)
                elif e > 1:
                    factors.append(f"{name}^{e}")
            body = "*".join(factors)
            cs = format_rational(coeff) if isinstance(coeff, type(ZERO)) else str(coeff)
            parts.append(f"({cs})*{body}" if body else f"({cs})")
        return " + ".join(parts)

    def __repr__(self):
        return f"SparsePoly[{','.join(self.roster.names)}]({self})"

    def to_term_list(self, coeff_encoder=None):
        """Canonical-order [[mono..., coeff], ...] with encoded coefficients."""
        enc = coeff_encoder or format_rational
        return [{"mono": list(m), "coeff": enc(c)} for m, c in self.canonical_terms()]

    @classmethod
    def from_term_list(cls, roster, items, coeff_decoder=None):
        dec = coeff_decoder or parse_rational
        terms = {}
        for item in items:
            mono = tuple(item["mono"])
            terms[mono] = dec(item["coeff"])
        return cls(roster, terms)


def poly_arith(a, b, op):
    """Spec-surface dispatch: exact add/sub/mul with roster/ring checks."""
    if op == "add":
        return a + b
    if op == "sub":
        return a - b
    if op == "mul":
        return a * b
    raise DomainError(f"unknown polynomial operation {op!r}", code="bad-operation")
