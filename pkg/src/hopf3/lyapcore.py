"""Lyapunov constants via a formal first integral, degree by degree.

Seek H = uv + sum of higher homogeneous parts with X.H = sum_k L_{k-1} R_{2k}
in complexified coordinates u = x + iy, v = x - iy (so x^2 + y^2 = uv and the
linear part diagonalizes to u' = iu, v' = -iv, z' = -lambda z).  At each
degree m every monomial u^a v^b z^c yields one scalar equation

    (i(a-b) - lambda*c) * p_{abc} + K_{abc} = L_{m/2-1} * [mu coeff in R_m],

where K collects the already-known nonlinear contributions.  Off resonance
the divisor is nonzero and p is solved; at the resonant monomial (uv)^k we
fix p = 0 (the residue normalization) and read off L_{k-1}.

The degree-2k residue carrier R_{2k} is the monomial x^{2k} = ((u+v)/2)^{2k}.
Any polynomial with nonzero circle average spans a valid complement of the
homological image; the carrier only rescales each L_k by an exact positive
constant (x^{2k} vs (x^2+y^2)^k differ by binomial(2k,k)/4^k) and shifts the
later ones by multiples of the earlier.  x^{2k} is the convention that
reproduces the reference linear parts for the Rossler instance, and it is
what this engine pins throughout.

Exactness and reality are asserted, never assumed: every L_k must come out
with identically zero imaginary part, and the defining relation can be
replayed against the stored H coefficients (`residual_check`).

Realness of H gives the conjugation symmetry p_{bac} = conj(p_{abc}), so only
monomials with a >= b are solved; mirrors are materialized for the product
sweep.  A reachability cone prunes monomials that provably cannot influence
any remaining resonant target (c <= s and a - b <= 3s with s the degree slack;
both bounds shrink by at most one resp. three per multiplication step).
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from math import comb

from .errors import DomainError, IntegrityError
from .jet import Jet
from .poly import UVZ, SparsePoly
from .rational import GaussianRational, mpq
from .sysmodel import HopfSystem


def homological_eigenvalue(a, b, c, lambda_):
    """Divisor i(a-b) - lambda*c attached to the monomial u^a v^b z^c."""
    return GaussianRational(-mpq(lambda_) * c, mpq(a - b))


def residue_carrier_coefficient(degree, a):
    """Coefficient of u^a v^(degree-a) in the carrier x^degree."""
    return mpq(comb(degree, a), 4 ** (degree // 2))


@dataclass(frozen=True)
class ComplexSystem:
    """Diagonalized system u' = iu + U, v' = -iv + V, z' = -lambda z + W."""

    lambda_: object
    u_rhs: SparsePoly
    v_rhs: SparsePoly
    z_rhs: SparsePoly

    def validate_symmetry(self):
        """v_rhs must be the (u<->v, i->-i) image of u_rhs; z_rhs self-conjugate."""
        for poly, other, label in (
            (self.u_rhs, self.v_rhs, "v_rhs"),
            (self.z_rhs, self.z_rhs, "z_rhs"),
        ):
            mirrored = {}
            for (a, b, c), g in poly.terms.items():
                mirrored[(b, a, c)] = g.conjugate()
            if mirrored != other.terms:
                raise IntegrityError(f"conjugation symmetry broken in {label}",
                                     code="conjugation-symmetry")
        return True


def complexify(system):
    """Substitute x = (u+v)/2, y = (u-v)/(2i) into the canonical system."""
    roster, degree = system.params, system.jet_degree

    def gr(re, im=0):
        return GaussianRational(Jet.constant(roster, degree, re),
                                Jet.constant(roster, degree, im))

    half = mpq(1, 2)
    x_img = SparsePoly(UVZ, {(1, 0, 0): gr(half), (0, 1, 0): gr(half)})
    y_img = SparsePoly(UVZ, {(1, 0, 0): gr(0, -half), (0, 1, 0): gr(0, half)})
    z_img = SparsePoly(UVZ, {(0, 0, 1): gr(1)})

    def lift(poly):
        zero = Jet.zero(roster, degree)
        out = SparsePoly.zero(UVZ)
        for mono, jet in poly.terms.items():
            term = SparsePoly(UVZ, {(0, 0, 0): GaussianRational(jet, zero)})
            for img, e in zip((x_img, y_img, z_img), mono):
                for _ in range(e):
                    term = term * img
            out = out + term
        return out

    pc = lift(system.p_rhs)
    qc = lift(system.q_rhs)

    def times_i(poly, sign):
        return poly.map_coefficients(
            lambda g: GaussianRational(-g.im, g.re) if sign > 0
            else GaussianRational(g.im, -g.re)
        )

    u_rhs = pc + times_i(qc, +1)
    v_rhs = pc + times_i(qc, -1)
    z_rhs = lift(system.r_rhs)
    cs = ComplexSystem(mpq(system.lambda_), u_rhs, v_rhs, z_rhs)
    cs.validate_symmetry()
    return cs


@dataclass
class LyapunovSequence:
    """L_1..L_N as jets, plus the solved H coefficients for the residual check."""

    constants: list  # Jets over `params`
    lambda_: object
    params: object  # parameter Roster
    jet_degree: int
    count: int
    h_coefficients: dict  # degree -> {(a,b,c) with a >= b: GaussianRational of jets}
    pruned: bool
    max_field_degree: int

    def first_nonzero(self):
        """(k, L_k) for the first nonvanishing constant, or None."""
        for k, jet in enumerate(self.constants, start=1):
            if jet:
                return k, jet
        return None

    def to_dict(self):
        return {
            "constants": [
                {"k": k, "jet": jet.to_coeff_map()}
                for k, jet in enumerate(self.constants, start=1)
            ]
        }

    def to_json(self):
        return json.dumps(self.to_dict(), indent=2) + "\n"


class _Kernel:
    """Shared degree-by-degree sweep used by the solver and the replayer."""

    def __init__(self, system, count, prune):
        self.system = system
        self.count = count
        self.prune = prune
        self.max_degree = 2 * count + 2
        self.cs = complexify(system)
        self.lam = mpq(system.lambda_)
        roster, degree = system.params, system.jet_degree
        self.zero_jet = Jet.zero(roster, degree)
        self.gr_zero = GaussianRational(self.zero_jet, self.zero_jet)
        self.gr_one = GaussianRational(Jet.constant(roster, degree, 1), self.zero_jet)
        self.field = []
        for poly, slot in ((self.cs.u_rhs, 0), (self.cs.v_rhs, 1), (self.cs.z_rhs, 2)):
            terms = []
            for mono, g in sorted(poly.terms.items()):
                if g:
                    terms.append((mono, sum(mono), g))
            self.field.append(terms)
        self.buckets = {}

    def in_support(self, a, b, c, mdeg):
        slack = self.max_degree - mdeg
        if slack < 0 or b > a:
            return False
        if not self.prune:
            return True
        return c <= slack and (a - b) <= 3 * slack

    def accumulate(self, p, a, b, c, mdeg):
        """Scatter products of the field with p * grad(u^a v^b z^c)."""
        parts = []
        if a:
            parts.append((p.scale(a), a - 1, b, c, self.field[0]))
        if b:
            parts.append((p.scale(b), a, b - 1, c, self.field[1]))
        if c:
            parts.append((p.scale(c), a, b, c - 1, self.field[2]))
        buckets = self.buckets
        in_support = self.in_support
        for coeff, ba, bb, bc, terms in parts:
            for (j, k, l), fdeg, fcoeff in terms:
                tdeg = mdeg + fdeg - 1
                ta, tb, tc = ba + j, bb + k, bc + l
                if not in_support(ta, tb, tc, tdeg):
                    continue
                bucket = buckets.get(tdeg)
                if bucket is None:
                    bucket = buckets[tdeg] = {}
                key = (ta, tb, tc)
                prod = coeff * fcoeff
                cur = bucket.get(key)
                bucket[key] = prod if cur is None else cur + prod

    def seed(self):
        self.accumulate(self.gr_one, 1, 1, 0, 2)

    def scatter(self, solved, m):
        for (a, b, c), p in solved.items():
            self.accumulate(p, a, b, c, m)
            if a != b:
                self.accumulate(p.conjugate(), b, a, c, m)


def lyapunov_constants(system, count, prune=True, resonance="x2k"):
    """Compute L_1..L_count for a canonical system, exactly.

    With prune=True (the default) monomials outside the reachability cone of
    the remaining resonant targets are dropped; the constants are identical,
    only the stored H support shrinks.  Use prune=False when the full H
    through degree 2*count+2 is wanted.

    `resonance` picks the H coefficient left free at each resonant degree 2k:
      "x2k": the real x^{2k} coefficient of H_{2k} is set to zero (so
             H(x, 0, 0) = x^2 identically); the pinned convention.
      "uv":  the complex (uv)^k coefficient is set to zero instead.
    The choice shifts L_k by exact multiples of earlier constants only; it is
    invisible wherever those vanish.
    """
    if count < 1:
        raise DomainError("need count >= 1 Lyapunov constants", code="bad-count")
    if not isinstance(system, HopfSystem):
        raise DomainError("lyapunov_constants needs a HopfSystem", code="bad-system")
    if resonance not in ("x2k", "uv"):
        raise DomainError(f"unknown resonance normalization {resonance!r}",
                          code="bad-normalization")
    ker = _Kernel(system, count, prune)
    ker.seed()
    constants = []
    h_coeffs = {}
    for m in range(3, ker.max_degree + 1):
        bucket = ker.buckets.pop(m, {})
        solved = {}
        residue = None  # L_{m/2-1} jet, on even degrees
        if m % 2 == 0:
            k = m // 2
            res = bucket.get((k, k, 0), ker.gr_zero)
            if res.im:
                raise IntegrityError(f"imaginary residue at L_{k - 1}",
                                     code="reality-violation")
            scale = 1 / residue_carrier_coefficient(m, k)
            residue = res.re.scale(scale)
            constants.append(residue)
        for key in sorted(bucket):
            a, b, c = key
            if a == b and c == 0:
                continue  # the resonant monomial is normalized separately
            k_val = bucket[key]
            if a == b and k_val.im:
                raise IntegrityError(
                    f"non-real contribution at self-conjugate monomial {key}",
                    code="reality-violation",
                )
            rhs = -k_val
            if residue is not None and c == 0 and residue:
                carrier = residue_carrier_coefficient(m, a)
                rhs = rhs + GaussianRational(residue.scale(carrier), ker.zero_jet)
            eta = homological_eigenvalue(a, b, c, ker.lam)
            p = rhs / eta
            if p:
                solved[key] = p
        # carrier support may reach monomials with zero K
        if residue is not None and residue:
            for a in range(m, m // 2, -1):
                key = (a, m - a, 0)
                if key in bucket or not ker.in_support(a, m - a, 0, m):
                    continue
                carrier = residue_carrier_coefficient(m, a)
                eta = homological_eigenvalue(a, m - a, 0, ker.lam)
                p = GaussianRational(residue.scale(carrier), ker.zero_jet) / eta
                if p:
                    solved[key] = p
        if m % 2 == 0 and resonance == "x2k":
            # zero the real x^m coefficient of H_m: x^m picks every (a,b,0)
            # complex coefficient with weight 1, and mirrors pair to 2*Re
            k = m // 2
            acc = ker.zero_jet
            for a in range(m, k, -1):
                p = solved.get((a, m - a, 0))
                if p is not None:
                    acc = acc + p.re + p.re
            if acc:
                solved[(k, k, 0)] = GaussianRational(-acc, ker.zero_jet)
        h_coeffs[m] = solved
        ker.scatter(solved, m)
    return LyapunovSequence(
        constants=constants,
        lambda_=ker.lam,
        params=system.params,
        jet_degree=system.jet_degree,
        count=count,
        h_coefficients=h_coeffs,
        pruned=prune,
        max_field_degree=system.max_nonlinear_degree(),
    )


def residual_check(system, seq):
    """Replay X.H - sum L_{k-1} x^{2k} over the stored support; must vanish.

    Recomputes every K contribution from the stored H coefficients and the
    system itself, then asserts eta*p + K == L_{k-1}*carrier on the stored
    support.  Raises IntegrityError naming the offending monomial; returns
    True on success.
    """
    ker = _Kernel(system, seq.count, seq.pruned)
    ker.seed()
    for m in range(3, ker.max_degree + 1):
        bucket = ker.buckets.pop(m, {})
        solved = seq.h_coefficients.get(m, {})
        residue = None
        if m % 2 == 0:
            k = m // 2
            expected = seq.constants[k - 2]  # degree 2k carries L_{k-1}
            k_val = bucket.get((k, k, 0), ker.gr_zero)
            residue = expected
            target = expected.scale(residue_carrier_coefficient(m, k))
            if k_val.im or k_val.re != target:
                raise IntegrityError(
                    f"residual failure at (uv)^{k}: XH coefficient does not match "
                    f"L_{k - 1}",
                    code="residual-failure",
                )
        keys = set(bucket) | set(solved)
        for key in sorted(keys):
            a, b, c = key
            if a == b and c == 0:
                continue
            k_val = bucket.get(key, ker.gr_zero)
            rhs = ker.gr_zero
            if residue is not None and c == 0 and residue:
                rhs = GaussianRational(
                    residue.scale(residue_carrier_coefficient(m, a)), ker.zero_jet
                )
            eta = homological_eigenvalue(a, b, c, ker.lam)
            p = solved.get(key, ker.gr_zero)
            if eta * p + k_val != rhs:
                raise IntegrityError(
                    f"nonzero residual at monomial u^{a} v^{b} z^{c} (degree {m})",
                    code="residual-failure",
                )
        ker.scatter(solved, m)
    return True
