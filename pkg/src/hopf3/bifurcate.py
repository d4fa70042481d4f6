"""From Lyapunov-constant jets to certified limit-cycle lower bounds.

The first-order count is the rank of the linear-part matrix.  Beyond it,
higher-order evidence comes in exactly three shapes: proportionality verdicts
between consecutive lowest forms (ruling increments out), product-of-linear-
forms factorizations, and explicit rational points with transversality
certificates.  Everything here is exact; a certificate is either verified by
substitution or it is not produced.
"""

from __future__ import annotations

from dataclasses import dataclass, field

from .errors import DomainError, IntegrityError
from .jet import Jet
from .linalg import exact_det, exact_rank, invert, solve_general, solve_square
from .poly import Roster, SparsePoly
from .rational import ONE, ZERO, format_rational, mpq, rational_sqrt
from .smallsolve import eval_at, solve_zero_dimensional

# -- linear stage ---------------------------------------------------------------


@dataclass(frozen=True)
class LinearPartData:
    """Jacobian of (L_1..L_N) with respect to the perturbation parameters."""

    matrix: tuple  # rows of rationals, one per constant
    roster: Roster
    rank: int
    pivot_cols: tuple
    pivot_rows: tuple

    @property
    def pivot_params(self):
        return tuple(self.roster.names[c] for c in self.pivot_cols)

    def free_params(self):
        pivots = set(self.pivot_cols)
        return tuple(n for i, n in enumerate(self.roster.names) if i not in pivots)

    def to_dict(self):
        return {
            "matrix": [[format_rational(x) for x in row] for row in self.matrix],
            "parameters": list(self.roster.names),
            "rank": self.rank,
            "pivot_parameters": list(self.pivot_params),
            "pivot_rows": list(self.pivot_rows),
        }


def linear_rank(seq):
    """Extract the linear-part matrix of a LyapunovSequence and its exact rank."""
    if seq.jet_degree < 1:
        raise DomainError("linear ranks need jets of degree >= 1", code="bad-jet-degree")
    roster = seq.params
    matrix = tuple(
        tuple(jet.linear_coefficient(name) for name in roster.names)
        for jet in seq.constants
    )
    rank, cols, rows = exact_rank([list(r) for r in matrix])
    # the row/column pivot sets matter, not their pairing: order rows by
    # constant index so u_i always normalizes the i-th independent constant
    return LinearPartData(matrix, roster, rank, tuple(cols), tuple(sorted(rows)))


# -- tail normalization (solve the pivot parameters out) --------------------------


@dataclass
class NormalizedTail:
    pivot_params: tuple
    free_roster: Roster
    solved_jets: dict  # pivot name -> Jet over free_roster
    tail_jets: dict  # 1-based constant index -> substituted Jet
    h_forms: list  # (k, degree, SparsePoly over free_roster) for nonzero tails

    def to_dict(self):
        return {
            "pivot_parameters": list(self.pivot_params),
            "free_parameters": list(self.free_roster.names),
            "solved": {n: j.to_coeff_map() for n, j in self.solved_jets.items()},
            "h_forms": [
                {"k": k, "degree": m, "form": form.to_term_list()}
                for k, m, form in self.h_forms
            ],
        }


def _pivot_block(lin):
    m = [
        [lin.matrix[r][c] for c in lin.pivot_cols]
        for r in lin.pivot_rows
    ]
    return m


def normalize_tail(seq, lin):
    """Solve L=0 at the pivot rows for the pivot parameters as jets in the
    free parameters (Newton iteration against the invertible linear block),
    substitute into the remaining constants, and extract the lowest
    homogeneous forms."""
    if seq.jet_degree < 2:
        raise DomainError("tail normalization needs jet degree >= 2",
                          code="bad-jet-degree")
    r = lin.rank
    if r == 0:
        free = seq.params
        tails = {k: jet for k, jet in enumerate(seq.constants, start=1)}
        return NormalizedTail((), free, {}, tails, _lowest_forms(tails, free))
    degree = seq.jet_degree
    block = _pivot_block(lin)
    pivots = lin.pivot_params
    free_names = lin.free_params()
    free = Roster(free_names)
    for k, jet in enumerate(seq.constants, start=1):
        if jet.constant_term():
            raise DomainError(
                f"L_{k} has a nonzero constant term: the unperturbed system is "
                "not a center, so the pivot parameters cannot be solved out as "
                "formal series",
                code="not-a-center",
            )
    phi = {name: Jet.zero(free, degree) for name in pivots}
    pivot_constants = [seq.constants[row] for row in lin.pivot_rows]
    for _ in range(degree):
        vals = [c.substitute(phi, target_roster=free) for c in pivot_constants]
        delta = solve_square(block, vals)
        phi = {name: phi[name] - d for name, d in zip(pivots, delta)}
    for c in pivot_constants:
        if c.substitute(phi, target_roster=free):
            raise IntegrityError(
                "pivot solve failed to annihilate the leading constants",
                code="singular-block",
            )
    tails = {}
    pivot_rows = set(lin.pivot_rows)
    for idx, jet in enumerate(seq.constants):
        if idx in pivot_rows:
            continue
        tails[idx + 1] = jet.substitute(phi, target_roster=free)
    return NormalizedTail(pivots, free, phi, tails, _lowest_forms(tails, free))


def _lowest_forms(tails, roster):
    forms = []
    for k in sorted(tails):
        jet = tails[k]
        if not jet:
            continue
        m = jet.lowest_degree()
        if m < 2:
            raise IntegrityError(
                f"tail constant L_{k} kept terms of degree {m} < 2 after the "
                "pivot solve; rank data is inconsistent",
                code="tail-low-degree",
            )
        forms.append((k, m, jet_form(jet, m, roster)))
    return forms


def jet_form(jet, degree, roster):
    """Homogeneous degree-`degree` part of a jet as a SparsePoly."""
    terms = {}
    for key, coeff in jet.homogeneous_terms(degree).items():
        terms[jet.exponent_vector(key)] = coeff
    return SparsePoly(roster, terms)


# -- linear change of parameter coordinates ---------------------------------------


@dataclass
class LinearNormalization:
    constants: list  # jets over `roster`, constant at pivot row i reads u_{i+1}+...
    roster: Roster
    u_forms: dict  # u name -> {original parameter: coefficient}
    pivot_rows: tuple

    def to_dict(self):
        return {
            "parameters": list(self.roster.names),
            "u_forms": {
                u: {p: format_rational(c) for p, c in form.items()}
                for u, form in self.u_forms.items()
            },
            "pivot_rows": list(self.pivot_rows),
        }


def linear_normalize(seq, lin):
    """Rewrite every constant in coordinates where L at pivot row i has linear
    part exactly u_{i+1}.

    The new coordinates are forced: u_i must equal the full linear form of the
    i-th pivot constant; free parameters keep their names.  Returns the
    transformed jets together with the defining forms.
    """
    r = lin.rank
    if r == 0:
        raise DomainError("rank is zero: nothing to normalize", code="rank-zero")
    degree = seq.jet_degree
    u_names = tuple(f"u{i + 1}" for i in range(r))
    free_names = lin.free_params()
    clash = set(u_names) & set(free_names)
    if clash:
        raise DomainError(f"parameter names {sorted(clash)} collide with u-coordinates",
                          code="roster-duplicate")
    new_roster = Roster(u_names + free_names)
    block = _pivot_block(lin)
    inv = invert(block)
    # pivot parameter p_j = sum_i inv[j][i] * (u_i - sum_f N[i][f] free_f)
    images = {}
    for j, pname in enumerate(lin.pivot_params):
        terms = {}
        for i in range(r):
            cf = inv[j][i]
            if cf:
                terms[(new_roster.index[u_names[i]],)] = cf
        for fname in free_names:
            col = lin.roster.index[fname]
            acc = ZERO
            for i in range(r):
                acc = acc - inv[j][i] * lin.matrix[lin.pivot_rows[i]][col]
            if acc:
                terms[(new_roster.index[fname],)] = acc
        images[pname] = Jet(new_roster, degree, terms)
    constants = [c.substitute(images, target_roster=new_roster) for c in seq.constants]
    for i, row in enumerate(lin.pivot_rows):
        got = {
            name: constants[row].linear_coefficient(name) for name in new_roster.names
        }
        expect = u_names[i]
        if got[expect] != ONE or any(v for n, v in got.items() if n != expect):
            raise IntegrityError(
                f"linear normalization failed at pivot row {row}",
                code="normalization-failure",
            )
    u_forms = {
        u_names[i]: {
            name: lin.matrix[lin.pivot_rows[i]][lin.roster.index[name]]
            for name in lin.roster.names
            if lin.matrix[lin.pivot_rows[i]][lin.roster.index[name]]
        }
        for i in range(r)
    }
    return LinearNormalization(constants, new_roster, u_forms, lin.pivot_rows)


# -- weighted gamma expansion -----------------------------------------------------


def gamma_expand(constants, roster, weights, gauge, order):
    """Coefficient of gamma^order after p -> gamma^w(p) u_p (gauge -> gamma).

    `constants` are jets over `roster`.  Returns polynomials in the u's (the
    u variable keeps its parameter's name); the gauge direction is evaluated
    at 1 so it contributes no variable.
    """
    names = roster.names
    w = {}
    for name in names:
        if name == gauge:
            w[name] = 1
        elif name in weights:
            wt = int(weights[name])
            if wt < 1:
                raise DomainError("weights must be positive integers", code="bad-weight")
            w[name] = wt
        else:
            raise DomainError(f"no weight given for parameter {name}", code="bad-weight")
    if gauge is not None and gauge not in roster.index:
        raise DomainError(f"gauge {gauge!r} is not a parameter", code="unknown-parameter")
    out_names = tuple(n for n in names if n != gauge)
    out_roster = Roster(out_names)
    degree = constants[0].degree if constants else 0
    wmin = min(w.values())
    if order > degree * wmin:
        raise DomainError(
            f"order {order} exceeds what jet degree {degree} supports "
            f"(minimal weight {wmin})",
            code="order-too-deep",
        )
    polys = []
    for jet in constants:
        terms = {}
        for key, coeff in jet.terms.items():
            s = 0
            mono = [0] * len(out_names)
            for idx in key:
                name = names[idx]
                s += w[name]
                if name != gauge:
                    mono[out_roster.index[name]] += 1
            if s == order:
                mono = tuple(mono)
                terms[mono] = terms[mono] + coeff if mono in terms else coeff
        polys.append(SparsePoly(out_roster, {m: c for m, c in terms.items() if c},
                                _normalized=True))
    return polys


# -- structural analysis of homogeneous forms -------------------------------------


def proportionality_check(forms):
    """Verdicts for consecutive pairs: h_j proportional to h_i iff every 2x2
    cross-determinant of their coefficient vectors vanishes; the rational
    ratio is attached when it exists."""
    out = []
    for i in range(len(forms) - 1):
        hi, hj = forms[i], forms[i + 1]
        monos = sorted(set(hi.terms) | set(hj.terms))
        vi = [hi.terms.get(m, ZERO) for m in monos]
        vj = [hj.terms.get(m, ZERO) for m in monos]
        proportional = True
        for a in range(len(monos)):
            for b in range(a + 1, len(monos)):
                if vi[a] * vj[b] - vi[b] * vj[a]:
                    proportional = False
                    break
            if not proportional:
                break
        ratio = None
        if proportional and hi:
            for a in range(len(monos)):
                if vi[a]:
                    ratio = vj[a] / vi[a]
                    break
        out.append({"i": i, "j": i + 1, "proportional": proportional, "ratio": ratio})
    return out


def _linear_form(roster, coeffs):
    return SparsePoly(
        roster,
        {roster.unit_mono(n): c for n, c in coeffs.items() if c},
        _normalized=True,
    )


def factor_quadratic(h):
    """Split a homogeneous quadratic into two rational linear forms, if possible.

    Returns (l1, l2) with l1*l2 == h exactly, or None when no factorization
    over the rationals exists (rank > 2, or rank 2 with irrational isotropic
    directions).
    """
    if not h:
        raise DomainError("cannot factor the zero form", code="zero-form")
    if not h.is_homogeneous() or h.degree() != 2:
        raise DomainError("factor_quadratic needs a homogeneous quadratic",
                          code="bad-form")
    roster = h.roster
    square_var = None
    for name in roster.names:
        if h.coefficient({name: 2}):
            square_var = name
            break
    if square_var is None:
        # cross terms only: create a diagonal entry with x_i -> x_i + x_j
        vi, vj = None, None
        for mono, coeff in sorted(h.terms.items()):
            used = [roster.names[i] for i, e in enumerate(mono) if e]
            vi, vj = used[0], used[1]
            break
        shift = {vi: _linear_form(roster, {vi: ONE, vj: ONE})}
        unshift = {vi: _linear_form(roster, {vi: ONE, vj: -ONE})}
        inner = factor_quadratic(h.substitute(shift))
        if inner is None:
            return None
        l1, l2 = (f.substitute(unshift) for f in inner)
        if l1 * l2 != h:
            raise IntegrityError("quadratic factorization failed verification",
                                 code="factor-verification")
        return l1, l2
    a = h.coefficient({square_var: 2})
    # h = a*(x + b/(2a))^2 + h'
    b = h.diff(square_var) - _linear_form(roster, {square_var: 2 * a})
    w = _linear_form(roster, {square_var: ONE}) + b.scale(1 / (2 * a))
    rest = h - (w * w).scale(a)
    if not rest:
        l1, l2 = w.scale(a), w
    else:
        square_var2 = None
        for name in roster.names:
            if rest.coefficient({name: 2}):
                square_var2 = name
                break
        if square_var2 is None:
            return None  # a*w^2 + pure cross terms: rank >= 3
        a2 = rest.coefficient({square_var2: 2})
        b2 = rest.diff(square_var2) - _linear_form(roster, {square_var2: 2 * a2})
        w2 = _linear_form(roster, {square_var2: ONE}) + b2.scale(1 / (2 * a2))
        if rest != (w2 * w2).scale(a2):
            return None  # three independent squares: rank >= 3
        s = rational_sqrt(-a2 / a)
        if s is None:
            return None
        l1 = (w - w2.scale(s)).scale(a)
        l2 = w + w2.scale(s)
    if l1 * l2 != h:
        raise IntegrityError("quadratic factorization failed verification",
                             code="factor-verification")
    return l1, l2


def divide_by_linear(poly, linear):
    """(quotient, remainder) of poly by a linear form, remainder free of the
    pivot variable of `linear`."""
    if linear.degree() != 1:
        raise DomainError("divisor must be linear", code="bad-form")
    pivot = None
    for name in linear.roster.names:
        if linear.coefficient({name: 1}):
            pivot = name
            break
    a = linear.coefficient({pivot: 1})
    from .smallsolve import coeffs_in

    w = linear - _linear_form(linear.roster, {pivot: a})
    parts = coeffs_in(poly, pivot)
    dmax = max(parts, default=0)
    zero = SparsePoly.zero(poly.roster)
    quotient = zero
    carry = zero
    unit = _linear_form(poly.roster, {pivot: ONE})
    for d in range(dmax, 0, -1):
        qd = (parts.get(d, zero) + carry).scale(1 / a)
        quotient = quotient + qd * unit ** (d - 1)
        carry = -(qd * w)
    remainder = parts.get(0, zero) + carry
    return quotient, remainder


def split_square_linear(form, candidate):
    """Try form == candidate^2 * l_new with l_new linear and independent of
    candidate; returns l_new or None."""
    if not form or not candidate:
        return None
    q1, r1 = divide_by_linear(form, candidate)
    if r1:
        return None
    q2, r2 = divide_by_linear(q1, candidate)
    if r2 or q2.degree() != 1:
        return None
    pair = proportionality_check([candidate, q2])
    if pair[0]["proportional"]:
        return None
    if candidate * candidate * q2 != form:
        raise IntegrityError("square-linear split failed verification",
                             code="factor-verification")
    return q2


# -- small polynomial systems -------------------------------------------------------


@dataclass
class SmallSystemResult:
    solutions: list  # full assignments, every original equation verified zero
    eliminated: tuple  # the linear variables, in elimination order
    reduced_equations: list  # the polynomial system left in the nonlinear vars
    families: list  # common factors split off during elimination
    family_points: list  # verified solutions lying on some family (not isolated)

    def to_dict(self):
        return {
            "solutions": [
                {k: format_rational(v) for k, v in s.items()} for s in self.solutions
            ],
            "eliminated": list(self.eliminated),
            "reduced_equations": [p.to_term_list() for p in self.reduced_equations],
            "families": [g.to_term_list() for g in self.families],
            "family_points": [
                {k: format_rational(v) for k, v in s.items()} for s in self.family_points
            ],
        }


def solve_small_system(eqs, linear_vars, nonlinear_vars):
    """Exact rational solutions of equations affine in `linear_vars`.

    The linear variables are eliminated by exact cross-multiplied Gaussian
    steps (each equation must be jointly affine in them), the residual system
    in the nonlinear variables is projected to a univariate eliminant by
    iterated resultants, rational roots are extracted, and every candidate is
    verified on the original equations before it is reported.
    """
    if not eqs:
        raise DomainError("empty system", code="bad-system")
    roster = eqs[0].roster
    linear_vars = tuple(linear_vars)
    nonlinear_vars = tuple(nonlinear_vars)
    lin_idx = {roster.index[v] for v in linear_vars}
    for eq in eqs:
        for mono in eq.terms:
            weight = sum(mono[i] for i in lin_idx)
            if weight > 1:
                raise DomainError(
                    "equations must be jointly affine in the linear variables",
                    code="structure-violated",
                )
    active = list(eqs)
    chain = []  # (var, coeff_poly, rest_poly) in elimination order
    for v in linear_vars:
        pick = None
        for i, eq in enumerate(active):
            cf = _linear_var_coefficient(eq, v)
            if cf:
                if pick is None:
                    pick = (i, eq, cf)
                if cf.degree() == 0:
                    pick = (i, eq, cf)  # prefer a constant pivot coefficient
                    break
        if pick is None:
            raise DomainError(
                f"linear variable {v} occurs in no equation", code="structure-violated"
            )
        i, eq, cf = pick
        active.pop(i)
        rest = eq - cf * _linear_form(roster, {v: ONE})
        chain.append((v, cf, rest))
        new_active = []
        for f in active:
            mu = _linear_var_coefficient(f, v)
            if mu:
                f = cf * f - mu * eq
            new_active.append(f)
        active = new_active
    reduced = [p for p in active if p]
    for p in reduced:
        extra = p.variables_used() - set(nonlinear_vars)
        if extra:
            raise DomainError(
                f"elimination left unexpected variables {sorted(extra)}",
                code="structure-violated",
            )
    families = []
    nv_solutions = solve_zero_dimensional(reduced, list(nonlinear_vars), families) \
        if reduced else []
    if not reduced and nonlinear_vars:
        raise DomainError("system is underdetermined in the nonlinear variables",
                          code="positive-dimensional")
    solutions = []
    family_points = []
    for nv in nv_solutions:
        point = dict(nv)
        ok = True
        for v, cf, rest in reversed(chain):
            denom = eval_at(cf, point)
            if not denom:
                ok = False
                break
            point[v] = -eval_at(rest, point) / denom
        if not ok:
            continue
        if all(not eval_at(eq, point) for eq in eqs):
            # points on a split-off family are non-isolated representatives
            if any(not eval_at(g, point) for g in families):
                family_points.append(point)
            else:
                solutions.append(point)
    return SmallSystemResult(solutions, linear_vars, reduced, families, family_points)


def _linear_var_coefficient(eq, v):
    idx = eq.roster.index[v]
    terms = {}
    for mono, coeff in eq.terms.items():
        if mono[idx] == 1:
            rest = list(mono)
            rest[idx] = 0
            terms[tuple(rest)] = coeff
    return SparsePoly(eq.roster, terms)


# -- certificates ------------------------------------------------------------------


@dataclass
class SolutionCertificate:
    assignment: dict  # variable -> rational
    vanishing: list  # labels of the forms/equations that vanish at the point
    witness_label: object
    witness_value: object
    jacobian_det: object  # det of the square block used for transversality
    jacobian_rank: int
    full_rank: bool
    valid: bool

    def to_dict(self):
        return {
            "assignment": {k: format_rational(v) for k, v in self.assignment.items()},
            "vanishing": list(self.vanishing),
            "witness_label": self.witness_label,
            "witness_value": format_rational(self.witness_value),
            "jacobian_det": format_rational(self.jacobian_det),
            "jacobian_rank": self.jacobian_rank,
            "full_rank": self.full_rank,
            "valid": self.valid,
        }


def transversality_certificate(eqs, variables, solution, next_eq, labels=None,
                               witness_label=None):
    """Exact transversality certificate at a verified common zero.

    The Jacobian of `eqs` with respect to `variables` must have full row rank
    at the point (for a square system: nonzero determinant), and `next_eq`
    must be nonzero there.  A failed condition declines the certificate; it
    never raises.
    """
    for eq in eqs:
        if eval_at(eq, solution):
            raise DomainError("certificate point is not a common zero",
                              code="not-a-solution")
    jac = [
        [eval_at(eq.diff(v), solution) for v in variables]
        for eq in eqs
    ]
    rank, pivot_cols, _ = exact_rank(jac)
    full = rank == len(eqs)
    if len(eqs) == len(variables):
        det = exact_det(jac)
    else:
        det = exact_det([[row[c] for c in pivot_cols] for row in jac[:rank]]) \
            if full and rank else ZERO
    witness = eval_at(next_eq, solution)
    return SolutionCertificate(
        assignment=dict(solution),
        vanishing=list(labels) if labels is not None else list(range(1, len(eqs) + 1)),
        witness_label=witness_label,
        witness_value=witness,
        jacobian_det=det,
        jacobian_rank=rank,
        full_rank=full,
        valid=bool(full and witness),
    )


# -- higher-order stage analysis ------------------------------------------------------


@dataclass
class StageEvidence:
    kind: str  # first-nonzero-form | square-linear-form | vanishing-point |
    #            no-extension | restriction
    constant_index: int
    order: int
    increment: int
    data: dict = field(default_factory=dict)

    def to_dict(self):
        return {
            "kind": self.kind,
            "constant_index": self.constant_index,
            "order": self.order,
            "increment": self.increment,
            "data": self.data,
        }


def _restrict_roster(roster, lin_form):
    """Substitution images pinning lin_form = 0, solved for its lead variable."""
    pivot = None
    for name in roster.names:
        if lin_form.coefficient({name: 1}):
            pivot = name
            break
    a = lin_form.coefficient({pivot: 1})
    new_roster = Roster(tuple(n for n in roster.names if n != pivot))
    rest = lin_form - _linear_form(roster, {pivot: a})
    poly_img = SparsePoly(
        new_roster,
        {
            new_roster.unit_mono(name): -coeff / a
            for name, coeff in (
                (n, rest.coefficient({n: 1})) for n in roster.names if n != pivot
            )
            if coeff
        },
        _normalized=True,
    )
    return pivot, new_roster, poly_img


def _poly_restrict(poly, pivot, new_roster, poly_img):
    images = {pivot: poly_img}
    for name in poly.roster.names:
        if name != pivot:
            images[name] = SparsePoly.variable(new_roster, name)
    return poly.substitute(images)


def _jet_restrict(jet, pivot, new_roster, poly_img, degree):
    img = Jet.from_poly(poly_img, degree)
    return jet.substitute({pivot: img}, target_roster=new_roster)


def _mod_square_linear(g, mod_forms, surv, used_dirs, roster):
    """Solve g = sum mu_j mod_forms[j] + surv^2 * ell exactly, demanding an ell
    with a representative independent of the used directions.

    Returns (mus, ell, rank_before, rank_after) or None.  The identity is
    re-verified by polynomial arithmetic before returning.
    """
    names = roster.names
    s2 = surv * surv
    lam_cols = [s2 * SparsePoly.variable(roster, n) for n in names]
    cols = list(mod_forms) + lam_cols
    basis = sorted(set().union(set(g.terms), *(set(p.terms) for p in cols)))
    matrix = [[p.terms.get(mono, ZERO) for p in cols] for mono in basis]
    rhs = [g.terms.get(mono, ZERO) for mono in basis]
    got = solve_general(matrix, rhs)
    if got is None:
        return None
    particular, null_basis = got
    nmu = len(mod_forms)
    dmat = [[d[i] for d in used_dirs] for i in range(len(names))]
    base_rank, _, _ = exact_rank(dmat) if used_dirs else (0, [], [])

    def fresh(vec):
        lam = vec[nmu:]
        if not any(lam):
            return False
        aug = [[d[i] for d in used_dirs] + [lam[i]] for i in range(len(names))]
        rank, _, _ = exact_rank(aug)
        return rank > base_rank

    witness = particular if fresh(particular) else None
    if witness is None:
        for nv in null_basis:
            cand = [p + q for p, q in zip(particular, nv)]
            if fresh(cand):
                witness = cand
                break
    if witness is None:
        return None
    mus = witness[:nmu]
    ell = _linear_form(roster, {n: witness[nmu + i] for i, n in enumerate(names)})
    check = s2 * ell
    for mu, f in zip(mus, mod_forms):
        check = check + f.scale(mu)
    if check != g:
        raise IntegrityError("square-linear decomposition failed verification",
                             code="factor-verification")
    rank_after = base_rank + 1
    return mus, ell, base_rank, rank_after


def higher_order_stages(tail):
    """Certified increments beyond the linear rank, with their evidence.

    The base level certifies one cycle from the first nonzero lowest form
    (transversality theorem with a single nonvanishing form); inside a level,
    further cycles need explicit rational points where the previous forms
    vanish transversally and the next does not.  Descending restricts to the
    zero set of one linear factor of the consumed form; there a constant
    certifies one more cycle only when its restricted form equals
    (surviving factor)^2 times a fresh linear direction, modulo the restricted
    remainders of the already-consumed constants; the fresh direction then
    joins the used set.  Absence of evidence stops the count; it is never
    treated as impossibility.
    """
    jets = dict(tail.tail_jets)
    roster = tail.free_roster
    degree = None
    for jet in jets.values():
        degree = jet.degree
        break
    unconsumed = sorted(jets)
    evidence = []
    total = 0
    # restricted-level state
    candidate = None  # surviving factor image
    mod_forms = []  # restricted forms of consumed constants
    used_dirs = []  # claimed direction vectors over the current roster
    while True:
        first = None
        for k in unconsumed:
            if jets[k]:
                first = k
                break
        if first is None:
            break
        jet = jets[first]
        m = jet.lowest_degree()
        form = jet_form(jet, m, roster)
        factors = None
        if candidate is None:
            data = {"form": form.to_term_list(), "variables": list(roster.names)}
            if m == 2:
                factors = factor_quadratic(form)
            if factors:
                indep = not proportionality_check(list(factors))[0]["proportional"]
                data["factors"] = [f.to_term_list() for f in factors]
                data["independent_factors"] = indep
            else:
                witness = find_nonzero_point(form)
                data["nonzero_at"] = {k2: format_rational(v)
                                      for k2, v in witness.items()} if witness else None
            evidence.append(StageEvidence("first-nonzero-form", first, m, 1, data))
            total += 1
        else:
            split = _mod_square_linear(form, mod_forms, candidate, used_dirs, roster)
            if split is None:
                evidence.append(StageEvidence(
                    "no-extension", first, m, 0,
                    {"reason": "no fresh square-times-linear structure modulo the "
                               "consumed constants"},
                ))
                break
            mus, ell, rank_before, rank_after = split
            evidence.append(StageEvidence(
                "square-linear-form", first, m, 1,
                {
                    "form": form.to_term_list(),
                    "square_factor": candidate.to_term_list(),
                    "new_factor": ell.to_term_list(),
                    "modulus_forms": [f.to_term_list() for f in mod_forms],
                    "modulus_multipliers": [format_rational(mu) for mu in mus],
                    "used_directions": [
                        [format_rational(x) for x in d] for d in used_dirs
                    ],
                    "variables": list(roster.names),
                    "direction_rank": [rank_before, rank_after],
                },
            ))
            total += 1
            used_dirs.append([ell.coefficient({n: 1}) for n in roster.names])
            mod_forms.append(form)
            unconsumed.remove(first)
            continue
        unconsumed.remove(first)
        # extension inside the level: explicit transversal points
        vanishing = [form]
        for k2 in list(unconsumed):
            if not jets[k2]:
                continue
            j2 = jets[k2]
            if j2.lowest_degree() != m:
                break
            f2 = jet_form(j2, m, roster)
            verdicts = proportionality_check([vanishing[-1], f2])
            point = None
            if not verdicts[0]["proportional"]:
                point = find_transversal_zero(vanishing, f2)
            if point is None:
                evidence.append(StageEvidence(
                    "no-extension", k2, m, 0,
                    {"proportional_to_previous": verdicts[0]["proportional"]},
                ))
                break
            cert = transversality_certificate(
                vanishing, sorted(set().union(*(f.variables_used()
                                                for f in vanishing + [f2]))),
                point, f2, witness_label=k2,
            )
            evidence.append(StageEvidence(
                "vanishing-point", k2, m, 1,
                {"certificate": cert.to_dict(),
                 "vanishing_forms": [f.to_term_list() for f in vanishing],
                 "variables": list(roster.names)},
            ))
            total += 1
            unconsumed.remove(k2)
            vanishing.append(f2)
        # descent to the next order on a factor hyperplane of the consumed form
        descended = False
        if factors and unconsumed:
            pair = proportionality_check(list(factors))
            if not pair[0]["proportional"]:
                for l_zero, l_surv in (factors, factors[::-1]):
                    pivot, new_roster, poly_img = _restrict_roster(roster, l_zero)
                    new_jets = {
                        k2: _jet_restrict(jets[k2], pivot, new_roster, poly_img,
                                          degree)
                        for k2 in unconsumed
                    }
                    k_next = None
                    for k2 in unconsumed:
                        if new_jets[k2]:
                            k_next = k2
                            break
                    if k_next is None:
                        continue
                    surv = _poly_restrict(l_surv, pivot, new_roster, poly_img)
                    consumed_jet = _jet_restrict(jets[first], pivot, new_roster,
                                                 poly_img, degree)
                    next_jet = new_jets[k_next]
                    m_next = next_jet.lowest_degree()
                    if m_next != m + 1:
                        continue
                    mods = []
                    if consumed_jet and consumed_jet.lowest_degree() == m_next:
                        mods.append(jet_form(consumed_jet, m_next, new_roster))
                    dirs = [[surv.coefficient({n: 1}) for n in new_roster.names]]
                    g = jet_form(next_jet, m_next, new_roster)
                    if _mod_square_linear(g, mods, surv, dirs, new_roster) is None:
                        continue
                    evidence.append(StageEvidence(
                        "restriction", k_next, m_next, 0,
                        {"pinned": l_zero.to_term_list(),
                         "solved_variable": pivot,
                         "surviving": surv.to_term_list(),
                         "variables": list(new_roster.names)},
                    ))
                    jets = new_jets
                    roster = new_roster
                    candidate = surv
                    mod_forms = mods
                    used_dirs = dirs
                    descended = True
                    break
        if not descended:
            break
    return total, evidence


# -- rational point searches --------------------------------------------------------

_POOL = tuple(
    mpq(n, d) for n, d in ((1, 1), (-1, 1), (2, 1), (1, 2), (-2, 1), (3, 1),
                           (-1, 2), (1, 3), (-3, 1), (2, 3), (5, 2), (-1, 3))
)


def _candidate_points(variables):
    """Deterministic stream of small rational points, sparse first."""
    n = len(variables)
    for i in range(n):
        for v in _POOL[:4]:
            yield {variables[i]: v}
    for i in range(n):
        for j in range(i + 1, n):
            for vi in _POOL[:4]:
                for vj in _POOL[:4]:
                    yield {variables[i]: vi, variables[j]: vj}


def find_nonzero_point(form):
    """Small rational point where the form does not vanish."""
    variables = sorted(form.variables_used())
    for point in _candidate_points(variables):
        full = {v: point.get(v, ZERO) for v in variables}
        if eval_at(form, full):
            return full
    return None


def find_transversal_zero(vanishing, witness):
    """Rational point where all `vanishing` forms are zero with a full-rank
    Jacobian and `witness` is nonzero.

    Searches factor hyperplanes, sparse coordinate slices, and pencil lines
    p + t q with a rational quadratic root; deterministic order.
    """
    variables = sorted(
        set().union(*(set(f.variables_used()) for f in vanishing + [witness]))
    )

    def check(point):
        full = {v: point.get(v, ZERO) for v in variables}
        if any(eval_at(f, full) for f in vanishing):
            return None
        jac = [[eval_at(f.diff(v), full) for v in variables] for f in vanishing]
        rank, _, _ = exact_rank(jac)
        if rank != len(vanishing):
            return None
        if not eval_at(witness, full):
            return None
        return full

    # factor hyperplanes of the first form
    first = vanishing[0]
    if first.degree() == 2 and first.is_homogeneous():
        factors = factor_quadratic(first)
        if factors:
            for lin in factors:
                pivot = None
                for name in lin.roster.names:
                    if lin.coefficient({name: 1}):
                        pivot = name
                        break
                a = lin.coefficient({pivot: 1})
                others = [v for v in variables if v != pivot]
                for point in _candidate_points(others):
                    full = {v: point.get(v, ZERO) for v in others}
                    rest = -eval_at(lin - _linear_form(lin.roster, {pivot: a}),
                                    full) / a
                    full[pivot] = rest
                    got = check(full)
                    if got:
                        return got
    # pencil lines through sparse base points
    if len(vanishing) == 1:
        base_points = list(_candidate_points(variables))
        for i, pd in enumerate(base_points[:30]):
            p = {v: pd.get(v, ZERO) for v in variables}
            for qd in base_points[i + 1:i + 24]:
                q = {v: qd.get(v, ZERO) for v in variables}
                # h(p + t q) = A t^2 + B t + C for a quadratic h
                h = first
                c0 = eval_at(h, p)
                c2 = eval_at(h, q)
                mixed = eval_at(h, {v: p[v] + q[v] for v in variables})
                c1 = mixed - c0 - c2
                if not c2 and not c1:
                    continue
                roots = []
                if not c2:
                    roots = [-c0 / c1]
                else:
                    disc = c1 * c1 - 4 * c2 * c0
                    s = rational_sqrt(disc) if disc >= 0 else None
                    if s is not None:
                        roots = [(-c1 + s) / (2 * c2), (-c1 - s) / (2 * c2)]
                for t in roots:
                    pt = {v: p[v] + t * q[v] for v in variables}
                    got = check(pt)
                    if got:
                        return got
    return None
