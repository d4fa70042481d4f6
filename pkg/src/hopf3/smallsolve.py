"""Exact solving of small polynomial systems: resultants and rational roots.

The elimination path is classical: Sylvester resultants project a system of
<= 3 low-degree polynomials down to one univariate eliminant, whose rational
roots are then extracted exactly and back-substituted.  Verification by exact
substitution makes the pipeline sound; completeness of the rational-root step
rests on the best-approximation theorem: every rational root p/q of an
integer polynomial has q dividing the leading coefficient, so refining an
isolating interval below 1/(2*lc^2) and scanning the continued-fraction
convergents of the midpoint cannot miss it.  (Enumerating divisor pairs of
the leading/trailing coefficients would be complete too, but the eliminants
arising here have hundreds of digits in those coefficients, far beyond
practical factoring.)
"""

from __future__ import annotations

from .errors import DomainError, IntegrityError
from .linalg import exact_det
from .poly import SparsePoly
from .rational import ONE, ZERO, mpq

# -- dense univariate helpers (lists of mpq, index = degree) -------------------


def _trim(c):
    while c and not c[-1]:
        c.pop()
    return c


def upoly_eval(c, x):
    acc = ZERO
    for coeff in reversed(c):
        acc = acc * x + coeff
    return acc


def upoly_deriv(c):
    return _trim([c[i] * i for i in range(1, len(c))])


def upoly_rem(a, b):
    """Remainder of a by b over the rationals."""
    a = list(a)
    db, lb = len(b) - 1, b[-1]
    while len(a) - 1 >= db and a:
        f = a[-1] / lb
        shift = len(a) - 1 - db
        for i, bc in enumerate(b):
            a[shift + i] = a[shift + i] - f * bc
        a.pop()
        _trim(a)
        if not a:
            break
    return _trim(a)


def upoly_gcd(a, b):
    a, b = _trim(list(a)), _trim(list(b))
    while b:
        a, b = b, upoly_rem(a, b)
    if a:
        lead = a[-1]
        a = [x / lead for x in a]
    return a


def _primitive_int(c):
    """Scale a rational list by a positive rational to primitive integers."""
    from math import gcd

    if not c:
        return []
    den = 1
    for x in c:
        den = den * x.denominator // gcd(den, int(x.denominator))
    ints = [int(x * den) for x in c]
    g = 0
    for v in ints:
        g = gcd(g, abs(v))
    return [mpq(v // g) for v in ints] if g else ints


def _sturm_chain(c):
    chain = [list(c), upoly_deriv(c)]
    while chain[-1]:
        r = upoly_rem(chain[-2], chain[-1])
        if not r:
            break
        chain.append(_primitive_int([-x for x in r]))
    return [p for p in chain if p]


def _variations(chain, x):
    signs = []
    for p in chain:
        v = upoly_eval(p, x)
        if v:
            signs.append(1 if v > 0 else -1)
    count = 0
    for s1, s2 in zip(signs, signs[1:]):
        if s1 != s2:
            count += 1
    return count


def _convergents(x):
    """Continued-fraction convergents of a rational x."""
    num, den = int(mpq(x).numerator), int(mpq(x).denominator)
    p0, q0, p1, q1 = 1, 0, 0, 1
    out = []
    while den:
        a, rem = divmod(num, den)
        p0, q0, p1, q1 = a * p0 + p1, a * q0 + q1, p0, q0
        out.append(mpq(p0, q0))
        num, den = den, rem
    return out


def rational_roots(coeffs):
    """All rational roots (no multiplicity) of a univariate rational polynomial.

    Sturm isolation + interval refinement + continued-fraction reconstruction;
    every reported root is verified by exact substitution and the procedure is
    complete for rational roots.
    """
    c = _trim([mpq(x) for x in coeffs])
    if not c:
        raise DomainError("zero polynomial has every root", code="zero-polynomial")
    if len(c) == 1:
        return []
    roots = set()
    # pull out x^k
    k = 0
    while not c[k]:
        k += 1
    if k:
        roots.add(ZERO)
        c = c[k:]
    c = _primitive_int(c)
    if len(c) <= 1:
        return sorted(roots)
    # squarefree part keeps the same root set
    g = upoly_gcd(c, upoly_deriv(c))
    if len(g) > 1:
        c = _primitive_int(_upoly_divexact(c, g))
    lc = abs(int(c[-1]))
    bound = 1 + max(abs(x / c[-1]) for x in c)
    eps = mpq(1, 2 * lc * lc)
    chain = _sturm_chain(c)

    def count_roots(lo, hi):
        return _variations(chain, lo) - _variations(chain, hi)

    # endpoints of intervals must avoid roots; nudge using exact evaluation
    stack = [(mpq(-bound), mpq(bound))]
    isolated = []
    while stack:
        lo, hi = stack.pop()
        n = count_roots(lo, hi)
        if n == 0:
            continue
        if n == 1:
            isolated.append((lo, hi))
            continue
        mid = (lo + hi) / 2
        if not upoly_eval(c, mid):
            roots.add(mid)
            # shrink a punctured neighborhood of mid until it holds no other root
            delta = (hi - lo) / 4
            while True:
                left, right = mid - delta, mid + delta
                if (upoly_eval(c, left) and upoly_eval(c, right)
                        and count_roots(left, right) == 1):
                    break
                delta = delta / 2
            stack.append((lo, left))
            stack.append((right, hi))
            continue
        stack.append((lo, mid))
        stack.append((mid, hi))
    for lo, hi in isolated:
        flo = upoly_eval(c, lo)
        while hi - lo > eps:
            mid = (lo + hi) / 2
            fm = upoly_eval(c, mid)
            if not fm:
                lo = hi = mid
                break
            if (flo > 0) == (fm > 0):
                lo, flo = mid, fm
            else:
                hi = mid
        mid = (lo + hi) / 2
        for cand in [mid] + _convergents(mid):
            # the interval holds exactly one root; a matching candidate must be it
            if lo <= cand <= hi and cand.denominator <= lc and not upoly_eval(c, cand):
                roots.add(mpq(cand))
                break
    return sorted(roots)


def _upoly_divexact(a, b):
    """Exact quotient of univariate rational polynomials (remainder must vanish)."""
    a = _trim([mpq(x) for x in a])
    b = _trim([mpq(x) for x in b])
    if not b:
        raise DomainError("division by zero polynomial", code="zero-divisor")
    q = [ZERO] * (len(a) - len(b) + 1)
    while len(a) >= len(b) and a:
        f = a[-1] / b[-1]
        shift = len(a) - len(b)
        q[shift] = f
        for i, bc in enumerate(b):
            a[shift + i] = a[shift + i] - f * bc
        _trim(a)
    if a:
        raise IntegrityError("inexact polynomial division", code="inexact-division")
    return _trim(q)


def divisor_pair_roots(coeffs):
    """Rational roots via divisor pairs of trailing/leading coefficients.

    Complete but only practical for small coefficients; kept as the
    independent cross-check for the continued-fraction method.
    """
    c = _trim([mpq(x) for x in coeffs])
    if len(c) <= 1:
        return []
    c = _primitive_int(c)
    roots = set()
    k = 0
    while not c[k]:
        k += 1
    if k:
        roots.add(ZERO)
        c = c[k:]
    if len(c) <= 1:
        return sorted(roots)
    a0, an = abs(int(c[0])), abs(int(c[-1]))

    def divisors(n):
        out = []
        d = 1
        while d * d <= n:
            if n % d == 0:
                out.append(d)
                out.append(n // d)
            d += 1
        return sorted(set(out))

    for p in divisors(a0):
        for q in divisors(an):
            for s in (1, -1):
                cand = mpq(s * p, q)
                if not upoly_eval(c, cand):
                    roots.add(cand)
    return sorted(roots)


# -- multivariate elimination ---------------------------------------------------


def eval_at(poly, assignment):
    """Evaluate with unassigned roster variables defaulting to zero.

    Safe whenever the unassigned variables do not occur in the polynomial.
    """
    missing = poly.variables_used() - set(assignment)
    if missing:
        raise DomainError(f"missing values for {sorted(missing)}", code="missing-parameter")
    full = {n: assignment.get(n, ZERO) for n in poly.roster.names}
    return poly.evaluate(full)


def coeffs_in(poly, var):
    """Coefficients of poly as a polynomial in `var`: degree -> SparsePoly."""
    idx = poly.roster.index[var]
    out = {}
    for mono, coeff in poly.terms.items():
        d = mono[idx]
        rest = list(mono)
        rest[idx] = 0
        rest = tuple(rest)
        bucket = out.setdefault(d, {})
        bucket[rest] = bucket[rest] + coeff if rest in bucket else coeff
    return {
        d: SparsePoly(poly.roster, terms)
        for d, terms in out.items()
        if any(terms.values())
    }


def _det_poly_matrix(rows, roster):
    """Determinant of a matrix of SparsePoly entries by memoized Laplace expansion."""
    n = len(rows)
    zero = SparsePoly.zero(roster)
    cache = {}

    def minor(r, cols):
        if r == n:
            return SparsePoly.constant(roster, ONE)
        key = (r, cols)
        got = cache.get(key)
        if got is not None:
            return got
        acc = zero
        sign = 1
        for pos, col in enumerate(cols):
            entry = rows[r][col]
            if entry:
                sub = minor(r + 1, cols[:pos] + cols[pos + 1:])
                term = entry * sub
                acc = acc + term if sign > 0 else acc - term
            sign = -sign
        cache[key] = acc
        return acc

    return minor(0, tuple(range(n)))


def _det_interpolated(rows, roster, var):
    """Determinant where entries are univariate in `var`: evaluate + interpolate."""
    n = len(rows)
    bound = 0
    for row in rows:
        bound += max((p.degree() for p in row if p), default=0)
    points = []
    t = 0
    while len(points) <= bound:
        points.append(mpq(t))
        t = -t if t > 0 else -t + 1
    values = []
    for pt in points:
        m = [[eval_at(entry, {var: pt}) if entry else ZERO for entry in row] for row in rows]
        values.append(exact_det(m))
    # Lagrange interpolation to a dense univariate, then back to SparsePoly
    coeffs = [ZERO] * len(points)
    for i, (xi, yi) in enumerate(zip(points, values)):
        if not yi:
            continue
        basis = [ONE]
        denom = ONE
        for j, xj in enumerate(points):
            if j == i:
                continue
            # multiply basis by (x - xj)
            basis = [ZERO] + basis
            for k in range(len(basis) - 1):
                basis[k] = basis[k] - xj * basis[k + 1]
            denom = denom * (xi - xj)
        scale = yi / denom
        for k, bc in enumerate(basis):
            coeffs[k] = coeffs[k] + scale * bc
    unit = roster.unit_mono(var)
    terms = {}
    for d, cf in enumerate(coeffs):
        if cf:
            terms[tuple(e * d for e in unit)] = cf
    return SparsePoly(roster, terms)


def resultant(p, q, var):
    """Sylvester resultant eliminating `var`; result does not involve `var`."""
    if p.roster != q.roster:
        raise DomainError("resultant needs a shared roster", code="roster-mismatch")
    cp, cq = coeffs_in(p, var), coeffs_in(q, var)
    dp, dq = max(cp, default=0), max(cq, default=0)
    if dp == 0:
        return p ** dq if dq else SparsePoly.constant(p.roster, ONE)
    if dq == 0:
        return q ** dp
    n = dp + dq
    zero = SparsePoly.zero(p.roster)
    rows = []
    for i in range(dq):
        row = [zero] * n
        for d, cf in cp.items():
            row[i + dp - d] = cf
        rows.append(row)
    for i in range(dp):
        row = [zero] * n
        for d, cf in cq.items():
            row[i + dq - d] = cf
        rows.append(row)
    other_vars = set()
    for row in rows:
        for entry in row:
            other_vars |= entry.variables_used()
    if len(other_vars) == 1:
        return _det_interpolated(rows, p.roster, next(iter(other_vars)))
    return _det_poly_matrix(rows, p.roster)


def _univar_coeff_list(poly, var):
    degmap = coeffs_in(poly, var)
    out = [ZERO] * (max(degmap, default=0) + 1)
    for d, cf in degmap.items():
        if cf.variables_used():
            raise IntegrityError("expected a univariate polynomial", code="not-univariate")
        out[d] = cf.constant_term()
    return out


# -- bivariate gcd support (degenerate eliminants) --------------------------------


def _poly_to_ylists(poly, main_var, other_var):
    """{y_degree: dense x-coefficient list} view of a (<=2)-variable polynomial."""
    out = {}
    for d, cf in coeffs_in(poly, main_var).items():
        lists = _univar_lists(cf, other_var)
        out[d] = lists
    return out


def _univar_lists(poly, var):
    if var is None:
        return [poly.constant_term()]
    degmap = coeffs_in(poly, var)
    out = [ZERO] * (max(degmap, default=0) + 1)
    for d, cf in degmap.items():
        out[d] = cf.constant_term()
    return out


def _ylists_to_poly(data, roster, main_var, other_var):
    terms = {}
    mu = roster.unit_mono(main_var)
    ou = roster.unit_mono(other_var) if other_var else None
    for d, lists in data.items():
        for e, cf in enumerate(lists):
            if cf:
                mono = tuple(
                    m * d + (o * e if ou else 0)
                    for m, o in zip(mu, ou or mu)
                )
                terms[mono] = terms[mono] + cf if mono in terms else cf
    return SparsePoly(roster, terms)


def _list_mul(a, b):
    out = [ZERO] * (len(a) + len(b) - 1) if a and b else []
    for i, x in enumerate(a):
        if not x:
            continue
        for j, y in enumerate(b):
            if y:
                out[i + j] = out[i + j] + x * y
    return _trim(out)


def _list_sub(a, b):
    out = [ZERO] * max(len(a), len(b))
    for i, x in enumerate(a):
        out[i] = x
    for i, y in enumerate(b):
        out[i] = out[i] - y
    return _trim(out)


def _content_removed(data):
    """Divide all x-coefficient lists by their univariate gcd (the content)."""
    content = []
    for lists in data.values():
        content = upoly_gcd(content, lists) if content else list(lists)
    if not content or len(content) == 1:
        return data, content or [ONE]
    return (
        {d: _upoly_divexact(lists, content) for d, lists in data.items()},
        content,
    )


def gcd_in_var(p, q, main_var):
    """GCD of two polynomials in at most two variables, taken in `main_var`.

    Classical primitive pseudo-remainder Euclid over Q[x][y]; only needed when
    an eliminant vanishes identically (the pair shares a component).
    """
    variables = sorted((p.variables_used() | q.variables_used()) - {main_var})
    if len(variables) > 1:
        raise DomainError(
            "degenerate eliminant with more than two active variables",
            code="positive-dimensional",
        )
    other = variables[0] if variables else None
    A = _poly_to_ylists(p, main_var, other)
    B = _poly_to_ylists(q, main_var, other)
    A, cont_a = _content_removed(A)
    B, cont_b = _content_removed(B)
    common_content = upoly_gcd(cont_a, cont_b)

    def degree(data):
        return max((d for d, lists in data.items() if lists), default=-1)

    if degree(A) < degree(B):
        A, B = B, A
    gcd_part = None
    while True:
        if not B or degree(B) < 0:
            gcd_part = A
            break
        if degree(B) == 0:
            gcd_part = None  # no shared dependence on main_var
            break
        db = degree(B)
        lcB = B[db]
        R = dict(A)
        while R and degree(R) >= db:
            dr = degree(R)
            lcR = R[dr]
            newR = {}
            for d, lists in R.items():
                if d == dr:
                    continue
                newR[d] = _list_mul(lists, lcB)
            for d, lists in B.items():
                if d == db:
                    continue
                shift = d + dr - db
                cur = newR.get(shift, [])
                newR[shift] = _list_sub(cur, _list_mul(lists, lcR))
            R = {d: lists for d, lists in newR.items() if lists}
        if not R:
            gcd_part = B  # exact division: the divisor is the gcd
            break
        R, _ = _content_removed(R)
        A, B = B, R
    if gcd_part is None:
        data = {0: common_content}
    else:
        gcd_part, _ = _content_removed(gcd_part)
        if len(common_content) > 1:
            gcd_part = {
                d: _list_mul(lists, common_content) for d, lists in gcd_part.items()
            }
        data = gcd_part
    return _ylists_to_poly(data, p.roster, main_var, other)


def divexact_poly(p, g):
    """Exact quotient p/g for polynomials in at most two variables."""
    variables = sorted(p.variables_used() | g.variables_used())
    if not variables:
        return SparsePoly.constant(p.roster, p.constant_term() / g.constant_term())
    if len(variables) == 1:
        var = variables[0]
        q = _upoly_divexact(_univar_lists(p, var), _univar_lists(g, var))
        unit = p.roster.unit_mono(var)
        return SparsePoly(
            p.roster,
            {tuple(e * d for e in unit): cf for d, cf in enumerate(q) if cf},
        )
    xv, yv = variables
    # interpolate the quotient's x-dependence through univariate divisions in y
    dp = coeffs_in(p, xv)
    degx = max(dp, default=0)
    samples = []
    t = 0
    while len(samples) <= degx:
        pt = mpq(t)
        t = -t if t > 0 else -t + 1
        gy = _eval_x(g, xv, yv, pt)
        py = _eval_x(p, xv, yv, pt)
        if not gy or not gy[-1]:
            continue
        try:
            qy = _upoly_divexact(py, gy)
        except (IntegrityError, DomainError):
            continue
        samples.append((pt, qy))
    degy = max(len(q) for _, q in samples) - 1
    unit_x = p.roster.unit_mono(xv)
    unit_y = p.roster.unit_mono(yv)
    terms = {}
    for j in range(degy + 1):
        pts = [(x0, q[j] if j < len(q) else ZERO) for x0, q in samples]
        coeffs = _lagrange(pts)
        for i, cf in enumerate(coeffs):
            if cf:
                mono = tuple(a * i + b * j for a, b in zip(unit_x, unit_y))
                terms[mono] = cf
    q = SparsePoly(p.roster, terms)
    if q * g != p:
        raise IntegrityError("inexact polynomial division", code="inexact-division")
    return q


def _eval_x(poly, xv, yv, value):
    out = {}
    for mono, coeff in poly.terms.items():
        xi = poly.roster.index[xv]
        yi = poly.roster.index[yv]
        v = coeff * (value ** mono[xi]) if mono[xi] else coeff
        d = mono[yi]
        out[d] = out.get(d, ZERO) + v
    lists = [ZERO] * (max(out, default=0) + 1)
    for d, cf in out.items():
        lists[d] = cf
    return _trim(lists)


def _lagrange(points):
    coeffs = [ZERO] * len(points)
    for i, (xi, yi) in enumerate(points):
        if not yi:
            continue
        basis = [ONE]
        denom = ONE
        for j, (xj, _) in enumerate(points):
            if j == i:
                continue
            basis = [ZERO] + basis
            for k in range(len(basis) - 1):
                basis[k] = basis[k] - xj * basis[k + 1]
            denom = denom * (xi - xj)
        scale = yi / denom
        for k, bc in enumerate(basis):
            coeffs[k] = coeffs[k] + scale * bc
    return coeffs


def solve_zero_dimensional(polys, variables, families=None):
    """Rational common zeros of small polynomial systems, exactly.

    `variables` lists the unknowns (<= 3 in the supported uses); every other
    roster variable must be absent.  Elimination by iterated resultants, then
    exact rational-root extraction and verified back-substitution.

    A vanishing eliminant means two equations share a component.  The common
    factor (a positive-dimensional family) is then split off by a gcd, listed
    in `families`, and the search continues on the cofactors; reported points
    lying on a family are the caller's to interpret (see solve_small_system).
    """
    if families is None:
        families = []
    polys = [p for p in polys if p]
    if not polys:
        raise DomainError("system is identically zero", code="positive-dimensional")
    for p in polys:
        extra = p.variables_used() - set(variables)
        if extra:
            raise DomainError(f"unexpected variables {sorted(extra)}", code="bad-system")
    if len(variables) == 1:
        var = variables[0]
        base = _univar_coeff_list(polys[0], var)
        sols = []
        for root in rational_roots(base):
            if all(not eval_at(p, {var: root}) for p in polys):
                sols.append({var: root})
        return sols
    var = variables[-1]
    with_var = [p for p in polys if var in p.variables_used()]
    without = [p for p in polys if var not in p.variables_used()]
    if not with_var:
        raise DomainError(f"no equation involves {var}: positive-dimensional",
                          code="positive-dimensional")
    pivot = min(with_var, key=lambda p: max(coeffs_in(p, var)))
    others = [q for q in with_var if q is not pivot]
    projected = list(without)
    for q in others:
        r = resultant(pivot, q, var)
        while not r:
            g = gcd_in_var(pivot, q, var)
            if g.degree() < 1:
                raise DomainError("eliminant vanished identically",
                                  code="positive-dimensional")
            families.append(g)
            pivot = divexact_poly(pivot, g)
            q = divexact_poly(q, g)
            if var not in pivot.variables_used() or var not in q.variables_used():
                r = pivot if var not in pivot.variables_used() else q
                break
            r = resultant(pivot, q, var)
        projected.append(r)
    projected = [p for p in projected if p]
    if not projected:
        raise DomainError("underdetermined system", code="positive-dimensional")
    solutions = []
    for partial in solve_zero_dimensional(projected, variables[:-1], families):
        specialized = []
        for p in polys:
            sp = p
            for name, value in partial.items():
                img = SparsePoly.constant(p.roster, value)
                sp = sp.substitute({name: img})
            specialized.append(sp)
        candidates = None
        for sp in specialized:
            if var in sp.variables_used():
                base = _univar_coeff_list(sp, var)
                roots = set(rational_roots(base))
                candidates = roots if candidates is None else candidates & roots
                if not candidates:
                    break
        if candidates is None:
            continue
        for root in sorted(candidates):
            full = dict(partial)
            full[var] = root
            if all(not eval_at(p, full) for p in polys):
                solutions.append(full)
    return solutions
