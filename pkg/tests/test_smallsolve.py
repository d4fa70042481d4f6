import random

import pytest

from conftest import poly_from
from hopf3.errors import DomainError
from hopf3.poly import Roster, SparsePoly
from hopf3.rational import mpq
from hopf3.smallsolve import (divexact_poly, divisor_pair_roots, eval_at,
                              gcd_in_var, rational_roots, resultant,
                              solve_zero_dimensional)

XY = Roster(("x", "y"))
XYZW = Roster(("x", "y", "z"))


def poly_with_roots(roots, extra_irreducible=None):
    c = [mpq(1)]
    for r in roots:
        q, p = mpq(r).denominator, mpq(r).numerator
        nc = [mpq(0)] * (len(c) + 1)
        for i, x in enumerate(c):
            nc[i + 1] += q * x
            nc[i] -= p * x
        c = nc
    if extra_irreducible:
        a, b = extra_irreducible
        nc = [mpq(0)] * (len(c) + 2)
        for i, x in enumerate(c):
            nc[i + 2] += x
            nc[i] += mpq(a * a + b) * x
        c = nc
    return c


def test_rational_roots_match_divisor_pair_oracle():
    rng = random.Random(5)
    for _ in range(150):
        roots = [mpq(rng.randint(-7, 7), rng.randint(1, 5))
                 for _ in range(rng.randint(1, 4))]
        extra = (rng.randint(1, 3), rng.randint(1, 3)) if rng.random() < 0.5 else None
        c = poly_with_roots(roots, extra)
        assert rational_roots(c) == divisor_pair_roots(c)


def test_rational_roots_huge_coefficients():
    # the divisor-pair method would need to factor these; continued fractions
    # recover the roots regardless of coefficient size
    big = mpq(10**40 + 1, 10**39 + 7)
    c = poly_with_roots([big, mpq(-3, 7)], extra_irreducible=(2, 1))
    assert rational_roots(c) == sorted([mpq(-3, 7), big])


def test_resultant_detects_common_roots():
    p = poly_from(XY, {(("x", 1),): 1, (("y", 1),): -1})  # x - y
    q = poly_from(XY, {(("x", 2),): 1, (("y", 2),): -1})  # x^2 - y^2
    r = resultant(p, q, "x")
    assert not r  # share the factor x - y
    q2 = poly_from(XY, {(("x", 2),): 1, (("y", 2),): 1, (): -2})
    r2 = resultant(p, q2, "x")
    # common roots where y = x and x^2 + y^2 = 2: y = 1 or -1
    assert set(rational_roots([r2.coefficient({"y": d}) for d in
                               range(r2.degree() + 1)])) >= {mpq(1), mpq(-1)}


def test_gcd_and_exact_division():
    common = poly_from(XY, {(("y", 1),): 1, (("x", 1),): -2})
    p = common * poly_from(XY, {(("x", 2),): 1, (("y", 1),): 3})
    q = common * poly_from(XY, {(("y", 1),): 5, (): 1})
    g = gcd_in_var(p, q, "y")
    assert g.degree() == 1
    assert divexact_poly(p, g) * g == p
    assert divexact_poly(q, g) * g == q


def test_solve_two_circles():
    p1 = poly_from(XY, {(("x", 2),): 1, (("y", 2),): 1, (): -2})
    p2 = poly_from(XY, {(("x", 1),): 1, (("y", 1),): -1})
    sols = solve_zero_dimensional([p1, p2], ["x", "y"])
    assert sols == [{"x": mpq(-1), "y": mpq(-1)}, {"x": mpq(1), "y": mpq(1)}]


def test_solve_three_variables():
    p1 = poly_from(XYZW, {(("x", 1),): 1, (("y", 1),): 1, (("z", 1),): 1, (): -6})
    p2 = poly_from(XYZW, {(("x", 1), ("y", 1)): 1, (): -2})
    p3 = poly_from(XYZW, {(("z", 2),): 1, (): -9})
    sols = solve_zero_dimensional([p1, p2, p3], ["x", "y", "z"])
    for sol in sols:
        assert all(not eval_at(p, sol) for p in (p1, p2, p3))
    assert {"x": mpq(1), "y": mpq(2), "z": mpq(3)} in sols


def test_positive_dimensional_component_is_split_off():
    # (x - y) * circle and (x - y) * line share the component x = y
    common = poly_from(XY, {(("x", 1),): 1, (("y", 1),): -1})
    p = common * poly_from(XY, {(("x", 2),): 1, (("y", 2),): 1, (): -2})
    q = common * poly_from(XY, {(("x", 1),): 1, (("y", 1),): 2, (): -3})
    families = []
    sols = solve_zero_dimensional([p, q], ["x", "y"], families)
    assert families and families[0].degree() == 1
    assert {"x": mpq(1), "y": mpq(1)} in sols


def test_underdetermined_rejected():
    p = poly_from(XY, {(("x", 1),): 1})
    with pytest.raises(DomainError):
        solve_zero_dimensional([p], ["x", "y"])
