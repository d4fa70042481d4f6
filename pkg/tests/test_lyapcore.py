import random

import pytest

from conftest import QUADS, poly_from, random_quadratic_system, random_rational
from hopf3.catalog import CATALOG, catalog_instantiate, condition_samples
from hopf3.errors import IntegrityError
from hopf3.jet import EMPTY_ROSTER, Jet
from hopf3.lyapcore import (complexify, homological_eigenvalue,
                            lyapunov_constants, residual_check)
from hopf3.poly import UVZ, XYZ, SparsePoly
from hopf3.rational import GaussianRational, mpq
from hopf3.sysmodel import apply_quadratic_perturbation, system_from_rationals


def test_homological_eigenvalue_examples():
    assert homological_eigenvalue(2, 1, 0, 1) == GaussianRational(mpq(0), mpq(1))
    assert homological_eigenvalue(1, 1, 1, 1) == GaussianRational(mpq(-1), mpq(0))
    for lam in (mpq(1), mpq(-3), mpq(2, 7)):
        assert not homological_eigenvalue(2, 2, 0, lam)
        assert homological_eigenvalue(2, 2, 1, lam)
        assert homological_eigenvalue(3, 2, 0, lam)


def test_complexify_linear_system():
    s = system_from_rationals(1, {}, {}, {})
    cs = complexify(s)
    assert not cs.u_rhs.terms and not cs.v_rhs.terms and not cs.z_rhs.terms


def test_complexify_x_squared():
    s = system_from_rationals(1, {(2, 0, 0): 1}, {}, {})
    cs = complexify(s)
    # P = x^2 becomes (u+v)^2/4 in the u equation
    quarter = Jet.constant(EMPTY_ROSTER, 0, mpq(1, 4))
    half = Jet.constant(EMPTY_ROSTER, 0, mpq(1, 2))
    zero = Jet.zero(EMPTY_ROSTER, 0)
    assert cs.u_rhs.terms[(2, 0, 0)] == GaussianRational(quarter, zero)
    assert cs.u_rhs.terms[(1, 1, 0)] == GaussianRational(half, zero)
    assert cs.u_rhs.terms[(0, 2, 0)] == GaussianRational(quarter, zero)


def test_complexify_symmetry_on_catalog():
    for name, params in (
        ("rossler", {"c": "-1"}),
        ("lorenz", {"a": "-1", "b": "5", "d": "2"}),
        ("moonrand", {"mu": "1", "b": "2", "c": "1"}),
        ("emrs", CATALOG["emrs"].conditions["6.6"].samples[0]),
    ):
        s = catalog_instantiate(name, params,
                                condition="6.6" if name == "emrs" else None)
        assert complexify(s).validate_symmetry()


def test_unperturbed_rossler_is_center_for_any_c():
    for c in ("-1", "2", "1/3"):
        s = catalog_instantiate("rossler", {"c": c})
        seq = lyapunov_constants(s, 6)
        assert seq.first_nonzero() is None


def test_rossler_first_three_linear_parts():
    s = catalog_instantiate("rossler", {"c": "-1"})
    ps = apply_quadratic_perturbation(s, 1)
    seq = lyapunov_constants(ps, 3)
    expected = [
        {"c020": mpq(-11, 15), "c110": mpq(-1, 5), "c200": mpq(-3, 5)},
        {"c020": mpq(-4, 25), "c110": mpq(-1, 25), "c200": mpq(-2, 25)},
        {"c020": mpq(-101, 5950), "c110": mpq(-3, 850), "c200": mpq(-1, 170)},
    ]
    for jet, want in zip(seq.constants, expected):
        got = {n: jet.linear_coefficient(n) for n in ps.params.names
               if jet.linear_coefficient(n)}
        assert got == want
        assert jet.constant_term() == 0


def test_moonrand_off_center_first_nonzero():
    s = catalog_instantiate("moonrand", {"mu": "1", "b": "2", "c": "1", "a": "1"})
    seq = lyapunov_constants(s, 3)
    k, value = seq.first_nonzero()
    assert k == 1
    assert value.constant_term() == mpq(-4, 15)


def test_residual_check_passes_and_detects_tampering():
    s = catalog_instantiate("moonrand", {"mu": "1", "b": "2", "c": "1"})
    ps = apply_quadratic_perturbation(s, 1, pins=[p for p in
                                                  ("b020", "b101", "b110", "b200",
                                                   "c002", "c011", "c101", "c110",
                                                   "a101", "a110", "a011", "a002")])
    seq = lyapunov_constants(ps, 3)
    assert residual_check(ps, seq)
    one = Jet.constant(seq.params, seq.jet_degree, 1)
    seq.constants[1] = seq.constants[1] + one
    with pytest.raises(IntegrityError) as err:
        residual_check(ps, seq)
    assert "(uv)^" in str(err.value)


def test_residual_check_randomized_quadratics():
    rng = random.Random(123)
    for _ in range(6):
        s = random_quadratic_system(rng)
        ps = apply_quadratic_perturbation(s, 1,
                                          pins=[p for p in
                                                ("a101", "a110", "a011", "a002",
                                                 "b020", "b101", "b110", "b200",
                                                 "c002", "c011", "c101", "c110")])
        seq = lyapunov_constants(ps, 4)
        assert residual_check(ps, seq)


def test_determinism_bit_identical():
    s = catalog_instantiate("lorenz", {"a": "-1", "b": "5", "d": "2"})
    ps = apply_quadratic_perturbation(s, 1)
    a = lyapunov_constants(ps, 4).to_json()
    b = lyapunov_constants(ps, 4).to_json()
    assert a == b


def test_scaling_homogeneity():
    # multiplying every quadratic coefficient by s scales L_k by s^(2k)
    s = catalog_instantiate("moonrand", {"mu": "1", "b": "2", "c": "1", "a": "1"})
    seq1 = lyapunov_constants(s, 3)
    scale = mpq(2)
    scaled = system_from_rationals(
        s.lambda_,
        {m: jet.constant_term() * scale for m, jet in s.p_rhs.terms.items()},
        {m: jet.constant_term() * scale for m, jet in s.q_rhs.terms.items()},
        {m: jet.constant_term() * scale for m, jet in s.r_rhs.terms.items()},
    )
    seq2 = lyapunov_constants(scaled, 3)
    for k in range(1, 4):
        lhs = seq2.constants[k - 1].constant_term()
        rhs = seq1.constants[k - 1].constant_term() * scale ** (2 * k)
        assert lhs == rhs


def rotate_system(system, a=3, b=4, c=5):
    """Apply the rational rotation (x,y) -> ((a x - b y)/c, (b x + a y)/c)."""
    # old coordinates in terms of new ones: the inverse rotation
    inv = {
        "x": poly_from(XYZ, {"x": mpq(a, c), "y": mpq(b, c)}),
        "y": poly_from(XYZ, {"x": mpq(-b, c), "y": mpq(a, c)}),
    }

    def strip(poly):
        return SparsePoly(XYZ, {m: j.constant_term() for m, j in poly.terms.items()})

    p, q, r = (strip(system.p_rhs).substitute(inv),
               strip(system.q_rhs).substitute(inv),
               strip(system.r_rhs).substitute(inv))
    new_p = p.scale(mpq(a, c)) - q.scale(mpq(b, c))
    new_q = p.scale(mpq(b, c)) + q.scale(mpq(a, c))
    return system_from_rationals(system.lambda_, new_p.terms, new_q.terms, r.terms)


def test_rotation_invariance_of_vanishing():
    s = catalog_instantiate("jerk", {"a1": "2"}, condition="g")
    rotated = rotate_system(s)
    seq = lyapunov_constants(rotated, 4)
    assert seq.first_nonzero() is None


def test_truncation_coherence():
    s = catalog_instantiate("moonrand", {"mu": "1", "b": "2", "c": "1"})
    pins = tuple(p for p in
                 ("a101", "a110", "a011", "a002", "b020", "b101", "b110",
                  "b200", "c002", "c011", "c101", "c110"))
    ps2 = apply_quadratic_perturbation(s, 2, pins=pins)
    ps1 = apply_quadratic_perturbation(s, 1, pins=pins)
    seq2 = lyapunov_constants(ps2, 3)
    seq1 = lyapunov_constants(ps1, 3)
    for a, b in zip(seq2.constants, seq1.constants):
        assert a.truncate(1) == b


def test_reality_of_all_jet_coefficients():
    s = catalog_instantiate("lorenz", {"a": "-1", "b": "5", "d": "2"})
    ps = apply_quadratic_perturbation(s, 1)
    seq = lyapunov_constants(ps, 6)
    # constants are real jets by construction; h coefficients at self-conjugate
    # monomials must be real as well
    for solved in seq.h_coefficients.values():
        for (a, b, c), p in solved.items():
            if a == b:
                assert not p.im
