import json

import pytest

from conftest import poly_from
from hopf3.catalog import JerkSpec, catalog_instantiate, jerk_canonicalize, jerk_f2
from hopf3.errors import DomainError
from hopf3.jet import EMPTY_ROSTER, Jet
from hopf3.linalg import invert, mat_vec
from hopf3.poly import XYZ, SparsePoly
from hopf3.rational import mpq
from hopf3.sysmodel import (FULL_PERTURBATION, apply_quadratic_perturbation,
                            parse_system, serialize_system,
                            system_from_rationals)


def scalar_terms(poly):
    return {m: jet.constant_term() for m, jet in poly.terms.items()}


def test_rossler_instance_matches_transform():
    s = catalog_instantiate("rossler", {"c": "-1"})
    assert s.lambda_ == mpq(-1)
    assert scalar_terms(s.p_rhs) == {(1, 0, 1): mpq(1, 2), (0, 0, 2): mpq(-1, 4)}
    # general transform gives -1/4 on z^2 in dy (the instance display in the
    # source carries a sign typo there; the Lyapunov data pins this choice)
    assert scalar_terms(s.q_rhs) == {(1, 0, 1): mpq(1, 2), (0, 0, 2): mpq(-1, 4)}
    assert scalar_terms(s.r_rhs) == {(1, 0, 1): mpq(1), (0, 0, 2): mpq(-1, 2)}


def test_lorenz_instance():
    s = catalog_instantiate("lorenz", {"a": "-1", "b": "5", "d": "2"})
    assert s.lambda_ == mpq(-1)
    assert scalar_terms(s.p_rhs) == {(1, 0, 1): mpq(1, 10), (0, 1, 1): mpq(1, 20)}
    assert scalar_terms(s.q_rhs) == {(1, 0, 1): mpq(-1, 5), (0, 1, 1): mpq(-1, 10)}
    assert scalar_terms(s.r_rhs) == {(1, 1, 0): mpq(1, 5), (0, 2, 0): mpq(1, 10)}


def test_lorenz_admissibility():
    with pytest.raises(DomainError):  # sigma^2 = -a(a+b) = 32: irrational sigma
        catalog_instantiate("lorenz", {"a": "-2", "b": "18", "d": "1"})
    with pytest.raises(DomainError):
        catalog_instantiate("lorenz", {"a": "-1", "b": "5", "d": "0"})


def test_moonrand_instance_swapped_frame():
    # original x'=y, y'=-x-xz, z'=-z+x^2+2xy, canonicalized by swapping x and y
    s = catalog_instantiate("moonrand", {"mu": "1", "b": "2", "c": "1"})
    assert s.lambda_ == mpq(1)
    assert scalar_terms(s.p_rhs) == {(0, 1, 1): mpq(-1)}
    assert not s.q_rhs.terms
    assert scalar_terms(s.r_rhs) == {(1, 1, 0): mpq(2), (0, 2, 0): mpq(1)}


def test_perturbation_roster_and_identity():
    s = catalog_instantiate("moonrand", {"mu": "1", "b": "2", "c": "1"})
    ps = apply_quadratic_perturbation(s, 1)
    assert len(ps.params) == 18
    assert ps.params.names == FULL_PERTURBATION
    zeros = {name: 0 for name in ps.params.names}
    assert ps.evaluate_parameters(zeros) == s
    with pytest.raises(DomainError):
        apply_quadratic_perturbation(ps, 1)


def test_perturbation_pins():
    s = catalog_instantiate("jerk", {"a1": "2"}, condition="g")
    pins = ("b020", "b101", "b110", "b200", "c002", "c011")
    ps = apply_quadratic_perturbation(s, 1, pins=pins)
    assert len(ps.params) == 12
    assert not set(pins) & set(ps.params.names)


def test_serialize_parse_round_trip():
    s = catalog_instantiate("moonrand", {"mu": "1", "b": "2", "c": "1"})
    ps = apply_quadratic_perturbation(s, 2)
    text = serialize_system(ps)
    assert parse_system(text) == ps


def test_parse_rejects_constant_term():
    s = catalog_instantiate("moonrand", {"mu": "1", "b": "2", "c": "1"})
    data = json.loads(serialize_system(s))
    data["equations"]["dx"].append({"coeff": {"1": "1"}, "mono": [0, 0, 0]})
    with pytest.raises(DomainError) as err:
        parse_system(json.dumps(data))
    assert err.value.code == "canonical-form-violation"


def test_parse_rejects_zero_lambda():
    s = catalog_instantiate("moonrand", {"mu": "1", "b": "2", "c": "1"})
    data = json.loads(serialize_system(s))
    data["lambda"] = "0/1"
    with pytest.raises(DomainError) as err:
        parse_system(json.dumps(data))
    assert err.value.code == "invalid-lambda"


def test_parse_rejects_malformed_rational():
    s = catalog_instantiate("moonrand", {"mu": "1", "b": "2", "c": "1"})
    data = json.loads(serialize_system(s))
    data["lambda"] = "a/b"
    with pytest.raises(DomainError) as err:
        parse_system(json.dumps(data))
    assert err.value.code == "malformed-rational"


def test_jerk_zero_f2_gives_linear_system():
    spec = JerkSpec(1, -1, 1, SparsePoly.zero(XYZ))
    s = jerk_canonicalize(spec)
    assert not s.p_rhs.terms and not s.q_rhs.terms and not s.r_rhs.terms
    assert s.lambda_ == mpq(1)


def test_jerk_condition_g_instance_is_theorem_system():
    s = catalog_instantiate("jerk", {"a1": "2"}, condition="g")
    expected = {(2, 0, 0): mpq(2), (0, 2, 0): mpq(-4), (0, 0, 2): mpq(-10),
                (1, 0, 1): mpq(4), (0, 1, 1): mpq(8)}
    assert scalar_terms(s.p_rhs) == expected
    assert scalar_terms(s.q_rhs) == expected
    assert scalar_terms(s.r_rhs) == expected


def test_jerk_jacobian_eigenvalues_via_characteristic_polynomial():
    # the canonical Jacobian is [[0,-1,0],[1,0,0],[0,0,-lam]]; its
    # characteristic polynomial must be (t^2+1)(t+lam)
    for lam in (mpq(1), mpq(3, 2), mpq(-2)):
        spec = JerkSpec(2, -3, lam, jerk_f2({"a1": 1, "a2": 0, "a3": "1/2",
                                             "a4": 0, "a5": 2, "a6": 0}))
        s = jerk_canonicalize(spec)
        for poly in (s.p_rhs, s.q_rhs, s.r_rhs):
            assert poly.lowest_degree() >= 2  # no linear correction
        # coefficients of t^3 + c2 t^2 + c1 t + c0 for the canonical part
        c2, c1, c0 = lam, mpq(1), lam
        assert (c2, c1, c0) == (s.lambda_, mpq(1), s.lambda_)


def test_jerk_zero_parameters_rejected():
    with pytest.raises(DomainError):
        JerkSpec(0, 1, 1, SparsePoly.zero(XYZ))


def test_jerk_inverse_change_recovers_original_field():
    """Push the canonical field back through the variable change and the time
    rescaling; it must be the first-order form of a jerk equation."""
    cases = [
        (mpq(1), mpq(-1)),
        (mpq(2), mpq(1)),
        (mpq(1, 2), mpq(-3)),
    ]
    f2_spec = {"a1": "1/2", "a2": -1, "a3": 2, "a4": "1/3", "a5": 0, "a6": -2}
    for beta, tau in cases:
        lam = -tau / beta
        f2 = jerk_f2(f2_spec)
        canonical = jerk_canonicalize(JerkSpec(beta, tau, lam, f2))
        # T sends canonical coordinates to original ones
        t_cols = [
            (-1 / beta**2, mpq(0), mpq(1)),
            (mpq(0), 1 / beta, mpq(0)),
            (1 / tau**2, 1 / tau, mpq(1)),
        ]
        t_rows = [[t_cols[j][i] for j in range(3)] for i in range(3)]
        t_inv = invert(t_rows)
        names = ("x", "y", "z")
        fwd = {  # original variable -> polynomial in canonical variables
            names[i]: poly_from(XYZ, {names[j]: t_rows[i][j] for j in range(3)})
            for i in range(3)
        }
        back = {
            names[i]: poly_from(XYZ, {names[j]: t_inv[i][j] for j in range(3)})
            for i in range(3)
        }
        # original field: (y, z, beta^2 tau x - beta^2 y + tau z + g2)
        g2 = f2.substitute(back).scale(beta * beta + tau * tau)
        original = [
            poly_from(XYZ, {"y": 1}),
            poly_from(XYZ, {"z": 1}),
            poly_from(XYZ, {"x": beta * beta * tau, "y": -beta * beta, "z": tau})
            + g2,
        ]
        # canonical field including its implicit linear part
        can = [
            poly_from(XYZ, {"y": -1}) + _strip(canonical.p_rhs),
            poly_from(XYZ, {"x": 1}) + _strip(canonical.q_rhs),
            poly_from(XYZ, {"z": -canonical.lambda_}) + _strip(canonical.r_rhs),
        ]
        for i in range(3):
            pushed = sum(
                (can[j].scale(t_rows[i][j]) for j in range(3)),
                SparsePoly.zero(XYZ),
            ).scale(beta)  # time rescaling d/ds = (1/beta) d/dt
            assert pushed == original[i].substitute(fwd)


def _strip(poly):
    return SparsePoly(
        XYZ, {m: jet.constant_term() for m, jet in poly.terms.items()}
    )
