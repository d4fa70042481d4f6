import random

import pytest

from hopf3.errors import DomainError
from hopf3.jet import Jet, jet_truncate
from hopf3.poly import Roster
from hopf3.rational import mpq

AB = Roster(("a", "b"))


def jet_of(roster, degree, spec):
    terms = {}
    for key, coeff in spec.items():
        idx = tuple(sorted(roster.index[n] for n in key))
        terms[idx] = mpq(coeff)
    return Jet(roster, degree, terms)


def test_truncating_product():
    one_plus_a = jet_of(AB, 1, {(): 1, ("a",): 1})
    assert one_plus_a * one_plus_a == jet_of(AB, 1, {(): 1, ("a",): 2})


def test_truncate_examples():
    j = jet_of(AB, 2, {(): 1, ("a",): 1, ("a", "b"): 1})
    assert jet_truncate(j, 1) == jet_of(AB, 1, {(): 1, ("a",): 1})
    assert jet_truncate(j, 0) == jet_of(AB, 0, {(): 1})
    with pytest.raises(DomainError):
        jet_truncate(j, 3)


def test_unequal_degrees_never_combine():
    with pytest.raises(DomainError):
        jet_of(AB, 1, {(): 1}) + jet_of(AB, 2, {(): 1})
    with pytest.raises(DomainError):
        jet_of(AB, 1, {(): 1}) * jet_of(AB, 2, {(): 1})


def test_compute_deep_then_truncate_equals_direct():
    rng = random.Random(11)
    roster = Roster(("a", "b", "c"))

    def random_jet(degree):
        j = Jet.zero(roster, degree)
        for _ in range(6):
            names = tuple(rng.choice(roster.names)
                          for _ in range(rng.randint(0, degree)))
            j = j + Jet(roster, degree,
                        {tuple(sorted(roster.index[n] for n in names)):
                         mpq(rng.randint(-4, 4), rng.randint(1, 3))})
        return j

    for _ in range(20):
        a3, b3 = random_jet(3), random_jet(3)
        expr3 = a3 * b3 + a3 - b3 * b3
        expr2 = a3.truncate(2) * b3.truncate(2) + a3.truncate(2) \
            - b3.truncate(2) * b3.truncate(2)
        assert expr3.truncate(2) == expr2
        for d in (0, 1, 2, 3):
            assert expr3.truncate(d) == expr3.truncate(3).truncate(d)


def test_ring_laws():
    rng = random.Random(3)
    roster = Roster(("a", "b", "c", "d"))

    def rj():
        terms = {}
        for _ in range(5):
            key = tuple(sorted(rng.sample(range(4), rng.randint(0, 2))))
            terms[key] = mpq(rng.randint(-5, 5), rng.randint(1, 4))
        return Jet(roster, 2, terms)

    for _ in range(30):
        a, b, c = rj(), rj(), rj()
        assert (a + b) + c == a + (b + c)
        assert a * b == b * a
        assert (a * b) * c == a * (b * c)
        assert a * (b + c) == a * b + a * c


def test_substitution_linear_change():
    roster = Roster(("a", "b"))
    target = Roster(("u", "b"))
    j = jet_of(roster, 2, {("a", "a"): 1, ("a", "b"): 2})
    image = Jet(target, 2, {(target.index["u"],): mpq(1),
                            (target.index["b"],): mpq(-1)})
    out = j.substitute({"a": image}, target_roster=target)
    # (u - b)^2 + 2(u - b) b = u^2 - b^2
    assert out == Jet(target, 2, {(0, 0): mpq(1), (1, 1): mpq(-1)})


def test_coeff_map_round_trip():
    roster = Roster(("a200", "c020"))
    j = jet_of(roster, 2, {(): "-11/15", ("a200",): 1, ("a200", "c020"): "1/2",
                           ("a200", "a200"): 3})
    mapping = j.to_coeff_map()
    assert mapping["1"] == "-11/15"
    assert mapping["a200^2"] == "3"
    assert mapping["a200*c020"] == "1/2"
    assert Jet.from_coeff_map(roster, 2, mapping) == j


def test_evaluate():
    j = jet_of(AB, 2, {(): 1, ("a",): 2, ("a", "b"): "1/3"})
    assert j.evaluate({"a": mpq(3), "b": mpq(6)}) == 1 + 6 + 6
