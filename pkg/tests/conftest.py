import random

import pytest

from hopf3.jet import EMPTY_ROSTER, Jet
from hopf3.poly import XYZ, Roster, SparsePoly
from hopf3.rational import mpq
from hopf3.sysmodel import HopfSystem, system_from_rationals

QUADS = ((2, 0, 0), (1, 1, 0), (1, 0, 1), (0, 2, 0), (0, 1, 1), (0, 0, 2))


def random_rational(rng, span=6):
    num = rng.randint(-span, span)
    den = rng.randint(1, span)
    return mpq(num, den)


def random_quadratic_system(rng, lam_choices=("1", "2", "1/2", "3")):
    lam = mpq(rng.choice(lam_choices))

    def quad():
        return {m: random_rational(rng) for m in QUADS if rng.random() < 0.6}

    return system_from_rationals(lam, quad(), quad(), quad())


@pytest.fixture
def rng():
    return random.Random(20260810)


def poly_from(roster, spec):
    """Compact builder: {((name, exp), ...) or name-string: rational}."""
    terms = {}
    for key, coeff in spec.items():
        mono = [0] * len(roster)
        if isinstance(key, str):
            if key:
                mono[roster.index[key]] = 1
        else:
            for name, exp in key:
                mono[roster.index[name]] += exp
        terms[tuple(mono)] = mpq(coeff)
    return SparsePoly(roster, terms)
