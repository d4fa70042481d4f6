import pytest

from hopf3.catalog import CATALOG, catalog_instantiate, condition_samples
from hopf3.errors import DomainError
from hopf3.lyapcore import lyapunov_constants
from hopf3.rational import mpq


def test_unknown_system_and_condition():
    with pytest.raises(DomainError) as err:
        catalog_instantiate("nope")
    assert err.value.code == "unknown-system"
    with pytest.raises(DomainError):
        catalog_instantiate("jerk", {}, condition="z")


def test_condition_resolution_derives_dependents():
    # 5.2c: a5 and a6 are forced by (a2, a4, c1); the constraints must all hold
    entry = CATALOG["ginevalls"]
    cond = entry.conditions["5.2c"]
    values = cond.resolve(entry.family, {"a2": "-1", "a4": "5/8", "c1": "1/2"})
    assert values["a5"] == mpq(5, 4)
    assert values["a6"] == mpq(125, 128)
    assert values["c2"] == mpq(1)
    entry.check_condition("5.2c", values)


def test_violated_condition_rejected():
    entry = CATALOG["moonrand"]
    cond = entry.conditions["bautin"]
    values = cond.resolve(entry.family, {"mu": "1", "b": "2"})
    values["c"] = mpq(5)  # breaks 2c - mu b = 0
    with pytest.raises(DomainError):
        entry.check_condition("bautin", values)


def test_condition_samples_are_deterministic_and_admissible():
    first = condition_samples("ginevalls", "5.2e", 3)
    second = condition_samples("ginevalls", "5.2e", 3)
    assert first == second
    for sample in first:
        catalog_instantiate("ginevalls", sample, condition="5.2e")


def count_conditions():
    return {name: len(entry.conditions) for name, entry in CATALOG.items()}


def test_catalog_coverage():
    counts = count_conditions()
    assert counts["jerk"] == 7  # a) through g)
    assert counts["ginevalls"] == 68  # every item of all 15 pairwise cases
    assert counts["emrs"] == 6  # the six Bautin-variety branches


@pytest.mark.slow
def test_every_center_condition_vanishes_through_l6_three_samples():
    for entry_name, entry in CATALOG.items():
        for label in entry.conditions:
            for sample in condition_samples(entry_name, label, 3):
                system = catalog_instantiate(entry_name, sample, condition=label)
                seq = lyapunov_constants(system, 6)
                assert seq.first_nonzero() is None, (entry_name, label, sample)
