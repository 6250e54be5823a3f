import random

from property_suites import confluence, dimension_count, mutation_laws, run_property_suites


def test_every_suite_passes_on_bondal(bondal):
    results = run_property_suites(bondal, seed=3)
    assert [r.name for r in results if not r.passed] == []
    assert all(r.checked > 0 for r in results)


def test_suites_on_a2(a2):
    assert confluence(a2).passed
    assert dimension_count(a2).passed


def test_mutation_laws_are_seeded():
    first = mutation_laws(random.Random(7), trials=10)
    second = mutation_laws(random.Random(7), trials=10)
    assert first == second
    assert first.passed
