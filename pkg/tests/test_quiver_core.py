from fractions import Fraction

import pytest
import sympy

from formats import parse_quiver_spec
from quiver_core import (
    Arrow,
    BoundQuiver,
    CompositionError,
    Path,
    Quiver,
    QuiverSpecError,
    compose_paths,
    format_element,
    ideal_spanning_vectors,
    make_relation,
    multiply,
)


def element(bq, *names):
    return {bq.quiver.path(list(names)): Fraction(1)}


def test_bondal_quiver_shape(bondal):
    assert bondal.name == "bondal"
    assert bondal.vertices == ("1", "2", "3")
    assert len(bondal.quiver.arrows) == 4
    assert [str(r) for r in bondal.relations] == ["b1*a2", "b2*a1"]


def test_bondal_algebra_has_dimension_nine(bondal):
    basis = bondal.basis
    assert basis.dimension == 9
    assert [str(p) for p in basis.normal_paths("1", "3")] == ["b1*a1", "b2*a2"]
    assert [str(p) for p in basis.normal_paths("1", "2")] == ["a1", "a2"]
    assert basis.normal_paths("3", "1") == ()


def test_relations_reduce_to_zero(bondal):
    basis = bondal.basis
    assert basis.reduce(bondal.quiver.path(["b1", "a2"])) == {}
    assert basis.reduce(bondal.quiver.path(["b2", "a1"])) == {}
    survivor = bondal.quiver.path(["b1", "a1"])
    assert basis.reduce(survivor) == {survivor: 1}


def test_a2_dimension(a2):
    assert a2.basis.dimension == 3


def test_compose_in_functional_order(bondal):
    b1 = bondal.quiver.path(["b1"])
    a1 = bondal.quiver.path(["a1"])
    composite = compose_paths(b1, a1)
    assert str(composite) == "b1*a1"
    assert (composite.source, composite.target) == ("1", "3")
    with pytest.raises(CompositionError):
        compose_paths(a1, b1)
    with pytest.raises(CompositionError):
        bondal.quiver.path(["a1", "b1"])


def test_multiply(bondal):
    basis = bondal.basis
    assert multiply(element(bondal, "b1"), element(bondal, "a1"), basis) == element(bondal, "b1", "a1")
    assert multiply(element(bondal, "b1"), element(bondal, "a2"), basis) == {}
    assert multiply(element(bondal, "a1"), element(bondal, "b1"), basis) == {}
    lazy = {Path.lazy("2"): Fraction(1)}
    assert multiply(element(bondal, "b2"), lazy, basis) == element(bondal, "b2")


def test_two_term_relation_rewrites_leading_path():
    bq = parse_quiver_spec(
        """
        quiver square
        vertices: 1 2 3
        arrows:
          a1: 1 -> 2
          a2: 1 -> 2
          b1: 2 -> 3
          b2: 2 -> 3
        relations:
          b1*a1 - b2*a2
        """
    )
    basis = bq.basis
    assert basis.dimension == 10
    reduced = basis.reduce(bq.quiver.path(["b1", "a1"]))
    assert format_element(reduced) in {"b2*a2", "b1*a1"}
    other = next(p for p in bq.quiver.paths("1", "3") if p not in reduced)
    assert basis.reduce(other) != {}


def test_dimension_count_against_sympy_rank(bondal):
    total = 0
    ideal_rank = 0
    for s in bondal.vertices:
        for t in bondal.vertices:
            columns = bondal.quiver.paths(s, t)
            total += len(columns)
            vectors = ideal_spanning_vectors(bondal, s, t)
            if vectors:
                ideal_rank += sympy.Matrix([[v.get(p, 0) for p in columns] for v in vectors]).rank()
    assert total - ideal_rank == bondal.basis.dimension


def test_cyclic_quiver_rejected():
    with pytest.raises(QuiverSpecError, match="cycle"):
        Quiver("loop", ("1", "2"), (Arrow("a", "1", "2"), Arrow("b", "2", "1")))


def test_relation_validation():
    quiver = Quiver("line", ("1", "2", "3"), (Arrow("a", "1", "2"), Arrow("b", "2", "3")))
    a = quiver.path(["a"])
    ba = quiver.path(["b", "a"])
    with pytest.raises(QuiverSpecError, match="length < 2"):
        make_relation([(Fraction(1), a)])
    with pytest.raises(QuiverSpecError, match="not parallel"):
        make_relation([(Fraction(1), ba), (Fraction(1), a)])
    with pytest.raises(QuiverSpecError, match="no nonzero"):
        make_relation([(Fraction(1), ba), (Fraction(-1), ba)])
    bq = BoundQuiver(quiver, (make_relation([(Fraction(2), ba)]),))
    assert bq.basis.dimension == 5


def test_topological_order(bondal):
    assert bondal.quiver.topological_order() == ("1", "2", "3")
