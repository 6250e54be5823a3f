import numpy as np
import pytest

from conftest import BONDAL_GRAM, BONDAL_PROJECTIVES
from formats import parse_quiver_spec
from homalg import (
    HomologicalError,
    cartan_matrix,
    euler_char,
    exceptionality,
    ext_dim,
    ext_dims,
    ext_table,
    global_dimension,
    gram_matrix_simples,
    minimal_resolution,
    projective_cover,
    relations_are_minimal,
    verify_resolution,
)
from ktheory import class_of
from representations import hom_basis, projective_rep, random_representation, simple_rep


def test_projective_resolves_itself(bondal):
    for v in bondal.vertices:
        res = minimal_resolution(projective_rep(bondal, v))
        assert res.terminated
        assert res.length == 0
        assert res.terms == ((v,),)


def test_source_simple_resolution(bondal):
    res = minimal_resolution(simple_rep(bondal, "1"))
    assert res.terminated
    assert res.terms == (("1",), ("2", "2"), ("3", "3"))
    assert res.multiplicities(1) == {"2": 2}
    assert verify_resolution(res).passed


def test_projective_cover_of_p(bondal_p):
    cover = projective_cover(bondal_p)
    assert cover.vertices == ("1",)
    assert cover.projective.dims == (1, 2, 2)
    assert cover.map.is_intertwiner()


def test_truncated_resolution_reports_it(bondal):
    res = minimal_resolution(simple_rep(bondal, "1"), 1)
    assert not res.terminated
    assert res.length == 1
    with pytest.raises(HomologicalError):
        ext_dims(simple_rep(bondal, "1"), simple_rep(bondal, "3"), 1)


def test_ext_between_simples_counts_arrows_and_relations(bondal):
    s = {v: simple_rep(bondal, v) for v in bondal.vertices}
    assert ext_dim(s["1"], s["2"], 1) == 2
    assert ext_dim(s["2"], s["3"], 1) == 2
    assert ext_dim(s["1"], s["3"], 1) == 0
    assert ext_dim(s["1"], s["3"], 2) == 2
    assert ext_dim(s["3"], s["1"], 1) == 0
    assert euler_char(s["1"], s["2"]) == -2
    for v in bondal.vertices:
        assert euler_char(s[v], s[v]) == 1


def test_p_is_exceptional(bondal_p):
    report = exceptionality(bondal_p)
    assert report.end_dimension == 1
    assert not any(report.higher_ext)
    assert report.exceptional
    assert ext_dim(bondal_p, bondal_p, 1) == 0
    assert ext_dim(bondal_p, bondal_p, 2) == 0
    assert euler_char(bondal_p, bondal_p) == 1
    assert verify_resolution(minimal_resolution(bondal_p)).passed


def test_simple_of_middle_vertex_is_exceptional(bondal):
    assert exceptionality(simple_rep(bondal, "2")).exceptional


def test_projectives_form_an_exceptional_collection(bondal):
    table = ext_table([projective_rep(bondal, v) for v in ("3", "2", "1")])
    for i in range(3):
        for j in range(3):
            for degree in (1, 2):
                assert table.entry(i, j, degree) == 0
            if i > j:
                assert table.entry(i, j, 0) == 0
            elif i < j:
                assert table.entry(i, j, 0) == 2
            else:
                assert table.entry(i, j, 0) == 1


def test_cartan_and_gram(bondal):
    cartan = cartan_matrix(bondal)
    assert [list(row) for row in cartan.entries] == BONDAL_PROJECTIVES
    assert cartan.is_unitriangular()
    gram = gram_matrix_simples(bondal)
    assert gram.route == "combinatorial"
    assert gram.global_dimension == 2
    assert gram.form.tolist() == BONDAL_GRAM
    product = np.array(BONDAL_PROJECTIVES, dtype=object).dot(gram.form.array)
    assert (product == np.identity(3, dtype=int)).all()


def test_gram_matches_ext_route(bondal):
    simples = [simple_rep(bondal, v) for v in bondal.vertices]
    assert [[euler_char(s, t) for t in simples] for s in simples] == BONDAL_GRAM


def test_ext_route_for_redundant_relations():
    bq = parse_quiver_spec(
        "quiver redundant\nvertices: 1 2 3 4\narrows:\n  a: 1 -> 2\n  b: 2 -> 3\n  c: 3 -> 4\n"
        "relations:\n  b*a\n  c*b*a\n"
    )
    assert not relations_are_minimal(bq)
    gram = gram_matrix_simples(bq)
    assert gram.route == "ext"
    simples = [simple_rep(bq, v) for v in bq.vertices]
    assert gram.form.tolist() == [[euler_char(s, t) for t in simples] for s in simples]


def test_point_gram(point):
    gram = gram_matrix_simples(point)
    assert gram.form.tolist() == [[1]]
    assert gram.global_dimension == 0


def test_global_dimensions(bondal, a2, point):
    assert global_dimension(bondal) == 2
    assert global_dimension(a2) == 1
    assert global_dimension(point) == 0
    semisimple = parse_quiver_spec("quiver pair\nvertices: 1 2\n")
    assert global_dimension(semisimple) == 0


def test_euler_characteristic_matches_gram_on_random_pairs(bondal, bondal_form, rng):
    for _ in range(20):
        m = random_representation(bondal, rng)
        n = random_representation(bondal, rng)
        dims = ext_dims(m, n)
        assert euler_char(m, n) == bondal_form.chi(class_of(m), class_of(n))
        assert dims[0] == hom_basis(m, n).dimension
        assert not any(dims[3:])
        assert verify_resolution(minimal_resolution(m)).passed


def test_duality_on_random_monomial_algebras():
    import random

    from ktheory import projective_class
    from property_suites import random_algebra_duality, random_monomial_algebra

    rng = random.Random(11)
    checked = 0
    for _ in range(50):
        bq = random_monomial_algebra(rng)
        gram = gram_matrix_simples(bq)
        if gram.global_dimension is None or gram.global_dimension > 2:
            continue
        d = np.array([projective_class(bq, v) for v in bq.vertices], dtype=object)
        assert (d.dot(gram.form.array) == np.identity(len(bq.vertices), dtype=int)).all()
        simples = [simple_rep(bq, v) for v in bq.vertices]
        assert tuple(tuple(euler_char(s, t) for t in simples) for s in simples) == gram.form.matrix
        checked += 1
        if checked == 5:
            break
    assert checked == 5
    assert random_algebra_duality(random.Random(12)).passed


def test_ext_table_euler_matches_gram(bondal):
    table = ext_table([simple_rep(bondal, v) for v in bondal.vertices])
    assert table.names == ("S_1", "S_2", "S_3")
    for i in range(3):
        for j in range(3):
            assert table.euler(i, j) == BONDAL_GRAM[i][j]
