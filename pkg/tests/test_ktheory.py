import random

import pytest

from ktheory import (
    GramForm,
    KTheoryError,
    NotExceptionalError,
    apply_braid_word,
    braid_act,
    chi,
    class_of,
    exceptional_sequence,
    insertion_lattice,
    is_exceptional_class,
    is_exceptional_pair,
    is_numerical_exceptional_sequence,
    mutate_left,
    mutate_right,
    orthogonal_lattice,
    projective_class,
    projective_exceptional_sequence,
    random_exceptional_sequence,
    random_unitriangular_form,
    spans_full_lattice,
)
from representations import direct_sum, simple_rep

PROJECTIVE_ORDER = [(0, 0, 1), (0, 1, 2), (1, 2, 2)]


def test_class_of(bondal, bondal_p):
    assert class_of(bondal_p) == (1, 1, 1)
    assert class_of(simple_rep(bondal, "2")) == (0, 1, 0)
    assert class_of(direct_sum(bondal_p, simple_rep(bondal, "3"))) == (1, 1, 2)


def test_chi_values(bondal_form):
    assert chi((1, 1, 1), (1, 1, 1), bondal_form) == 1
    assert is_exceptional_class((1, 1, 1), bondal_form)
    assert not is_exceptional_class((1, 1, 0), bondal_form)
    for k in range(3):
        e = tuple(int(i == k) for i in range(3))
        assert chi(e, e, bondal_form) == 1
    with pytest.raises(KTheoryError):
        chi((1, 1), (1, 1, 1), bondal_form)


def test_bi_orthogonal_of_p(bondal_form):
    lattice = orthogonal_lattice([(1, 1, 1)], bondal_form, "bi")
    assert lattice.rank == 2
    assert lattice.basis == ((1, 0, -1), (0, 1, 1))
    for side in ("left", "right"):
        assert orthogonal_lattice([(1, 1, 1)], bondal_form, side).basis == lattice.basis


def test_orthogonal_extremes(bondal_form):
    simples = [(1, 0, 0), (0, 1, 0), (0, 0, 1)]
    assert orthogonal_lattice(simples, bondal_form).rank == 0
    assert orthogonal_lattice([], bondal_form).basis == tuple(simples)
    with pytest.raises(KTheoryError):
        orthogonal_lattice([], bondal_form, "up")


def test_insertion_lattice_conditions(bondal_form):
    lattice = insertion_lattice([(0, 0, 1)], [], bondal_form, "left")
    for u in lattice.basis:
        assert bondal_form.chi(u, (0, 0, 1)) == 0


def test_mutations_of_adjacent_projectives(bondal_form):
    v, w = PROJECTIVE_ORDER[0], PROJECTIVE_ORDER[1]
    assert bondal_form.chi(v, w) == 2
    left = mutate_left((v, w), bondal_form)
    assert left == ((0, 1, 0), v)
    assert bondal_form.chi(left[0], left[0]) == 1
    assert mutate_right(left, bondal_form) == (v, w)
    assert mutate_left(mutate_right((v, w), bondal_form), bondal_form) == (v, w)


def test_orthogonal_pair_swaps():
    form = GramForm.from_rows([[1, 0], [0, 1]])
    assert mutate_left(((1, 0), (0, 1)), form) == ((0, 1), (1, 0))
    assert mutate_right(((1, 0), (0, 1)), form) == ((0, 1), (1, 0))


def test_mutation_rejects_non_pairs(bondal_form):
    with pytest.raises(NotExceptionalError):
        mutate_left(((0, 1, 2), (0, 0, 1)), bondal_form)


def test_projective_sequence(bondal, bondal_form):
    assert [projective_class(bondal, v) for v in bondal.vertices] == [(1, 2, 2), (0, 1, 2), (0, 0, 1)]
    seq = projective_exceptional_sequence(bondal, bondal_form)
    assert list(seq.classes) == PROJECTIVE_ORDER
    assert seq.is_full
    assert is_numerical_exceptional_sequence(PROJECTIVE_ORDER, bondal_form)


def test_sequence_predicate_is_order_sensitive(bondal_form):
    simples = [(1, 0, 0), (0, 1, 0), (0, 0, 1)]
    assert is_numerical_exceptional_sequence(simples, bondal_form)
    assert not is_numerical_exceptional_sequence(simples[::-1], bondal_form)
    assert is_numerical_exceptional_sequence([(1, 1, 1)], bondal_form)
    with pytest.raises(NotExceptionalError):
        exceptional_sequence(simples[::-1], bondal_form)


def test_braid_word(bondal_form):
    seq = exceptional_sequence(PROJECTIVE_ORDER, bondal_form)
    once = braid_act(seq, 1)
    assert once.classes == ((0, 1, 0), (0, 0, 1), (1, 2, 2))
    assert apply_braid_word(seq, [1, -1]) == seq
    assert apply_braid_word(seq, [2, -2, -1, 1]) == seq
    assert spans_full_lattice(apply_braid_word(seq, [1, 2, -1, 2]).classes)
    with pytest.raises(KTheoryError):
        apply_braid_word(seq, [0])
    with pytest.raises(KTheoryError):
        braid_act(seq, 3)


def test_braid_relation_on_bondal_orbit(bondal_form):
    rng = random.Random(3)
    start = exceptional_sequence(PROJECTIVE_ORDER, bondal_form)
    for _ in range(50):
        seq = random_exceptional_sequence(rng, bondal_form, steps=rng.randint(0, 5), start=start)
        one = apply_braid_word(seq, [1, 2, 1])
        two = apply_braid_word(seq, [2, 1, 2])
        assert one == two
        assert spans_full_lattice(one.classes)


def test_mutation_laws_on_random_forms():
    rng = random.Random(11)
    for _ in range(50):
        form = random_unitriangular_form(rng, rng.randint(2, 5))
        seq = random_exceptional_sequence(rng, form, steps=rng.randint(0, 6))
        i = rng.randint(1, len(seq) - 1)
        left, right = braid_act(seq, i), braid_act(seq, i, inverse=True)
        for mutated in (left, right):
            assert is_exceptional_pair(mutated.classes[i - 1], mutated.classes[i], form)
        assert braid_act(left, i, inverse=True) == seq
        assert braid_act(right, i) == seq


def test_unitriangular_form():
    form = random_unitriangular_form(random.Random(0), 4)
    assert form.is_unitriangular()
    assert not GramForm.from_rows([[1, 0], [1, 1]]).is_unitriangular()
    with pytest.raises(KTheoryError):
        GramForm.from_rows([[1, 0]])
