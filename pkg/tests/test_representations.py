from fractions import Fraction

import pytest

from linalg import QMatrix
from representations import (
    RelationViolation,
    RepresentationError,
    compose_hom,
    direct_sum,
    generated_subspaces,
    hom_basis,
    identity_morphism,
    kernel_of_composition,
    make_representation,
    path_morphism,
    projective_rep,
    quotient,
    random_representation,
    simple_rep,
    subrepresentation,
    verify_path_algebra_realization,
    zero_morphism,
    zero_rep,
)


def test_make_representation_checks_relations(bondal):
    ones = {name: [[1]] for name in ("a1", "a2", "b1", "b2")}
    with pytest.raises(RelationViolation) as info:
        make_representation(bondal, (1, 1, 1), ones)
    assert str(info.value.relation) == "b1*a2"
    assert info.value.residual.tolist() == [[1]]


def test_make_representation_shape_errors(bondal):
    with pytest.raises(RepresentationError, match="shape"):
        make_representation(bondal, (1, 2, 0), {"a1": [[1, 0]]})
    with pytest.raises(RepresentationError, match="unknown arrow"):
        make_representation(bondal, (1, 1, 1), {"c": [[1]]})
    with pytest.raises(RepresentationError, match="expected 3 dimensions"):
        make_representation(bondal, (1, 1))


def test_zero_and_simple_representations(bondal):
    assert zero_rep(bondal).dims == (0, 0, 0)
    assert simple_rep(bondal, "1").dims == (1, 0, 0)
    assert simple_rep(bondal, "3").dims == (0, 0, 1)
    assert hom_basis(simple_rep(bondal, "1"), simple_rep(bondal, "2")).dimension == 0
    assert hom_basis(simple_rep(bondal, "1"), simple_rep(bondal, "1")).dimension == 1


def test_projective_dimension_vectors(bondal):
    assert [projective_rep(bondal, v).dims for v in ("1", "2", "3")] == [(1, 2, 2), (0, 1, 2), (0, 0, 1)]


def test_point_projective_is_simple(point):
    assert projective_rep(point, "1") == simple_rep(point, "1")


def test_hom_between_projectives(bondal):
    p = {v: projective_rep(bondal, v) for v in bondal.vertices}
    assert hom_basis(p["3"], p["2"]).dimension == 2
    assert hom_basis(p["2"], p["1"]).dimension == 2
    assert hom_basis(p["3"], p["1"]).dimension == 2
    assert hom_basis(p["1"], p["2"]).dimension == 0
    assert hom_basis(p["2"], p["3"]).dimension == 0
    assert hom_basis(p["1"], p["3"]).dimension == 0


def test_hom_members_intertwine(bondal, rng):
    m = random_representation(bondal, rng)
    n = random_representation(bondal, rng)
    for f in hom_basis(m, n):
        assert f.is_intertwiner()


def test_end_of_p_is_scalars(bondal_p):
    end = hom_basis(bondal_p, bondal_p)
    assert end.dimension == 1
    kernel = kernel_of_composition(bondal_p, bondal_p, bondal_p)
    assert kernel.rank == 1
    assert kernel.kernel == ()


def test_composition_kernel_of_bondal_projectives(bondal):
    q = bondal.quiver
    first = [path_morphism(bondal, q.path([name])) for name in ("b1", "b2")]
    second = [path_morphism(bondal, q.path([name])) for name in ("a1", "a2")]
    p1, p2, p3 = (projective_rep(bondal, v) for v in ("1", "2", "3"))
    kernel = kernel_of_composition(p3, p2, p1, first, second)
    assert kernel.tensor_dimension == 4
    assert kernel.rank == 2
    assert kernel.surjective
    # b1 ⊗ a2 and b2 ⊗ a1
    assert kernel.kernel_tensors() == [{(0, 1): Fraction(1)}, {(1, 0): Fraction(1)}]


def test_composition_kernel_with_canonical_bases(bondal):
    p1, p2, p3 = (projective_rep(bondal, v) for v in ("1", "2", "3"))
    kernel = kernel_of_composition(p3, p2, p1)
    assert (kernel.tensor_dimension, kernel.rank, len(kernel.kernel)) == (4, 2, 2)


def test_identity_composes_neutrally(bondal, rng):
    m = random_representation(bondal, rng)
    n = random_representation(bondal, rng)
    for f in hom_basis(m, n):
        assert compose_hom(identity_morphism(m), f) == f
        assert compose_hom(f, identity_morphism(n)) == f


def test_direct_sum(bondal, rng):
    s1, s2 = simple_rep(bondal, "1"), simple_rep(bondal, "2")
    assert direct_sum(s1, s2).dims == (1, 1, 0)
    m = random_representation(bondal, rng)
    padded = direct_sum(m, zero_rep(bondal))
    assert padded == m
    assert hom_basis(padded, m).coordinates(identity_morphism(m)) is not None
    for _ in range(10):
        m, n, l = (random_representation(bondal, rng) for _ in range(3))
        total = hom_basis(direct_sum(m, n), l).dimension
        assert total == hom_basis(m, l).dimension + hom_basis(n, l).dimension


def test_yoneda_on_random_representations(bondal, rng):
    for _ in range(20):
        m = random_representation(bondal, rng)
        for v in bondal.vertices:
            assert hom_basis(projective_rep(bondal, v), m).dimension == m.dim(v)


def test_relation_soundness_under_perturbation(bondal, bondal_p, rng):
    for _ in range(20):
        values = {name: rng.randint(-1, 1) for name in ("a1", "a2", "b1", "b2")}
        matrices = {name: [[value]] for name, value in values.items()}
        consistent = values["b1"] * values["a2"] == 0 and values["b2"] * values["a1"] == 0
        if consistent:
            assert make_representation(bondal, (1, 1, 1), matrices).dims == (1, 1, 1)
        else:
            with pytest.raises(RelationViolation):
                make_representation(bondal, (1, 1, 1), matrices)


def test_composition_is_associative(bondal, rng):
    for _ in range(5):
        m, n, l, k = (random_representation(bondal, rng) for _ in range(4))
        for f in hom_basis(m, n):
            for g in hom_basis(n, l):
                for h in hom_basis(l, k):
                    assert compose_hom(compose_hom(f, g), h) == compose_hom(f, compose_hom(g, h))


def test_sub_and_quotient(bondal):
    p1 = projective_rep(bondal, "1")
    spaces = generated_subspaces(p1, [("2", [1, 0])])
    sub, inclusion = subrepresentation(p1, spaces)
    assert sub.dims == (0, 1, 1)
    assert inclusion.is_intertwiner()
    top, projection = quotient(p1, spaces)
    assert top.dims == (1, 1, 1)
    assert projection.is_intertwiner()
    assert compose_hom(inclusion, projection).is_zero()


def test_unstable_subspace_rejected(bondal):
    p1 = projective_rep(bondal, "1")
    with pytest.raises(RepresentationError, match="not stable"):
        subrepresentation(p1, {"1": [[1]]})


def test_zero_morphism_shape(bondal, bondal_p):
    f = zero_morphism(bondal_p, projective_rep(bondal, "1"))
    assert f.is_zero()
    assert [block.shape for block in f.components] == [(1, 1), (2, 1), (2, 1)]


def test_path_algebra_realization(bondal, a2):
    for bq in (bondal, a2):
        check = verify_path_algebra_realization(bq)
        assert check.passed, check.failures


def test_random_representations_respect_bounds(bondal, rng):
    for _ in range(20):
        m = random_representation(bondal, rng, max_dim=3)
        assert all(d <= 3 for d in m.dims)
        assert m.label() == "random"


def test_element_matrix_rejects_foreign_paths(bondal_p, bondal):
    path = bondal.quiver.path(["a1"])
    assert bondal_p.element_matrix({path: Fraction(2)}, "1", "2") == QMatrix.from_rows([[2]])
    with pytest.raises(RepresentationError):
        bondal_p.element_matrix({path: Fraction(1)}, "2", "3")


def test_compose_hom_needs_matching_representations(bondal):
    upper = make_representation(bondal, (1, 1, 1), {"a1": [[1]], "b1": [[1]]})
    lower = make_representation(bondal, (1, 1, 1), {"a2": [[1]], "b2": [[1]]})
    with pytest.raises(RepresentationError, match="not composable"):
        compose_hom(identity_morphism(upper), identity_morphism(lower))
    same = make_representation(bondal, (1, 1, 1), {"a1": [[1]], "b1": [[1]]}, name="P")
    assert compose_hom(identity_morphism(upper), identity_morphism(same)) == identity_morphism(upper)
