"""Seeded randomized property suites, shared by the CLI ``properties`` command and the tests."""

import logging
import random
from dataclasses import dataclass
from fractions import Fraction
from typing import Callable, Dict, List, Tuple

import sympy

from homalg import (
    DEFAULT_RESOLUTION_BOUND,
    ext_dims,
    euler_char,
    global_dimension,
    gram_matrix_simples,
    minimal_resolution,
    verify_resolution,
)
from ktheory import (
    GramForm,
    KTheoryError,
    braid_act,
    class_of,
    is_exceptional_pair,
    projective_class,
    random_exceptional_sequence,
    random_unitriangular_form,
)
from quiver_core import (
    Arrow,
    BoundQuiver,
    Path,
    Quiver,
    element_of,
    ideal_spanning_vectors,
    make_relation,
    multiply,
)
from representations import (
    hom_basis,
    projective_rep,
    random_representation,
    simple_rep,
    verify_path_algebra_realization,
)

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class PropertyResult:
    name: str
    passed: bool
    checked: int
    failures: Tuple[str, ...]


def _result(name: str, checked: int, failures: List[str]) -> PropertyResult:
    return PropertyResult(name, not failures, checked, tuple(failures[:10]))


def _arrow_element(bq: BoundQuiver, name: str) -> Dict[Path, Fraction]:
    arrow = bq.quiver.arrow(name)
    return element_of(Path(arrow.source, arrow.target, (name,)))


def associativity(bq: BoundQuiver, rng: random.Random, trials: int = 100) -> PropertyResult:
    elements = bq.basis.elements()
    failures = []
    for _ in range(trials):
        x, y, z = (element_of(rng.choice(elements), Fraction(rng.randint(1, 5))) for _ in range(3))
        if multiply(multiply(x, y, bq.basis), z, bq.basis) != multiply(x, multiply(y, z, bq.basis), bq.basis):
            failures.append(f"({x})({y})({z}) is not associative")
    return _result("associativity", trials, failures)


def confluence(bq: BoundQuiver, max_length: int = 4) -> PropertyResult:
    basis = bq.basis
    failures = []
    checked = 0
    for vertex in bq.vertices:
        for path in bq.quiver.paths_from(vertex):
            if not 1 <= path.length <= max_length:
                continue
            checked += 1
            factors = [_arrow_element(bq, name) for name in path.arrows]
            left_first = factors[0]
            for factor in factors[1:]:
                left_first = multiply(left_first, factor, basis)
            right_first = factors[-1]
            for factor in reversed(factors[:-1]):
                right_first = multiply(factor, right_first, basis)
            if not left_first == right_first == basis.reduce(path):
                failures.append(f"{path} reduces differently by association order")
    return _result("confluence", checked, failures)


def dimension_count(bq: BoundQuiver) -> PropertyResult:
    basis = bq.basis
    failures = []
    all_paths = 0
    ideal_rank = 0
    for source in bq.vertices:
        for target in bq.vertices:
            columns = bq.quiver.paths(source, target)
            all_paths += len(columns)
            vectors = ideal_spanning_vectors(bq, source, target)
            if vectors and columns:
                ideal_rank += sympy.Matrix([[v.get(p, 0) for p in columns] for v in vectors]).rank()
    if basis.dimension != sum(len(paths) for paths in basis.normal.values()):
        failures.append("dimension differs from the number of normal paths")
    if basis.dimension != all_paths - ideal_rank:
        failures.append(f"dimension {basis.dimension} but dim kQ - rank I = {all_paths - ideal_rank}")
    return _result("dimension count", 1, failures)


def yoneda(bq: BoundQuiver, rng: random.Random, samples: int = 20) -> PropertyResult:
    failures = []
    for _ in range(samples):
        rep = random_representation(bq, rng)
        for vertex in bq.vertices:
            dim = hom_basis(projective_rep(bq, vertex), rep).dimension
            if dim != rep.dim(vertex):
                failures.append(f"dim Hom(P_{vertex}, M) = {dim} but dim M_{vertex} = {rep.dim(vertex)} for {rep.dims}")
    return _result("yoneda", samples * len(bq.vertices), failures)


def euler_vs_gram(
    bq: BoundQuiver,
    rng: random.Random,
    pairs: int = 20,
    bound: int = DEFAULT_RESOLUTION_BOUND,
) -> PropertyResult:
    form = gram_matrix_simples(bq, bound).form
    gldim = global_dimension(bq, bound)
    failures = []
    for _ in range(pairs):
        m, n = random_representation(bq, rng), random_representation(bq, rng)
        dims = ext_dims(m, n, bound)
        if euler_char(m, n, bound) != form.chi(class_of(m), class_of(n)):
            failures.append(f"χ({m.dims}, {n.dims}) disagrees with the Euler characteristic")
        if dims[0] != hom_basis(m, n).dimension:
            failures.append(f"Ext^0({m.dims}, {n.dims}) differs from Hom")
        if gldim is not None and any(dims[gldim + 1:]):
            failures.append(f"Ext above global dimension {gldim} for {m.dims}, {n.dims}")
        if not verify_resolution(minimal_resolution(m, bound)).passed:
            failures.append(f"resolution of {m.dims} fails its checks")
    return _result("euler characteristic vs gram", pairs, failures)


def gram_cartan_duality(bq: BoundQuiver, bound: int = DEFAULT_RESOLUTION_BOUND) -> PropertyResult:
    form = gram_matrix_simples(bq, bound).form
    d = sympy.Matrix([projective_class(bq, v) for v in bq.vertices])
    product = d * sympy.Matrix(form.matrix)
    failures = [] if product == sympy.eye(form.rank) else [f"D·G = {product.tolist()}"]
    return _result("gram-cartan duality", 1, failures)


def random_monomial_algebra(rng: random.Random, max_vertices: int = 4, max_multiplicity: int = 2) -> BoundQuiver:
    """Acyclic quiver on vertices 1..n (arrows only go up) with random length-2 zero relations."""
    n = rng.randint(2, max_vertices)
    vertices = tuple(str(k + 1) for k in range(n))
    arrows: List[Arrow] = []
    for i in range(n):
        for j in range(i + 1, n):
            for _ in range(rng.randint(0, max_multiplicity if j == i + 1 else 1)):
                arrows.append(Arrow(f"x{len(arrows) + 1}", vertices[i], vertices[j]))
    quiver = Quiver(f"random{n}", vertices, tuple(arrows))
    relations = tuple(
        make_relation([(Fraction(1), quiver.path([later.name, earlier.name]))])
        for earlier in arrows
        for later in arrows
        if earlier.target == later.source and rng.random() < 0.5
    )
    return BoundQuiver(quiver, relations)


def random_algebra_duality(
    rng: random.Random, count: int = 5, bound: int = DEFAULT_RESOLUTION_BOUND, attempts: int = 50
) -> PropertyResult:
    """D·G = I and the Gram matrix equals the Ext-computed Euler form on random algebras of gl.dim <= 2."""
    failures = []
    checked = 0
    for _ in range(attempts):
        if checked == count:
            break
        bq = random_monomial_algebra(rng)
        gram = gram_matrix_simples(bq, bound)
        if gram.global_dimension is None or gram.global_dimension > 2:
            continue
        checked += 1
        d = sympy.Matrix([projective_class(bq, v) for v in bq.vertices])
        if d * sympy.Matrix(gram.form.matrix) != sympy.eye(gram.form.rank):
            failures.append(f"D·G != I on {bq.quiver.arrows} with relations {[str(r) for r in bq.relations]}")
        simples = [simple_rep(bq, v) for v in bq.vertices]
        by_ext = tuple(tuple(euler_char(s, t, bound) for t in simples) for s in simples)
        if by_ext != gram.form.matrix:
            failures.append(f"{gram.route} gram {gram.form.matrix} differs from the Ext table {by_ext}")
    if checked < count:
        failures.append(f"only {checked} algebras of global dimension <= 2 in {attempts} draws")
    return _result("gram-cartan duality on random algebras", checked, failures)


def path_algebra_realization(bq: BoundQuiver) -> PropertyResult:
    check = verify_path_algebra_realization(bq)
    return _result("path algebra realization", check.checked, list(check.failures))


def mutation_laws(rng: random.Random, trials: int = 50) -> PropertyResult:
    """Mutations keep exceptional pairs, are mutually inverse, and satisfy the braid relation."""
    failures = []
    for _ in range(trials):
        form: GramForm = random_unitriangular_form(rng, rng.randint(2, 5))
        seq = random_exceptional_sequence(rng, form, steps=rng.randint(0, 6))
        i = rng.randint(1, len(seq) - 1)
        try:
            left = braid_act(seq, i)
            right = braid_act(seq, i, inverse=True)
        except KTheoryError as exc:
            failures.append(str(exc))
            continue
        for mutated in (left, right):
            if not is_exceptional_pair(mutated.classes[i - 1], mutated.classes[i], form):
                failures.append(f"mutation at {i} of {seq.classes} left the pair predicate")
        if braid_act(left, i, inverse=True) != seq or braid_act(right, i) != seq:
            failures.append(f"mutations at {i} of {seq.classes} are not mutually inverse")
        if len(seq) >= 3:
            j = rng.randint(1, len(seq) - 2)
            one = braid_act(braid_act(braid_act(seq, j), j + 1), j)
            two = braid_act(braid_act(braid_act(seq, j + 1), j), j + 1)
            if one != two:
                failures.append(f"braid relation fails at {j} on {seq.classes}")
    return _result("mutation laws", trials, failures)


def run_property_suites(
    bq: BoundQuiver, seed: int = 0, bound: int = DEFAULT_RESOLUTION_BOUND
) -> List[PropertyResult]:
    def rng(name: str) -> random.Random:
        return random.Random(f"{seed}:{name}")

    suites: List[Callable[[], PropertyResult]] = [
        lambda: associativity(bq, rng("associativity")),
        lambda: confluence(bq),
        lambda: dimension_count(bq),
        lambda: path_algebra_realization(bq),
        lambda: yoneda(bq, rng("yoneda")),
        lambda: euler_vs_gram(bq, rng("euler"), bound=bound),
        lambda: gram_cartan_duality(bq, bound),
        lambda: random_algebra_duality(rng("random algebras"), bound=bound),
        lambda: mutation_laws(rng("mutation")),
    ]
    results = []
    for suite in suites:
        result = suite()
        logger.info("%s: %s (%d checks)", result.name, "passed" if result.passed else "FAILED", result.checked)
        results.append(result)
    return results
