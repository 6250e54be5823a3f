"""Finite-dimensional representations of a bound quiver and their morphisms.

Representations are covariant: an arrow ``a: s -> t`` acts by a matrix of
shape dim(t) x dim(s). The projective ``P_v`` is spanned by the normal paths
starting at ``v``, so ``Hom(P_j, P_i)`` is spanned by the normal paths
``i -> j`` (see ``path_morphism``).
"""

import logging
import random
from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache
from typing import Dict, Iterable, List, Mapping, Optional, Sequence, Tuple, Union

from linalg import (
    QMatrix,
    Vector,
    block_diagonal,
    complement_indices,
    coordinates,
    echelon_form,
    nullspace,
    rank,
    to_fraction,
)
from quiver_core import BoundQuiver, Element, Path, Quiver, RelationExpr, compose_paths

logger = logging.getLogger(__name__)

MatrixLike = Union[QMatrix, Sequence[Sequence[Union[int, Fraction, str]]]]


class RepresentationError(ValueError):
    pass


class RelationViolation(RepresentationError):
    def __init__(self, relation: RelationExpr, residual: QMatrix):
        self.relation = relation
        self.residual = residual
        super().__init__(f"relation {relation} evaluates to {residual} != 0")


@dataclass(frozen=True)
class Representation:
    bound_quiver: BoundQuiver
    dims: Tuple[int, ...]
    matrices: Tuple[QMatrix, ...]
    name: Optional[str] = field(default=None, compare=False)

    @property
    def quiver(self) -> Quiver:
        return self.bound_quiver.quiver

    @property
    def dimension_vector(self) -> Tuple[int, ...]:
        return self.dims

    @property
    def total_dimension(self) -> int:
        return sum(self.dims)

    def dim(self, vertex: str) -> int:
        return self.dims[self.quiver.index(vertex)]

    def matrix(self, arrow: str) -> QMatrix:
        for k, candidate in enumerate(self.quiver.arrows):
            if candidate.name == arrow:
                return self.matrices[k]
        raise RepresentationError(f"unknown arrow {arrow!r}")

    def path_matrix(self, path: Path) -> QMatrix:
        if path.is_lazy:
            return QMatrix.identity(self.dim(path.source))
        result = self.matrix(path.arrows[-1])
        for name in reversed(path.arrows[:-1]):
            result = self.matrix(name) @ result
        return result

    def element_matrix(self, x: Mapping[Path, Fraction], source: str, target: str) -> QMatrix:
        """Action of an algebra element whose paths all run ``source -> target``."""
        result = QMatrix.zeros(self.dim(target), self.dim(source))
        for path, coefficient in x.items():
            if (path.source, path.target) != (source, target):
                raise RepresentationError(f"path {path} does not run {source} -> {target}")
            result = result + self.path_matrix(path).scale(coefficient)
        return result

    def label(self) -> str:
        return self.name or "(" + ",".join(str(d) for d in self.dims) + ")"


def _as_matrix(value: MatrixLike, nrows: int, ncols: int, arrow: str) -> QMatrix:
    if isinstance(value, QMatrix):
        matrix = value
    else:
        rows = [list(row) for row in value]
        if not rows and (nrows == 0 or ncols == 0):
            # an empty block stands for the empty matrix of the expected shape
            return QMatrix.zeros(nrows, ncols)
        try:
            matrix = QMatrix.from_rows(rows, ncols=len(rows[0]))
        except ValueError as exc:
            raise RepresentationError(f"matrix of arrow {arrow!r} is ragged") from exc
    if matrix.shape != (nrows, ncols):
        raise RepresentationError(
            f"matrix of arrow {arrow!r} has shape {matrix.nrows}x{matrix.ncols}, expected {nrows}x{ncols}"
        )
    return matrix


def make_representation(
    bq: BoundQuiver,
    dims: Union[Mapping[str, int], Sequence[int]],
    matrices: Optional[Mapping[str, MatrixLike]] = None,
    name: Optional[str] = None,
) -> Representation:
    """Build a representation, checking shapes and that every relation acts by zero.

    Vertices missing from ``dims`` get dimension 0; arrows missing from
    ``matrices`` get the zero matrix.
    """
    quiver = bq.quiver
    if isinstance(dims, Mapping):
        for vertex in dims:
            if vertex not in quiver.vertices:
                raise RepresentationError(f"unknown vertex {vertex!r}")
        dimension = tuple(int(dims.get(v, 0)) for v in quiver.vertices)
    else:
        if len(dims) != len(quiver.vertices):
            raise RepresentationError(f"expected {len(quiver.vertices)} dimensions, got {len(dims)}")
        dimension = tuple(int(d) for d in dims)
    if any(d < 0 for d in dimension):
        raise RepresentationError("dimensions must be nonnegative")

    matrices = dict(matrices or {})
    known = {a.name for a in quiver.arrows}
    for arrow_name in matrices:
        if arrow_name not in known:
            raise RepresentationError(f"unknown arrow {arrow_name!r}")

    built = []
    for arrow in quiver.arrows:
        nrows = dimension[quiver.index(arrow.target)]
        ncols = dimension[quiver.index(arrow.source)]
        if arrow.name in matrices:
            built.append(_as_matrix(matrices[arrow.name], nrows, ncols, arrow.name))
        else:
            built.append(QMatrix.zeros(nrows, ncols))

    rep = Representation(bq, dimension, tuple(built), name)
    for relation in bq.relations:
        residual = QMatrix.zeros(rep.dim(relation.target), rep.dim(relation.source))
        for coefficient, path in relation.terms:
            residual = residual + rep.path_matrix(path).scale(coefficient)
        if not residual.is_zero():
            raise RelationViolation(relation, residual)
    return rep


def zero_rep(bq: BoundQuiver) -> Representation:
    return make_representation(bq, [0] * len(bq.vertices), name="0")


def simple_rep(bq: BoundQuiver, vertex: str) -> Representation:
    bq.quiver.index(vertex)
    return make_representation(bq, {vertex: 1}, name=f"S_{vertex}")


def projective_basis(bq: BoundQuiver, vertex: str) -> Dict[str, Tuple[Path, ...]]:
    bq.quiver.index(vertex)
    basis = bq.basis
    return {w: basis.normal_paths(vertex, w) for w in bq.vertices}


def _coordinates_in(paths: Sequence[Path], x: Mapping[Path, Fraction]) -> List[Fraction]:
    position = {p: k for k, p in enumerate(paths)}
    column = [Fraction(0)] * len(paths)
    for path, coefficient in x.items():
        column[position[path]] += coefficient
    return column


@lru_cache(maxsize=256)
def projective_rep(bq: BoundQuiver, vertex: str) -> Representation:
    spaces = projective_basis(bq, vertex)
    basis = bq.basis
    matrices = {}
    for arrow in bq.quiver.arrows:
        step = Path(arrow.source, arrow.target, (arrow.name,))
        columns = [
            _coordinates_in(spaces[arrow.target], basis.reduce(compose_paths(step, p)))
            for p in spaces[arrow.source]
        ]
        matrices[arrow.name] = QMatrix.from_columns(columns, len(spaces[arrow.target]))
    return make_representation(bq, {w: len(spaces[w]) for w in bq.vertices}, matrices, name=f"P_{vertex}")


@dataclass(frozen=True)
class Morphism:
    source: Representation
    target: Representation
    components: Tuple[QMatrix, ...]

    def component(self, vertex: str) -> QMatrix:
        return self.components[self.source.quiver.index(vertex)]

    def vector(self) -> Vector:
        return tuple(a for block in self.components for a in block.flatten())

    def is_zero(self) -> bool:
        return all(block.is_zero() for block in self.components)

    def __add__(self, other: "Morphism") -> "Morphism":
        return Morphism(self.source, self.target, tuple(a + b for a, b in zip(self.components, other.components)))

    def scale(self, factor: Union[int, Fraction]) -> "Morphism":
        return Morphism(self.source, self.target, tuple(block.scale(factor) for block in self.components))

    def is_intertwiner(self) -> bool:
        quiver = self.source.quiver
        for k, arrow in enumerate(quiver.arrows):
            left = self.target.matrices[k] @ self.component(arrow.source)
            right = self.component(arrow.target) @ self.source.matrices[k]
            if left != right:
                return False
        return True


def zero_morphism(source: Representation, target: Representation) -> Morphism:
    return Morphism(
        source,
        target,
        tuple(QMatrix.zeros(n, m) for m, n in zip(source.dims, target.dims)),
    )


def identity_morphism(rep: Representation) -> Morphism:
    return Morphism(rep, rep, tuple(QMatrix.identity(d) for d in rep.dims))


def compose_hom(f: Morphism, g: Morphism) -> Morphism:
    """g∘f for f: M -> N and g: N -> L."""
    if f.target != g.source:
        raise RepresentationError("morphisms are not composable: target and source differ")
    return Morphism(f.source, g.target, tuple(b @ a for a, b in zip(f.components, g.components)))


@dataclass(frozen=True)
class HomBasis:
    source: Representation
    target: Representation
    morphisms: Tuple[Morphism, ...]

    @property
    def dimension(self) -> int:
        return len(self.morphisms)

    def coordinates(self, f: Morphism) -> Optional[Vector]:
        return coordinates([m.vector() for m in self.morphisms], f.vector())

    def __iter__(self):
        return iter(self.morphisms)

    def __len__(self) -> int:
        return len(self.morphisms)


def _morphism_from_vector(source: Representation, target: Representation, vector: Sequence[Fraction]) -> Morphism:
    components = []
    offset = 0
    for m, n in zip(source.dims, target.dims):
        entries = vector[offset:offset + n * m]
        components.append(QMatrix(n, m, tuple(tuple(entries[i * m:(i + 1) * m]) for i in range(n))))
        offset += n * m
    return Morphism(source, target, tuple(components))


def hom_basis(source: Representation, target: Representation) -> HomBasis:
    """Canonical basis of Hom(source, target): solutions of N_a f_s = f_t M_a for every arrow."""
    if source.bound_quiver != target.bound_quiver:
        raise RepresentationError("representations of different quivers")
    quiver = source.quiver
    offsets = []
    total = 0
    for m, n in zip(source.dims, target.dims):
        offsets.append(total)
        total += n * m

    equations: List[List[Fraction]] = []
    for k, arrow in enumerate(quiver.arrows):
        s, t = quiver.index(arrow.source), quiver.index(arrow.target)
        m_s, m_t = source.dims[s], source.dims[t]
        n_s, n_t = target.dims[s], target.dims[t]
        forward, backward = source.matrices[k], target.matrices[k]
        for i in range(n_t):
            for j in range(m_s):
                row = [Fraction(0)] * total
                for r in range(n_s):
                    row[offsets[s] + r * m_s + j] += backward[i, r]
                for r in range(m_t):
                    row[offsets[t] + i * m_t + r] -= forward[r, j]
                equations.append(row)

    solutions = nullspace(equations, total)
    return HomBasis(source, target, tuple(_morphism_from_vector(source, target, v) for v in solutions))


@dataclass(frozen=True)
class CompositionKernel:
    """Kernel of Hom(M,N) ⊗ Hom(N,L) -> Hom(M,L), f ⊗ g ↦ g∘f.

    Tensor coordinates are indexed by ``i * len(second) + j`` for
    ``first[i] ⊗ second[j]``.
    """

    first: Tuple[Morphism, ...]
    second: Tuple[Morphism, ...]
    rank: int
    kernel: Tuple[Vector, ...]
    target_dimension: int

    @property
    def tensor_dimension(self) -> int:
        return len(self.first) * len(self.second)

    @property
    def surjective(self) -> bool:
        return self.rank == self.target_dimension

    def kernel_tensors(self) -> List[Dict[Tuple[int, int], Fraction]]:
        width = len(self.second)
        return [
            {(k // width, k % width): c for k, c in enumerate(vector) if c != 0}
            for vector in self.kernel
        ]


def kernel_of_composition(
    m: Representation,
    n: Representation,
    l: Representation,
    first: Optional[Sequence[Morphism]] = None,
    second: Optional[Sequence[Morphism]] = None,
) -> CompositionKernel:
    first = tuple(first) if first is not None else hom_basis(m, n).morphisms
    second = tuple(second) if second is not None else hom_basis(n, l).morphisms
    images = [compose_hom(f, g).vector() for f in first for g in second]
    ambient = sum(a * b for a, b in zip(m.dims, l.dims))
    matrix_rows = [[image[r] for image in images] for r in range(ambient)]
    return CompositionKernel(
        first=first,
        second=second,
        rank=rank(images, ambient) if images else 0,
        kernel=tuple(nullspace(matrix_rows, len(images))),
        target_dimension=hom_basis(m, l).dimension,
    )


def direct_sum(first: Representation, *others: Representation) -> Representation:
    parts = (first,) + others
    bq = first.bound_quiver
    if any(part.bound_quiver != bq for part in others):
        raise RepresentationError("representations of different quivers")
    dims = tuple(sum(part.dims[k] for part in parts) for k in range(len(first.dims)))
    matrices = tuple(
        block_diagonal([part.matrices[k] for part in parts]) for k in range(len(bq.quiver.arrows))
    )
    name = " ⊕ ".join(part.label() for part in parts) if all(part.name for part in parts) else None
    return Representation(bq, dims, matrices, name)


def element_morphism(bq: BoundQuiver, x: Mapping[Path, Fraction], i: str, j: str) -> Morphism:
    """The morphism P_j -> P_i sending e_j to the element x (paths i -> j)."""
    source, target = projective_rep(bq, j), projective_rep(bq, i)
    basis = bq.basis
    components = []
    for w in bq.vertices:
        inputs = basis.normal_paths(j, w)
        outputs = basis.normal_paths(i, w)
        columns = []
        for q in inputs:
            image: Element = {}
            for path, coefficient in x.items():
                if (path.source, path.target) != (i, j):
                    raise RepresentationError(f"path {path} does not run {i} -> {j}")
                for reduced, c in basis.reduce(compose_paths(q, path)).items():
                    image[reduced] = image.get(reduced, Fraction(0)) + coefficient * c
            columns.append(_coordinates_in(outputs, image))
        components.append(QMatrix.from_columns(columns, len(outputs)))
    return Morphism(source, target, tuple(components))


def path_morphism(bq: BoundQuiver, path: Path) -> Morphism:
    return element_morphism(bq, {path: Fraction(1)}, path.source, path.target)


def _echelon_spaces(rep: Representation, spaces: Mapping[str, Sequence[Sequence]]) -> Dict[str, List[Vector]]:
    result = {}
    for vertex in rep.quiver.vertices:
        vectors = [tuple(to_fraction(x) for x in v) for v in spaces.get(vertex, ())]
        for vector in vectors:
            if len(vector) != rep.dim(vertex):
                raise RepresentationError(f"vector of length {len(vector)} at vertex {vertex} of dimension {rep.dim(vertex)}")
        result[vertex] = echelon_form(vectors, rep.dim(vertex))[0]
    return result


def subrepresentation(rep: Representation, spaces: Mapping[str, Sequence[Sequence]]) -> Tuple[Representation, Morphism]:
    """The subrepresentation on the given per-vertex spans, with its inclusion."""
    bases = _echelon_spaces(rep, spaces)
    quiver = rep.quiver
    matrices = {}
    for k, arrow in enumerate(quiver.arrows):
        columns = []
        for u in bases[arrow.source]:
            image = rep.matrices[k].apply(u)
            coords = coordinates(bases[arrow.target], image)
            if coords is None:
                raise RepresentationError(f"subspaces are not stable under arrow {arrow.name!r}")
            columns.append(coords)
        matrices[arrow.name] = QMatrix.from_columns(columns, len(bases[arrow.target]))
    sub = make_representation(rep.bound_quiver, {v: len(bases[v]) for v in quiver.vertices}, matrices)
    inclusion = Morphism(
        sub,
        rep,
        tuple(QMatrix.from_columns(bases[v], rep.dim(v)) for v in quiver.vertices),
    )
    return sub, inclusion


def generated_subspaces(rep: Representation, generators: Iterable[Tuple[str, Sequence]]) -> Dict[str, List[Vector]]:
    """Per-vertex spans of the smallest subrepresentation containing the generators."""
    spans: Dict[str, List[Vector]] = {v: [] for v in rep.quiver.vertices}
    for vertex, vector in generators:
        for path in rep.quiver.paths_from(vertex):
            spans[path.target].append(rep.path_matrix(path).apply([to_fraction(x) for x in vector]))
    return _echelon_spaces(rep, spans)


def quotient(rep: Representation, spaces: Mapping[str, Sequence[Sequence]]) -> Tuple[Representation, Morphism]:
    """rep / U for a subrepresentation U given by per-vertex spans, with the projection."""
    bases = _echelon_spaces(rep, spaces)
    quiver = rep.quiver
    projections = []
    kept: Dict[str, List[int]] = {}
    for vertex in quiver.vertices:
        d = rep.dim(vertex)
        complement = complement_indices(bases[vertex], d)
        kept[vertex] = complement
        full = list(bases[vertex]) + [tuple(Fraction(int(i == c)) for i in range(d)) for c in complement]
        offset = len(bases[vertex])
        columns = []
        for j in range(d):
            coords = coordinates(full, [Fraction(int(i == j)) for i in range(d)])
            columns.append(coords[offset:])
        projections.append(QMatrix.from_columns(columns, len(complement)))

    matrices = {}
    for k, arrow in enumerate(quiver.arrows):
        for u in bases[arrow.source]:
            if coordinates(bases[arrow.target], rep.matrices[k].apply(u)) is None:
                raise RepresentationError(f"subspaces are not stable under arrow {arrow.name!r}")
        projection = projections[quiver.index(arrow.target)]
        columns = [projection.apply(rep.matrices[k].column(c)) for c in kept[arrow.source]]
        matrices[arrow.name] = QMatrix.from_columns(columns, projection.nrows)
    result = make_representation(rep.bound_quiver, {v: len(kept[v]) for v in quiver.vertices}, matrices)
    return result, Morphism(rep, result, tuple(projections))


def random_representation(
    bq: BoundQuiver,
    rng: random.Random,
    max_dim: int = 3,
    max_copies: int = 2,
) -> Representation:
    """A random quotient of a sum of projectives with every vertex dimension <= max_dim."""
    vertices = bq.vertices
    copies = [rng.randint(0, max_copies) for _ in vertices]
    if not any(copies):
        copies[rng.randrange(len(vertices))] = 1
    parts = [projective_rep(bq, v) for v, c in zip(vertices, copies) for _ in range(c)]
    current = direct_sum(*parts)

    def cut(rep: Representation, vertex: str) -> Representation:
        vector = [0] * rep.dim(vertex)
        while not any(vector):
            vector = [rng.randint(-2, 2) for _ in vector]
        sub = generated_subspaces(rep, [(vertex, vector)])
        return quotient(rep, sub)[0]

    if rng.random() < 0.5:
        occupied = [v for v in vertices if current.dim(v)]
        current = cut(current, rng.choice(occupied))
    while True:
        too_big = [v for v in vertices if current.dim(v) > max_dim]
        if not too_big:
            break
        current = cut(current, rng.choice(too_big))
    return Representation(bq, current.dims, current.matrices, "random")


@dataclass(frozen=True)
class RealizationCheck:
    passed: bool
    checked: int
    failures: Tuple[str, ...]


def verify_path_algebra_realization(bq: BoundQuiver) -> RealizationCheck:
    """Check that the Hom algebra of the projectives reproduces kQ/I path by path."""
    basis = bq.basis
    failures: List[str] = []
    checked = 0
    for i in bq.vertices:
        for j in bq.vertices:
            paths = basis.normal_paths(i, j)
            hom = hom_basis(projective_rep(bq, j), projective_rep(bq, i))
            checked += 1
            if hom.dimension != len(paths):
                failures.append(f"dim Hom(P_{j}, P_{i}) = {hom.dimension}, expected {len(paths)}")
                continue
            vectors = [path_morphism(bq, p).vector() for p in paths]
            if vectors and rank(vectors, len(vectors[0])) != len(paths):
                failures.append(f"path morphisms {i} -> {j} are dependent")
    for p in basis.elements():
        for q in basis.elements():
            if q.source != p.target:
                continue
            checked += 1
            composite = compose_hom(path_morphism(bq, q), path_morphism(bq, p))
            expected = element_morphism(bq, basis.reduce(compose_paths(q, p)), p.source, q.target)
            if composite.components != expected.components:
                failures.append(f"morphism of {q}∘{p} does not match its normal form")
    logger.debug("path algebra realization of %s: %d checks, %d failures", bq.name, checked, len(failures))
    return RealizationCheck(not failures, checked, tuple(failures))
