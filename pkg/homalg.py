"""Minimal projective resolutions, Ext dimensions and the Euler form of kQ/I."""

import logging
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from typing import Dict, List, Optional, Sequence, Tuple

from ktheory import GramForm
from linalg import QMatrix, Vector, complement_indices, nullspace, rank
from quiver_core import BoundQuiver, Element, ideal_spanning_vectors
from representations import (
    Morphism,
    Representation,
    compose_hom,
    direct_sum,
    projective_rep,
    simple_rep,
    subrepresentation,
    zero_rep,
)

logger = logging.getLogger(__name__)

DEFAULT_RESOLUTION_BOUND = 16


class HomologicalError(RuntimeError):
    pass


@dataclass(frozen=True)
class ProjectiveCover:
    module: Representation
    generators: Tuple[Tuple[str, Vector], ...]
    projective: Representation
    map: Morphism

    @property
    def vertices(self) -> Tuple[str, ...]:
        return tuple(v for v, _ in self.generators)


def projective_cover(module: Representation) -> ProjectiveCover:
    """Cover by lifting a basis of the top M / rad M, one projective per generator."""
    bq = module.bound_quiver
    quiver = bq.quiver
    generators: List[Tuple[str, Vector]] = []
    for vertex in quiver.vertices:
        d = module.dim(vertex)
        radical = [
            module.matrix(arrow.name).column(j)
            for arrow in quiver.arrows_into(vertex)
            for j in range(module.dim(arrow.source))
        ]
        for c in complement_indices(radical, d):
            generators.append((vertex, tuple(Fraction(int(i == c)) for i in range(d))))

    if generators:
        projective = direct_sum(*[projective_rep(bq, v) for v, _ in generators])
    else:
        projective = zero_rep(bq)
    basis = bq.basis
    components = []
    for u in quiver.vertices:
        columns = [
            module.path_matrix(q).apply(m)
            for w, m in generators
            for q in basis.normal_paths(w, u)
        ]
        components.append(QMatrix.from_columns(columns, module.dim(u)))
    return ProjectiveCover(module, tuple(generators), projective, Morphism(projective, module, tuple(components)))


@dataclass(frozen=True)
class Resolution:
    """Truncated minimal projective resolution ... -> P_1 -> P_0 -> M.

    ``differentials[k]`` is d_{k+1}: P_{k+1} -> P_k; ``entries[k][a][b]`` is the
    algebra element (paths from the vertex of generator a of P_k to the vertex
    of generator b of P_{k+1}) describing the same map.
    """

    module: Representation
    terms: Tuple[Tuple[str, ...], ...]
    projectives: Tuple[Representation, ...]
    augmentation: Morphism
    differentials: Tuple[Morphism, ...]
    entries: Tuple[Tuple[Tuple[Element, ...], ...], ...]
    terminated: bool

    @property
    def length(self) -> int:
        return len(self.differentials)

    def multiplicities(self, degree: int) -> Dict[str, int]:
        counts: Dict[str, int] = {}
        for vertex in self.terms[degree]:
            counts[vertex] = counts.get(vertex, 0) + 1
        return counts


def _kernel_spaces(f: Morphism) -> Dict[str, List[Vector]]:
    quiver = f.source.quiver
    return {
        v: nullspace(f.components[k].rows, f.source.dims[k])
        for k, v in enumerate(quiver.vertices)
    }


def _differential_entries(bq: BoundQuiver, lower: Tuple[str, ...], cover: ProjectiveCover, inclusion: Morphism):
    basis = bq.basis
    columns = []
    for vertex, vector in cover.generators:
        image = inclusion.component(vertex).apply(vector)
        column = []
        offset = 0
        for w in lower:
            paths = basis.normal_paths(w, vertex)
            column.append({p: c for p, c in zip(paths, image[offset:offset + len(paths)]) if c != 0})
            offset += len(paths)
        columns.append(column)
    return tuple(tuple(columns[b][a] for b in range(len(columns))) for a in range(len(lower)))


@lru_cache(maxsize=256)
def minimal_resolution(module: Representation, bound: int = DEFAULT_RESOLUTION_BOUND) -> Resolution:
    """Minimal projective resolution truncated after P_bound."""
    if bound < 0:
        raise ValueError("resolution bound must be >= 0")
    bq = module.bound_quiver
    cover = projective_cover(module)
    terms = [cover.vertices]
    projectives = [cover.projective]
    differentials: List[Morphism] = []
    entries = []
    current = cover
    terminated = False
    while True:
        kernel, inclusion = subrepresentation(current.projective, _kernel_spaces(current.map))
        if kernel.total_dimension == 0:
            terminated = True
            break
        if len(differentials) == bound:
            break
        following = projective_cover(kernel)
        differentials.append(compose_hom(following.map, inclusion))
        entries.append(_differential_entries(bq, terms[-1], following, inclusion))
        terms.append(following.vertices)
        projectives.append(following.projective)
        logger.debug("resolution of %s: P_%d over %s", module.label(), len(differentials), following.vertices)
        current = following
    return Resolution(
        module=module,
        terms=tuple(terms),
        projectives=tuple(projectives),
        augmentation=cover.map,
        differentials=tuple(differentials),
        entries=tuple(entries),
        terminated=terminated,
    )


@dataclass(frozen=True)
class ResolutionCheck:
    is_complex: bool
    exact: bool
    minimal: bool

    @property
    def passed(self) -> bool:
        return self.is_complex and self.exact and self.minimal


def verify_resolution(res: Resolution) -> ResolutionCheck:
    maps = (res.augmentation,) + res.differentials
    is_complex = all(compose_hom(upper, lower).is_zero() for upper, lower in zip(maps[1:], maps))

    vertices = res.module.quiver.vertices
    exact = True
    for k, vertex in enumerate(vertices):
        ranks = [maps[n].components[k].rank() for n in range(len(maps))]
        if ranks[0] != res.module.dims[k]:
            exact = False
        for degree, projective in enumerate(res.projectives):
            incoming = degree + 1
            if incoming >= len(maps) and not res.terminated:
                continue
            image = ranks[incoming] if incoming < len(maps) else 0
            if projective.dims[k] - ranks[degree] != image:
                exact = False

    minimal = all(
        not path.is_lazy
        for block in res.entries
        for row in block
        for element in row
        for path in element
    )
    return ResolutionCheck(is_complex, exact, minimal)


def _coboundary(res: Resolution, target: Representation, degree: int) -> Tuple[List[List[Fraction]], int]:
    """Matrix of Hom(P_degree, N) -> Hom(P_{degree+1}, N), φ ↦ φ∘d."""
    lower, upper = res.terms[degree], res.terms[degree + 1]
    widths = [target.dim(w) for w in lower]
    rows: List[List[Fraction]] = []
    for b, vb in enumerate(upper):
        blocks = [
            target.element_matrix(res.entries[degree][a][b], va, vb)
            for a, va in enumerate(lower)
        ]
        for i in range(target.dim(vb)):
            rows.append([x for block in blocks for x in block.rows[i]])
    return rows, sum(widths)


def ext_dims(
    module: Representation,
    target: Representation,
    bound: int = DEFAULT_RESOLUTION_BOUND,
) -> Tuple[int, ...]:
    """(dim Ext^0, ..., dim Ext^n) with n the length of the minimal resolution of ``module``."""
    if module.bound_quiver != target.bound_quiver:
        raise HomologicalError("representations of different quivers")
    res = minimal_resolution(module, bound)
    if not res.terminated:
        raise HomologicalError(f"resolution of {module.label()} did not terminate within {bound} steps")
    cochains = [sum(target.dim(w) for w in term) for term in res.terms]
    ranks = []
    for degree in range(res.length):
        rows, ncols = _coboundary(res, target, degree)
        ranks.append(rank(rows, ncols))
    ranks.append(0)
    return tuple(
        cochains[k] - ranks[k] - (ranks[k - 1] if k else 0)
        for k in range(len(cochains))
    )


def ext_dim(module: Representation, target: Representation, degree: int, bound: int = DEFAULT_RESOLUTION_BOUND) -> int:
    if degree < 0:
        raise ValueError("Ext degree must be >= 0")
    dims = ext_dims(module, target, bound)
    return dims[degree] if degree < len(dims) else 0


def euler_char(module: Representation, target: Representation, bound: int = DEFAULT_RESOLUTION_BOUND) -> int:
    return sum((-1) ** k * d for k, d in enumerate(ext_dims(module, target, bound)))


@dataclass(frozen=True)
class ExtTable:
    names: Tuple[str, ...]
    values: Tuple[Tuple[Tuple[int, ...], ...], ...]

    def entry(self, i: int, j: int, degree: int) -> int:
        dims = self.values[i][j]
        return dims[degree] if degree < len(dims) else 0

    def euler(self, i: int, j: int) -> int:
        return sum((-1) ** k * d for k, d in enumerate(self.values[i][j]))


def ext_table(objects: Sequence[Representation], bound: int = DEFAULT_RESOLUTION_BOUND) -> ExtTable:
    return ExtTable(
        names=tuple(obj.label() for obj in objects),
        values=tuple(tuple(ext_dims(m, n, bound) for n in objects) for m in objects),
    )


@dataclass(frozen=True)
class ExceptionalityReport:
    end_dimension: int
    higher_ext: Tuple[int, ...]

    @property
    def exceptional(self) -> bool:
        return self.end_dimension == 1 and not any(self.higher_ext)


def exceptionality(module: Representation, bound: int = DEFAULT_RESOLUTION_BOUND) -> ExceptionalityReport:
    dims = ext_dims(module, module, bound)
    return ExceptionalityReport(dims[0], dims[1:])


@dataclass(frozen=True)
class CartanMatrix:
    vertices: Tuple[str, ...]
    entries: Tuple[Tuple[int, ...], ...]
    topological_order: Tuple[str, ...]

    def in_order(self, order: Sequence[str]) -> Tuple[Tuple[int, ...], ...]:
        index = [self.vertices.index(v) for v in order]
        return tuple(tuple(self.entries[i][j] for j in index) for i in index)

    def is_unitriangular(self) -> bool:
        ordered = self.in_order(self.topological_order)
        for i, row in enumerate(ordered):
            for j, x in enumerate(row):
                if x < 0 or (i == j and x != 1) or (j < i and x != 0):
                    return False
        return True


def cartan_matrix(bq: BoundQuiver) -> CartanMatrix:
    basis = bq.basis
    entries = tuple(tuple(len(basis.normal_paths(i, j)) for j in bq.vertices) for i in bq.vertices)
    return CartanMatrix(bq.vertices, entries, bq.quiver.topological_order())


def relations_are_minimal(bq: BoundQuiver) -> bool:
    """No relation lies in the span of the others padded by arrows on either side."""
    pairs = {(r.source, r.target) for r in bq.relations}
    for source, target in sorted(pairs):
        columns = bq.quiver.paths(source, target)

        def span_rank(vectors: List[Element]) -> int:
            return rank([[v.get(p, 0) for p in columns] for v in vectors], len(columns))

        gained = span_rank(ideal_spanning_vectors(bq, source, target)) - span_rank(
            ideal_spanning_vectors(bq, source, target, padded_only=True)
        )
        if gained != len(bq.relations_between(source, target)):
            return False
    return True


def global_dimension(bq: BoundQuiver, bound: int = DEFAULT_RESOLUTION_BOUND) -> Optional[int]:
    """Maximal resolution length over the simples, or None when some resolution needs more than ``bound`` steps."""
    if bound < 1:
        raise ValueError("bound must be >= 1")
    lengths = []
    for vertex in bq.vertices:
        res = minimal_resolution(simple_rep(bq, vertex), bound)
        if not res.terminated:
            return None
        lengths.append(res.length)
    return max(lengths)


@dataclass(frozen=True)
class GramComputation:
    form: GramForm
    route: str
    global_dimension: Optional[int]


def gram_matrix_simples(bq: BoundQuiver, bound: int = DEFAULT_RESOLUTION_BOUND) -> GramComputation:
    """Euler form in the simple basis, χ(d, e) = dᵀ G e.

    Uses δ_ij - #arrows(i->j) + #relations(i->j) when gl.dim <= 2 and the
    relations are minimal, and the Ext table of the simples otherwise.
    """
    gldim = global_dimension(bq, bound)
    vertices = bq.vertices
    if gldim is not None and gldim <= 2 and relations_are_minimal(bq):
        matrix = tuple(
            tuple(
                int(i == j) - len(bq.quiver.arrows_between(i, j)) + len(bq.relations_between(i, j))
                for j in vertices
            )
            for i in vertices
        )
        route = "combinatorial"
    else:
        if gldim is None:
            raise HomologicalError(f"global dimension of {bq.name} exceeds {bound}")
        simples = [simple_rep(bq, v) for v in vertices]
        matrix = tuple(tuple(euler_char(s, t, bound) for t in simples) for s in simples)
        route = "ext"
    logger.debug("gram matrix of %s via %s route", bq.name, route)
    return GramComputation(GramForm(vertices, matrix), route, gldim)
