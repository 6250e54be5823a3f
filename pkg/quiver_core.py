"""Bound quivers kQ/I: data model, path composition and the normal-form basis.

Paths are written and stored in functional order: ``b1*a2`` applies ``a2``
first, then ``b1``. Only acyclic quivers are accepted, so every (source,
target) slice of the path algebra is finite and reduction always terminates.
"""

import logging
from dataclasses import dataclass
from fractions import Fraction
from functools import cached_property
from typing import Dict, Iterator, List, Mapping, Optional, Sequence, Tuple

from linalg import echelon_form

logger = logging.getLogger(__name__)

Element = Dict["Path", Fraction]


class QuiverSpecError(ValueError):
    """Invalid quiver or relation data, optionally located in a spec document."""

    def __init__(self, message: str, line: Optional[int] = None, column: Optional[int] = None):
        self.message = message
        self.line = line
        self.column = column
        location = ""
        if line is not None:
            location = f"line {line}" + (f", column {column}" if column is not None else "") + ": "
        super().__init__(location + message)


class CompositionError(ValueError):
    pass


@dataclass(frozen=True)
class Arrow:
    name: str
    source: str
    target: str


@dataclass(frozen=True)
class Path:
    source: str
    target: str
    arrows: Tuple[str, ...] = ()

    @staticmethod
    def lazy(vertex: str) -> "Path":
        return Path(vertex, vertex, ())

    @property
    def length(self) -> int:
        return len(self.arrows)

    @property
    def is_lazy(self) -> bool:
        return not self.arrows

    def __str__(self) -> str:
        if self.is_lazy:
            return f"e_{self.source}"
        return "*".join(self.arrows)


def display_key(path: Path) -> Tuple[int, Tuple[str, ...]]:
    return path.length, path.arrows


def elimination_key(path: Path) -> Tuple[int, Tuple[str, ...]]:
    # longest paths become leading terms
    return -path.length, path.arrows


@dataclass(frozen=True)
class Quiver:
    name: str
    vertices: Tuple[str, ...]
    arrows: Tuple[Arrow, ...]

    def __post_init__(self) -> None:
        if not self.vertices:
            raise QuiverSpecError("no vertices declared")
        seen = set()
        for vertex in self.vertices:
            if vertex in seen:
                raise QuiverSpecError(f"duplicate vertex {vertex!r}")
            seen.add(vertex)
        names = set()
        for arrow in self.arrows:
            if arrow.name in names:
                raise QuiverSpecError(f"duplicate arrow {arrow.name!r}")
            names.add(arrow.name)
            for endpoint in (arrow.source, arrow.target):
                if endpoint not in seen:
                    raise QuiverSpecError(f"arrow {arrow.name!r} uses undeclared vertex {endpoint!r}")
        if len(self.topological_order()) != len(self.vertices):
            raise QuiverSpecError("quiver has an oriented cycle; only acyclic quivers are supported")

    def index(self, vertex: str) -> int:
        try:
            return self.vertices.index(vertex)
        except ValueError:
            raise QuiverSpecError(f"unknown vertex {vertex!r}") from None

    def arrow(self, name: str) -> Arrow:
        for arrow in self.arrows:
            if arrow.name == name:
                return arrow
        raise QuiverSpecError(f"unknown arrow {name!r}")

    def arrows_between(self, source: str, target: str) -> List[Arrow]:
        return [a for a in self.arrows if a.source == source and a.target == target]

    def arrows_into(self, vertex: str) -> List[Arrow]:
        return [a for a in self.arrows if a.target == vertex]

    def topological_order(self) -> Tuple[str, ...]:
        """Kahn's algorithm, ties broken by declaration order; shorter than
        ``vertices`` exactly when there is a cycle."""
        indegree = {v: 0 for v in self.vertices}
        for arrow in self.arrows:
            if arrow.target in indegree:
                indegree[arrow.target] += 1
        order: List[str] = []
        ready = [v for v in self.vertices if indegree[v] == 0]
        while ready:
            vertex = ready.pop(0)
            order.append(vertex)
            for arrow in self.arrows:
                if arrow.source == vertex:
                    indegree[arrow.target] -= 1
                    if indegree[arrow.target] == 0:
                        ready.append(arrow.target)
            ready.sort(key=self.vertices.index)
        return tuple(order)

    def paths_from(self, source: str) -> Iterator[Path]:
        stack = [Path.lazy(source)]
        while stack:
            path = stack.pop()
            yield path
            for arrow in self.arrows:
                if arrow.source == path.target:
                    stack.append(Path(source, arrow.target, (arrow.name,) + path.arrows))

    def paths(self, source: str, target: str) -> List[Path]:
        return sorted((p for p in self.paths_from(source) if p.target == target), key=display_key)

    def path(self, names: Sequence[str]) -> Path:
        """Build a path from arrow names in functional order, checking composability."""
        if not names:
            raise QuiverSpecError("empty path")
        arrows = [self.arrow(name) for name in names]
        for later, earlier in zip(arrows, arrows[1:]):
            if earlier.target != later.source:
                raise CompositionError(
                    f"{later.name} starts at {later.source} but {earlier.name} ends at {earlier.target}"
                )
        return Path(arrows[-1].source, arrows[0].target, tuple(names))


@dataclass(frozen=True)
class RelationExpr:
    terms: Tuple[Tuple[Fraction, Path], ...]

    @property
    def source(self) -> str:
        return self.terms[0][1].source

    @property
    def target(self) -> str:
        return self.terms[0][1].target

    def __str__(self) -> str:
        return format_element({path: coefficient for coefficient, path in self.terms})


def make_relation(terms: Sequence[Tuple[Fraction, Path]]) -> RelationExpr:
    """Merge like terms and check the relation is nonzero, parallel and admissible."""
    merged: Dict[Path, Fraction] = {}
    for coefficient, path in terms:
        merged[path] = merged.get(path, Fraction(0)) + Fraction(coefficient)
    kept = tuple((c, p) for p, c in sorted(merged.items(), key=lambda item: elimination_key(item[0])) if c != 0)
    if not kept:
        raise QuiverSpecError("relation has no nonzero coefficient")
    endpoints = {(p.source, p.target) for _, p in kept}
    if len(endpoints) > 1:
        raise QuiverSpecError("relation terms are not parallel: " + ", ".join(str(p) for _, p in kept))
    short = [str(p) for _, p in kept if p.length < 2]
    if short:
        raise QuiverSpecError(f"relation path {short[0]} has length < 2; relations must lie in the square of the arrow ideal")
    return RelationExpr(kept)


def compose_paths(p: Path, q: Path) -> Path:
    """p∘q: apply q first, then p."""
    if p.source != q.target:
        raise CompositionError(f"cannot compose {p} after {q}: {q} ends at {q.target}, {p} starts at {p.source}")
    return Path(q.source, p.target, p.arrows + q.arrows)


def element_of(path: Path, coefficient: Fraction = Fraction(1)) -> Element:
    return {path: Fraction(coefficient)} if coefficient else {}


def add_elements(x: Mapping[Path, Fraction], y: Mapping[Path, Fraction], factor: Fraction = Fraction(1)) -> Element:
    result = dict(x)
    for path, coefficient in y.items():
        result[path] = result.get(path, Fraction(0)) + factor * coefficient
    return {p: c for p, c in result.items() if c != 0}


def format_element(x: Mapping[Path, Fraction]) -> str:
    if not x:
        return "0"
    parts = []
    for path in sorted(x, key=elimination_key):
        coefficient = x[path]
        sign = "-" if coefficient < 0 else "+"
        magnitude = abs(coefficient)
        text = str(path) if magnitude == 1 else f"{magnitude} {path}"
        parts.append((sign, text))
    first_sign, first_text = parts[0]
    rendered = ("-" if first_sign == "-" else "") + first_text
    for sign, text in parts[1:]:
        rendered += f" {sign} {text}"
    return rendered


@dataclass(frozen=True)
class BoundQuiver:
    quiver: Quiver
    relations: Tuple[RelationExpr, ...] = ()

    def __post_init__(self) -> None:
        names = {a.name for a in self.quiver.arrows}
        for relation in self.relations:
            for _, path in relation.terms:
                unknown = [n for n in path.arrows if n not in names]
                if unknown:
                    raise QuiverSpecError(f"relation {relation} uses unknown arrow {unknown[0]!r}")

    @property
    def name(self) -> str:
        return self.quiver.name

    @property
    def vertices(self) -> Tuple[str, ...]:
        return self.quiver.vertices

    @cached_property
    def basis(self) -> "AlgebraBasis":
        return algebra_normal_basis(self)

    def relations_between(self, source: str, target: str) -> List[RelationExpr]:
        return [r for r in self.relations if r.source == source and r.target == target]


@dataclass(frozen=True)
class AlgebraBasis:
    quiver: Quiver
    normal: Mapping[Tuple[str, str], Tuple[Path, ...]]
    rewrite: Mapping[Path, Mapping[Path, Fraction]]

    @property
    def dimension(self) -> int:
        return sum(len(paths) for paths in self.normal.values())

    def normal_paths(self, source: str, target: str) -> Tuple[Path, ...]:
        return self.normal.get((source, target), ())

    def is_normal(self, path: Path) -> bool:
        return path in self.normal.get((path.source, path.target), ())

    def reduce(self, path: Path) -> Element:
        if self.is_normal(path):
            return {path: Fraction(1)}
        if path in self.rewrite:
            return dict(self.rewrite[path])
        raise CompositionError(f"{path} is not a path of quiver {self.quiver.name}")

    def reduce_element(self, x: Mapping[Path, Fraction]) -> Element:
        result: Element = {}
        for path, coefficient in x.items():
            result = add_elements(result, self.reduce(path), coefficient)
        return result

    def elements(self) -> List[Path]:
        return [p for key in sorted(self.normal, key=lambda k: (self.quiver.index(k[0]), self.quiver.index(k[1]))) for p in self.normal[key]]


def ideal_spanning_vectors(bq: BoundQuiver, source: str, target: str, padded_only: bool = False) -> List[Element]:
    """All p∘r∘q from source to target; with ``padded_only`` at least one of p, q is nontrivial."""
    quiver = bq.quiver
    vectors: List[Element] = []
    for relation in bq.relations:
        for right in quiver.paths(source, relation.source):
            for left in quiver.paths(relation.target, target):
                if padded_only and right.is_lazy and left.is_lazy:
                    continue
                vectors.append(
                    {compose_paths(left, compose_paths(path, right)): c for c, path in relation.terms}
                )
    return vectors


def algebra_normal_basis(bq: BoundQuiver) -> AlgebraBasis:
    """Echelonize the relation ideal slice by slice; non-pivot paths are the normal forms."""
    quiver = bq.quiver
    normal: Dict[Tuple[str, str], Tuple[Path, ...]] = {}
    rewrite: Dict[Path, Dict[Path, Fraction]] = {}
    for source in quiver.vertices:
        for target in quiver.vertices:
            columns = sorted(quiver.paths(source, target), key=elimination_key)
            if not columns:
                continue
            spanning = ideal_spanning_vectors(bq, source, target)
            rows = [[v.get(p, 0) for p in columns] for v in spanning]
            reduced, pivots = echelon_form(rows, len(columns))
            pivot_set = set(pivots)
            normal[(source, target)] = tuple(
                sorted((p for k, p in enumerate(columns) if k not in pivot_set), key=display_key)
            )
            for row, c in zip(reduced, pivots):
                rewrite[columns[c]] = {
                    columns[k]: -row[k] for k in range(len(columns)) if k != c and row[k] != 0
                }
    basis = AlgebraBasis(quiver, normal, rewrite)
    logger.debug("algebra %s has dimension %d", quiver.name, basis.dimension)
    return basis


def multiply(x: Mapping[Path, Fraction], y: Mapping[Path, Fraction], basis: AlgebraBasis) -> Element:
    """x·y in kQ/I, y acting first; non-composable pairs contribute zero."""
    result: Element = {}
    for p, a in x.items():
        for q, b in y.items():
            if p.source != q.target:
                continue
            result = add_elements(result, basis.reduce(compose_paths(p, q)), a * b)
    return result
