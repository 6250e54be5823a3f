"""The Grothendieck lattice Z^n of dimension vectors with its Euler form.

Classes are integer tuples in the simple basis; the Euler form is
χ(d, e) = dᵀ G e. A sequence (v_1, ..., v_k) is numerically exceptional when
χ(v_i, v_i) = 1 and χ(v_j, v_i) = 0 for j > i.
"""

import logging
import random
from dataclasses import dataclass
from typing import Iterable, List, Optional, Sequence, Tuple

import numpy as np

from lattice import determinant, integer_kernel
from quiver_core import BoundQuiver
from representations import Representation

logger = logging.getLogger(__name__)

KClass = Tuple[int, ...]
SIDES = ("left", "right", "bi")


class KTheoryError(ValueError):
    pass


class NotExceptionalError(KTheoryError):
    pass


def kclass(values: Iterable[int]) -> KClass:
    return tuple(int(x) for x in values)


@dataclass(frozen=True)
class GramForm:
    vertices: Tuple[str, ...]
    matrix: Tuple[Tuple[int, ...], ...]

    def __post_init__(self) -> None:
        n = len(self.vertices)
        if len(self.matrix) != n or any(len(row) != n for row in self.matrix):
            raise KTheoryError(f"gram matrix must be {n}x{n}")

    @staticmethod
    def from_rows(rows: Sequence[Sequence[int]], vertices: Optional[Sequence[str]] = None) -> "GramForm":
        names = tuple(vertices) if vertices is not None else tuple(str(k + 1) for k in range(len(rows)))
        return GramForm(names, tuple(kclass(row) for row in rows))

    @property
    def rank(self) -> int:
        return len(self.vertices)

    @property
    def array(self) -> np.ndarray:
        return np.array(self.matrix, dtype=object).reshape(self.rank, self.rank)

    def chi(self, v: Sequence[int], w: Sequence[int]) -> int:
        if len(v) != self.rank or len(w) != self.rank:
            raise KTheoryError(f"classes of length {len(v)} and {len(w)} in a lattice of rank {self.rank}")
        return int(np.array(kclass(v), dtype=object).dot(self.array).dot(np.array(kclass(w), dtype=object)))

    def is_unitriangular(self) -> bool:
        return all(
            self.matrix[i][j] == (1 if i == j else 0)
            for i in range(self.rank)
            for j in range(i + 1)
        )

    def tolist(self) -> List[List[int]]:
        return [list(row) for row in self.matrix]


def chi(v: Sequence[int], w: Sequence[int], form: GramForm) -> int:
    return form.chi(v, w)


def is_exceptional_class(v: Sequence[int], form: GramForm) -> bool:
    return form.chi(v, v) == 1


def is_exceptional_pair(v: Sequence[int], w: Sequence[int], form: GramForm) -> bool:
    return form.chi(v, v) == 1 and form.chi(w, w) == 1 and form.chi(w, v) == 0


def is_numerical_exceptional_sequence(classes: Sequence[Sequence[int]], form: GramForm) -> bool:
    for i, v in enumerate(classes):
        if form.chi(v, v) != 1:
            return False
        for w in classes[i + 1:]:
            if form.chi(w, v) != 0:
                return False
    return True


def spans_full_lattice(classes: Sequence[Sequence[int]], rank: Optional[int] = None) -> bool:
    """Numerical fullness: the classes form a basis of Z^n (determinant ±1)."""
    if not classes:
        return False
    n = len(classes[0]) if rank is None else rank
    return len(classes) == n and abs(determinant(classes)) == 1


@dataclass(frozen=True)
class OrthogonalLattice:
    side: str
    basis: Tuple[KClass, ...]
    ambient_rank: int

    @property
    def rank(self) -> int:
        return len(self.basis)


def insertion_conditions(
    before: Sequence[Sequence[int]], after: Sequence[Sequence[int]], form: GramForm
) -> List[KClass]:
    """Linear conditions on u for χ(u, s) = 0 (s in ``before``) and χ(s, u) = 0 (s in ``after``)."""
    gram = form.array
    rows = [kclass(gram.dot(np.array(kclass(s), dtype=object))) for s in before]
    rows += [kclass(np.array(kclass(s), dtype=object).dot(gram)) for s in after]
    return rows


def insertion_lattice(
    before: Sequence[Sequence[int]], after: Sequence[Sequence[int]], form: GramForm, side: str = "bi"
) -> OrthogonalLattice:
    basis = integer_kernel(insertion_conditions(before, after, form), form.rank)
    return OrthogonalLattice(side, tuple(basis), form.rank)


def orthogonal_lattice(classes: Sequence[Sequence[int]], form: GramForm, side: str = "bi") -> OrthogonalLattice:
    """Saturated HNF basis of the left {u : χ(u,s)=0}, right {u : χ(s,u)=0} or two-sided orthogonal."""
    if side not in SIDES:
        raise KTheoryError(f"side must be one of {', '.join(SIDES)}, got {side!r}")
    before = classes if side in ("left", "bi") else ()
    after = classes if side in ("right", "bi") else ()
    return insertion_lattice(before, after, form, side)


def _require_pair(v: Sequence[int], w: Sequence[int], form: GramForm) -> None:
    if not is_exceptional_pair(v, w, form):
        raise NotExceptionalError(f"({kclass(v)}, {kclass(w)}) is not a numerical exceptional pair")


def mutate_left(pair: Tuple[Sequence[int], Sequence[int]], form: GramForm) -> Tuple[KClass, KClass]:
    """λ(v, w) = (w - χ(v,w) v, v)."""
    v, w = pair
    _require_pair(v, w, form)
    c = form.chi(v, w)
    return tuple(b - c * a for a, b in zip(v, w)), kclass(v)


def mutate_right(pair: Tuple[Sequence[int], Sequence[int]], form: GramForm) -> Tuple[KClass, KClass]:
    """ρ(v, w) = (w, v - χ(v,w) w)."""
    v, w = pair
    _require_pair(v, w, form)
    c = form.chi(v, w)
    return kclass(w), tuple(a - c * b for a, b in zip(v, w))


@dataclass(frozen=True)
class ExceptionalSequence:
    classes: Tuple[KClass, ...]
    form: GramForm

    def __post_init__(self) -> None:
        for v in self.classes:
            if len(v) != self.form.rank:
                raise KTheoryError(f"class {v} does not live in a lattice of rank {self.form.rank}")
        if not is_numerical_exceptional_sequence(self.classes, self.form):
            raise NotExceptionalError(f"{list(self.classes)} is not a numerical exceptional sequence")

    def __len__(self) -> int:
        return len(self.classes)

    @property
    def is_full(self) -> bool:
        return spans_full_lattice(self.classes, self.form.rank)


def exceptional_sequence(classes: Iterable[Iterable[int]], form: GramForm) -> ExceptionalSequence:
    return ExceptionalSequence(tuple(kclass(v) for v in classes), form)


def braid_act(seq: ExceptionalSequence, i: int, inverse: bool = False) -> ExceptionalSequence:
    """σ_i (left mutation at positions i, i+1, counted from 1) or its inverse."""
    if not 1 <= i < len(seq):
        raise KTheoryError(f"generator σ_{i} does not act on a sequence of length {len(seq)}")
    pair = (seq.classes[i - 1], seq.classes[i])
    mutated = mutate_right(pair, seq.form) if inverse else mutate_left(pair, seq.form)
    classes = seq.classes[: i - 1] + mutated + seq.classes[i + 1:]
    try:
        return ExceptionalSequence(classes, seq.form)
    except NotExceptionalError as exc:
        raise KTheoryError(f"σ_{i}{'^-1' if inverse else ''} broke the exceptional sequence: {exc}") from exc


def apply_braid_word(seq: ExceptionalSequence, word: Sequence[int]) -> ExceptionalSequence:
    """Apply generators in reading order; k > 0 is σ_k, k < 0 is σ_|k|^-1."""
    for letter in word:
        if letter == 0:
            raise KTheoryError("braid generators are numbered from 1")
        seq = braid_act(seq, abs(letter), inverse=letter < 0)
    return seq


def class_of(rep: Representation) -> KClass:
    return kclass(rep.dims)


def projective_class(bq: BoundQuiver, vertex: str) -> KClass:
    basis = bq.basis
    return tuple(len(basis.normal_paths(vertex, w)) for w in bq.vertices)


def projective_exceptional_sequence(bq: BoundQuiver, form: GramForm) -> ExceptionalSequence:
    """Projective classes in semiorthogonal order: sinks first, sources last."""
    order = reversed(bq.quiver.topological_order())
    return exceptional_sequence([projective_class(bq, v) for v in order], form)


def random_unitriangular_form(rng: random.Random, size: int, entry_bound: int = 3) -> GramForm:
    rows = [
        [1 if i == j else (rng.randint(-entry_bound, entry_bound) if j > i else 0) for j in range(size)]
        for i in range(size)
    ]
    return GramForm.from_rows(rows)


def random_exceptional_sequence(
    rng: random.Random,
    form: GramForm,
    steps: int = 6,
    start: Optional[ExceptionalSequence] = None,
) -> ExceptionalSequence:
    """Random braid orbit point, starting from the simple basis of an upper unitriangular form."""
    if start is None:
        n = form.rank
        start = exceptional_sequence([[int(i == j) for j in range(n)] for i in range(n)], form)
    seq = start
    if len(seq) < 2:
        return seq
    for _ in range(steps):
        seq = braid_act(seq, rng.randint(1, len(seq) - 1), inverse=rng.random() < 0.5)
    return seq
