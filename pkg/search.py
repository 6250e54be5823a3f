"""Certified searches for exceptional classes in sublattices of K_0.

A sublattice with basis u_1..u_r carries the restricted form
q(c) = cᵀ R c, R[k][l] = χ(u_k, u_l). It contains no exceptional class when

* zero-form: R + Rᵀ = 0, so q vanishes identically;
* modular: for some modulus m, q(c) mod m never equals 1 on (Z/m)^r.

Failing both, a box search over |c_k| <= B either finds an extending class
or yields bounded evidence only.
"""

import itertools
import logging
import multiprocessing
from dataclasses import dataclass
from functools import partial
from typing import Dict, List, Optional, Sequence, Tuple

import numpy as np

from homalg import DEFAULT_RESOLUTION_BOUND, gram_matrix_simples
from ktheory import (
    ExceptionalSequence,
    GramForm,
    KClass,
    NotExceptionalError,
    OrthogonalLattice,
    exceptional_sequence,
    insertion_lattice,
    is_exceptional_class,
    kclass,
    projective_exceptional_sequence,
)
from lattice import determinant
from quiver_core import BoundQuiver

logger = logging.getLogger(__name__)

ZERO_FORM = "zero-form"
MODULAR = "modular"
BOX = "box"
EXTENSION = "extension"
PROOF_KINDS = (ZERO_FORM, MODULAR)

NONEXTENDABLE = "numerically nonextendable"
EXTENDS = "extends"

# Keyed on the Euler form, so a spec only inherits candidates from a matching lattice.
BUILTIN_CANDIDATES: Dict[Tuple[Tuple[int, ...], ...], Tuple[KClass, ...]] = {
    ((1, -2, 2), (0, 1, -2), (0, 0, 1)): ((1, 1, 1),),
}

_INT64_SAFE = 2**62


class NoViolationWitnessed(RuntimeError):
    def __init__(self, reason: str, examined: Sequence["NonextendabilityVerdict"] = ()):
        self.reason = reason
        self.examined = tuple(examined)
        super().__init__(f"no violation witnessed: {reason}")


@dataclass(frozen=True)
class NonextendabilityCertificate:
    """Why the lattice {u : χ(u,s)=0 for s in before, χ(s,u)=0 for s in after} has (no) exceptional class."""

    kind: str
    side: str
    before: Tuple[KClass, ...]
    after: Tuple[KClass, ...]
    form: GramForm
    basis: Tuple[KClass, ...]
    restricted_gram: Tuple[Tuple[int, ...], ...]
    modulus: Optional[int] = None
    residues: Tuple[int, ...] = ()
    box_bound: Optional[int] = None
    witness: Optional[KClass] = None

    @property
    def rank(self) -> int:
        return len(self.basis)

    @property
    def is_proof(self) -> bool:
        return self.kind in PROOF_KINDS


def restricted_gram(basis: Sequence[Sequence[int]], form: GramForm) -> Tuple[Tuple[int, ...], ...]:
    if not basis:
        return ()
    rows = np.array([kclass(u) for u in basis], dtype=object)
    product = rows.dot(form.array).dot(rows.T)
    return tuple(tuple(int(x) for x in row) for row in product)


def _combine(basis: Sequence[KClass], coefficients: Sequence[int]) -> KClass:
    return tuple(sum(c * u[i] for c, u in zip(coefficients, basis)) for i in range(len(basis[0])))


def _shard_solutions(gram: Tuple[Tuple[int, ...], ...], bound: int, lead: int) -> List[Tuple[int, ...]]:
    """Coefficient vectors with first entry ``lead`` and q = 1, in lexicographic order."""
    r = len(gram)
    if r == 1:
        return [(lead,)] if gram[0][0] * lead * lead == 1 else []
    last = r - 1
    steps = np.arange(-bound, bound + 1, dtype=np.int64)
    square = gram[last][last]
    hits = []
    for middle in itertools.product(range(-bound, bound + 1), repeat=r - 2):
        prefix = (lead,) + middle
        constant = sum(gram[k][l] * prefix[k] * prefix[l] for k in range(last) for l in range(last))
        linear = sum((gram[k][last] + gram[last][k]) * prefix[k] for k in range(last))
        if abs(constant) + abs(linear) * bound + abs(square) * bound * bound < _INT64_SAFE:
            values = constant + linear * steps + square * steps * steps
        else:
            wide = steps.astype(object)
            values = constant + linear * wide + square * wide * wide
        mask = np.asarray(values == 1, dtype=bool)
        hits.extend(prefix + (int(t),) for t in steps[mask])
    return hits


def enumerate_exceptional_classes(
    basis: Sequence[Sequence[int]],
    form: GramForm,
    bound: int,
    workers: int = 1,
    limit: Optional[int] = None,
) -> List[KClass]:
    """All Σ c_k u_k with |c_k| <= bound and χ(v,v) = 1, in lexicographic order of c.

    The box is sharded by the leading coefficient; shards run in a process
    pool when ``workers`` > 1 and are merged in shard order.
    """
    if bound < 1:
        raise ValueError("box bound must be >= 1")
    if not basis:
        return []
    basis = [kclass(u) for u in basis]
    gram = restricted_gram(basis, form)
    leads = range(-bound, bound + 1)
    coefficients: List[Tuple[int, ...]] = []
    if workers > 1:
        with multiprocessing.get_context("spawn").Pool(processes=workers) as pool:
            for shard in pool.map(partial(_shard_solutions, gram, bound), leads):
                coefficients.extend(shard)
    else:
        for lead in leads:
            coefficients.extend(_shard_solutions(gram, bound, lead))
            if limit is not None and len(coefficients) >= limit:
                break
    if limit is not None:
        coefficients = coefficients[:limit]
    logger.debug("box search rank %d bound %d: %d exceptional classes", len(basis), bound, len(coefficients))
    return [_combine(basis, c) for c in coefficients]


def residue_table(gram: Sequence[Sequence[int]], modulus: int) -> Tuple[int, ...]:
    """Residues of q(c) = cᵀ R c mod m attained over all c in (Z/m)^r."""
    r = len(gram)
    if r == 0:
        return (0,)
    reduced = np.array([[x % modulus for x in row] for row in gram], dtype=np.int64)
    grid = np.indices((modulus,) * r, dtype=np.int64).reshape(r, -1)
    values = np.einsum("ki,kl,li->i", grid, reduced, grid) % modulus
    return tuple(int(x) for x in np.unique(values))


def nonexistence_certificate(
    basis: Sequence[Sequence[int]],
    form: GramForm,
    modulus_cap: int = 16,
    residue_limit: int = 200_000,
    side: str = "bi",
    before: Sequence[Sequence[int]] = (),
    after: Sequence[Sequence[int]] = (),
) -> Optional[NonextendabilityCertificate]:
    """Zero-form or modular proof that the lattice has no class with χ(v,v) = 1, or None."""
    basis = tuple(kclass(u) for u in basis)
    gram = restricted_gram(basis, form)
    common = dict(
        side=side,
        before=tuple(kclass(s) for s in before),
        after=tuple(kclass(s) for s in after),
        form=form,
        basis=basis,
        restricted_gram=gram,
    )
    r = len(basis)
    if all(gram[k][l] + gram[l][k] == 0 for k in range(r) for l in range(r)):
        return NonextendabilityCertificate(kind=ZERO_FORM, **common)
    for modulus in range(2, modulus_cap + 1):
        if modulus**r > residue_limit:
            break
        residues = residue_table(gram, modulus)
        if 1 not in residues:
            return NonextendabilityCertificate(kind=MODULAR, modulus=modulus, residues=residues, **common)
    logger.debug("no zero-form or modular certificate for rank %d lattice up to modulus %d", r, modulus_cap)
    return None


def _certify_lattice(
    lattice: OrthogonalLattice,
    before: Sequence[KClass],
    after: Sequence[KClass],
    form: GramForm,
    box_bound: int,
    modulus_cap: int,
    residue_limit: int,
    workers: int,
) -> NonextendabilityCertificate:
    certificate = nonexistence_certificate(
        lattice.basis, form, modulus_cap, residue_limit, lattice.side, before, after
    )
    if certificate is not None:
        return certificate
    found = enumerate_exceptional_classes(lattice.basis, form, box_bound, workers=workers, limit=1)
    return NonextendabilityCertificate(
        kind=EXTENSION if found else BOX,
        side=lattice.side,
        before=tuple(before),
        after=tuple(after),
        form=form,
        basis=lattice.basis,
        restricted_gram=restricted_gram(lattice.basis, form),
        box_bound=box_bound,
        witness=found[0] if found else None,
    )


@dataclass(frozen=True)
class NonextendabilityVerdict:
    classes: Tuple[KClass, ...]
    form: GramForm
    certificates: Tuple[NonextendabilityCertificate, ...]
    box_bound: int

    @property
    def verdict(self) -> str:
        if all(c.is_proof for c in self.certificates):
            return NONEXTENDABLE
        if any(c.kind == EXTENSION for c in self.certificates):
            return EXTENDS
        return f"no extension found up to {self.box_bound}"

    @property
    def certified(self) -> bool:
        return self.verdict == NONEXTENDABLE

    @property
    def witness(self) -> Optional[Tuple[str, KClass]]:
        for certificate in self.certificates:
            if certificate.witness is not None:
                return certificate.side, certificate.witness
        return None


def certify_nonextendable(
    v: Sequence[int],
    form: GramForm,
    box_bound: int = 100,
    modulus_cap: int = 16,
    residue_limit: int = 200_000,
    workers: int = 1,
) -> NonextendabilityVerdict:
    """Left side: classes u with (v, u) exceptional; right side: (u, v) exceptional."""
    v = kclass(v)
    if not is_exceptional_class(v, form):
        raise NotExceptionalError(f"{v} is not an exceptional class (χ(v,v) = {form.chi(v, v)})")
    certificates = []
    for side, before, after in (("left", (v,), ()), ("right", (), (v,))):
        lattice = insertion_lattice(before, after, form, side)
        certificates.append(
            _certify_lattice(lattice, before, after, form, box_bound, modulus_cap, residue_limit, workers)
        )
    return NonextendabilityVerdict((v,), form, tuple(certificates), box_bound)


def certify_sequence_nonextendable(
    classes: Sequence[Sequence[int]],
    form: GramForm,
    box_bound: int = 100,
    modulus_cap: int = 16,
    residue_limit: int = 200_000,
    workers: int = 1,
) -> NonextendabilityVerdict:
    """One certificate per insertion position 0..k of a new class into the sequence."""
    seq = exceptional_sequence(classes, form)
    certificates = []
    for position in range(len(seq) + 1):
        before, after = seq.classes[:position], seq.classes[position:]
        lattice = insertion_lattice(before, after, form, f"position {position}")
        certificates.append(
            _certify_lattice(lattice, before, after, form, box_bound, modulus_cap, residue_limit, workers)
        )
    return NonextendabilityVerdict(seq.classes, form, tuple(certificates), box_bound)


@dataclass(frozen=True)
class CandidateResult:
    candidate: KClass
    verdict: NonextendabilityVerdict
    remainder: Optional[NonextendabilityCertificate]
    accounting_determinant: Optional[int]

    @property
    def certified(self) -> bool:
        return self.verdict.certified and self.accounting_determinant in (1, -1)


@dataclass(frozen=True)
class JHViolationReport:
    quiver: str
    form: GramForm
    gram_route: str
    full_sequence: ExceptionalSequence
    full_determinant: int
    candidates: Tuple[CandidateResult, ...]
    candidate_source: str

    @property
    def certified_candidates(self) -> Tuple[CandidateResult, ...]:
        return tuple(c for c in self.candidates if c.certified)

    @property
    def long_length(self) -> int:
        return len(self.full_sequence)

    @property
    def short_length(self) -> int:
        return 1

    @property
    def remainder_rank(self) -> int:
        return self.form.rank - 1


def discover_candidates(form: GramForm, bound: int, workers: int = 1) -> Tuple[KClass, ...]:
    """Exceptional classes of the whole lattice in the box, one per ± pair."""
    identity = [tuple(int(i == j) for j in range(form.rank)) for i in range(form.rank)]
    found = enumerate_exceptional_classes(identity, form, bound, workers=workers)
    return tuple(v for v in found if next(x for x in v if x != 0) > 0)


def certify_jh_violation(
    bq: BoundQuiver,
    box_bound: int = 100,
    modulus_cap: int = 16,
    candidates: Optional[Sequence[Sequence[int]]] = None,
    candidate_bound: int = 10,
    residue_limit: int = 200_000,
    workers: int = 1,
    resolution_bound: int = DEFAULT_RESOLUTION_BOUND,
) -> JHViolationReport:
    """Exhibit a full exceptional sequence of length n next to a nonextendable class.

    The class v and its left orthogonal split K_0 as Z v ⊕ v^⊥ (checked by a
    determinant) and v^⊥ contains no exceptional class, so (v) is a maximal
    numerical exceptional sequence of length 1 beside the projectives of length n.
    """
    if len(bq.vertices) < 2:
        raise NoViolationWitnessed("a one-vertex quiver has a single decomposition")
    gram = gram_matrix_simples(bq, resolution_bound)
    form = gram.form
    full = projective_exceptional_sequence(bq, form)
    full_det = determinant(full.classes)
    if abs(full_det) != 1:
        raise NoViolationWitnessed(f"projective classes have determinant {full_det}")

    if candidates is not None:
        pool, source = tuple(kclass(v) for v in candidates), "supplied"
    elif form.matrix in BUILTIN_CANDIDATES:
        pool, source = BUILTIN_CANDIDATES[form.matrix], "built-in"
    else:
        pool, source = discover_candidates(form, candidate_bound, workers), f"discovered up to {candidate_bound}"
    logger.info("checking %d %s candidates on %s", len(pool), source, bq.name)

    results = []
    for v in pool:
        if len(v) != form.rank or not is_exceptional_class(v, form):
            raise NotExceptionalError(f"candidate {v} is not an exceptional class of {bq.name}")
        verdict = certify_nonextendable(v, form, box_bound, modulus_cap, residue_limit, workers)
        remainder = verdict.certificates[0]
        accounting = determinant([v] + list(remainder.basis)) if remainder.rank == form.rank - 1 else None
        results.append(CandidateResult(v, verdict, remainder, accounting))

    report = JHViolationReport(bq.name, form, gram.route, full, full_det, tuple(results), source)
    if not report.certified_candidates:
        verdicts = [r.verdict for r in results]
        reason = "no candidate classes" if not results else "every candidate extends or is uncertified"
        raise NoViolationWitnessed(reason, verdicts)
    return report
