"""Wire format for reports and certificates, and an independent certificate checker.

Every integer is serialized as a decimal string; fields are declared in the
order they are emitted, and nothing time-dependent is recorded, so the same
inputs always produce byte-identical JSON.

``check_certificate`` replays a serialized certificate with sympy matrices
only. It shares no code with the lattice and search modules that produced it.
"""

import itertools
import logging
from dataclasses import dataclass
from math import gcd
from typing import Dict, Iterable, List, Optional, Sequence, Tuple

import sympy
from pydantic import BaseModel, ConfigDict, Field

from config import TOOL_NAME, TOOL_VERSION
from search import (
    BOX,
    EXTENSION,
    MODULAR,
    ZERO_FORM,
    CandidateResult,
    JHViolationReport,
    NonextendabilityCertificate,
    NonextendabilityVerdict,
)

logger = logging.getLogger(__name__)

BOX_REPLAY_LIMIT = 250_000


def ints(values: Iterable[int]) -> List[str]:
    return [str(int(x)) for x in values]


def int_matrix(rows: Iterable[Iterable[int]]) -> List[List[str]]:
    return [ints(row) for row in rows]


def parse_ints(values: Sequence[str]) -> Tuple[int, ...]:
    return tuple(int(x) for x in values)


class InputDigest(BaseModel):
    model_config = ConfigDict(extra="forbid")

    path: str = Field(..., description="Input file as given on the command line")
    sha256: str = Field(..., description="SHA-256 of the file contents")


class Provenance(BaseModel):
    model_config = ConfigDict(extra="forbid")

    tool: str = TOOL_NAME
    version: str = TOOL_VERSION
    inputs: List[InputDigest] = Field(default_factory=list)
    box_bound: str = Field(..., description="Box search bound B")
    modulus_cap: str = Field(..., description="Largest modulus tried for modular certificates")
    seed: str = Field(..., description="Seed of the randomized property suites")
    resolution_bound: str = Field(..., description="Longest projective resolution computed")
    candidate_bound: str = Field(..., description="Box bound for JH candidate discovery")
    residue_limit: str = Field(..., description="Largest residue table evaluated per modulus")


class CertificateModel(BaseModel):
    model_config = ConfigDict(extra="forbid")

    kind: str = Field(..., description="zero-form | modular | box | extension")
    strength: str = Field(..., description="proof | evidence | refuted")
    side: str
    before: List[List[str]] = Field(..., description="Classes s with χ(u, s) = 0 required")
    after: List[List[str]] = Field(..., description="Classes s with χ(s, u) = 0 required")
    gram: List[List[str]]
    basis: List[List[str]] = Field(..., description="HNF basis of the orthogonal lattice")
    restricted_gram: List[List[str]]
    modulus: Optional[str] = None
    residues: List[str] = Field(default_factory=list, description="Residues of χ(v, v) mod m attained")
    box_bound: Optional[str] = None
    witness: Optional[List[str]] = None


def certificate_to_model(certificate: NonextendabilityCertificate) -> CertificateModel:
    if certificate.is_proof:
        strength = "proof"
    elif certificate.kind == EXTENSION:
        strength = "refuted"
    else:
        strength = "evidence"
    return CertificateModel(
        kind=certificate.kind,
        strength=strength,
        side=certificate.side,
        before=int_matrix(certificate.before),
        after=int_matrix(certificate.after),
        gram=int_matrix(certificate.form.matrix),
        basis=int_matrix(certificate.basis),
        restricted_gram=int_matrix(certificate.restricted_gram),
        modulus=str(certificate.modulus) if certificate.modulus is not None else None,
        residues=ints(certificate.residues),
        box_bound=str(certificate.box_bound) if certificate.box_bound is not None else None,
        witness=ints(certificate.witness) if certificate.witness is not None else None,
    )


@dataclass(frozen=True)
class CertificateCheck:
    accepted: bool
    reasons: Tuple[str, ...]


def _quadratic(gram: sympy.Matrix, coefficients: Sequence[int]) -> int:
    if not coefficients:
        return 0
    c = sympy.Matrix(coefficients)
    return int((c.T * gram * c)[0, 0])


def check_certificate(model: CertificateModel) -> CertificateCheck:
    """Replay a certificate from its serialized form; reasons list every failed check."""
    reasons: List[str] = []
    try:
        gram = sympy.Matrix([parse_ints(row) for row in model.gram])
        before = [parse_ints(s) for s in model.before]
        after = [parse_ints(s) for s in model.after]
        basis_rows = [parse_ints(u) for u in model.basis]
        claimed = [parse_ints(row) for row in model.restricted_gram]
    except ValueError as exc:
        return CertificateCheck(False, (f"malformed integer: {exc}",))

    n = gram.rows
    if gram.cols != n:
        return CertificateCheck(False, ("gram matrix is not square",))
    if any(len(v) != n for v in before + after + basis_rows):
        return CertificateCheck(False, (f"a class does not have length {n}",))

    conditions = [list((gram * sympy.Matrix(s)).T) for s in before]
    conditions += [list(sympy.Matrix(s).T * gram) for s in after]
    condition_rank = sympy.Matrix(conditions).rank() if conditions else 0
    r = len(basis_rows)

    if r:
        basis = sympy.Matrix(basis_rows)
        if conditions and not (sympy.Matrix(conditions) * basis.T).is_zero_matrix:
            reasons.append("basis is not orthogonal to the given classes")
        if basis.rank() != r:
            reasons.append("basis vectors are dependent")
        content = 0
        for columns in itertools.combinations(range(n), r):
            content = gcd(content, int(basis.extract(list(range(r)), list(columns)).det()))
        if content != 1:
            reasons.append(f"basis spans a sublattice of index {content} in its saturation")
        restricted = basis * gram * basis.T
    else:
        restricted = sympy.zeros(0, 0)
    if r != n - condition_rank:
        reasons.append(f"lattice rank {r} but the orthogonal has rank {n - condition_rank}")
    if [list(map(int, restricted.row(k))) for k in range(r)] != [list(row) for row in claimed]:
        reasons.append("restricted gram does not match basis and gram")

    if model.kind == ZERO_FORM:
        if r and not (restricted + restricted.T).is_zero_matrix:
            reasons.append("symmetrized restricted gram is not zero")
    elif model.kind == MODULAR:
        m = int(model.modulus) if model.modulus is not None else 0
        if m < 2:
            reasons.append("modular certificate needs a modulus >= 2")
        else:
            attained = sorted({_quadratic(restricted, c) % m for c in itertools.product(range(m), repeat=r)})
            if attained != sorted(parse_ints(model.residues)):
                reasons.append(f"residue table mod {m} does not match: attained {attained}")
            if 1 in attained:
                reasons.append(f"χ(v, v) ≡ 1 (mod {m}) is attained")
    elif model.kind == BOX:
        bound = int(model.box_bound) if model.box_bound is not None else 0
        if bound < 1:
            reasons.append("box certificate needs a bound >= 1")
        elif (2 * bound + 1) ** r > BOX_REPLAY_LIMIT:
            reasons.append(f"box of bound {bound} in rank {r} is too large to replay")
        elif any(
            _quadratic(restricted, c) == 1
            for c in itertools.product(range(-bound, bound + 1), repeat=r)
        ):
            reasons.append(f"box of bound {bound} contains an exceptional class")
    elif model.kind == EXTENSION:
        if model.witness is None:
            reasons.append("extension without a witness")
        else:
            w = sympy.Matrix(parse_ints(model.witness))
            if conditions and not (sympy.Matrix(conditions) * w).is_zero_matrix:
                reasons.append("witness is not orthogonal to the given classes")
            if int((w.T * gram * w)[0, 0]) != 1:
                reasons.append("witness is not an exceptional class")
    else:
        reasons.append(f"unknown certificate kind {model.kind!r}")

    if reasons:
        logger.debug("certificate rejected: %s", "; ".join(reasons))
    return CertificateCheck(not reasons, tuple(reasons))


class WitnessModel(BaseModel):
    model_config = ConfigDict(extra="forbid")

    side: str
    extending_class: List[str]


class NonextendabilityReport(BaseModel):
    model_config = ConfigDict(extra="forbid")

    classes: List[List[str]]
    gram: List[List[str]]
    verdict: str
    certificates: List[CertificateModel]
    replayed: List[bool] = Field(..., description="Independent checker result per certificate")
    witness: Optional[WitnessModel] = None
    provenance: Provenance


def verdict_to_model(verdict: NonextendabilityVerdict, provenance: Provenance) -> NonextendabilityReport:
    certificates = [certificate_to_model(c) for c in verdict.certificates]
    witness = verdict.witness
    return NonextendabilityReport(
        classes=int_matrix(verdict.classes),
        gram=int_matrix(verdict.form.matrix),
        verdict=verdict.verdict,
        certificates=certificates,
        replayed=[check_certificate(c).accepted for c in certificates],
        witness=WitnessModel(side=witness[0], extending_class=ints(witness[1])) if witness else None,
        provenance=provenance,
    )


class CandidateModel(BaseModel):
    model_config = ConfigDict(extra="forbid")

    candidate: List[str]
    verdict: str
    certified: bool
    accounting_determinant: Optional[str] = None
    certificates: List[CertificateModel]
    replayed: List[bool]


def _candidate_model(result: CandidateResult) -> CandidateModel:
    certificates = [certificate_to_model(c) for c in result.verdict.certificates]
    return CandidateModel(
        candidate=ints(result.candidate),
        verdict=result.verdict.verdict,
        certified=result.certified,
        accounting_determinant=(
            str(result.accounting_determinant) if result.accounting_determinant is not None else None
        ),
        certificates=certificates,
        replayed=[check_certificate(c).accepted for c in certificates],
    )


class JHReportModel(BaseModel):
    model_config = ConfigDict(extra="forbid")

    quiver: str
    verified: bool
    gram: List[List[str]]
    gram_route: str
    full_sequence: List[List[str]]
    full_determinant: str
    long_length: str
    short_length: str
    remainder_rank: str
    candidate_source: str
    candidates: List[CandidateModel]
    provenance: Provenance


def jh_report_to_model(report: JHViolationReport, provenance: Provenance) -> JHReportModel:
    candidates = [_candidate_model(c) for c in report.candidates]
    return JHReportModel(
        quiver=report.quiver,
        verified=bool(report.certified_candidates) and all(all(c.replayed) for c in candidates if c.certified),
        gram=int_matrix(report.form.matrix),
        gram_route=report.gram_route,
        full_sequence=int_matrix(report.full_sequence.classes),
        full_determinant=str(report.full_determinant),
        long_length=str(report.long_length),
        short_length=str(report.short_length),
        remainder_rank=str(report.remainder_rank),
        candidate_source=report.candidate_source,
        candidates=candidates,
        provenance=provenance,
    )


class NoViolationModel(BaseModel):
    model_config = ConfigDict(extra="forbid")

    quiver: str
    verified: bool = False
    reason: str
    examined: List[NonextendabilityReport] = Field(default_factory=list)
    provenance: Provenance


class BasisSlice(BaseModel):
    model_config = ConfigDict(extra="forbid")

    source: str
    target: str
    paths: List[str]


class AlgebraReport(BaseModel):
    model_config = ConfigDict(extra="forbid")

    quiver: str
    vertices: List[str]
    arrows: List[str]
    relations: List[str]
    dimension: str
    basis: List[BasisSlice]
    provenance: Provenance


class GramReport(BaseModel):
    model_config = ConfigDict(extra="forbid")

    quiver: str
    vertices: List[str]
    cartan: List[List[str]]
    gram: List[List[str]]
    route: str
    global_dimension: Optional[str] = Field(None, description="None when the resolution bound was reached")
    projective_classes: List[List[str]]
    duality_holds: bool = Field(..., description="D·G = I for the projective class matrix D")
    provenance: Provenance


class ExtEntry(BaseModel):
    model_config = ConfigDict(extra="forbid")

    source: str
    target: str
    ext: List[str] = Field(..., description="dim Ext^k for k = 0, 1, ...")
    euler: str


class ExtReport(BaseModel):
    model_config = ConfigDict(extra="forbid")

    quiver: str
    objects: List[str]
    classes: List[List[str]]
    entries: List[ExtEntry]
    provenance: Provenance


class ExceptionalityModel(BaseModel):
    model_config = ConfigDict(extra="forbid")

    object: str
    dimension_vector: List[str]
    end_dimension: str
    higher_ext: List[str]
    verdict: str
    provenance: Provenance


class MutationReport(BaseModel):
    model_config = ConfigDict(extra="forbid")

    gram: List[List[str]]
    word: List[str]
    initial: List[List[str]]
    result: List[List[str]]
    exceptional: bool
    full: bool
    provenance: Provenance


class PropertyResultModel(BaseModel):
    model_config = ConfigDict(extra="forbid")

    name: str
    passed: bool
    checked: str
    failures: List[str]


class PropertiesReport(BaseModel):
    model_config = ConfigDict(extra="forbid")

    quiver: str
    passed: bool
    results: List[PropertyResultModel]
    provenance: Provenance


REPORT_MODELS: Dict[str, type] = {
    "check": AlgebraReport,
    "gram": GramReport,
    "ext": ExtReport,
    "exceptional": ExceptionalityModel,
    "mutate": MutationReport,
    "certify-nonext": NonextendabilityReport,
    "certify-jh": JHReportModel,
    "certify-jh-negative": NoViolationModel,
    "properties": PropertiesReport,
}


def report_schema() -> Dict[str, dict]:
    return {name: model.model_json_schema() for name, model in REPORT_MODELS.items()}
