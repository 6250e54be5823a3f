"""quivercert command line.

    python main.py check data/bondal.quiver
    python main.py gram bondal
    python main.py ext bondal data/bondal_P.rep data/bondal_P.rep
    python main.py exceptional bondal data/bondal_P.rep
    python main.py mutate bondal --word 1 -2
    python main.py certify-nonext bondal 1,1,1
    python main.py certify-jh bondal
    python main.py properties bondal
    python main.py schema

Exit status: 0 verified, 1 not verified, 2 input error.
"""

import argparse
import json
import logging
import sys
from dataclasses import dataclass
from typing import Callable, Dict, List, Optional, Sequence, Tuple

import numpy as np
from pydantic import BaseModel

from certificates import (
    AlgebraReport,
    BasisSlice,
    ExceptionalityModel,
    ExtEntry,
    ExtReport,
    GramReport,
    InputDigest,
    JHReportModel,
    MutationReport,
    NonextendabilityReport,
    NoViolationModel,
    PropertiesReport,
    PropertyResultModel,
    Provenance,
    int_matrix,
    ints,
    jh_report_to_model,
    report_schema,
    verdict_to_model,
)
from config import LOG_LEVELS, OUTPUT_FORMATS, TOOL_NAME, TOOL_VERSION, Settings
from formats import RepresentationFileError, file_sha256, load_quiver, load_representation, resolve_quiver_path
from homalg import HomologicalError, cartan_matrix, exceptionality, ext_table, gram_matrix_simples
from ktheory import (
    KClass,
    KTheoryError,
    apply_braid_word,
    class_of,
    exceptional_sequence,
    projective_class,
    projective_exceptional_sequence,
    spans_full_lattice,
)
from property_suites import run_property_suites
from quiver_core import CompositionError, QuiverSpecError
from representations import RepresentationError
from search import NONEXTENDABLE, NoViolationWitnessed, certify_jh_violation, certify_nonextendable, certify_sequence_nonextendable

logger = logging.getLogger(__name__)

EXIT_VERIFIED = 0
EXIT_NOT_VERIFIED = 1
EXIT_INPUT_ERROR = 2

RULE = "=" * 50


class InputError(ValueError):
    pass


@dataclass(frozen=True)
class CommandConfig:
    subcommand: str
    inputs: Tuple[str, ...] = ()
    box_bound: int = 100
    modulus_cap: int = 16
    output_format: str = "json"
    seed: int = 0
    workers: int = 1
    resolution_bound: int = 16
    candidate_bound: int = 10
    residue_limit: int = 200_000
    classes: Tuple[KClass, ...] = ()
    word: Tuple[int, ...] = ()
    candidates: Optional[Tuple[KClass, ...]] = None

    def __post_init__(self) -> None:
        if self.box_bound < 1:
            raise InputError("box bound must be >= 1")
        if self.modulus_cap < 2:
            raise InputError("modulus cap must be >= 2")
        if self.output_format not in OUTPUT_FORMATS:
            raise InputError(f"format must be one of {', '.join(OUTPUT_FORMATS)}")
        if self.workers < 1 or self.resolution_bound < 1 or self.candidate_bound < 1:
            raise InputError("workers, resolution bound and candidate bound must be >= 1")

    @staticmethod
    def from_settings(subcommand: str, settings: Settings, **overrides) -> "CommandConfig":
        values = dict(
            box_bound=settings.box_bound,
            modulus_cap=settings.modulus_cap,
            output_format=settings.output_format,
            seed=settings.seed,
            workers=settings.workers,
            resolution_bound=settings.resolution_bound,
            candidate_bound=settings.candidate_bound,
            residue_limit=settings.residue_limit,
        )
        values.update({k: v for k, v in overrides.items() if v is not None})
        return CommandConfig(subcommand=subcommand, **values)


@dataclass(frozen=True)
class CommandResult:
    exit_code: int
    output: str = ""
    message: str = ""


def parse_class(text: str) -> KClass:
    cleaned = text.strip().strip("()[]")
    try:
        return tuple(int(part) for part in cleaned.replace(",", " ").split())
    except ValueError as exc:
        raise InputError(f"not an integer class: {text!r}") from exc


def _provenance(config: CommandConfig, paths: Sequence[str]) -> Provenance:
    digests = []
    for index, path in enumerate(paths):
        resolved = resolve_quiver_path(path) if index == 0 else path
        digests.append(InputDigest(path=path, sha256=file_sha256(str(resolved))))
    return Provenance(
        inputs=digests,
        box_bound=str(config.box_bound),
        modulus_cap=str(config.modulus_cap),
        seed=str(config.seed),
        resolution_bound=str(config.resolution_bound),
        candidate_bound=str(config.candidate_bound),
        residue_limit=str(config.residue_limit),
    )


def _require_inputs(config: CommandConfig, count: int) -> None:
    if len(config.inputs) < count:
        raise InputError(f"{config.subcommand} needs {count} input file(s)")


Outcome = Tuple[int, BaseModel]


def cmd_check(config: CommandConfig) -> Outcome:
    _require_inputs(config, 1)
    bq = load_quiver(config.inputs[0])
    basis = bq.basis
    slices = [
        BasisSlice(source=i, target=j, paths=[str(p) for p in basis.normal_paths(i, j)])
        for i in bq.vertices
        for j in bq.vertices
        if basis.normal_paths(i, j)
    ]
    return EXIT_VERIFIED, AlgebraReport(
        quiver=bq.name,
        vertices=list(bq.vertices),
        arrows=[f"{a.name}: {a.source} -> {a.target}" for a in bq.quiver.arrows],
        relations=[str(r) for r in bq.relations],
        dimension=str(basis.dimension),
        basis=slices,
        provenance=_provenance(config, config.inputs[:1]),
    )


def cmd_gram(config: CommandConfig) -> Outcome:
    _require_inputs(config, 1)
    bq = load_quiver(config.inputs[0])
    gram = gram_matrix_simples(bq, config.resolution_bound)
    classes = [projective_class(bq, v) for v in bq.vertices]
    product = np.array(classes, dtype=object).dot(gram.form.array)
    identity = np.identity(len(classes), dtype=int)
    return EXIT_VERIFIED, GramReport(
        quiver=bq.name,
        vertices=list(bq.vertices),
        cartan=int_matrix(cartan_matrix(bq).entries),
        gram=int_matrix(gram.form.matrix),
        route=gram.route,
        global_dimension=str(gram.global_dimension) if gram.global_dimension is not None else None,
        projective_classes=int_matrix(classes),
        duality_holds=bool((product == identity).all()),
        provenance=_provenance(config, config.inputs[:1]),
    )


def cmd_ext(config: CommandConfig) -> Outcome:
    _require_inputs(config, 3)
    bq = load_quiver(config.inputs[0])
    objects = [load_representation(path, bq) for path in config.inputs[1:3]]
    table = ext_table(objects, config.resolution_bound)
    names = list(table.names)
    entries = [
        ExtEntry(source=names[i], target=names[j], ext=ints(table.values[i][j]), euler=str(table.euler(i, j)))
        for i in range(len(objects))
        for j in range(len(objects))
    ]
    return EXIT_VERIFIED, ExtReport(
        quiver=bq.name,
        objects=names,
        classes=int_matrix(class_of(obj) for obj in objects),
        entries=entries,
        provenance=_provenance(config, config.inputs[:3]),
    )


def cmd_exceptional(config: CommandConfig) -> Outcome:
    _require_inputs(config, 2)
    bq = load_quiver(config.inputs[0])
    rep = load_representation(config.inputs[1], bq)
    report = exceptionality(rep, config.resolution_bound)
    verdict = "exceptional" if report.exceptional else "not exceptional"
    return (EXIT_VERIFIED if report.exceptional else EXIT_NOT_VERIFIED), ExceptionalityModel(
        object=rep.label(),
        dimension_vector=ints(rep.dims),
        end_dimension=str(report.end_dimension),
        higher_ext=ints(report.higher_ext),
        verdict=verdict,
        provenance=_provenance(config, config.inputs[:2]),
    )


def cmd_mutate(config: CommandConfig) -> Outcome:
    _require_inputs(config, 1)
    bq = load_quiver(config.inputs[0])
    form = gram_matrix_simples(bq, config.resolution_bound).form
    if config.classes:
        seq = exceptional_sequence(config.classes, form)
    else:
        seq = projective_exceptional_sequence(bq, form)
    result = apply_braid_word(seq, config.word)
    return EXIT_VERIFIED, MutationReport(
        gram=int_matrix(form.matrix),
        word=ints(config.word),
        initial=int_matrix(seq.classes),
        result=int_matrix(result.classes),
        exceptional=True,
        full=spans_full_lattice(result.classes, form.rank),
        provenance=_provenance(config, config.inputs[:1]),
    )


def cmd_certify_nonext(config: CommandConfig) -> Outcome:
    _require_inputs(config, 1)
    if not config.classes:
        raise InputError("certify-nonext needs at least one class")
    bq = load_quiver(config.inputs[0])
    form = gram_matrix_simples(bq, config.resolution_bound).form
    options = dict(
        box_bound=config.box_bound,
        modulus_cap=config.modulus_cap,
        residue_limit=config.residue_limit,
        workers=config.workers,
    )
    if len(config.classes) == 1:
        verdict = certify_nonextendable(config.classes[0], form, **options)
    else:
        verdict = certify_sequence_nonextendable(config.classes, form, **options)
    model = verdict_to_model(verdict, _provenance(config, config.inputs[:1]))
    verified = verdict.verdict == NONEXTENDABLE and all(model.replayed)
    return (EXIT_VERIFIED if verified else EXIT_NOT_VERIFIED), model


def cmd_certify_jh(config: CommandConfig) -> Outcome:
    _require_inputs(config, 1)
    bq = load_quiver(config.inputs[0])
    provenance = _provenance(config, config.inputs[:1])
    try:
        report = certify_jh_violation(
            bq,
            box_bound=config.box_bound,
            modulus_cap=config.modulus_cap,
            candidates=config.candidates,
            candidate_bound=config.candidate_bound,
            residue_limit=config.residue_limit,
            workers=config.workers,
            resolution_bound=config.resolution_bound,
        )
    except NoViolationWitnessed as exc:
        return EXIT_NOT_VERIFIED, NoViolationModel(
            quiver=bq.name,
            reason=exc.reason,
            examined=[verdict_to_model(v, provenance) for v in exc.examined],
            provenance=provenance,
        )
    model = jh_report_to_model(report, provenance)
    return (EXIT_VERIFIED if model.verified else EXIT_NOT_VERIFIED), model


def cmd_properties(config: CommandConfig) -> Outcome:
    _require_inputs(config, 1)
    bq = load_quiver(config.inputs[0])
    results = run_property_suites(bq, config.seed, config.resolution_bound)
    passed = all(r.passed for r in results)
    return (EXIT_VERIFIED if passed else EXIT_NOT_VERIFIED), PropertiesReport(
        quiver=bq.name,
        passed=passed,
        results=[
            PropertyResultModel(name=r.name, passed=r.passed, checked=str(r.checked), failures=list(r.failures))
            for r in results
        ],
        provenance=_provenance(config, config.inputs[:1]),
    )


COMMANDS: Dict[str, Callable[[CommandConfig], Outcome]] = {
    "check": cmd_check,
    "gram": cmd_gram,
    "ext": cmd_ext,
    "exceptional": cmd_exceptional,
    "mutate": cmd_mutate,
    "certify-nonext": cmd_certify_nonext,
    "certify-jh": cmd_certify_jh,
    "properties": cmd_properties,
}

INPUT_ERRORS = (
    InputError,
    QuiverSpecError,
    CompositionError,
    RepresentationFileError,
    RepresentationError,
    KTheoryError,
    OSError,
)


def _status(ok: bool) -> str:
    return "✅" if ok else "❌"


def _rows(matrix: List[List[str]]) -> str:
    return str([[int(x) for x in row] for row in matrix])


def _certificate_lines(certificates, replayed) -> List[str]:
    lines = []
    for certificate, ok in zip(certificates, replayed):
        detail = f"rank {len(certificate.basis)}, restricted gram {_rows(certificate.restricted_gram)}"
        if certificate.modulus is not None:
            detail += f", modulus {certificate.modulus}, residues {{{', '.join(certificate.residues)}}}"
        if certificate.witness is not None:
            detail += f", witness ({', '.join(certificate.witness)})"
        icon = "✅" if certificate.strength == "proof" else ("⚠️" if certificate.strength == "evidence" else "❌")
        lines.append(f"  {icon} {certificate.side}: {certificate.kind} ({detail}); replayed: {_status(ok)}")
    return lines


def render_text(model: BaseModel) -> str:
    lines: List[str] = [RULE]
    if isinstance(model, AlgebraReport):
        lines += [f"🧮 quiver {model.quiver}", RULE, f"vertices: {' '.join(model.vertices)}"]
        lines += [f"arrow {a}" for a in model.arrows]
        lines += [f"relation {r}" for r in model.relations]
        lines.append(f"✅ algebra dimension {model.dimension}")
        lines += [f"  {s.source} -> {s.target}: {', '.join(s.paths)}" for s in model.basis]
    elif isinstance(model, GramReport):
        lines += [f"📐 Euler form of {model.quiver}", RULE]
        lines.append(f"C = {_rows(model.cartan)}")
        lines.append(f"G = {_rows(model.gram)}")
        lines.append(f"projective classes = {_rows(model.projective_classes)}")
        lines.append(f"route: {model.route}, global dimension: {model.global_dimension or 'above bound'}")
        lines.append(f"{_status(model.duality_holds)} D·G = I")
    elif isinstance(model, ExtReport):
        lines += [f"📊 Ext table on {model.quiver}", RULE]
        lines += [f"Ext^*({e.source}, {e.target}) = ({', '.join(e.ext)}), χ = {e.euler}" for e in model.entries]
    elif isinstance(model, ExceptionalityModel):
        lines += [f"🔍 {model.object} ({', '.join(model.dimension_vector)})", RULE]
        lines.append(f"dim End = {model.end_dimension}, higher Ext = ({', '.join(model.higher_ext)})")
        lines.append(f"{_status(model.verdict == 'exceptional')} {model.verdict}")
    elif isinstance(model, MutationReport):
        lines += [f"🔀 braid word ({' '.join(model.word)})", RULE]
        lines.append(f"initial = {_rows(model.initial)}")
        lines.append(f"result = {_rows(model.result)}")
        lines.append(f"{_status(model.exceptional)} exceptional, {'full' if model.full else 'not full'}")
    elif isinstance(model, NonextendabilityReport):
        lines += [f"🔒 nonextendability of {_rows(model.classes)}", RULE]
        lines += _certificate_lines(model.certificates, model.replayed)
        lines.append(f"{_status(model.verdict == NONEXTENDABLE)} {model.verdict}")
    elif isinstance(model, JHReportModel):
        lines += [f"🧩 Jordan–Hölder check on {model.quiver}", RULE]
        lines.append(f"G = {_rows(model.gram)} ({model.gram_route})")
        lines.append(f"full sequence {_rows(model.full_sequence)}, determinant {model.full_determinant}")
        for candidate in model.candidates:
            lines.append(f"candidate ({', '.join(candidate.candidate)}): {candidate.verdict}")
            lines += _certificate_lines(candidate.certificates, candidate.replayed)
        lines.append(
            f"{_status(model.verified)} maximal lengths {model.long_length} vs {model.short_length}"
            f" (remainder rank {model.remainder_rank})"
        )
    elif isinstance(model, NoViolationModel):
        lines += [f"🧩 Jordan–Hölder check on {model.quiver}", RULE]
        for examined in model.examined:
            witness = f", witness ({', '.join(examined.witness.extending_class)})" if examined.witness else ""
            lines.append(f"candidate {_rows(examined.classes)}: {examined.verdict}{witness}")
        lines.append(f"❌ no violation witnessed: {model.reason}")
    elif isinstance(model, PropertiesReport):
        lines += [f"🧪 property suites on {model.quiver}", RULE]
        for result in model.results:
            lines.append(f"{_status(result.passed)} {result.name} ({result.checked} checks)")
            lines += [f"    {failure}" for failure in result.failures]
    lines.append(f"{TOOL_NAME} {TOOL_VERSION}")
    return "\n".join(lines)


def run(config: CommandConfig) -> CommandResult:
    """Run one subcommand; the report goes to ``output``, diagnostics to ``message``."""
    if config.subcommand == "schema":
        return CommandResult(EXIT_VERIFIED, json.dumps(report_schema(), indent=2, ensure_ascii=False))
    handler = COMMANDS.get(config.subcommand)
    if handler is None:
        return CommandResult(EXIT_INPUT_ERROR, message=f"❌ unknown subcommand {config.subcommand!r}")
    try:
        code, model = handler(config)
    except INPUT_ERRORS as exc:
        logger.debug("input error in %s", config.subcommand, exc_info=True)
        return CommandResult(EXIT_INPUT_ERROR, message=f"❌ {exc}")
    except HomologicalError as exc:
        return CommandResult(EXIT_NOT_VERIFIED, message=f"❌ {exc}")
    if config.output_format == "text":
        output = render_text(model)
    else:
        output = model.model_dump_json(indent=2)
    return CommandResult(code, output)


def build_parser(settings: Settings) -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--format", dest="output_format", choices=OUTPUT_FORMATS, default=settings.output_format)
    common.add_argument("--box-bound", type=int, default=settings.box_bound, help="box search bound B")
    common.add_argument("--modulus-cap", type=int, default=settings.modulus_cap, help="largest modulus M tried")
    common.add_argument("--seed", type=int, default=settings.seed)
    common.add_argument("--workers", type=int, default=settings.workers, help="processes for box shards")
    common.add_argument("--resolution-bound", type=int, default=settings.resolution_bound)
    common.add_argument("--candidate-bound", type=int, default=settings.candidate_bound)
    common.add_argument("--log-level", type=str.upper, choices=LOG_LEVELS, default=settings.log_level)

    parser = argparse.ArgumentParser(prog=TOOL_NAME, description="Exact Hom/Ext, Euler forms and certificates for bound quivers")
    sub = parser.add_subparsers(dest="subcommand", required=True)

    sub.add_parser("check", parents=[common], help="validate a spec, print the algebra basis").add_argument("quiver")
    sub.add_parser("gram", parents=[common], help="Cartan matrix, Euler form, projective classes").add_argument("quiver")

    ext = sub.add_parser("ext", parents=[common], help="Ext table of two representations")
    ext.add_argument("quiver")
    ext.add_argument("first")
    ext.add_argument("second")

    exceptional = sub.add_parser("exceptional", parents=[common], help="End/Ext self table of a representation")
    exceptional.add_argument("quiver")
    exceptional.add_argument("representation")

    mutate = sub.add_parser("mutate", parents=[common], help="apply a braid word to exceptional classes")
    mutate.add_argument("quiver")
    mutate.add_argument("--classes", nargs="+", default=[], help="classes like 0,0,1 (default: projectives)")
    mutate.add_argument("--word", nargs="*", type=int, default=[], help="k for σ_k, -k for its inverse")

    nonext = sub.add_parser("certify-nonext", parents=[common], help="nonextendability certificate")
    nonext.add_argument("quiver")
    nonext.add_argument("classes", nargs="+", help="an exceptional class or sequence, e.g. 1,1,1")

    jh = sub.add_parser("certify-jh", parents=[common], help="Jordan–Hölder violation report")
    jh.add_argument("quiver")
    jh.add_argument("--candidate", action="append", default=None, help="candidate class (repeatable)")

    sub.add_parser("properties", parents=[common], help="seeded property suites").add_argument("quiver")
    sub.add_parser("schema", help="JSON schema of every report")
    return parser


def config_from_args(args: argparse.Namespace, settings: Settings) -> CommandConfig:
    if args.subcommand == "schema":
        return CommandConfig.from_settings("schema", settings)
    inputs = [args.quiver]
    inputs += [getattr(args, name) for name in ("first", "second", "representation") if getattr(args, name, None)]
    raw_classes = getattr(args, "classes", None) or []
    candidates = getattr(args, "candidate", None)
    return CommandConfig.from_settings(
        args.subcommand,
        settings,
        inputs=tuple(inputs),
        box_bound=args.box_bound,
        modulus_cap=args.modulus_cap,
        output_format=args.output_format,
        seed=args.seed,
        workers=args.workers,
        resolution_bound=args.resolution_bound,
        candidate_bound=args.candidate_bound,
        classes=tuple(parse_class(c) for c in raw_classes),
        word=tuple(getattr(args, "word", None) or ()),
        candidates=tuple(parse_class(c) for c in candidates) if candidates else None,
    )


def main(argv: Optional[Sequence[str]] = None) -> int:
    try:
        settings = Settings.from_env()
    except RuntimeError as exc:
        print(f"❌ {exc}", file=sys.stderr)
        return EXIT_INPUT_ERROR

    args = build_parser(settings).parse_args(argv)
    logging.basicConfig(
        level=getattr(args, "log_level", settings.log_level).upper(),
        stream=sys.stderr,
        format="%(levelname)s %(name)s: %(message)s",
    )
    try:
        config = config_from_args(args, settings)
    except InputError as exc:
        print(f"❌ {exc}", file=sys.stderr)
        return EXIT_INPUT_ERROR

    result = run(config)
    if result.output:
        print(result.output)
    if result.message:
        print(result.message, file=sys.stderr)
    return result.exit_code


if __name__ == "__main__":
    sys.exit(main())
