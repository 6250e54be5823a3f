"""Text formats for quiver specs (``.quiver``) and representations (``.rep``).

Quiver spec, line oriented, ``#`` starts a comment::

    quiver bondal
    vertices: 1 2 3
    arrows:
      a1: 1 -> 2
      b1: 2 -> 3
    relations:
      b1*a2
      b1*a1 - 1/2 b2*a2

Relation lines are linear combinations of paths written in functional order;
coefficients are optional integers or ``p/q`` rationals separated from the
path by whitespace.

Representation file::

    representation P
    quiver: bondal.quiver
    dim 1 = 1
    matrix a1
      1

``quiver:`` names the spec file relative to the representation file. Matrix
rows are space-separated rationals; an arrow without a ``matrix`` block is
the zero matrix of the right shape.
"""

import hashlib
import logging
import re
import threading
from fractions import Fraction
from pathlib import Path as FilePath
from typing import Dict, List, Optional, Tuple

import ply.lex as lex
import ply.yacc as yacc

from quiver_core import Arrow, BoundQuiver, CompositionError, Quiver, QuiverSpecError, make_relation
from representations import Representation, RepresentationError, make_representation

logger = logging.getLogger(__name__)

DATA_DIR = FilePath(__file__).resolve().parent / "data"
BUILTIN_QUIVERS = {
    "bondal": DATA_DIR / "bondal.quiver",
    "a2": DATA_DIR / "a2.quiver",
    "point": DATA_DIR / "point.quiver",
}

_NAME = r"[^\W\d][\w']*"
_ARROW_LINE = re.compile(rf"^\s*({_NAME})\s*:\s*(\S+)\s*->\s*(\S+)\s*$")
_DIM_LINE = re.compile(r"^\s*dim\s+(\S+)\s*=\s*(\d+)\s*$")
_MATRIX_LINE = re.compile(rf"^\s*matrix\s+({_NAME})\s*$")


class RepresentationFileError(ValueError):
    def __init__(self, message: str, line: Optional[int] = None):
        self.message = message
        self.line = line
        super().__init__(f"line {line}: {message}" if line is not None else message)


class _RelationGrammar:
    tokens = ("NUMBER", "NAME", "PLUS", "MINUS", "STAR", "SLASH")

    t_PLUS = r"\+"
    t_MINUS = r"-"
    t_STAR = r"\*"
    t_SLASH = r"/"
    t_ignore = " \t"

    def __init__(self) -> None:
        self._line = 0
        self._width = 0
        self.lexer = lex.lex(module=self)
        self.parser = yacc.yacc(
            module=self,
            start="expression",
            debug=False,
            write_tables=False,
            errorlog=yacc.NullLogger(),
        )

    def t_NUMBER(self, t):
        r"\d+"
        t.value = int(t.value)
        return t

    def t_NAME(self, t):
        r"[^\W\d][\w']*"
        return t

    def t_error(self, t):
        raise QuiverSpecError(f"unexpected character {t.value[0]!r}", self._line, t.lexpos + 1)

    def p_expression_first(self, p):
        "expression : signed_term"
        p[0] = [p[1]]

    def p_expression_more(self, p):
        """expression : expression PLUS term
                      | expression MINUS term"""
        coefficient, names, column = p[3]
        if p[2] == "-":
            coefficient = -coefficient
        p[0] = p[1] + [(coefficient, names, column)]

    def p_signed_term(self, p):
        """signed_term : term
                       | MINUS term
                       | PLUS term"""
        if len(p) == 2:
            p[0] = p[1]
            return
        coefficient, names, column = p[2]
        p[0] = (-coefficient if p[1] == "-" else coefficient, names, column)

    def p_term_scaled(self, p):
        "term : coefficient path"
        names, column = p[2]
        p[0] = (p[1], names, column)

    def p_term_plain(self, p):
        "term : path"
        names, column = p[1]
        p[0] = (Fraction(1), names, column)

    def p_coefficient_integer(self, p):
        "coefficient : NUMBER"
        p[0] = Fraction(p[1])

    def p_coefficient_ratio(self, p):
        "coefficient : NUMBER SLASH NUMBER"
        if p[3] == 0:
            raise QuiverSpecError("zero denominator in coefficient", self._line, p.lexpos(3) + 1)
        p[0] = Fraction(p[1], p[3])

    def p_path_single(self, p):
        "path : NAME"
        p[0] = ([p[1]], p.lexpos(1) + 1)

    def p_path_compose(self, p):
        "path : path STAR NAME"
        names, column = p[1]
        p[0] = (names + [p[3]], column)

    def p_error(self, p):
        if p is None:
            raise QuiverSpecError("unexpected end of relation", self._line, self._width + 1)
        raise QuiverSpecError(f"unexpected {p.value!r}", self._line, p.lexpos + 1)

    def parse(self, text: str, line: int) -> List[Tuple[Fraction, List[str], int]]:
        self._line = line
        self._width = len(text.rstrip())
        return self.parser.parse(text, lexer=self.lexer)


_GRAMMAR: Optional[_RelationGrammar] = None
# PLY keeps lexer position and parser stacks on the instance.
_GRAMMAR_LOCK = threading.Lock()


def _parse_relation(text: str, line: int) -> List[Tuple[Fraction, List[str], int]]:
    global _GRAMMAR  # noqa: PLW0603
    with _GRAMMAR_LOCK:
        if _GRAMMAR is None:
            _GRAMMAR = _RelationGrammar()
        return _GRAMMAR.parse(text, line)


def _strip_comment(line: str) -> str:
    return line.split("#", 1)[0].rstrip()


def parse_quiver_spec(text: str) -> BoundQuiver:
    name = "quiver"
    vertices: List[str] = []
    vertices_line: Optional[int] = None
    arrows: List[Tuple[Arrow, int, int]] = []
    relation_lines: List[Tuple[str, int]] = []
    section: Optional[str] = None

    for number, raw in enumerate(text.splitlines(), start=1):
        line = _strip_comment(raw)
        stripped = line.strip()
        if not stripped:
            continue
        column = len(line) - len(line.lstrip()) + 1
        keyword = stripped.split(None, 1)[0]
        if keyword == "quiver":
            parts = stripped.split()
            if len(parts) != 2:
                raise QuiverSpecError("expected 'quiver <name>'", number, column)
            name = parts[1]
            section = None
        elif stripped.startswith("vertices:"):
            if vertices_line is not None:
                raise QuiverSpecError(f"vertices already declared on line {vertices_line}", number, column)
            vertices = stripped[len("vertices:"):].split()
            vertices_line = number
            section = None
        elif stripped == "arrows:":
            section = "arrows"
        elif stripped == "relations:":
            section = "relations"
        elif section == "arrows":
            match = _ARROW_LINE.match(line)
            if not match:
                raise QuiverSpecError("expected 'name: source -> target'", number, column)
            arrow_name, source, target = match.groups()
            for endpoint in (source, target):
                if endpoint not in vertices:
                    raise QuiverSpecError(
                        f"arrow {arrow_name!r} uses undeclared vertex {endpoint!r}", number, line.index(endpoint, match.start(2)) + 1
                    )
            if any(existing.name == arrow_name for existing, _, _ in arrows):
                raise QuiverSpecError(f"duplicate arrow {arrow_name!r}", number, column)
            arrows.append((Arrow(arrow_name, source, target), number, column))
        elif section == "relations":
            relation_lines.append((line, number))
        else:
            raise QuiverSpecError(f"unexpected line {stripped!r}", number, column)

    if not vertices:
        raise QuiverSpecError("no vertices declared")
    if len(set(vertices)) != len(vertices):
        raise QuiverSpecError("duplicate vertex identifier", vertices_line)
    try:
        quiver = Quiver(name, tuple(vertices), tuple(a for a, _, _ in arrows))
    except QuiverSpecError as exc:
        raise QuiverSpecError(exc.message, vertices_line) from exc

    relations = []
    for line, number in relation_lines:
        terms = []
        for coefficient, names, column in _parse_relation(line, number):
            try:
                terms.append((coefficient, quiver.path(names)))
            except (QuiverSpecError, CompositionError) as exc:
                raise QuiverSpecError(str(exc), number, column) from exc
        try:
            relations.append(make_relation(terms))
        except QuiverSpecError as exc:
            raise QuiverSpecError(exc.message, number) from exc
    return BoundQuiver(quiver, tuple(relations))


def resolve_quiver_path(reference: str) -> FilePath:
    path = FilePath(reference).expanduser()
    if path.exists():
        return path
    if reference in BUILTIN_QUIVERS:
        return BUILTIN_QUIVERS[reference]
    raise FileNotFoundError(f"quiver spec not found: {reference}")


def load_quiver(reference: str) -> BoundQuiver:
    path = resolve_quiver_path(reference)
    logger.debug("loading quiver spec %s", path)
    return parse_quiver_spec(path.read_text(encoding="utf-8"))


def _parse_rational(token: str, number: int) -> Fraction:
    try:
        return Fraction(token)
    except (ValueError, ZeroDivisionError) as exc:
        raise RepresentationFileError(f"not a rational number: {token!r}", number) from exc


def parse_representation(text: str, bq: BoundQuiver) -> Representation:
    name: Optional[str] = None
    dims: Dict[str, int] = {}
    matrices: Dict[str, List[List[Fraction]]] = {}
    current: Optional[str] = None

    for number, raw in enumerate(text.splitlines(), start=1):
        line = _strip_comment(raw)
        stripped = line.strip()
        if not stripped:
            continue
        keyword = stripped.split(None, 1)[0]
        if keyword == "representation":
            parts = stripped.split()
            if len(parts) != 2:
                raise RepresentationFileError("expected 'representation <name>'", number)
            name = parts[1]
            current = None
        elif keyword == "quiver:":
            current = None
        elif keyword == "dim":
            match = _DIM_LINE.match(line)
            if not match:
                raise RepresentationFileError("expected 'dim <vertex> = <n>'", number)
            vertex, value = match.groups()
            if vertex not in bq.vertices:
                raise RepresentationFileError(f"unknown vertex {vertex!r}", number)
            if vertex in dims:
                raise RepresentationFileError(f"dimension of vertex {vertex!r} given twice", number)
            dims[vertex] = int(value)
            current = None
        elif keyword == "matrix":
            match = _MATRIX_LINE.match(line)
            if not match:
                raise RepresentationFileError("expected 'matrix <arrow>'", number)
            current = match.group(1)
            if current not in {a.name for a in bq.quiver.arrows}:
                raise RepresentationFileError(f"unknown arrow {current!r}", number)
            if current in matrices:
                raise RepresentationFileError(f"matrix of arrow {current!r} given twice", number)
            matrices[current] = []
        elif current is not None:
            matrices[current].append([_parse_rational(token, number) for token in stripped.split()])
        else:
            raise RepresentationFileError(f"unexpected line {stripped!r}", number)

    try:
        return make_representation(bq, dims, matrices, name=name)
    except RepresentationError as exc:
        raise RepresentationFileError(str(exc)) from exc


def representation_header(text: str) -> Optional[str]:
    for raw in text.splitlines():
        stripped = _strip_comment(raw).strip()
        if stripped.startswith("quiver:"):
            return stripped[len("quiver:"):].strip()
    return None


def load_representation(path: str, bq: Optional[BoundQuiver] = None) -> Representation:
    file_path = FilePath(path).expanduser()
    text = file_path.read_text(encoding="utf-8")
    header = representation_header(text)
    if bq is None:
        if header is None:
            raise RepresentationFileError(f"{file_path} does not name its quiver spec ('quiver: <file>')")
        bq = load_quiver(str(file_path.parent / header))
    elif header is not None:
        named = file_path.parent / header
        if named.exists() and parse_quiver_spec(named.read_text(encoding="utf-8")) != bq:
            logger.warning("%s names %s, which differs from the quiver supplied", file_path, header)
    return parse_representation(text, bq)


def file_sha256(path: str) -> str:
    digest = hashlib.sha256()
    with open(path, "rb") as handle:
        for chunk in iter(lambda: handle.read(8192), b""):
            digest.update(chunk)
    return digest.hexdigest()
