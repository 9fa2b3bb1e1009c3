"""Line-oriented text format for nets, plus outcome syntax.

::

    # comments run to the end of the line
    pcpnet                      # or: cpnet | cpnet incomplete
    var X
    var Y <- X
    X : 1>0 (0.1)
    Y | X=1 : 1>0 (0.2)
    Y | X=0 : 0>1 (0.7)

``1>0`` reads "value 1 preferred to value 0" (x preferred to x-bar). The
probability in parentheses is the weight of the written orientation; it is
required for ``pcpnet``, forbidden otherwise. Rule lines may be left out only
in ``cpnet incomplete`` files.
"""

from __future__ import annotations

import re
import sys
from dataclasses import dataclass, field

from .errors import CycleDetected, ParseError, PCPNetError, SemanticError
from .model import CPNet, IncompleteCPNet, PCPNet, RuleSlot, Structure

KINDS = {"pcpnet": "pcp", "cpnet": "det", "cpnet incomplete": "incomplete"}
HEADERS = {v: k for k, v in KINDS.items()}
MODEL_KIND = {PCPNet: "pcp", CPNet: "det", IncompleteCPNet: "incomplete"}

_NAME = re.compile(r"[A-Za-z_][A-Za-z0-9_]*")
_WS = re.compile(r"\s*")
_PREF = re.compile(r"([01])\s*>\s*([01])")
_NUMBER = re.compile(r"(?:[0-9]+\.?[0-9]*|\.[0-9]+)(?:[eE][-+]?[0-9]+)?")


@dataclass(frozen=True)
class NetDocument:
    kind: str
    model: object
    positions: dict = field(default_factory=dict, compare=False, repr=False)

    @property
    def structure(self) -> Structure:
        return self.model.structure


class _Cursor:
    def __init__(self, text: str, line: int):
        self.text = text
        self.line = line
        self.pos = 0

    def skip(self):
        self.pos = _WS.match(self.text, self.pos).end()

    def error(self, message, pos=None):
        return ParseError(self.line, (self.pos if pos is None else pos) + 1, message)

    def expect(self, pattern, what):
        self.skip()
        m = pattern.match(self.text, self.pos)
        if not m:
            found = self.text[self.pos : self.pos + 10] or "end of line"
            raise self.error(f"expected {what}, found {found!r}")
        self.pos = m.end()
        return m

    def accept(self, literal):
        self.skip()
        if self.text.startswith(literal, self.pos):
            self.pos += len(literal)
            return True
        return False

    def at_end(self):
        self.skip()
        return self.pos >= len(self.text)


@dataclass
class _Rule:
    line: int
    var: str
    var_col: int
    context: list
    pref: int
    prob: float | None


def _strip_comment(raw: str) -> str:
    i = raw.find("#")
    return raw if i < 0 else raw[:i]


def _parse_rule(cur: _Cursor, kind: str) -> _Rule:
    cur.skip()
    col = cur.pos + 1
    name = cur.expect(_NAME, "a variable name").group()
    context = []
    if cur.accept("|"):
        while True:
            pcol = cur.pos
            parent = cur.expect(_NAME, "a parent name").group()
            if not cur.accept("="):
                raise cur.error("expected '=' after parent name")
            value = int(cur.expect(re.compile("[01]"), "0 or 1").group())
            context.append((parent, value, pcol))
            if not cur.accept(","):
                break
    if not cur.accept(":"):
        raise cur.error("expected ':'")
    m = cur.expect(_PREF, "'1>0' or '0>1'")
    if m.group(1) == m.group(2):
        raise cur.error("orientation must compare 1 with 0", m.start())
    pref = int(m.group(1))
    prob = None
    if cur.accept("("):
        if kind != "pcp":
            raise cur.error("probabilities are only allowed in pcpnet files", cur.pos - 1)
        num = cur.expect(_NUMBER, "a decimal probability")
        prob = float(num.group())
        if not 0.0 <= prob <= 1.0:
            raise cur.error(f"probability {num.group()} outside [0, 1]", num.start())
        if not cur.accept(")"):
            raise cur.error("expected ')'")
    elif kind == "pcp":
        raise cur.error("expected '(probability)'")
    if not cur.at_end():
        raise cur.error("unexpected text after rule")
    return _Rule(cur.line, name, col, context, pref, prob)


def parse_net(text: str) -> NetDocument:
    """Parse a net file; raises :class:`ParseError` or :class:`SemanticError`."""
    kind = None
    names: list[str] = []
    declared: dict[str, int] = {}
    parent_names: dict[str, list] = {}
    rules: list[_Rule] = []

    for lineno, raw in enumerate(text.splitlines(), start=1):
        body = _strip_comment(raw)
        if not body.strip():
            continue
        cur = _Cursor(body, lineno)
        if kind is None:
            header = " ".join(body.split())
            if header not in KINDS:
                cur.skip()
                raise cur.error("expected header 'pcpnet', 'cpnet' or 'cpnet incomplete'")
            kind = KINDS[header]
            continue
        cur.skip()
        if re.match(r"var\s+[A-Za-z_]", body[cur.pos :]):
            cur.pos += 3
            m = cur.expect(_NAME, "a variable name")
            name = m.group()
            if name in declared:
                raise SemanticError(None, f"variable {name} declared twice (first on line {declared[name]})", lineno)
            declared[name] = lineno
            names.append(name)
            pa = []
            if cur.accept("<-"):
                while True:
                    pa.append((cur.expect(_NAME, "a parent name").group(), cur.pos))
                    if not cur.accept(","):
                        break
            if not cur.at_end():
                raise cur.error("unexpected text after variable declaration")
            parent_names[name] = pa
            continue
        rules.append(_parse_rule(cur, kind))

    if kind is None:
        raise ParseError(1, 1, "empty file: expected a header line")
    if not names:
        raise SemanticError(None, "no variables declared")

    for name, pa in parent_names.items():
        seen = set()
        for p, _ in pa:
            if p not in declared:
                raise SemanticError(None, f"unknown parent {p} of {name}", declared[name])
            if p in seen:
                raise SemanticError(None, f"parent {p} of {name} listed twice", declared[name])
            seen.add(p)
    try:
        structure = Structure.from_names(names, {n: [p for p, _ in pa] for n, pa in parent_names.items()})
    except CycleDetected as e:
        raise SemanticError(None, f"structure is cyclic: {e}") from None

    table: list = [None] * structure.n_slots
    positions: dict = {}
    for r in rules:
        if r.var not in declared:
            raise SemanticError(None, f"rule for undeclared variable {r.var}", r.line)
        x = structure.index(r.var)
        expected = [structure.names[y] for y in structure.parents[x]]
        given = {}
        for parent, value, _ in r.context:
            if parent in given:
                raise SemanticError(None, f"parent {parent} assigned twice", r.line)
            given[parent] = value
        if set(given) != set(expected):
            want = ", ".join(expected) or "no parents"
            raise SemanticError(None, f"context of {r.var} must assign exactly its parents ({want})", r.line)
        ctx = tuple(given[p] for p in expected)
        slot = RuleSlot(x, ctx)
        i = structure.slot_index(x, ctx)
        if i in positions:
            raise SemanticError(structure.slot_label(slot), f"duplicate rule (first on line {positions[i]})", r.line)
        positions[i] = r.line
        if kind == "pcp":
            table[i] = r.prob if r.pref == 1 else 1.0 - r.prob
        else:
            table[i] = r.pref

    if kind != "incomplete":
        missing = [structure.slot_label(i) for i, v in enumerate(table) if v is None]
        if missing:
            raise SemanticError(missing[0], f"missing rule ({len(missing)} slot(s) uncovered)")
    model = {"pcp": PCPNet, "det": CPNet, "incomplete": IncompleteCPNet}[kind](structure, tuple(table))
    return NetDocument(kind, model, positions)


def _format_prob(p) -> str:
    return repr(float(p))


def serialize_net(model) -> str:
    if isinstance(model, NetDocument):
        model = model.model
    kind = MODEL_KIND[type(model)]
    s = model.structure
    lines = [HEADERS[kind]]
    for x, name in enumerate(s.names):
        pa = s.parents[x]
        lines.append(f"var {name}" + (f" <- {', '.join(s.names[y] for y in pa)}" if pa else ""))
    for slot, v in model.items():
        if v is None:
            continue
        head = s.slot_label(slot)
        if kind == "pcp":
            lines.append(f"{head} : 1>0 ({_format_prob(v)})")
        else:
            lines.append(f"{head} : {v}>{1 - v}")
    return "\n".join(lines) + "\n"


def read_text(path: str) -> str:
    if path == "-":
        return sys.stdin.read()
    with open(path, encoding="utf-8") as fh:
        return fh.read()


def load_net(path: str) -> NetDocument:
    return parse_net(read_text(path))


def parse_outcome(s: Structure, text: str) -> tuple:
    """``NAME=0|1`` pairs separated by commas, covering every variable."""
    values = {}
    for part in text.split(","):
        part = part.strip()
        m = re.fullmatch(r"([A-Za-z_][A-Za-z0-9_]*)\s*=\s*([01])", part)
        if not m:
            raise PCPNetError(f"bad outcome component {part!r}; expected NAME=0 or NAME=1")
        if m.group(1) in values:
            raise PCPNetError(f"variable {m.group(1)} assigned twice in outcome")
        values[m.group(1)] = int(m.group(2))
    return s.outcome(values)


def format_outcome(s: Structure, o) -> str:
    return ",".join(f"{name}={v}" for name, v in zip(s.names, o))
