"""Line-based text formats for configurations, rules and presentation scripts."""

from __future__ import annotations

import re
from pathlib import Path
from typing import Iterable, Iterator

from .configuration import (Configuration, ConfigurationError, completion_from_rotations, core_of,
                            free_completion, validate_configuration)
from .dispatch import Line, PresentationScript, ScriptError, Triplet, Unencodable, check_depths, rule_as_parts
from .graph import GraphError
from .rules import INF, DischargingRule, RuleError, make_rule


class FormatError(ValueError):
    def __init__(self, message: str, lineno: int | None = None, record: str | None = None):
        where = []
        if lineno is not None:
            where.append(f"line {lineno}")
        if record:
            where.append(f"record {record}")
        super().__init__(f"{', '.join(where)}: {message}" if where else message)
        self.lineno = lineno
        self.record = record


_ROT = re.compile(r"^(\d+)\s*:\s*([\d\s]*);$")


def _lines(text: str) -> Iterator[tuple[int, str]]:
    for lineno, raw in enumerate(text.splitlines(), 1):
        line = raw.split("#", 1)[0].strip()
        if line:
            yield lineno, line


def _read(source: str | Path) -> str:
    if isinstance(source, Path) or "\n" not in source and Path(source).exists():
        return Path(source).read_text(encoding="utf-8")
    return source


def _int(tok: str, lineno: int, what: str) -> int:
    try:
        return int(tok)
    except ValueError:
        raise FormatError(f"{what} must be an integer, got {tok!r}", lineno) from None


def _rot_line(line: str, lineno: int) -> tuple[int, list[int]]:
    m = _ROT.match(line)
    if not m:
        raise FormatError(f"cannot parse rotation line {line!r}", lineno)
    return int(m.group(1)), [int(x) for x in m.group(2).split()]


# -- configurations -------------------------------------------------------------

def parse_configs(source: str | Path) -> list[Configuration]:
    """Configurations in file order; ``source`` is a path or the file text."""
    out: list[Configuration] = []
    names: set[str] = set()
    cur = None
    for lineno, line in _lines(_read(source)):
        head = line.split()
        if cur is None:
            if head[0] != "config" or len(head) != 2:
                raise FormatError("expected 'config <name>'", lineno)
            if head[1] in names:
                raise FormatError(f"duplicate configuration name {head[1]!r}", lineno)
            cur = {"name": head[1], "start": lineno, "ring": None, "internal": None, "rot": {}}
            names.add(head[1])
        elif head[0] in ("ring", "internal") and len(head) == 2:
            cur[head[0]] = _int(head[1], lineno, head[0])
        elif head[0] == "end":
            out.append(_finish_config(cur, lineno))
            cur = None
        else:
            v, ns = _rot_line(line, lineno)
            if v in cur["rot"]:
                raise FormatError(f"vertex {v} listed twice", lineno, cur["name"])
            cur["rot"][v] = ns
    if cur is not None:
        raise FormatError("missing 'end'", cur["start"], cur["name"])
    return out


def _finish_config(cur: dict, lineno: int) -> Configuration:
    name, r, n = cur["name"], cur["ring"], cur["internal"]
    if r is None or n is None:
        raise FormatError("'ring' and 'internal' are required", cur["start"], name)
    if sorted(cur["rot"]) != list(range(r + 1, r + n + 1)):
        raise FormatError(f"internal vertices must be {r + 1}..{r + n}", cur["start"], name)
    try:
        s = completion_from_rotations(cur["rot"], r)
        k = core_of(s, name)
    except (GraphError, ConfigurationError) as exc:
        raise FormatError(str(exc), cur["start"], name) from None
    rep = validate_configuration(k)
    if not rep.valid:
        raise FormatError("; ".join(str(v) for v in rep.violations), cur["start"], name)
    if rep.ring_size != r:
        raise FormatError(f"ring is {r} but the configuration needs {rep.ring_size}",
                          cur["start"], name)
    return k


def emit_config(k: Configuration) -> str:
    s = free_completion(k)
    r = s.ring_size
    out = [f"config {k.name}", f"ring {r}", f"internal {len(s.core)}"]
    for v in s.core:
        out.append(f"{v} : {' '.join(map(str, s.graph.rot[v]))} ;")
    out.append("end")
    return "\n".join(out) + "\n"


def emit_configs(ks: Iterable[Configuration]) -> str:
    return "".join(emit_config(k) for k in ks)


# -- rules ----------------------------------------------------------------------

def parse_rules(source: str | Path, degrees: Iterable[int] = range(5, 12)) -> list[DischargingRule]:
    """Rules in file order; each is checked to be encodable at every hub degree given."""
    out: list[DischargingRule] = []
    names: set[str] = set()
    cur = None
    degrees = list(degrees)
    for lineno, line in _lines(_read(source)):
        head = line.split()
        if cur is None:
            if head[0] != "rule" or len(head) != 2:
                raise FormatError("expected 'rule <id>'", lineno)
            if head[1] in names:
                raise FormatError(f"duplicate rule name {head[1]!r}", lineno)
            names.add(head[1])
            cur = {"name": head[1], "start": lineno, "q": None, "bounds": {}, "rot": {}, "ends": None}
        elif head[0] == "q" and len(head) == 2:
            cur["q"] = _int(head[1], lineno, "q")
        elif head[0] == "vertex" and len(head) == 4:
            v = _int(head[1], lineno, "vertex")
            hi = INF if head[3] == "*" else _int(head[3], lineno, "upper bound")
            cur["bounds"][v] = (_int(head[2], lineno, "lower bound"), hi)
        elif head[0] == "adj":
            v, ns = _rot_line(line[3:].strip(), lineno)
            cur["rot"][v] = ns
        elif head[0] == "source" and len(head) == 4 and head[2] == "sink":
            cur["ends"] = (_int(head[1], lineno, "source"), _int(head[3], lineno, "sink"))
        elif head[0] == "end":
            out.append(_finish_rule(cur, degrees))
            cur = None
        else:
            raise FormatError(f"unexpected line {line!r}", lineno, cur["name"])
    if cur is not None:
        raise FormatError("missing 'end'", cur["start"], cur["name"])
    return out


def _finish_rule(cur: dict, degrees) -> DischargingRule:
    name = cur["name"]
    if cur["q"] is None:
        raise FormatError("missing 'q'", cur["start"], name)
    if cur["ends"] is None:
        raise FormatError("missing 'source <s> sink <t>'", cur["start"], name)
    if set(cur["bounds"]) != set(cur["rot"]):
        raise FormatError("every vertex needs both a 'vertex' and an 'adj' line", cur["start"], name)
    try:
        rule = make_rule(name, cur["q"], cur["rot"], *cur["ends"], cur["bounds"])
        for d in degrees:
            rule_as_parts(rule, d)
    except (RuleError, GraphError, Unencodable) as exc:
        raise FormatError(str(exc), cur["start"], name) from None
    return rule


def emit_rule(rule: DischargingRule) -> str:
    out = [f"rule {rule.name}", f"q {rule.q10}"]
    for v in rule.graph.vertices:
        hi = "*" if rule.hi[v] == INF else str(int(rule.hi[v]))
        out.append(f"vertex {v} {rule.lo[v]} {hi}")
    for v in rule.graph.vertices:
        out.append(f"adj {v} : {' '.join(map(str, rule.graph.rot[v]))} ;")
    out.append(f"source {rule.source} sink {rule.sink}")
    out.append("end")
    return "\n".join(out) + "\n"


def emit_rules(rules: Iterable[DischargingRule]) -> str:
    return "".join(emit_rule(r) for r in rules)


# -- presentation scripts -------------------------------------------------------

_LINE = re.compile(r"^L(\d+)\s+([A-Za-z])\b\s*(.*)$")
_TRIPLET = re.compile(r"\(\s*(-?\d+)\s+(-?\d+)\s+(-?\d+)\s*\)")


def parse_presentation(source: str | Path, degree: int | None = None) -> PresentationScript:
    """A depth-checked script; the hub degree comes from a ``degree <d>`` line or ``degree``."""
    lines: list[Line] = []
    d = degree
    for lineno, line in _lines(_read(source)):
        if line.startswith("degree"):
            parts = line.split()
            if len(parts) != 2:
                raise FormatError("expected 'degree <d>'", lineno)
            val = _int(parts[1], lineno, "degree")
            if d is not None and val != d:
                raise FormatError(f"script is for degree {val}, expected {d}", lineno)
            d = val
            continue
        m = _LINE.match(line)
        if not m:
            raise FormatError(f"cannot parse {line!r}", lineno)
        depth, kind, rest = int(m.group(1)), m.group(2), m.group(3).strip()
        toks = rest.split()
        if kind == "C":
            if len(toks) != 2:
                raise FormatError("C needs <m> <n>", lineno)
            args = (_int(toks[0], lineno, "m"), _int(toks[1], lineno, "n"))
        elif kind == "R":
            if toks:
                raise FormatError("R takes no arguments", lineno)
            args = ()
        elif kind == "H":
            trips = _TRIPLET.findall(rest)
            if not trips or _TRIPLET.sub("", rest).strip():
                raise FormatError("H needs triplets '(<u> <v> <q>)'", lineno)
            args = tuple(Triplet(int(u), int(v), int(q)) for u, v, q in trips)
        elif kind == "S":
            if len(toks) not in (2, 3) or (len(toks) == 3 and toks[2] != "M"):
                raise FormatError("S needs <part-index> <rotation> [M]", lineno)
            args = (_int(toks[0], lineno, "part index"), _int(toks[1], lineno, "rotation"),
                    len(toks) == 3)
        else:
            raise FormatError(f"unknown line kind {kind!r}", lineno)
        lines.append(Line(lineno, depth, kind, args))
    if d is None:
        raise FormatError("no 'degree <d>' line and no degree given")
    try:
        check_depths(d, lines)
    except ScriptError as exc:
        raise FormatError(str(exc)) from None
    return PresentationScript(d, lines)


def emit_presentation(script: PresentationScript) -> str:
    out = [f"degree {script.d}"]
    for ln in script.lines:
        if ln.kind == "C":
            rest = f" {ln.args[0]} {ln.args[1]}"
        elif ln.kind == "H":
            rest = " " + "".join(f"({t.u} {t.v} {t.q10})" for t in ln.args)
        elif ln.kind == "S":
            rest = f" {ln.args[0]} {ln.args[1]}" + (" M" if ln.args[2] else "")
        else:
            rest = ""
        out.append(f"L{ln.depth} {ln.kind}{rest}")
    return "\n".join(out) + "\n"
