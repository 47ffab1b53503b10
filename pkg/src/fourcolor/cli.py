"""Command-line entry point: ``fourcolor <command> ...``."""

from __future__ import annotations

import argparse
import operator
import re
import sys
from collections import Counter
from concurrent.futures import ProcessPoolExecutor
from fractions import Fraction
from pathlib import Path

from .configuration import Configuration, radius
from .dispatch import RadiusError, ScriptError, Unencodable, run_presentation
from .formats import FormatError, parse_configs, parse_presentation, parse_rules
from .graph import GraphError, parse_embedded, validate_embedding, wrap_ring
from .overcharge import verify_overcharge_bound
from .reducibility import (DEFAULT_RING_CAP, BudgetExceeded, is_consistent, is_d_reducible,
                           lifted_colorings)

EXIT_OK, EXIT_FAIL, EXIT_INPUT, EXIT_BUDGET = 0, 1, 2, 3
INPUT_ERRORS = (FormatError, GraphError, ScriptError, Unencodable, RadiusError, OSError, ValueError)
TSV_HEADER = "name\tring\tinternal\td_reducible\tremainder\trounds\tmillis"

_OPS = {"<=": operator.le, ">=": operator.ge, "==": operator.eq, "!=": operator.ne,
        "<": operator.lt, ">": operator.gt, "=": operator.eq}
_COND = re.compile(r"^\s*(ring|internal)\s*(<=|>=|==|!=|<|>|=)\s*(\d+)\s*$")


def parse_filter(expr: str | None):
    """``ring<=11,internal>2`` style conjunctions over ring size and internal count."""
    if not expr:
        return lambda ring, internal: True
    conds = []
    for part in expr.split(","):
        m = _COND.match(part)
        if not m:
            raise ValueError(f"cannot parse filter condition {part!r}")
        conds.append((m.group(1), _OPS[m.group(2)], int(m.group(3))))

    def keep(ring: int, internal: int) -> bool:
        vals = {"ring": ring, "internal": internal}
        return all(op(vals[f], n) for f, op, n in conds)
    return keep


def parse_degrees(text: str) -> list[int]:
    out = []
    for part in text.split(","):
        if ".." in part:
            a, b = part.split("..")
            out.extend(range(int(a), int(b) + 1))
        else:
            out.append(int(part))
    return out


def _reduce_one(args):
    k, ring_cap, max_rounds, max_seconds = args
    try:
        v = is_d_reducible(k, ring_cap, max_rounds, max_seconds)
    except BudgetExceeded as exc:
        return ("budget", k.name, str(exc))
    except ValueError as exc:
        return ("error", k.name, str(exc))
    return ("done", v, "")


def cmd_reduce(ns) -> int:
    keep = parse_filter(ns.filter)
    configs = [k for k in parse_configs(Path(ns.configs))
               if keep(_ring(k), len(k.graph))]
    work = [(k, ns.ring_cap, ns.max_rounds, ns.max_seconds) for k in configs]
    if ns.jobs > 1 and len(work) > 1:
        with ProcessPoolExecutor(max_workers=ns.jobs) as pool:
            results = list(pool.map(_reduce_one, work))
    else:
        results = [_reduce_one(w) for w in work]
    rows = [TSV_HEADER]
    status = EXIT_OK
    for k, (kind, v, msg) in zip(configs, results):
        if kind == "done":
            millis = 0 if ns.deterministic else v.millis
            rows.append(f"{v.name}\t{v.ring}\t{v.internal}\t{'yes' if v.reducible else 'no'}\t"
                        f"{v.remainder}\t{v.rounds}\t{millis}")
            if not v.reducible:
                status = max(status, EXIT_FAIL)
        else:
            rows.append(f"{k.name}\t{_ring(k)}\t{len(k.graph)}\t{kind}\t-\t-\t-")
            print(f"{k.name}: {msg}", file=sys.stderr)
            status = EXIT_BUDGET if kind == "budget" else max(status, EXIT_FAIL)
    text = "\n".join(rows) + "\n"
    sys.stdout.write(text)
    if ns.report:
        Path(ns.report).write_text(text, encoding="utf-8")
    return status


def _ring(k: Configuration) -> int:
    from .configuration import ring_size
    return ring_size(k)


def cmd_discharge(ns) -> int:
    rules = parse_rules(Path(ns.rules))
    configs = parse_configs(Path(ns.configs))
    if ns.allow_wide:
        for k in configs:
            if radius(k) > 2:
                print(f"warning: {k.name} has radius {radius(k)} > 2", file=sys.stderr)
    status = EXIT_OK
    degrees = parse_degrees(ns.degrees)
    # parse every script before running any of them
    scripts = {d: parse_presentation(Path(ns.present) / f"present{d}.txt", d) for d in degrees}
    for d, script in scripts.items():
        rep = run_presentation(d, script, configs, rules, verbose=ns.verbose,
                               strict_radius=not ns.allow_wide)
        for line in rep.trace:
            print(line)
        if rep.success:
            print(f"degree {d}: pass ({len(rep.outcomes)} lines)")
        else:
            where = f" at line {rep.failed_line}" if rep.failed_line is not None else ""
            print(f"degree {d}: FAIL{where}: {rep.reason}")
            status = EXIT_FAIL
    return status


def cmd_overcharge(ns) -> int:
    rules = parse_rules(Path(ns.rules))
    screen = parse_configs(Path(ns.configs)) if ns.configs else []
    rep = verify_overcharge_bound(rules, screen, Fraction(ns.bound))
    print("\n".join(rep.lines()))
    return EXIT_OK if rep.passed else EXIT_FAIL


def cmd_stats(ns) -> int:
    configs = parse_configs(Path(ns.configs))
    hist = Counter(_ring(k) for k in configs)
    total = sum(hist.values())
    print("ring\tcount\tpercent")
    for r in sorted(hist):
        print(f"{r}\t{hist[r]}\t{100 * hist[r] / total:.1f}")
    print(f"total\t{total}\t{100.0 if total else 0.0:.1f}")
    return EXIT_OK


def _sniff(text: str) -> str:
    for raw in text.splitlines():
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        word = line.split()[0]
        if word == "config":
            return "configs"
        if word == "rule":
            return "rules"
        if word == "degree" or re.match(r"^L\d+$", word):
            return "presentation"
        return "graph"
    return "configs"


def cmd_validate(ns) -> int:
    text = Path(ns.file).read_text(encoding="utf-8")
    kind = _sniff(text)
    try:
        if kind == "configs":
            n = len(parse_configs(text))
        elif kind == "rules":
            rules = parse_rules(text)
            for r in rules:
                for w in r.warnings:
                    print(f"warning: {w}")
            n = len(rules)
        elif kind == "presentation":
            n = len(parse_presentation(text).lines)
        else:
            rep = validate_embedding(parse_embedded(text))
            if not rep.valid:
                for v in rep.violations:
                    print(f"invalid: {v}")
                return EXIT_FAIL
            n = rep.vertices
    except (FormatError, GraphError) as exc:
        print(f"invalid {kind}: {exc}")
        return EXIT_FAIL
    print(f"valid {kind}: {n} {'vertices' if kind == 'graph' else 'records'}")
    return EXIT_OK


def cmd_oracle(ns) -> int:
    g = parse_embedded(Path(ns.graph).read_text(encoding="utf-8"))
    if ns.face:
        a, b = (int(x) for x in ns.face.split(","))
        dart = (a, b)
    else:
        dart = max(g.faces, key=lambda f: (len(f), [(-x, -y) for x, y in f]))[0]
    wrap = wrap_ring(g, dart)
    cset = lifted_colorings(g, wrap)
    ok = is_consistent(cset)
    print(f"ring {len(wrap.ring.vertices)} colorings {len(cset)} consistent {'yes' if ok else 'no'}")
    return EXIT_OK if ok else EXIT_FAIL


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="fourcolor", description=__doc__)
    sub = p.add_subparsers(dest="command", required=True)

    v = sub.add_parser("validate", help="check a configuration, rule, script or graph file")
    v.add_argument("file")
    v.set_defaults(func=cmd_validate)

    r = sub.add_parser("reduce", help="test configurations for D-reducibility")
    r.add_argument("configs")
    r.add_argument("--jobs", type=int, default=1)
    r.add_argument("--filter", help="e.g. 'ring<=11' or 'ring<=11,internal>3'")
    r.add_argument("--report", help="also write the TSV report here")
    r.add_argument("--ring-cap", type=int, default=DEFAULT_RING_CAP)
    r.add_argument("--max-rounds", type=int)
    r.add_argument("--max-seconds", type=float)
    r.add_argument("--deterministic", action="store_true", help="report 0 in the millis column")
    r.set_defaults(func=cmd_reduce)

    d = sub.add_parser("discharge", help="run presentation scripts")
    d.add_argument("--rules", required=True)
    d.add_argument("--configs", required=True)
    d.add_argument("--present", required=True, help="directory holding present<d>.txt")
    d.add_argument("--degrees", default="5..11")
    d.add_argument("--verbose", action="store_true")
    d.add_argument("--allow-wide", action="store_true",
                   help="warn instead of failing on configurations of radius > 2")
    d.set_defaults(func=cmd_discharge)

    o = sub.add_parser("overcharge", help="bound the charge sent into a vertex of degree >= 12")
    o.add_argument("--rules", required=True)
    o.add_argument("--configs")
    o.add_argument("--bound", default="5/10")
    o.set_defaults(func=cmd_overcharge)

    s = sub.add_parser("stats", help="ring-size histogram")
    s.add_argument("configs")
    s.set_defaults(func=cmd_stats)

    orc = sub.add_parser("oracle", help="direct-definition checks")
    osub = orc.add_subparsers(dest="oracle", required=True)
    c = osub.add_parser("consistency", help="is the lifted coloring set of a graph consistent")
    c.add_argument("graph")
    c.add_argument("--face", help="ring face as a dart 'u,v' (default: longest face)")
    c.set_defaults(func=cmd_oracle)
    return p


def main(argv: list[str] | None = None) -> int:
    ns = build_parser().parse_args(argv)
    try:
        return ns.func(ns)
    except BudgetExceeded as exc:
        print(f"budget exceeded: {exc}", file=sys.stderr)
        return EXIT_BUDGET
    except INPUT_ERRORS as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INPUT


if __name__ == "__main__":
    sys.exit(main())
