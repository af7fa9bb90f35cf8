"""Command-line front end.

Exit codes: 0 success, 1 input error, 2 computation refused, 64 usage error.
``MBCORE_LOG`` (error | info | debug) sets the diagnostic level on stderr.
"""

from __future__ import annotations

import argparse
import json
import logging
import os
import re
import sys
from concurrent.futures import ThreadPoolExecutor
from pathlib import Path

from . import __version__
from .analysis import AnalysisConfig, analyze, dumps, emit_csv, report_json, report_text
from .cfrac import CFExpansion, cf_expand_quadratic, cf_value, gcf_classify, gcf_limits
from .core import distinguish
from .errors import InputError, RefusedError
from .presentations import GCFTower, spec_from_json
from .qnumber import parse_qnumber

EXIT_OK, EXIT_INPUT, EXIT_REFUSED, EXIT_USAGE = 0, 1, 2, 64

log = logging.getLogger("mbcore")


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        raise UsageError(f"{self.prog}: error: {message}")


def load_spec(path: str):
    try:
        text = Path(path).read_text()
    except OSError as exc:
        raise InputError(f"cannot read: {exc.strerror}", path) from None
    try:
        obj = json.loads(text)
    except json.JSONDecodeError as exc:
        raise InputError(f"invalid JSON at line {exc.lineno}, column {exc.colno}: {exc.msg}", path) from None
    try:
        return spec_from_json(obj)
    except InputError as exc:
        raise InputError(str(exc), path) from None


# ---------------------------------------------------------------------------
# commands


def cmd_analyze(args) -> int:
    spec = load_spec(args.file)
    a = analyze(spec, AnalysisConfig(args.place, args.steps, args.tolerance))
    out = {"text": report_text, "json": report_json, "csv": emit_csv}[args.format](a)
    sys.stdout.write(out)
    return EXIT_OK


def _spec_files(path: Path) -> list[Path]:
    if path.is_dir():
        return sorted(p for p in path.iterdir() if p.suffix == ".json")
    return [path]


def _pairs(a: str, b: str | None) -> list[tuple[Path, Path]]:
    pa = Path(a)
    if b is None:
        if not pa.is_dir():
            raise UsageError("classify needs two files, or a directory")
        files = _spec_files(pa)
        return [(x, y) for i, x in enumerate(files) for y in files[i + 1:]]
    return [(x, y) for x in _spec_files(pa) for y in _spec_files(Path(b))]


def _classify_one(pair, group):
    """Report for one pair, or the refusal reason as a string."""
    x, y = pair
    try:
        return distinguish(load_spec(str(x)), load_spec(str(y)), group)
    except RefusedError as exc:
        return f"refused: {exc}"


def _report_json(pair, rep) -> dict:
    if isinstance(rep, str):
        return {"a": str(pair[0]), "b": str(pair[1]), "verdict": rep}
    return {"a": str(pair[0]), "b": str(pair[1]), "verdict": rep.verdict,
            "distinguished_by": list(rep.distinguished_by), "details": rep.details}


def cmd_classify(args) -> int:
    pairs = _pairs(args.file_a, args.file_b)
    if not pairs:
        raise InputError("no pairs of .json inputs to compare", args.file_a)
    with ThreadPoolExecutor() as pool:
        reports = list(pool.map(lambda p: _classify_one(p, args.group), pairs))
    results = sorted(zip(pairs, reports), key=lambda r: (str(r[0][0]), str(r[0][1])))
    refused = [r for _, r in results if isinstance(r, str)]
    if len(results) == 1 and refused:
        raise RefusedError(refused[0].removeprefix("refused: "))
    code = EXIT_REFUSED if refused else EXIT_OK
    if args.format == "json":
        body = [_report_json(p, r) for p, r in results]
        sys.stdout.write(dumps(body[0] if len(body) == 1 and args.file_b else body))
        return code
    for pair, rep in results:
        if len(results) > 1:
            sys.stdout.write(f"{pair[0]} vs {pair[1]}: ")
        sys.stdout.write((rep if isinstance(rep, str) else rep.verdict) + "\n")
        if len(results) == 1:
            d = rep.details
            sys.stdout.write(f"  stability: {', '.join(d['stability'])}\n")
            sys.stdout.write(f"  core types: {', '.join(d['core_types'])}\n")
            ev = d["eigenvalues"]
            sys.stdout.write(f"  eigenvalues: {', '.join(str(v) for v in ev['values'])} ({ev['status']})\n")
            if "cf_tails" in d:
                tails = d["cf_tails"]
                sys.stdout.write(f"  cf tails: {tails if isinstance(tails, str) else ' | '.join(tails)}\n")
            if "note" in d:
                sys.stdout.write(f"  note: {d['note']}\n")
    return code


def cmd_cf_expand(args) -> int:
    x = parse_qnumber(args.number)
    sys.stdout.write(str(cf_expand_quadratic(x)) + "\n")
    return EXIT_OK


_CF_LITERAL = re.compile(r"^\[\s*(-?\d+)\s*(?:;(.*))?\]$")


def parse_cf_literal(text: str) -> CFExpansion:
    """``[a0; a1, a2, (p1, p2, ...)]`` or a JSON object with preperiod/period."""
    text = text.strip()
    if text.startswith("{"):
        try:
            obj = json.loads(text)
            return CFExpansion(tuple(obj.get("preperiod", ())), tuple(obj["period"]))
        except (json.JSONDecodeError, KeyError, TypeError) as exc:
            raise InputError(f"bad expansion object: {exc}", "expansion") from None
    m = _CF_LITERAL.match(text)
    if not m:
        raise InputError("expected [a0; a1, ..., (p1, ..., pk)]", "expansion")
    rest = (m.group(2) or "").strip()
    period_m = re.search(r"\(([^)]*)\)\s*$", rest)
    if not period_m:
        raise InputError("the period must be given in parentheses at the end", "expansion")
    head = [t for t in rest[:period_m.start()].replace(",", " ").split() if t]
    per = [t for t in period_m.group(1).replace(",", " ").split() if t]
    try:
        pre = [int(m.group(1))] + [int(t) for t in head]
        return CFExpansion(tuple(pre), tuple(int(t) for t in per))
    except ValueError as exc:
        raise InputError(str(exc), "expansion") from None


def cmd_cf_value(args) -> int:
    sys.stdout.write(str(cf_value(parse_cf_literal(args.expansion))) + "\n")
    return EXIT_OK


def cmd_gcf(args) -> int:
    spec = load_spec(args.file)
    if not isinstance(spec, GCFTower):
        raise InputError("expected an input of type 'gcf'", "type")
    ks = gcf_classify(spec.alpha, spec.beta, spec.tail_rule)
    lim = gcf_limits(spec.alpha, spec.beta, args.depth, ks, spec.tail_rule)
    encs = [("limit", lim.single)] if lim.single else [("even limit", lim.even), ("odd limit", lim.odd)]
    if args.format == "json":
        sys.stdout.write(dumps({
            "classification": ks.classification.value, "rule": ks.rule_used,
            "caveat": ks.caveat, "depth": str(lim.depth),
            "k_terms": [str(k) for k in ks.terms[:args.depth]],
            "enclosures": [{"name": n, "lo": str(e.lo), "hi": str(e.hi)} for n, e in encs],
        }))
        return EXIT_OK
    sys.stdout.write(f"sum k_n: {ks.classification.value} (rule {ks.rule_used})\n")
    if ks.caveat:
        sys.stdout.write(f"caveat: {ks.caveat}\n")
    for name, e in encs:
        sys.stdout.write(f"{name}: [{float(e.lo):.15g}, {float(e.hi):.15g}]  width {float(e.width):.3g}\n")
    return EXIT_OK


def cmd_selftest(args) -> int:
    from .selftest import run_selftest

    ok = run_selftest(sys.stdout)
    return EXIT_OK if ok else EXIT_REFUSED


# ---------------------------------------------------------------------------
# parser


def build_parser() -> argparse.ArgumentParser:
    p = _Parser(prog="mbcore", description="Homology cores of matrix towers and their invariants.")
    p.add_argument("--version", action="version", version=f"mbcore {__version__}")
    sub = p.add_subparsers(dest="command", required=True, parser_class=_Parser)

    a = sub.add_parser("analyze", help="core, stability, ergodic count of one presentation")
    a.add_argument("file")
    a.add_argument("--place", type=int, default=0)
    a.add_argument("--steps", type=int, default=30)
    a.add_argument("--tolerance", type=float, default=1e-12)
    a.add_argument("--format", choices=("text", "json", "csv"), default="text")
    a.set_defaults(func=cmd_analyze)

    c = sub.add_parser("classify", help="compare two presentations (files or directories)")
    c.add_argument("file_a")
    c.add_argument("file_b", nargs="?")
    c.add_argument("--group", choices=("gl2z", "gl2q"), default="gl2z")
    c.add_argument("--format", choices=("text", "json"), default="text")
    c.set_defaults(func=cmd_classify)

    e = sub.add_parser("cf-expand", help="continued fraction of a quadratic irrational")
    e.add_argument("number")
    e.set_defaults(func=cmd_cf_expand)

    v = sub.add_parser("cf-value", help="exact value of an eventually periodic expansion")
    v.add_argument("expansion")
    v.set_defaults(func=cmd_cf_value)

    g = sub.add_parser("gcf", help="limits of a generalized continued fraction")
    g.add_argument("file")
    g.add_argument("--depth", type=int, default=20)
    g.add_argument("--format", choices=("text", "json"), default="text")
    g.set_defaults(func=cmd_gcf)

    s = sub.add_parser("selftest", help="check the built-in examples")
    s.set_defaults(func=cmd_selftest)
    return p


def _validate(args) -> None:
    if getattr(args, "place", 0) < 0:
        raise UsageError("--place must be >= 0")
    if getattr(args, "steps", 1) < 1:
        raise UsageError("--steps must be >= 1")
    if getattr(args, "tolerance", 1.0) <= 0:
        raise UsageError("--tolerance must be positive")
    if getattr(args, "depth", 4) < 4:
        raise UsageError("--depth must be at least 4")


def _setup_logging() -> None:
    level = os.environ.get("MBCORE_LOG", "error").lower()
    handler = logging.StreamHandler(sys.stderr)
    handler.setFormatter(logging.Formatter("%(levelname)s %(name)s: %(message)s"))
    root = logging.getLogger("mbcore")
    root.handlers[:] = [handler]
    root.setLevel({"debug": logging.DEBUG, "info": logging.INFO}.get(level, logging.ERROR))


def main(argv=None) -> int:
    _setup_logging()
    try:
        args = build_parser().parse_args(argv)
        _validate(args)
        log.info("running %s", args.command)
        return args.func(args)
    except UsageError as exc:
        sys.stderr.write(f"{exc}\n")
        return EXIT_USAGE
    except InputError as exc:
        sys.stderr.write(f"input error: {exc}\n")
        return EXIT_INPUT
    except RefusedError as exc:
        sys.stderr.write(f"refused: {exc}\n")
        return EXIT_REFUSED


if __name__ == "__main__":
    sys.exit(main())
