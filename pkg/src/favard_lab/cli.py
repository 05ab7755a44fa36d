"""Command line front end: ``favard-lab <command> [flags]``.

Every command accepts ``--config FILE`` (flat ``key=value`` lines, ``#``
comments, keys named like the long flags) and ``--workers``; flags given on
the command line override the file. The resolved configuration is logged to
stderr. Exit codes: 0 success, 2 invalid input, 3 quadrature not converged.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import logging
import math
import re
import sys
from pathlib import Path


from . import __version__
from .curves import extend_curve, make_circle_arc, make_parabola
from .estimators import (McSpec, QuadratureSpec, buffon_curve_mc, favard_curve_length, favard_length,
                         fit_decay)
from .fractals import (WeightedPointCloud, boundary, cantor_generation, corner_ifs_generation,
                       sample_points, squares_to_csv, unit_segment)
from .multiscale import (PreconditionError, RectSearch, SectorSpec, hausdorff_content_cover,
                         rectifiability_constant_lower, sliding_pigeonhole, verify_sector_comparability,
                         verify_strip_containment)
from .parallel import THREADS_ENV
from .svgplot import loglog_svg

log = logging.getLogger("favard_lab")

EXIT_OK, EXIT_INVALID, EXIT_NOT_CONVERGED = 0, 2, 3
DEFAULT_CURVE = "circle-arc:R=2,I=[-1,1]"


class UsageError(ValueError):
    """Malformed command input (bad spec string, unreadable table, ...)."""


def _g(x: float) -> str:
    return format(float(x), ".17g")


# ---------------------------------------------------------------- spec parsing

def parse_curve(text: str):
    """``parabola:h=0.5,I=[-0.9,0.9]`` or ``circle-arc:R=2,I=[-1,1]``; ``;`` joins pieces."""
    pieces = [p.strip() for p in text.split(";") if p.strip()]
    if len(pieces) > 1:
        return [parse_curve(p) for p in pieces]
    m = re.fullmatch(r"\s*([a-z-]+)\s*:(.*)", text)
    if not m:
        raise UsageError(f"cannot parse curve spec {text!r}")
    kind, body = m.group(1), m.group(2)
    dom = re.search(r"I\s*=\s*\[\s*([^,\]]+)\s*,\s*([^\]]+)\]", body)
    if not dom:
        raise UsageError(f"curve spec {text!r} needs a domain I=[a,b]")
    domain = (float(dom.group(1)), float(dom.group(2)))
    rest = (body[:dom.start()] + body[dom.end():]).strip(" ,")
    params = {}
    for item in filter(None, (s.strip() for s in rest.split(","))):
        key, sep, val = item.partition("=")
        if not sep:
            raise UsageError(f"curve parameter {item!r} is not key=value")
        params[key.strip()] = float(val)
    if kind == "parabola":
        h = params.pop("h", params.pop("half_curvature", None))
        if h is None or params:
            raise UsageError("parabola takes exactly h=<half curvature>")
        return extend_curve(make_parabola(h, domain))
    if kind == "circle-arc":
        R = params.pop("R", params.pop("radius", None))
        if R is None or params:
            raise UsageError("circle-arc takes exactly R=<radius>")
        return extend_curve(make_circle_arc(R, domain))
    raise UsageError(f"unknown curve kind {kind!r} (parabola, circle-arc)")


def _index_range(text: str) -> list[int]:
    a, sep, b = text.partition("-")
    lo, hi = int(a), int(b) if sep else int(a)
    if hi < lo:
        raise UsageError(f"empty range {text!r}")
    return list(range(lo, hi + 1))


def parse_set(text: str) -> list[tuple[int, object]]:
    """Set specs: ``cantor:n``, ``cantor:a-b``, ``boundary:n``, ``ifs:base,digits,n``, ``square``, ``segment``."""
    kind, _, arg = text.strip().partition(":")
    if kind == "square":
        return [(0, cantor_generation(0))]
    if kind == "segment":
        return [(0, unit_segment())]
    if kind == "cantor":
        return [(n, cantor_generation(n)) for n in _index_range(arg)]
    if kind == "boundary":
        return [(n, boundary(cantor_generation(n))) for n in _index_range(arg)]
    if kind == "ifs":
        parts = arg.split(",")
        if len(parts) != 3:
            raise UsageError("ifs spec is ifs:base,digits,n (digits as one string, e.g. 03)")
        base, digits = int(parts[0]), [int(ch) for ch in parts[1]]
        return [(n, corner_ifs_generation(n, digits, base)) for n in _index_range(parts[2])]
    raise UsageError(f"unknown set spec {text!r}")


def _point(text: str) -> tuple[float, float]:
    parts = text.split(",")
    if len(parts) != 2:
        raise UsageError(f"expected x,y but got {text!r}")
    return float(parts[0]), float(parts[1])


def _count(text: str) -> int:
    v = float(text)
    if v != int(v):
        raise argparse.ArgumentTypeError(f"{text!r} is not an integer")
    return int(v)


def read_table(path: str) -> list[dict[str, str]]:
    try:
        text = Path(path).read_text()
    except OSError as exc:
        raise UsageError(f"cannot read {path}: {exc}") from exc
    return list(csv.DictReader(io.StringIO(text)))


def _table_points(path: str) -> list[tuple[float, float]]:
    rows = read_table(path)
    if not rows or "n" not in rows[0] or "value" not in rows[0]:
        raise UsageError(f"{path} needs columns n,value")
    return [(float(r["n"]), float(r["value"])) for r in rows]


# ---------------------------------------------------------------- output

def _write(path: str | None, text: str) -> None:
    if path in (None, "-"):
        sys.stdout.write(text)
    else:
        Path(path).write_text(text)


def _rows_csv(rows) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(["n", "value", "std_error"])
    for n, value, err in rows:
        w.writerow([n, _g(value), _g(err)])
    return buf.getvalue()


def _jsonl(records) -> str:
    return "".join(json.dumps(r, sort_keys=True) + "\n" for r in records)


# ---------------------------------------------------------------- commands

def cmd_gen_cantor(args) -> int:
    s = cantor_generation(args.n) if args.digits is None else \
        corner_ifs_generation(args.n, [int(c) for c in args.digits], args.base)
    _write(args.out, squares_to_csv(s))
    return EXIT_OK


def _quad(args) -> QuadratureSpec:
    return QuadratureSpec(rel_tol=args.quad_tol, max_refinements=args.max_refinements)


def _report_quadrature(rows, results) -> int:
    bad = [n for (n, *_), r in zip(rows, results) if not r.converged]
    if bad:
        log.warning("quadrature did not converge for n = %s", bad)
        return EXIT_NOT_CONVERGED
    return EXIT_OK


def cmd_favard(args) -> int:
    results = [(n, favard_length(s, _quad(args), args.workers)) for n, s in parse_set(args.set)]
    rows = [(n, r.value, r.error) for n, r in results]
    _write(args.out, _rows_csv(rows))
    return _report_quadrature(rows, [r for _, r in results])


def cmd_favc(args) -> int:
    curve = parse_curve(args.curve)
    results = [(n, favard_curve_length(curve, s, _quad(args), args.workers)) for n, s in parse_set(args.set)]
    rows = [(n, r.value, r.error) for n, r in results]
    _write(args.out, _rows_csv(rows))
    return _report_quadrature(rows, [r for _, r in results])


def cmd_buffon(args) -> int:
    curve = parse_curve(args.curve)
    if isinstance(curve, list):
        raise UsageError("buffon takes a single curve piece")
    mc = McSpec(samples=args.samples, seed=args.seed, batch=args.batch, t_nodes=args.t_nodes)
    rows = []
    for n, s in parse_set(args.set):
        if not hasattr(s, "squares"):
            raise UsageError("buffon needs a set with area (cantor:, ifs: or square)")
        r = buffon_curve_mc(curve, s, mc, workers=args.workers)
        rows.append((n, r.estimate, r.std_error))
    _write(args.out, _rows_csv(rows))
    return EXIT_OK


def cmd_decay(args) -> int:
    pts = [(n, v) for n, v in _table_points(args.input) if n >= args.n_min and (args.n_max is None or n <= args.n_max)]
    fit = fit_decay(pts)
    rec = {"exponent": fit.exponent, "log_intercept": fit.log_intercept, "residual": fit.residual,
           "n": [int(n) if n == int(n) else n for n, _ in pts]}
    _write(args.out, _jsonl([rec]))
    if args.plot:
        fitted = [(n, math.exp(fit.log_intercept) * n ** (-fit.exponent)) for n, _ in pts]
        Path(args.plot).write_text(loglog_svg({Path(args.input).stem: pts, f"fit p={fit.exponent:.3f}": fitted},
                                              title=args.title or "decay"))
    return EXIT_OK


def cmd_plot(args) -> int:
    series = {Path(p).stem: _table_points(p) for p in args.input}
    _write(args.out, loglog_svg(series, title=args.title or "", references=not args.no_references))
    return EXIT_OK


def cmd_sector_check(args) -> int:
    curve = parse_curve(args.curve)
    if isinstance(curve, list):
        raise UsageError("sector-check takes a single curve piece")
    spec = SectorSpec(_point(args.e), args.alpha, args.r, args.M, curve)
    strict = not args.no_strict
    records, status = [], EXIT_OK
    try:
        rep = verify_sector_comparability(spec, args.samples, args.seed, strict, args.workers)
        records.append({"check": "comparability", "checked": rep.checked,
                        "inner_violations": rep.inner_violations, "outer_violations": rep.outer_violations,
                        "slice_violations": rep.slice_violations, "curve_members": rep.curve_members,
                        "inner_members": rep.inner_members, "c1": rep.c1, "max_slice": rep.max_slice,
                        "slice_bound": rep.slice_bound})
    except PreconditionError as exc:
        records.append({"check": "comparability", "error": str(exc)})
        status = EXIT_INVALID
    try:
        rep = verify_strip_containment(spec, args.samples, args.seed, strict, args.workers)
        records.append({"check": "strip", "checked": rep.checked, "members": rep.members,
                        "violations": rep.violations, "J": list(rep.J)})
    except PreconditionError as exc:
        records.append({"check": "strip", "error": str(exc)})
        status = EXIT_INVALID
    _write(args.out, _jsonl(records))
    return status


def cmd_pigeonhole(args) -> int:
    rows = read_table(args.masses)
    if not rows:
        raise UsageError(f"{args.masses} has no rows")
    key = "mass" if "mass" in rows[0] else next(iter(rows[0]))
    res = sliding_pigeonhole([float(r[key]) for r in rows], args.eps)
    _write(args.out, _jsonl([{"n": res.n, "m": res.m, "deficiency": res.deficiency, "bound": res.bound}]))
    return EXIT_OK


def _scale(text: str, auto: float) -> float:
    return auto if text == "auto" else float(text)


def cmd_content(args) -> int:
    records = []
    for n, s in parse_set(args.set):
        # "auto" is the square-aligned pair (sqrt(2) 4^-n / 2, sqrt(2) 4^-n)
        r_plus = _scale(args.rplus, math.sqrt(2.0) * 4.0 ** -n)
        r_minus = _scale(args.rminus, r_plus / 2)
        cov = hausdorff_content_cover(s, r_minus, r_plus)
        records.append({"n": n, "r_minus": r_minus, "r_plus": r_plus, "balls": len(cov.centers),
                        "content_upper": cov.content_upper})
    _write(args.out, _jsonl(records))
    return EXIT_OK


def cmd_rect_const(args) -> int:
    if args.cloud:
        rows = read_table(args.cloud)
        cloud = WeightedPointCloud.from_csv(Path(args.cloud).read_text()) if rows else WeightedPointCloud.empty()
    elif args.set:
        sets = parse_set(args.set)
        if len(sets) != 1:
            raise UsageError("rect-const takes a single set")
        cloud = sample_points(sets[0][1], args.per_component, args.seed)
    else:
        raise UsageError("rect-const needs --cloud or --set")
    budget = RectSearch(angles=args.angles)
    value = rectifiability_constant_lower(cloud, args.eps, args.r, args.M, budget, args.workers)
    _write(args.out, _jsonl([{"lower_bound": value, "eps": args.eps, "r": args.r, "M": args.M,
                              "points": len(cloud)}]))
    return EXIT_OK


# ---------------------------------------------------------------- parser

def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--config", help="key=value file; flags override it")
    common.add_argument("--workers", type=int, default=None,
                        help=f"thread pool size (default ${THREADS_ENV} or 1)")
    common.add_argument("--out", default=None, help="output path (default stdout)")

    quad = argparse.ArgumentParser(add_help=False)
    quad.add_argument("--quad-tol", type=float, default=1e-4)
    quad.add_argument("--max-refinements", type=int, default=14)

    p = argparse.ArgumentParser(prog="favard-lab", description="Favard length and Favard curve length laboratory.")
    p.add_argument("--version", action="version", version=__version__)
    sub = p.add_subparsers(dest="command", required=True)

    s = sub.add_parser("gen-cantor", parents=[common], help="write a Cantor generation as n,i,j rows")
    s.add_argument("--n", type=int, required=True)
    s.add_argument("--base", type=int, default=4)
    s.add_argument("--digits", default=None, help="digit string for a general corner IFS, e.g. 02")
    s.set_defaults(func=cmd_gen_cantor)

    s = sub.add_parser("favard", parents=[common, quad], help="Favard length by quadrature")
    s.add_argument("--set", required=True)
    s.set_defaults(func=cmd_favard)

    s = sub.add_parser("favc", parents=[common, quad], help="Favard curve length by quadrature")
    s.add_argument("--curve", default=DEFAULT_CURVE)
    s.add_argument("--set", required=True)
    s.set_defaults(func=cmd_favc)

    s = sub.add_parser("buffon", parents=[common], help="Monte Carlo Buffon curve experiment")
    s.add_argument("--curve", default=DEFAULT_CURVE)
    s.add_argument("--set", default="cantor:0")
    s.add_argument("--samples", type=_count, default=1_000_000)
    s.add_argument("--seed", type=int, default=0)
    s.add_argument("--batch", type=_count, default=1 << 16)
    s.add_argument("--t-nodes", type=int, default=512)
    s.set_defaults(func=cmd_buffon)

    s = sub.add_parser("decay", parents=[common], help="fit a power-law decay to an n,value table")
    s.add_argument("--in", dest="input", required=True)
    s.add_argument("--n-min", type=float, default=2)
    s.add_argument("--n-max", type=float, default=None)
    s.add_argument("--plot", default=None, help="SVG path for a log-log plot")
    s.add_argument("--title", default=None)
    s.set_defaults(func=cmd_decay)

    s = sub.add_parser("plot", parents=[common], help="log-log SVG of n,value tables")
    s.add_argument("--in", dest="input", action="append", required=True)
    s.add_argument("--title", default=None)
    s.add_argument("--no-references", action="store_true")
    s.set_defaults(func=cmd_plot)

    s = sub.add_parser("sector-check", parents=[common], help="verify the double-sector inclusions")
    s.add_argument("--curve", default="parabola:h=0.5,I=[-0.5,0.5]")
    s.add_argument("--e", required=True, help="x,y")
    s.add_argument("--alpha", type=float, required=True)
    s.add_argument("--r", type=float, required=True)
    s.add_argument("--M", type=float, required=True)
    s.add_argument("--samples", type=_count, default=10_000)
    s.add_argument("--seed", type=int, default=0)
    s.add_argument("--no-strict", action="store_true", help="run even when hypotheses fail")
    s.set_defaults(func=cmd_sector_check)

    s = sub.add_parser("pigeonhole", parents=[common], help="sliding pigeonhole window")
    s.add_argument("--masses", required=True, help="CSV with a mass column (or the first column)")
    s.add_argument("--eps", type=float, required=True)
    s.set_defaults(func=cmd_pigeonhole)

    s = sub.add_parser("content", parents=[common], help="greedy restricted Hausdorff content cover")
    s.add_argument("--set", required=True)
    s.add_argument("--rminus", default="auto")
    s.add_argument("--rplus", default="auto")
    s.set_defaults(func=cmd_content)

    s = sub.add_parser("rect-const", parents=[common], help="lower bound on the rectifiability constant")
    s.add_argument("--cloud", default=None, help="CSV with x,y[,w]")
    s.add_argument("--set", default=None, help="set spec sampled with --per-component points")
    s.add_argument("--per-component", type=int, default=16)
    s.add_argument("--seed", type=int, default=0)
    s.add_argument("--eps", type=float, required=True)
    s.add_argument("--r", type=float, required=True)
    s.add_argument("--M", type=float, required=True)
    s.add_argument("--angles", type=int, default=64)
    s.set_defaults(func=cmd_rect_const)
    return p


def read_config(path: str) -> dict[str, str]:
    out = {}
    try:
        lines = Path(path).read_text().splitlines()
    except OSError as exc:
        raise UsageError(f"cannot read config {path}: {exc}") from exc
    for k, line in enumerate(lines, start=1):
        line = line.split("#", 1)[0].strip()
        if not line:
            continue
        key, sep, val = line.partition("=")
        if not sep:
            raise UsageError(f"{path}:{k}: expected key=value")
        out[key.strip()] = val.strip()
    return out


def _apply_config(parser: argparse.ArgumentParser, command: str, cfg: dict[str, str]) -> None:
    sub = next(a for a in parser._actions if isinstance(a, argparse._SubParsersAction)).choices[command]
    actions = {a.dest: a for a in sub._actions}
    if "kind" in cfg:
        # curve given as separate keys: kind, h or R, I
        params = ",".join(f"{k}={cfg.pop(k)}" for k in ("h", "R", "I") if k in cfg)
        cfg.setdefault("curve", f"{cfg.pop('kind')}:{params}")
    defaults = {}
    for key, val in cfg.items():
        dest = "input" if key == "in" else key.replace("-", "_")
        act = actions.get(dest)
        if act is None or dest in ("config", "help"):
            raise UsageError(f"unknown config key {key!r} for {command}")
        if isinstance(act, argparse._StoreTrueAction):
            defaults[dest] = val.lower() in ("1", "true", "yes", "on")
        elif isinstance(act, argparse._AppendAction):
            defaults[dest] = [v.strip() for v in val.split(",")]
        else:
            defaults[dest] = act.type(val) if act.type else val
        act.required = False
    sub.set_defaults(**defaults)


def main(argv=None) -> int:
    logging.basicConfig(level=logging.INFO, stream=sys.stderr, format="%(levelname)s %(message)s")
    argv = list(sys.argv[1:] if argv is None else argv)
    parser = build_parser()
    try:
        pre = argparse.ArgumentParser(add_help=False)
        pre.add_argument("command", nargs="?")
        pre.add_argument("--config")
        known, _ = pre.parse_known_args(argv)
        if known.config and known.command:
            _apply_config(parser, known.command, read_config(known.config))
    except UsageError as exc:
        parser.print_usage(sys.stderr)
        log.error("%s", exc)
        return EXIT_INVALID
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    resolved = {k: v for k, v in sorted(vars(args).items()) if k != "func"}
    log.info("config %s", json.dumps(resolved, sort_keys=True, default=str))
    try:
        return args.func(args)
    except (ValueError, IndexError) as exc:
        log.error("%s", exc)
        return EXIT_INVALID


def run(argv) -> int:
    return main(argv)


if __name__ == "__main__":
    sys.exit(main())
