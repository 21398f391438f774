"""Command-line interface: roadmap, components, connect, check, verify.

Exit codes: 0 success, 2 malformed or invalid input, 3 an assumption
fails, 4 the solver gave up.
"""

from __future__ import annotations

import argparse
import json
import re
import sys
from dataclasses import replace
from pathlib import Path

from . import oracle
from . import topology
from .genericity import FAILED, check_H, check_Hprime
from .polycore import as_rational
from .roadmap import AssumptionFailure, RoadmapConfig, RoadmapOutput, _changes, _transform, compute_roadmap, polar_index
from .solver import SolverError, ZeroDimParam
from .textio import ParseError, SystemFile, parse_rational, parse_system

SCHEMA_VERSION = 1

EXIT_OK = 0
EXIT_INPUT = 2
EXIT_ASSUMPTION = 3
EXIT_SOLVER = 4

# report field -> assumption item it certifies
ASSUMPTION_LABELS = {
    "H_radical": "H(a)",
    "H_equidimensional": "H(b)",
    "H_sing_finite": "H(c)",
    "H_bounded": "H(d)",
    "Hprime_noether_V": "H'(a)",
    "Hprime_noether_Wi": "H'(b)",
    "Hprime_W1_finite": "H'(c)",
    "Hprime_critW_finite": "H'(d)",
}


class InputError(ValueError):
    pass


def _dump(obj) -> str:
    return json.dumps(obj, sort_keys=True, indent=2) + "\n"


def _emit(args, text: str) -> None:
    if args.out:
        Path(args.out).write_text(text)
    else:
        sys.stdout.write(text)


def _config(args) -> RoadmapConfig:
    return RoadmapConfig(seed=args.seed, bound=args.coeff_bound, retries=args.retries,
                         check_radical=args.check_radical == "on", jobs=args.jobs)


def _load(path: str) -> SystemFile:
    try:
        text = Path(path).read_text()
    except OSError as exc:
        raise InputError(f"{path}: {exc.strerror}") from None
    try:
        return parse_system(text)
    except ParseError as exc:
        raise ParseError(exc.reason, exc.line, exc.column, source=path) from None


def _parse_point(text: str, n: int) -> tuple:
    parts = [p for p in text.replace(",", " ").split() if p]
    if len(parts) != n:
        raise InputError(f"point {text!r} needs {n} coordinates")
    try:
        return tuple(parse_rational(p) for p in parts)
    except ParseError as exc:
        raise InputError(f"point {text!r}: {exc.reason}") from None


def _check_on_variety(sf: SystemFile, points) -> None:
    for pt in points:
        for f in sf.system.polys:
            if f.evaluate(pt) != 0:
                shown = ", ".join(str(c) for c in pt)
                raise InputError(f"point ({shown}) is not on the variety")


def _require_H(sf: SystemFile, args) -> None:
    rep = check_H(list(sf.system.polys), assume_bounded=args.assume_bounded,
                  check_radical=args.check_radical == "on", seed=args.seed)
    bad = [k for k in rep._H if getattr(rep, k) == FAILED]
    if bad:
        items = ", ".join(f"{ASSUMPTION_LABELS[k]} ({k})" for k in bad)
        notes = "; ".join(rep.notes)
        raise AssumptionFailure(f"assumption failed: {items}" + (f": {notes}" if notes else ""))


def _control(sf: SystemFile, extra=()) -> ZeroDimParam | None:
    pts = list(sf.points) + list(extra)
    if not pts:
        return None
    return ZeroDimParam.from_points(pts)


def _build(sf: SystemFile, args, extra=()) -> RoadmapOutput:
    _check_on_variety(sf, list(sf.points) + list(extra))
    _require_H(sf, args)
    return compute_roadmap(list(sf.system.polys), _control(sf, extra), _config(args))


# ---------------------------------------------------------------------------
# subcommands


def cmd_roadmap(args) -> int:
    sf = _load(args.input)
    R = _build(sf, args)
    polys = list(sf.system.polys)
    doc = {
        "schema": SCHEMA_VERSION,
        "variables": list(sf.system.variables),
        "roadmap": R.to_dict(),
        "self_check": {"residuals_zero": R.residuals_zero(polys), "ledger_ok": R.ledger_ok()},
        "trace": [r.to_dict() for r in R.trace],
    }
    _emit(args, _dump(doc))
    return EXIT_OK


def cmd_components(args) -> int:
    sf = _load(args.input)
    R = _build(sf, args)
    G = topology.roadmap_topology(R)
    doc = {"schema": SCHEMA_VERSION, "components": G.components_count(),
           "vertices": len(G.vertices), "edges": len(G.edges)}
    _emit(args, _dump(doc))
    return EXIT_OK


def cmd_connect(args) -> int:
    sf = _load(args.input)
    n = sf.system.nvars
    a, b = _parse_point(args.a, n), _parse_point(args.b, n)
    R = _build(sf, args, extra=[a, b])
    G = topology.roadmap_topology(R)
    doc = {"schema": SCHEMA_VERSION, "connected": G.same_component(a, b),
           "a": [str(c) for c in a], "b": [str(c) for c in b]}
    _emit(args, _dump(doc))
    return EXIT_OK


def cmd_check(args) -> int:
    sf = _load(args.input)
    polys = list(sf.system.polys)
    n = polys[0].nvars
    rep = check_H(polys, assume_bounded=args.assume_bounded,
                  check_radical=args.check_radical == "on", seed=args.seed)
    doc: dict = {"schema": SCHEMA_VERSION}
    # without a giant step at the top level, report the smallest polar index
    i = polar_index(n, 0, len(polys)) or 2
    if n - len(polys) >= i - 1:
        cfg = replace(_config(args), identity_first=False)
        label, hp = "none", None
        for _, label, phi in _changes(n, 0, cfg, "r"):
            hp = check_Hprime(_transform(polys, phi), None, i, e=0)
            if hp.hprime_ok():
                break
        rep = rep.merge(hp)
        doc["change"] = label
    else:
        doc["change"] = "none"
    doc["polar_index"] = i
    d = rep.to_dict()
    d["labels"] = {ASSUMPTION_LABELS[k]: d[k] for k in ASSUMPTION_LABELS if d[k] != "not_checked"}
    doc["report"] = d
    doc["ok"] = rep.ok()
    _emit(args, _dump(doc))
    return EXIT_OK if rep.ok() else EXIT_ASSUMPTION


def _grid_box(R: RoadmapOutput, n: int, half_width):
    if half_width is not None:
        w = as_rational(half_width)
        return tuple((-w, w) for _ in range(n))
    pts = oracle.roadmap_samples(R, as_rational(1) / 8)
    if not pts:
        return tuple((-1, 1) for _ in range(n))
    r = max(max(abs(c) for c in p) for p in pts)
    w = as_rational(int(2 * r) + 1)
    return tuple((-w, w) for _ in range(n))


def cmd_verify(args) -> int:
    sf = _load(args.input)
    polys = list(sf.system.polys)
    if len(polys) != 1:
        raise InputError("verify needs a single polynomial")
    f = polys[0]
    try:
        doc_in = json.loads(Path(args.roadmap).read_text())
        R = RoadmapOutput.from_dict(doc_in.get("roadmap", doc_in))
    except (OSError, KeyError, ValueError, TypeError) as exc:
        raise InputError(f"{args.roadmap}: cannot read roadmap ({exc})") from None
    exact = topology.roadmap_topology(R).components_count()
    box = _grid_box(R, f.nvars, args.box)
    counts = {}
    reps = []
    for res in (args.grid_res, 2 * args.grid_res):
        est = oracle.estimate_components(f, oracle.GridSpec(box, (res,) * f.nvars))
        counts[str(res)] = est.count
        if res == args.grid_res:
            reps = est.representatives
    dists = [oracle.nearest_roadmap_distance(r, R) for r in reps] if R.curves or R.points else []
    grid = oracle.GridSpec(box, (args.grid_res,) * f.nvars)
    doc = {
        "schema": SCHEMA_VERSION,
        "box": [[str(lo), str(hi)] for lo, hi in box],
        "exact_components": exact,
        "oracle_components": counts,
        "stable": len(set(counts.values())) == 1,
        "agree": all(c == exact for c in counts.values()),
        "residuals_zero": R.residuals_zero(polys),
        "coverage": [round(d, 6) for d in dists],
        "cell_diameter": round(grid.diameter(), 6),
    }
    _emit(args, _dump(doc))
    return EXIT_OK if doc["agree"] and doc["residuals_zero"] else 1


# ---------------------------------------------------------------------------


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--seed", type=int, default=0, help="root seed for every random choice")
    common.add_argument("--coeff-bound", type=int, default=97, help="bound B on change-of-variables entries")
    common.add_argument("--retries", type=int, default=8, help="changes of variables tried per level")
    common.add_argument("--assume-bounded", action="store_true", help="assert that the real zero set is bounded")
    common.add_argument("--check-radical", choices=("on", "off"), default="on")
    common.add_argument("--jobs", type=int, default=1, help="worker processes for independent branches")
    common.add_argument("--grid-res", type=int, default=64, help="oracle grid resolution per axis")
    common.add_argument("--out", help="write JSON here instead of stdout")

    parser = argparse.ArgumentParser(prog="realroadmap", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True)
    p = sub.add_parser("roadmap", parents=[common], help="compute a roadmap")
    p.add_argument("input")
    p.set_defaults(func=cmd_roadmap)
    p = sub.add_parser("components", parents=[common], help="count connected components")
    p.add_argument("input")
    p.set_defaults(func=cmd_components)
    p = sub.add_parser("connect", parents=[common], help="decide if two points are connected")
    p.add_argument("input")
    # coordinates such as -1,1/2,0 are points, not options
    p._negative_number_matcher = re.compile(r"^-\d")
    p.add_argument("a", help="first point, e.g. 1,1/2,0")
    p.add_argument("b", help="second point")
    p.set_defaults(func=cmd_connect)
    p = sub.add_parser("check", parents=[common], help="report the genericity assumptions")
    p.add_argument("input")
    p.set_defaults(func=cmd_check)
    p = sub.add_parser("verify", parents=[common], help="compare a roadmap with the grid oracle")
    p.add_argument("input")
    p.add_argument("roadmap", help="roadmap JSON written by the roadmap subcommand")
    p.add_argument("--box", help="half width of the oracle box (default: from the roadmap extent)")
    p.set_defaults(func=cmd_verify)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    if args.jobs < 1 or args.coeff_bound < 1 or args.retries < 0 or args.grid_res < 8:
        parser.error("--jobs, --coeff-bound >= 1; --retries >= 0; --grid-res >= 8")
    try:
        return args.func(args)
    except ParseError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INPUT
    except InputError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INPUT
    except AssumptionFailure as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_ASSUMPTION
    except SolverError as exc:
        print(f"error: solver failure: {exc}", file=sys.stderr)
        return EXIT_SOLVER


if __name__ == "__main__":
    sys.exit(main())
