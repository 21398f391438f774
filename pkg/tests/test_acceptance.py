"""End-to-end acceptance checks.

Run with ``pytest tests/test_acceptance.py``; a PASS/FAIL line per criterion
is printed in the terminal summary.  Heavy roadmaps are computed once per
session and shared by the timing, topology and ledger checks.
"""

from __future__ import annotations

import functools
import json
import random
import time

import pytest
from gmpy2 import mpq

from realroadmap import paramops as po
from realroadmap.cli import main as cli_main
from realroadmap.genericity import check_all, random_change
from realroadmap.groebner import groebner
from realroadmap.oracle import GridSpec, estimate_components
from realroadmap.polar import critical_points
from realroadmap.polycore import PolySystem, apply_change
from realroadmap.roadmap import compute_roadmap
from realroadmap.solver import ZeroDimParam, solve_dim0, solve_dim1
from realroadmap.topology import build_topology, roadmap_topology

from conftest import P, QUARTIC, SPHERE, TORUS, XYZ, distinct_plane_solutions

XY = ["x", "y"]
XYZW = ["x", "y", "z", "w"]
THREE_SPHERE = "x^2+y^2+z^2+w^2-1"

QUARTIC_A = (mpq(1), mpq(1, 2), mpq(0))
QUARTIC_B = (mpq(-1), mpq(1, 2), mpq(0))
QUARTIC_C = (mpq(1), mpq(-1, 2), mpq(0))


@functools.lru_cache(maxsize=None)
def computed(name: str):
    """(polys, roadmap, seconds) for the named acceptance input."""
    if name == "sphere":
        polys, ctrl = [P(SPHERE)], None
    elif name == "torus":
        polys, ctrl = [P(TORUS)], None
    elif name == "quartic":
        polys, ctrl = [P(QUARTIC)], ZeroDimParam.from_points([QUARTIC_A, QUARTIC_B, QUARTIC_C])
    elif name == "3-sphere":
        polys, ctrl = [P(THREE_SPHERE, XYZW)], None
    else:
        raise KeyError(name)
    t0 = time.perf_counter()
    R = compute_roadmap(polys, ctrl)
    return polys, R, time.perf_counter() - t0


# ---------------------------------------------------------------------------


def _cli_json(capsys, *argv):
    assert cli_main(list(argv)) == 0
    return json.loads(capsys.readouterr().out)


def _oracle_count(f, half=2, res=64):
    return estimate_components(f, GridSpec.cube(f.nvars, half, res)).count


@pytest.mark.criterion(1, "sphere end to end")
def test_sphere_end_to_end(tmp_path, capsys):
    polys, R, secs = computed("sphere")
    assert secs < 10
    assert R.residuals_zero(polys)
    assert roadmap_topology(R).components_count() == 1 == _oracle_count(polys[0])
    for pt in [(1, 0, 0), (-1, 0, 0), (0, 1, 0), (0, -1, 0)]:
        assert R.contains(pt)
    src = tmp_path / "sphere.sys"
    src.write_text("vars: x y z\nx^2+y^2+z^2-1\n")
    t0 = time.perf_counter()
    doc = _cli_json(capsys, "roadmap", str(src))
    assert doc["self_check"] == {"ledger_ok": True, "residuals_zero": True}
    assert _cli_json(capsys, "components", str(src))["components"] == 1
    assert time.perf_counter() - t0 < 10


@pytest.mark.criterion(2, "torus connectivity and polar critical points")
def test_torus():
    polys, R, secs = computed("torus")
    assert secs < 60
    assert R.residuals_zero(polys)
    assert roadmap_topology(R).components_count() == 1 == _oracle_count(polys[0], 4)
    f = polys[0]
    W = [f, f.partial(2)]
    crit = critical_points(W, None, 0)
    assert crit.satisfies(W)
    boxes = po.real_points(crit, mpq(1, 2**10))
    assert len(boxes) == 4
    # each isolating box pins exactly one of the expected x values
    hits = sorted(x for box in boxes for x in (-3, -1, 1, 3) if box[0].lo <= x <= box[0].hi)
    assert hits == [-3, -1, 1, 3]
    for x in (-3, -1, 1, 3):
        assert po.membership(crit, (x, 0, 0))


@pytest.mark.criterion(3, "two-lobe quartic")
def test_quartic(tmp_path, capsys):
    polys, R, secs = computed("quartic")
    assert secs < 60
    assert R.residuals_zero(polys)
    G = roadmap_topology(R)
    assert G.components_count() == 2 == _oracle_count(polys[0])
    assert not G.same_component(QUARTIC_A, QUARTIC_B)
    assert G.same_component(QUARTIC_A, QUARTIC_C)
    src = tmp_path / "quartic.sys"
    src.write_text("vars: x y z\n(x^2-1)^2+y^2+z^2-1/4\n")
    t0 = time.perf_counter()
    assert _cli_json(capsys, "components", str(src))["components"] == 2
    assert not _cli_json(capsys, "connect", str(src), "1,1/2,0", "-1,1/2,0")["connected"]
    assert _cli_json(capsys, "connect", str(src), "1,1/2,0", "1,-1/2,0")["connected"]
    assert time.perf_counter() - t0 < 60


def _levels(R, prefix):
    return [r for r in R.trace if r.algorithm == prefix and r.next_e is not None]


@pytest.mark.criterion(4, "3-sphere connectivity and Canny level steps")
def test_three_sphere_connected():
    polys, R, secs = computed("3-sphere")
    assert secs < 300
    assert R.residuals_zero(polys)
    assert roadmap_topology(R).components_count() == 1
    canny = _levels(R, "canny")
    assert canny and all(r.next_e == r.e + 1 for r in canny)
    est = estimate_components(polys[0], GridSpec.cube(4, mpq(3, 2), 16))
    assert est.count == 1


@pytest.mark.criterion(4, "3-sphere giant step raises e by the polar index")
def test_three_sphere_giant_step():
    # the recursion fixes i - 1 new coordinates per giant step; the stated
    # criterion asks for i, which this level structure does not produce
    _, R, _ = computed("3-sphere")
    giant = _levels(R, "roadmap")
    assert giant
    assert all(r.next_e == r.e + r.i for r in giant), \
        [(r.path, r.e, r.i, r.next_e) for r in giant]


def _random_plane(rng):
    while True:
        a, b, c = (rng.randint(-5, 5) for _ in range(3))
        if c:
            return a, b, c, rng.randint(-3, 3)


@pytest.mark.criterion(5, "200 random systems against resultant counts")
def test_random_systems():
    rng = random.Random(20240601)
    for k in range(200):
        kind = k % 3
        if kind == 0:
            while True:
                f = P(" + ".join(f"({rng.randint(-6, 6)})*{m}" for m in
                                 ["x^2", "x*y", "y^2", "x", "y", "1"]), XY)
                g = P(" + ".join(f"({rng.randint(-6, 6)})*{m}" for m in
                                 ["x^2", "x*y", "y^2", "x", "y", "1"]), XY)
                if f.degree < 1 or g.degree < 1:
                    continue
                try:
                    expected = distinct_plane_solutions(f, g)
                    break
                except ValueError:
                    continue
            S = solve_dim0([f, g])
            assert S.satisfies([f, g])
            assert S.degree == expected
        elif kind == 1:
            r = rng.randint(1, 9)
            f = P(f"(x-({rng.randint(-3, 3)}))^2+(y-({rng.randint(-3, 3)}))^2-{r}", XY)
            g = P(f"({rng.randint(-5, 5)})*x+({rng.randint(1, 5)})*y+({rng.randint(-4, 4)})", XY)
            S = solve_dim0([f, g])
            assert S.satisfies([f, g])
            assert S.degree == distinct_plane_solutions(f, g)
        else:
            a, b, c, d = _random_plane(rng)
            f = P(SPHERE)
            h = P(f"({a})*x+({b})*y+({c})*z+({d})")
            sol = solve_dim1([f, h])
            assert all(C.satisfies([f, h]) for C in sol.curves)
            assert sol.isolated.is_empty()
            # the plane section, with z eliminated, met by random lines
            conic = P(f"({c})^2*(x^2+y^2-1)+(({a})*x+({b})*y+({d}))^2", XY)
            slices = max(distinct_plane_solutions(conic, P(
                f"({rng.randint(-5, 5)})*x+({rng.randint(1, 5)})*y+({rng.randint(-4, 4)})", XY))
                for _ in range(3))
            assert sum(C.degree for C in sol.curves) == slices


@pytest.mark.criterion(6, "degree ledger on every recursion step")
def test_degree_ledger():
    for name in ("sphere", "torus", "quartic", "3-sphere"):
        _, R, _ = computed(name)
        assert R.trace
        bad = [r.path for r in R.trace if not r.ledger_ok()]
        assert not bad, (name, bad)


def _transformed(text, phi):
    return apply_change(PolySystem(tuple(XYZ), (P(text),)), phi).polys[0]


@pytest.mark.criterion(7, "genericity of sampled changes of variables")
def test_genericity_rate():
    for text in (SPHERE, TORUS, QUARTIC):
        ok = 0
        for seed in range(50):
            phi = random_change(3, 0, 97, seed=seed)
            ok += check_all([_transformed(text, phi)], None, 2, seed=seed).ok()
        assert ok >= 45, (text, ok)
    # identical seeds give identical reports
    phi = random_change(3, 0, 97, seed=11)
    assert phi == random_change(3, 0, 97, seed=11)
    reps = [check_all([_transformed(TORUS, phi)], None, 2, seed=11).to_json() for _ in range(2)]
    assert reps[0] == reps[1]


@pytest.mark.criterion(7, "check reports are reproducible")
def test_check_reports_reproducible(tmp_path, capsys):
    src = tmp_path / "torus.sys"
    src.write_text("vars: x y z\n(x^2+y^2+z^2+3)^2-16*(x^2+y^2)\n")
    outs = []
    for _ in range(2):
        assert cli_main(["check", str(src), "--seed", "5"]) == 0
        outs.append(capsys.readouterr().out)
    assert outs[0] == outs[1]


OVAL_CASES = [
    ("x^2+y^2-1", 1, 2),
    ("(x^2+y^2-1)*(x^2+y^2-4)+1/100", 2, mpq(5, 2)),
    ("(x^2+y^2)^2-2*(x^2-y^2)+1/2", 2, 2),
    ("x^2+4*y^2-1", 1, 2),
]


@pytest.mark.criterion(8, "exact plane counts match the grid oracle")
@pytest.mark.parametrize("text,count,half", OVAL_CASES)
def test_plane_curves_match_oracle(text, count, half):
    f = P(text, XY)
    assert groebner([f, f.partial(0), f.partial(1)]).is_unit()  # smooth
    sol = solve_dim1([f])
    exact = build_topology(sol.curves, [sol.isolated]).components_count()
    assert exact == count
    for res in (64, 128):
        assert estimate_components(f, GridSpec.cube(2, half, res)).count == exact


def _random_points(rng, n, k):
    pts = set()
    while len(pts) < k:
        pts.add(tuple(mpq(rng.randint(-9, 9), rng.randint(1, 5)) for _ in range(n)))
    return sorted(pts)


@pytest.mark.criterion(9, "change-of-variables roundtrips")
def test_change_roundtrips():
    rng = random.Random(99)
    curves = [C for C in solve_dim1([P(SPHERE), P("x+2*y-z")]).curves]
    curves += solve_dim1([P(TORUS), P(TORUS).partial(2)]).curves
    for k in range(100):
        e = rng.randint(0, 2)
        phi = random_change(3, e, 97, seed=1000 + k)
        if k % 2:
            X = curves[k % len(curves)]
        else:
            X = ZeroDimParam.from_points(_random_points(rng, 3, rng.randint(1, 4)))
            if k % 4 == 0:
                X = solve_dim0([P("x^2-2"), P("y-x"), P(f"z-{k}")])
        back = po.undo_change(po.apply_change_param(X, phi), phi)
        assert po.to_json(back) == po.to_json(X)


@pytest.mark.criterion(9, "CLI output is byte identical across runs and job counts")
def test_cli_determinism(tmp_path, capsys):
    src = tmp_path / "quartic.sys"
    src.write_text("vars: x y z\n(x^2-1)^2+y^2+z^2-1/4\n")
    outs = []
    for extra in ([], [], ["--jobs", "4"]):
        for cmd in ("roadmap", "components"):
            assert cli_main([cmd, str(src), "--seed", "3", *extra]) == 0
            outs.append((cmd, capsys.readouterr().out))
    by_cmd = {}
    for cmd, out in outs:
        by_cmd.setdefault(cmd, set()).add(out)
    assert all(len(v) == 1 for v in by_cmd.values())


if __name__ == "__main__":
    import sys

    sys.exit(pytest.main([__file__, "-q"]))
