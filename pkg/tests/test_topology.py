import json

import pytest
from gmpy2 import mpq

from realroadmap.polycore import ChangeOfVars, PolySystem, apply_change
from realroadmap.roadmap import roadmap
from realroadmap.solver import ZeroDimParam, solve_dim1
from realroadmap.topology import build_topology, curve_topology, merge, roadmap_topology

from conftest import P, QUARTIC, SPHERE, TORUS

XY = ["x", "y"]
OVALS = "(x^2+y^2-1)*(x^2+y^2-4)+1/100"


def plane_graph(text):
    sol = solve_dim1([P(text, XY)])
    return build_topology(sol.curves, [sol.isolated], n=2)


@pytest.mark.parametrize("text,count", [
    ("x^2+y^2-1", 1),
    ("x^2+y^2+1", 0),
    (OVALS, 2),
    ("x^2+4*y^2-1", 1),
    ("(x^2+y^2)^2-2*(x^2-y^2)+1/2", 2),  # two ovals of a Cassini curve
])
def test_plane_curve_counts(text, count):
    assert plane_graph(text).components_count() == count


def test_curve_topology_examples():
    C = solve_dim1([P("x^2+y^2-1", XY)]).curves[0]
    G = curve_topology(C)
    assert G.components_count() == 1
    assert G.euler_characteristic() == 0
    empty = solve_dim1([P("x^2+y^2+1", XY)])
    assert all(curve_topology(D).components_count() == 0 for D in empty.curves)


def test_torus_polar_curves_are_two_circles():
    g = P(TORUS)
    sol = solve_dim1([g, g.partial(2)])
    G = build_topology(sol.curves, [sol.isolated], n=3)
    assert G.components_count() == 2
    assert G.euler_characteristic() == 0
    assert not G.same_component((1, 0, 0), (3, 0, 0))
    assert G.same_component((1, 0, 0), (-1, 0, 0))


def test_merge_examples():
    eq = curve_topology(solve_dim1([P(SPHERE), P("z")]).curves[0])
    assert merge([eq], ZeroDimParam.from_points([(1, 0, 0), (-1, 0, 0)])).components_count() == 1
    assert merge([eq], ZeroDimParam.from_points([(5, 5, 5)])).components_count() == 2
    g = P(TORUS)
    circles = [curve_topology(C) for C in solve_dim1([g, g.partial(2)]).curves]
    assert merge(circles).components_count() == 2


def test_rotation_invariance():
    rot = ChangeOfVars(2, 0, ((mpq(3, 5), mpq(-4, 5)), (mpq(4, 5), mpq(3, 5))))
    shear = ChangeOfVars(2, 0, ((1, 2), (0, 1)))
    for text in ("x^2+y^2-1", OVALS, "x^2+4*y^2-1"):
        base = plane_graph(text).components_count()
        for phi in (rot, shear):
            F = apply_change(PolySystem(tuple(XY), (P(text, XY),)), phi)
            sol = solve_dim1(list(F.polys))
            assert build_topology(sol.curves, [sol.isolated], n=2).components_count() == base


def test_sphere_and_quartic_roadmaps():
    G = roadmap_topology(roadmap(P(SPHERE)))
    assert G.components_count() == 1
    assert G.same_component((1, 0, 0), (0, -1, 0))
    pts = ZeroDimParam.from_points([(1, mpq(1, 2), 0), (-1, mpq(1, 2), 0)])
    G = roadmap_topology(roadmap(P(QUARTIC), P=pts))
    assert G.components_count() == 2
    assert not G.same_component((1, mpq(1, 2), 0), (-1, mpq(1, 2), 0))
    assert G.same_component((1, mpq(1, 2), 0), (1, mpq(1, 2), 0))


def test_union_find_laws_on_identification():
    g = P(TORUS)
    sol = solve_dim1([g, g.partial(2)])
    G = build_topology(sol.curves, [sol.isolated, ZeroDimParam.from_points([(1, 0, 0), (3, 0, 0)])], n=3)
    a, b, c = (1, 0, 0), (-1, 0, 0), (0, 1, 0)
    assert G.same_component(a, b) == G.same_component(b, a)
    assert G.same_component(a, b) and G.same_component(b, c) and G.same_component(a, c)


def test_json_export():
    G = plane_graph(OVALS)
    d = json.loads(G.to_json())
    assert d["schema"] == 1
    assert len(d["vertices"]) == len(G.vertices) and len(d["edges"]) == len(G.edges)
    assert d["components"] == 2 and len({v["component"] for v in d["vertices"]}) == 2
    boxed = [v for v in d["vertices"] if v["box"] is not None]
    assert boxed and all(s.startswith("[") and s.endswith("]") for v in boxed for s in v["box"])
