import pytest
from gmpy2 import mpq

from realroadmap import paramops as po
from realroadmap.roadmap import (RoadmapConfig, RoadmapOutput, canny_roadmap, compute_roadmap, glue, polar_index,
                                 roadmap)
from realroadmap.solver import ZeroDimParam
from realroadmap.topology import roadmap_topology

from conftest import P, QUARTIC, SPHERE, TORUS

XY = ["x", "y"]


def _depths(R):
    canny = max((r.path.count(".") for r in R.trace if r.algorithm.startswith("canny")), default=0)
    return canny


def test_polar_index_clamp():
    assert polar_index(3, 0) is None
    assert polar_index(4, 0) == 2
    assert polar_index(4, 2) is None
    assert polar_index(9, 0) == 3


def test_sphere_canny():
    f = P(SPHERE)
    R = canny_roadmap([f])
    assert R.residuals_zero([f]) and R.ledger_ok()
    for pt in [(1, 0, 0), (-1, 0, 0), (0, 1, 0), (0, -1, 0)]:
        assert R.contains(pt)
    assert roadmap_topology(R).components_count() == 1
    assert _depths(R) <= 3 - 1 - 0


def test_plane_circle_is_its_own_roadmap():
    f = P("x^2+y^2-1", XY)
    R = canny_roadmap([f])
    assert [r.algorithm for r in R.trace] == ["canny_base"]
    assert len(R.curves) == 1 and R.contains((0, 1))


def test_torus_dispatches_to_canny_and_keeps_control_point():
    f = P(TORUS)
    R = roadmap(f, P=ZeroDimParam.from_points([(3, 0, 0)]))
    assert R.trace[0].algorithm == "canny"
    assert R.contains((3, 0, 0)) and po.membership(R.control_points, (3, 0, 0))
    assert R.residuals_zero([f]) and R.ledger_ok()
    assert roadmap_topology(R).components_count() == 1


def test_quartic_two_components():
    f = P(QUARTIC)
    R = roadmap(f)
    assert R.residuals_zero([f])
    assert roadmap_topology(R).components_count() == 2


def test_glue_examples():
    A = canny_roadmap([P(SPHERE)])
    E = RoadmapOutput.empty(3)
    assert glue(A, E).to_json() == A.to_json()
    AA = glue(A, A)
    assert all(AA.contains(p) for p in [(1, 0, 0), (0, 1, 0)])
    assert roadmap_topology(AA).components_count() == 1
    with pytest.raises(ValueError):
        glue(A, RoadmapOutput.empty(2))


def test_empty_real_trace():
    f = P("x^2+y^2+z^2+1")
    R = compute_roadmap([f])
    assert roadmap_topology(R).components_count() == 0


def test_roadmap_rejects_systems():
    with pytest.raises(ValueError):
        roadmap([P(SPHERE), P("z")])


def test_parallel_and_serial_agree():
    f = P(QUARTIC)
    pts = ZeroDimParam.from_points([(1, mpq(1, 2), 0)])
    a = roadmap(f, P=pts, cfg=RoadmapConfig(seed=4, jobs=1))
    b = roadmap(f, P=pts, cfg=RoadmapConfig(seed=4, jobs=3))
    assert a.to_json() == b.to_json() and a.trace_lines() == b.trace_lines()


def test_json_roundtrip():
    R = roadmap(P(SPHERE))
    assert RoadmapOutput.from_dict(__import__("json").loads(R.to_json())).to_json() == R.to_json()


def test_random_coordinates_still_give_one_component():
    f = P(SPHERE)
    R = roadmap(f, cfg=RoadmapConfig(seed=1, identity_first=False))
    assert R.trace[0].change.startswith("random")
    assert R.residuals_zero([f]) and R.ledger_ok()
    assert roadmap_topology(R).components_count() == 1
