import pytest
from gmpy2 import mpq

from realroadmap.groebner import groebner
from realroadmap.oracle import GridSpec, estimate_components, nearest_roadmap_distance, zero_cells
from realroadmap.roadmap import roadmap
from realroadmap.solver import ZeroDimParam

from conftest import P, QUARTIC, SPHERE, TORUS

XY = ["x", "y"]


@pytest.mark.parametrize("text,count", [(SPHERE, 1), (QUARTIC, 2), ("x^2+y^2+z^2+1", 0)])
def test_estimates_at_64(text, count):
    assert estimate_components(P(text), GridSpec.cube(3, 2, 64)).count == count


@pytest.mark.parametrize("text,half", [(SPHERE, 2), (QUARTIC, 2), (TORUS, 4)])
def test_counts_stable_under_doubling(text, half):
    a = estimate_components(P(text), GridSpec.cube(3, half, 64)).count
    b = estimate_components(P(text), GridSpec.cube(3, half, 128)).count
    assert a == b


def test_gridspec_validation():
    with pytest.raises(ValueError):
        GridSpec(((0, 1),), (4,))
    with pytest.raises(ValueError):
        GridSpec(((1, 1),), (16,))
    with pytest.raises(ValueError):
        GridSpec(((0, 1), (0, 1)), (16,))


def test_enclosure_never_misses_a_crossing():
    f = P("x^2+y^2-1", XY)
    grid = GridSpec.cube(2, 2, 32)
    mask = zero_cells(f, grid)
    import numpy as np

    e = grid.edges(0)
    for i in range(32):
        for j in range(32):
            corners = [float(f.evaluate((a, b))) for a in (e[i], e[i + 1]) for b in (e[j], e[j + 1])]
            if min(corners) <= 0 <= max(corners):
                assert mask[i, j]
    assert np.count_nonzero(mask) < 32 * 32 / 4


def test_theta_fallback_only_adds_cells():
    f = P("x^2+y^2-1", XY)
    base = zero_cells(f, GridSpec.cube(2, 2, 32))
    wide = zero_cells(f, GridSpec.cube(2, 2, 32, theta=0.5))
    assert (wide | base == wide).all() and wide.sum() > base.sum()


def test_smooth_ovals_agree_with_exact_count():
    f = P("(x^2+y^2-1)*(x^2+y^2-4)+1/100", XY)
    assert groebner([f, f.partial(0), f.partial(1)]).is_unit()
    for res in (64, 128):
        assert estimate_components(f, GridSpec.cube(2, mpq(5, 2), res)).count == 2


def test_representatives_lie_near_the_variety():
    f = P(QUARTIC)
    est = estimate_components(f, GridSpec.cube(3, 2, 64))
    for rep in est.representatives:
        assert abs(float(f.eval_generic(rep, 1.0))) < 1e-6


def test_distances_to_roadmaps():
    grid = GridSpec.cube(3, 2, 64)
    R = roadmap(P(SPHERE))
    rep = estimate_components(P(SPHERE), grid).representatives[0]
    assert nearest_roadmap_distance(rep, R) <= 1 + grid.diameter()
    assert nearest_roadmap_distance((1.0, 0.0, 0.0), R) < 1 / 64
    pts = ZeroDimParam.from_points([(1, mpq(1, 2), 0), (-1, mpq(1, 2), 0)])
    R = roadmap(P(QUARTIC), P=pts)
    for rep in estimate_components(P(QUARTIC), grid).representatives:
        # each lobe has diameter below 2 and its own roadmap piece
        assert nearest_roadmap_distance(rep, R) < 1


def test_distance_needs_a_roadmap():
    from realroadmap.roadmap import RoadmapOutput

    with pytest.raises(ValueError):
        nearest_roadmap_distance((0.0, 0.0, 0.0), RoadmapOutput.empty(3))
