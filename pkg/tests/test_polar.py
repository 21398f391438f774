import random

import pytest
from gmpy2 import mpq

from realroadmap import bivar
from realroadmap import paramops as po
from realroadmap.polar import (VerticalCurve, critical_points, critical_points_curve, polar_system,
                               solve_plane)
from realroadmap.solver import ZeroDimParam, solve_dim0, solve_dim1

from conftest import P, SPHERE, TORUS, distinct_plane_solutions, random_poly


def _xs(Z):
    return sorted(float(b[0].mid()) for b in po.real_points(Z, mpq(1, 2**20)))


def test_polar_system_examples():
    f = P(SPHERE)
    assert polar_system([f], 2, 0).polys == [f, P("2*z")]
    assert polar_system([f], 1, 0).polys == [f, P("2*y"), P("2*z")]
    g = P(TORUS)
    W = polar_system([g], 2, 0).polys
    assert W[1] == P("4*z*(x^2+y^2+z^2+3)")


def test_critical_points_examples():
    f = P(SPHERE)
    S = critical_points([f, P("2*z")], None, 0)
    assert sorted(S.point_values()) == [(-1, 0, 0), (1, 0, 0)]
    g = P(TORUS)
    crit = critical_points([g, g.partial(2)], None, 0)
    assert crit.satisfies([g, g.partial(2)])
    assert _xs(crit) == pytest.approx([-3, -1, 1, 3], abs=1e-5)
    Q = ZeroDimParam.from_points([(0,)])
    S = critical_points([f], Q, 1, e=1)
    assert sorted(S.point_values()) == [(0, -1, 0), (0, 1, 0)]


def test_sphere_family_extremes():
    rng = random.Random(4)
    for n in (2, 3, 4):
        r = mpq(rng.randint(1, 9), rng.randint(1, 5))
        names = [f"x{k}" for k in range(n)]
        f = P(" + ".join(f"{v}^2" for v in names) + f" - {r * r}", names)
        S = critical_points([f], None, 0)
        assert sorted(S.point_values()) == [tuple([-r] + [0] * (n - 1)), tuple([r] + [0] * (n - 1))]


def test_critical_points_curve_examples():
    eq = solve_dim1([P(SPHERE), P("z")]).curves[0]
    S = critical_points_curve(eq, 0)
    assert sorted(S.point_values()) == [(-1, 0, 0), (1, 0, 0)]
    with pytest.raises(VerticalCurve):
        critical_points_curve(eq, 2)
    par = solve_dim1([P("y-x^2", ["x", "y"])]).curves[0]
    assert critical_points_curve(par, 1).point_values() == [(0, 0)]


def test_curve_critical_points_lie_on_the_curve():
    g = P(TORUS)
    F = [g, g.partial(2)]
    for C in solve_dim1(F).curves:
        S = critical_points_curve(C, 0)
        assert S.satisfies(F)
        assert S.degree <= 2 * 3 ** 3 * 4 ** 3


def test_solve_plane_matches_resultants():
    rng = random.Random(17)
    done = 0
    while done < 20:
        f, g = random_poly(rng, 2, 2, 5, 5), random_poly(rng, 2, 3, 5, 5)
        if f.degree < 1 or g.degree < 1:
            continue
        try:
            expect = distinct_plane_solutions(f, g)
        except ValueError:
            continue
        S = solve_plane(bivar.from_poly(f), bivar.from_poly(g), rng=rng)
        assert S.satisfies([f, g]) and S.degree == expect
        assert po.same_set(S, solve_dim0([f, g]))
        done += 1


def test_solve_plane_separates_points_with_equal_u():
    # (0, 1) and (0, -1) share U = 0, so a shear is needed
    a = bivar.from_poly(P("x^2+y^2-1", ["x", "y"]))
    b = bivar.from_poly(P("x", ["x", "y"]))
    S = solve_plane(a, b)
    assert S.degree == 2 and S.satisfies([P("x^2+y^2-1", ["x", "y"]), P("x", ["x", "y"])])
