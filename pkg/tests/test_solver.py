import random

import pytest
from gmpy2 import mpq

from realroadmap import paramops as po
from realroadmap import realroots as rr
from realroadmap.solver import (DimensionTooHigh, ExtensionContext, PositiveDimensional, ZeroDimParam,
                                solve_dim0, solve_dim1, split_on_zero_divisor)

from conftest import P, SPHERE, TORUS, distinct_plane_solutions, random_poly

XY = ["x", "y"]


def test_two_points_on_the_sphere():
    S = solve_dim0([P(SPHERE), P("y"), P("z")])
    assert S.degree == 2
    assert sorted(S.point_values()) == [(-1, 0, 0), (1, 0, 0)]
    assert S.satisfies([P(SPHERE), P("y"), P("z")]) and S.separating_ok()


def test_circle_and_diagonal():
    F = [P("x^2+y^2-1", XY), P("x-y", XY)]
    S = solve_dim0(F, lam=(1, 0))
    assert S.degree == 2 and S.satisfies(F)
    assert rr.monic(list(S.q)) == [mpq(-1, 2), 0, 1]
    boxes = po.real_points(S, mpq(1, 10**6))
    assert len(boxes) == 2
    for box in boxes:
        assert abs(abs(float(box[0].mid())) - 0.7071067811865476) < 1e-6
        assert float(box[0].mid()) == pytest.approx(float(box[1].mid()), abs=1e-6)


def test_positive_dimensional_is_rejected():
    with pytest.raises(PositiveDimensional):
        solve_dim0([P("x^2+y^2-1", XY)])


def test_equator_curve():
    sol = solve_dim1([P(SPHERE), P("z")])
    assert len(sol.curves) == 1 and sol.isolated.is_empty()
    C = sol.curves[0]
    assert C.degree == 2 and C.satisfies([P(SPHERE), P("z")]) and C.projection_ok()
    for pt in [(1, 0, 0), (0, 1, 0), (0, -1, 0)]:
        assert po.membership(C, pt)
    assert not po.membership(C, (0, 0, 1))


def test_scaling_an_equation_changes_nothing():
    A = solve_dim1([P(SPHERE), P("z")]).curves[0]
    B = solve_dim1([P(SPHERE), P("2*z")]).curves[0]
    assert A.q == B.q and A.coords == B.coords


def test_torus_polar_curve_has_two_real_circles():
    f = P(TORUS)
    sol = solve_dim1([f, f.partial(2)])
    assert all(C.satisfies([f, f.partial(2)]) for C in sol.curves)
    for pt in [(1, 0, 0), (-1, 0, 0), (3, 0, 0), (0, 3, 0), (0, -1, 0)]:
        assert any(po.membership(C, pt) for C in sol.curves)
    assert not any(po.membership(C, (2, 0, 0)) for C in sol.curves)


def test_surface_is_too_high():
    with pytest.raises(DimensionTooHigh):
        solve_dim1([P(SPHERE)])


def test_split_on_zero_divisor_examples():
    ctx = ExtensionContext((mpq(-1), 0, 1))
    parts = split_on_zero_divisor(ctx, [mpq(-1), 1])
    assert sorted(c.modulus for c in parts) == sorted([(mpq(-1), mpq(1)), (mpq(1), mpq(1))])
    with pytest.raises(ValueError):
        split_on_zero_divisor(ctx, [mpq(-3), 1])
    cubic = rr.mul(rr.mul([mpq(-1), 1], [mpq(-2), 1]), [mpq(-3), 1])
    parts = split_on_zero_divisor(ExtensionContext(tuple(cubic)), rr.mul([mpq(-1), 1], [mpq(-2), 1]))
    assert sorted(len(c.modulus) for c in parts) == [2, 3]
    assert tuple(rr.mul(list(parts[0].modulus), list(parts[1].modulus))) == tuple(cubic)


def test_separating_form_invariance():
    F = [P("x^2+y^2-4", XY), P("x*y-1", XY)]
    A = solve_dim0(F, rng=random.Random(1))
    B = solve_dim0(F, rng=random.Random(2), lam=(3, -5))
    assert A.lam != B.lam or A.q != B.q
    assert po.same_set(A, B)


def test_constraint_set_Q():
    Q = ZeroDimParam.from_points([(0,)])
    S = solve_dim0([P(SPHERE), P("z")], Q, n=3)
    assert sorted(S.point_values()) == [(0, -1, 0), (0, 1, 0)]


def test_random_conics_against_resultants():
    rng = random.Random(99)
    done = 0
    while done < 25:
        f, g = random_poly(rng, 2, 2, 5, 5), random_poly(rng, 2, 2, 5, 5)
        if f.degree < 1 or g.degree < 1:
            continue
        try:
            expect = distinct_plane_solutions(f, g)
        except ValueError:
            continue
        S = solve_dim0([f, g])
        assert S.satisfies([f, g])
        assert S.degree == expect
        assert S.degree <= f.degree * g.degree
        done += 1
