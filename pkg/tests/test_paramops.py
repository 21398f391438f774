import random

from gmpy2 import mpq
from hypothesis import given, settings, strategies as st

from realroadmap import paramops as po
from realroadmap.genericity import random_change
from realroadmap.polycore import ChangeOfVars
from realroadmap.solver import ZeroDimParam, solve_dim0, solve_dim1

from conftest import P, SPHERE

ZP = ZeroDimParam.from_points


def _points(rng, n, k, lo=-3, hi=3):
    return {tuple(mpq(rng.randint(lo, hi), rng.choice([1, 2])) for _ in range(n)) for _ in range(k)}


def test_union_examples():
    U = po.union0([ZP([(1, 0, 0)]), ZP([(-1, 0, 0)])])
    assert U.degree == 2 and sorted(U.point_values()) == [(-1, 0, 0), (1, 0, 0)]
    A = ZP([(1, 0, 0), (-1, 0, 0)])
    assert po.union0([A, A]).degree == 2
    assert po.union0([A, ZP([(1, 0, 0)])]).degree == 2


def test_union_with_irrational_points():
    circle = solve_dim0([P("x^2+y^2+z^2-1"), P("x-y"), P("z")])
    U = po.union0([circle, ZP([(1, 0, 0)]), circle])
    assert U.degree == 3 and U.satisfies([P("x^2+y^2+z^2-1"), P("z")])


def test_projection_examples():
    pr = po.projection0(ZP([(1, 0, 0), (-1, 0, 0)]), 1)
    assert pr.n == 1 and sorted(pr.point_values()) == [(-1,), (1,)]
    assert po.projection0(ZP([(1, 2, 3)]), 2).point_values() == [(1, 2)]
    assert po.projection0(ZP([(1, 0, 0), (1, 5, 5)]), 1).point_values() == [(1,)]


def test_membership_examples():
    eq = solve_dim1([P(SPHERE), P("z")]).curves[0]
    assert po.membership(eq, (1, 0, 0))
    assert not po.membership(eq, (0, 0, 1))
    assert po.membership(eq, (0, 1, 0))
    S = ZP([(1, 2), (3, 4)])
    assert po.membership(S, (3, 4)) and not po.membership(S, (4, 3))


def test_undo_examples():
    A = ZP([(1, 0, 0), (-1, 0, 0)])
    assert po.undo_change(A, ChangeOfVars.identity(3)) is A or po.same_set(po.undo_change(A, ChangeOfVars.identity(3)), A)
    swap = ChangeOfVars(2, 0, ((0, 1), (1, 0)))
    assert po.undo_change(ZP([(1, 2)]), swap).point_values() == [(2, 1)]


def test_real_points_examples():
    two = ZeroDimParam.from_shape((1,), [mpq(-1), 0, 1], [[0, 1]])
    boxes = po.real_points(two, mpq(1, 1000))
    assert len(boxes) == 2 and boxes[0][0].lo <= -1 <= boxes[0][0].hi
    none = ZeroDimParam.from_shape((1,), [mpq(1), 0, 1], [[0, 1]])
    assert po.real_points(none, mpq(1, 1000)) == []
    diag = ZeroDimParam.from_shape((1, 0), [mpq(-1), 0, 2], [[0, 1], [0, 1]])
    boxes = po.real_points(diag, mpq(1, 10**6))
    assert len(boxes) == 2
    for b in boxes:
        assert abs(abs(float(b[0].mid())) - 0.70710678118) < 1e-6
        assert b[0].hi - b[0].lo <= mpq(1, 10**6)
    assert len(po.real_points(diag, mpq(1, 10))) == 2


@settings(max_examples=25, deadline=None)
@given(st.integers(0, 10**6))
def test_union_counts_match_brute_force(seed):
    rng = random.Random(seed)
    a, b, c = _points(rng, 2, 3), _points(rng, 2, 3), _points(rng, 2, 2)
    A, B, C = ZP(a), ZP(b), ZP(c)
    U1 = po.union0([po.union0([A, B]), C])
    U2 = po.union0([C, po.union0([B, A])])
    assert U1.degree == len(a | b | c)
    assert po.same_set(U1, U2)
    assert sorted(U1.point_values()) == sorted(a | b | c)


@settings(max_examples=25, deadline=None)
@given(st.integers(0, 10**6))
def test_nested_projections(seed):
    rng = random.Random(seed)
    A = ZP(_points(rng, 3, 4))
    assert po.same_set(po.projection0(po.projection0(A, 2), 1), po.projection0(A, 1))


@settings(max_examples=25, deadline=None)
@given(st.integers(0, 10**6), st.integers(0, 2))
def test_change_roundtrip_keeps_points(seed, e):
    rng = random.Random(seed)
    pts = _points(rng, 3, 3)
    A = ZP(pts)
    phi = random_change(3, e, bound=9, rng=rng)
    back = po.undo_change(po.apply_change_param(A, phi), phi)
    assert all(po.membership(back, p) for p in pts)
    assert back.degree == len(pts)


def test_json_roundtrip():
    C = solve_dim1([P(SPHERE), P("z")]).curves[0]
    A = solve_dim0([P("x^2+y^2+z^2-1"), P("x-y"), P("z")])
    for X in (C, A, ZeroDimParam.empty(3)):
        text = po.to_json(X)
        Y = po.from_json(text)
        assert po.to_json(Y) == text
    assert '"1/1"' in po.to_json(A) or "/" in po.to_json(A)


def test_real_factors_drop_complex_pieces():
    S = solve_dim0([P("(x^2+1)*(x-2)", ["x"])])
    assert [F.degree for F in po.real_factors(S)] == [1]
    assert sorted(F.degree for F in po.split_factors(S)) == [1, 2]
