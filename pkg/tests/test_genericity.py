import random

from realroadmap.genericity import (ASSERTED, FAILED, HEURISTIC, VERIFIED, check_all, check_H, check_Hprime,
                                    random_change, seed_stream)
from realroadmap.polycore import rational_det

from conftest import P, QUARTIC, SPHERE, TORUS


def test_random_change_shape_and_determinism():
    phi = random_change(2, 1, seed=5)
    assert phi.matrix[0] == (1, 0) and phi.matrix[1][1] != 0
    assert random_change(3, 0, seed=11) == random_change(3, 0, seed=11)
    assert random_change(3, 0, seed=11) != random_change(3, 0, seed=12)


def test_random_changes_are_invertible():
    rng = random.Random(0)
    for _ in range(1000):
        assert rational_det(random_change(3, 0, bound=97, rng=rng).matrix) != 0


def test_seed_streams_are_independent_and_stable():
    a, b = seed_stream(1, "x"), seed_stream(1, "y")
    assert a.random() != b.random()
    assert seed_stream(7, "lvl", 2).random() == seed_stream(7, "lvl", 2).random()


def test_check_H_sphere():
    rep = check_H([P(SPHERE)])
    assert rep.H_radical == VERIFIED and rep.H_equidimensional == VERIFIED
    assert rep.H_sing_finite == VERIFIED and rep.H_bounded == HEURISTIC
    assert check_H([P(SPHERE)], assume_bounded=True).H_bounded == ASSERTED


def test_check_H_unbounded_hyperbola():
    rep = check_H([P("x*y", ["x", "y"])])
    assert rep.H_sing_finite == VERIFIED
    assert rep.H_bounded == FAILED
    assert "H_bounded" in rep.failures()


def test_check_H_two_lobes():
    rep = check_H([P(QUARTIC)])
    assert rep.h_ok() and rep.H_sing_finite == VERIFIED


def test_check_H_flags_singular_surface():
    rep = check_H([P("x^2+y^2-z^2")], assume_bounded=True)
    assert rep.H_sing_finite == VERIFIED  # the cone point is isolated
    rep = check_H([P("(x^2+y^2+z^2-1)^2")], assume_bounded=True)
    assert rep.H_sing_finite == FAILED


def test_check_Hprime_examples():
    assert check_Hprime([P(SPHERE)], None, 2).hprime_ok()
    assert check_Hprime([P(TORUS)], None, 2).hprime_ok()
    # projection to the first axis is constant on whole circles of minima
    rep = check_Hprime([P("(y^2+z^2-1)^2+x^2-1/4")], None, 2)
    assert rep.Hprime_W1_finite == FAILED


def test_reports_are_scale_invariant_and_deterministic():
    a = check_all([P(TORUS)], seed=3)
    b = check_all([P(TORUS) * 7], seed=3)
    assert a.to_json() == b.to_json()
    assert check_all([P(QUARTIC)], seed=9).to_json() == check_all([P(QUARTIC)], seed=9).to_json()
