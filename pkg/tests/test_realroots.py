import random

import pytest
import sympy
from gmpy2 import mpq
from hypothesis import given, settings, strategies as st

from realroadmap import realroots as rr
from realroadmap.textio import parse_poly

T = sympy.Symbol("T")
UT = ["U", "T"]


def dense(text):
    return rr.to_dense(parse_poly(text, ["T"]))


def test_sturm_count_examples():
    assert rr.sturm_count(dense("T^2-1"), -2, 2) == 2
    assert rr.sturm_count(dense("T^2+1"), -10, 10) == 0
    assert rr.sturm_count(dense("T^3-3*T"), -2, 2) == 3


def test_sturm_count_rejects_root_endpoint():
    with pytest.raises(rr.RootAtEndpoint):
        rr.sturm_count(dense("T^2-1"), -1, 2)
    with pytest.raises(ValueError):
        rr.sturm_count(dense("T^2-1"), 2, -2)


def test_isolation_examples():
    ivs = rr.isolate_real_roots(dense("T^2-1"))
    assert len(ivs) == 2
    assert ivs[0].lo <= -1 <= ivs[0].hi and ivs[1].lo <= 1 <= ivs[1].hi
    ivs = rr.isolate_real_roots(dense("(T-1)^2"))
    assert len(ivs) == 1 and ivs[0].lo <= 1 <= ivs[0].hi
    q = dense("2*T^2-1")
    ivs = [rr.refine(q, iv, mpq(1, 10**6)) for iv in rr.isolate_real_roots(q)]
    assert all(iv.width < mpq(1, 10**6) for iv in ivs)
    assert ivs[0].lo < -0.70710678 < ivs[0].hi or ivs[0].is_exact()
    assert ivs[1].lo < 0.70710679 and ivs[1].hi > 0.70710678


def test_intervals_are_dyadic_and_disjoint():
    q = dense("(T^2-2)*(T^2-3)*(T-1/3)")
    ivs = rr.isolate_real_roots(q)
    assert len(ivs) == 5
    for a, b in zip(ivs, ivs[1:]):
        assert a.hi <= b.lo
    for iv in ivs:
        if not iv.is_exact():
            for e in (iv.lo, iv.hi):
                d = int(mpq(e).denominator)
                assert d & (d - 1) == 0


def test_resultant_examples():
    res = rr.resultant(parse_poly("T^2-U", UT), parse_poly("T-1", UT), eliminate=1)
    assert rr.to_dense(res) == dense("1-T")  # univariate in U, printed with the T name
    assert rr.to_dense(rr.resultant(parse_poly("T-U", UT), parse_poly("T+U", UT))) == dense("2*T")
    assert rr.to_dense(rr.resultant(parse_poly("U^2+T^2-1", UT), parse_poly("T", UT))) == dense("T^2-1")


def _sympy_poly(q):
    return sympy.Poly([sympy.Rational(int(c.numerator), int(c.denominator)) for c in reversed(q)], T)


def _random_dense(rng, deg):
    return rr.trim([mpq(rng.randint(-6, 6), rng.randint(1, 3)) for _ in range(deg + 1)])


@settings(max_examples=80, deadline=None)
@given(st.integers(0, 10**6), st.integers(1, 8))
def test_root_count_matches_sympy(seed, deg):
    rng = random.Random(seed)
    q = _random_dense(rng, deg)
    if len(q) < 2:
        return
    expected = len(set(sympy.real_roots(_sympy_poly(q))))
    assert len(rr.isolate_real_roots(q)) == expected
    assert rr.count_real_roots(rr.squarefree_part(q)) == expected


@settings(max_examples=40, deadline=None)
@given(st.integers(0, 10**6))
def test_refinement_keeps_the_root(seed):
    rng = random.Random(seed)
    q = rr.mul(_random_dense(rng, 3), [mpq(-2), 0, 1])
    sq = rr.squarefree_part(q)
    for iv in rr.isolate_real_roots(q):
        w = iv.width
        for _ in range(4):
            if iv.is_exact():
                break
            nxt = rr.refine(q, iv, iv.width / 2)
            assert iv.lo <= nxt.lo and nxt.hi <= iv.hi and nxt.width <= w / 2
            if not nxt.is_exact():
                assert rr.evaluate(sq, nxt.lo) * rr.evaluate(sq, nxt.hi) < 0
            iv, w = nxt, nxt.width


def test_resultant_matches_sympy_and_common_roots():
    rng = random.Random(11)
    U, TT = sympy.symbols("U T")
    for _ in range(15):
        f = parse_poly(f"T^2 + ({rng.randint(-3, 3)})*U*T + ({rng.randint(-4, 4)})*U^2 + ({rng.randint(-3, 3)})", UT)
        g = parse_poly(f"({rng.randint(1, 3)})*T + ({rng.randint(-3, 3)})*U + ({rng.randint(-3, 3)})", UT)
        mine = rr.to_dense(rr.resultant(f, g))
        sf = sympy.sympify(f.to_str(UT).replace("^", "**"), locals={"U": U, "T": TT})
        sg = sympy.sympify(g.to_str(UT).replace("^", "**"), locals={"U": U, "T": TT})
        expect = sympy.Poly(sympy.resultant(sf, sg, TT), U)
        got = sympy.Poly(sum(sympy.Rational(int(c.numerator), int(c.denominator)) * U**k
                             for k, c in enumerate(mine)), U)
        assert got == expect
        # vanishing at u0 <=> common root, leading coefficients being constant
        for u0 in range(-3, 4):
            common = sympy.gcd(sympy.Poly(sf.subs(U, u0), TT), sympy.Poly(sg.subs(U, u0), TT)).degree() > 0
            assert (rr.evaluate(mine, u0) == 0) == common
