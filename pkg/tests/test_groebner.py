import random

import sympy

from realroadmap.groebner import MonomialOrder, groebner
from realroadmap.polycore import Poly

from conftest import P, from_sympy, random_poly, to_sympy

x, y, z = sympy.symbols("x y z")
XYZ = (x, y, z)


def _monic_set(polys):
    return {p.monic() for p in polys}


def _sympy_basis(polys, order):
    G = sympy.groebner([to_sympy(p, XYZ) for p in polys], *XYZ, order=order)
    return {from_sympy(g, XYZ).monic() for g in G.exprs}


def test_matches_sympy_grevlex_and_lex():
    rng = random.Random(21)
    checked = 0
    for _ in range(25):
        F = [random_poly(rng, 3, deg=2, terms=3, coeff=5) for _ in range(3)]
        if any(f.is_zero() for f in F):
            continue
        assert _monic_set(groebner(F).polys) == _sympy_basis(F, "grevlex")
        assert _monic_set(groebner(F, MonomialOrder.lex(3)).polys) == _sympy_basis(F, "lex")
        checked += 1
    assert checked > 15


def test_unit_and_dimension():
    assert groebner([P("x"), P("x-1")]).is_unit()
    assert groebner([P("x^2+y^2+z^2-1")]).dimension() == 2
    assert groebner([P("x^2+y^2+z^2-1"), P("z")]).dimension() == 1
    G = groebner([P("x^2+y^2+z^2-1"), P("y"), P("z")])
    assert G.dimension() == 0 and G.is_zero_dimensional()
    assert len(G.normal_set()) == 2


def test_membership():
    G = groebner([P("x^2+y^2+z^2-1"), P("z")])
    assert G.contains(P("x^2+y^2-1"))
    assert not G.contains(P("x-1"))
    assert G.reduce(P("z^3+x")) == P("x")


def test_elimination_order_projects():
    # lex with x > y > z: the last basis element lives in z alone
    G = groebner([P("x-y^2"), P("y-z^2-1"), P("x-4")], MonomialOrder.lex(3))
    last = [g for g in G.polys if g.variables_used() <= {2}]
    assert last and to_sympy(last[0], XYZ).free_symbols <= {z}
    assert sympy.Poly(to_sympy(last[0], XYZ), z).degree() == 4


def test_ideal_equality_independent_of_generators():
    F = [P("x^2+y^2+z^2-1"), P("x-y")]
    G1 = groebner(F)
    G2 = groebner([F[0] + F[1] * P("z+3"), F[1]])
    assert _monic_set(G1.polys) == _monic_set(G2.polys)
    assert all(isinstance(g, Poly) for g in G1.polys)
